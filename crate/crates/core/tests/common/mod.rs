#![allow(dead_code)]

use graphon_core::rng::{stream_rng, StreamRng};
use graphon_core::{SignedStepGraphon, StepGraphon, StepSignal};
use rand::Rng;

pub fn rng(seed: u64) -> StreamRng {
    stream_rng(seed, 0xfeed)
}

pub fn random_step(rng: &mut StreamRng, k: usize, support: f64) -> StepGraphon<f64> {
    StepGraphon::from_fn(k, support, |_, _| rng.random::<f64>()).unwrap()
}

/// Step graphon with roughly `density` of its cells nonzero.
pub fn random_sparse_step(rng: &mut StreamRng, k: usize, support: f64, density: f64) -> StepGraphon<f64> {
    StepGraphon::from_fn(k, support, |_, _| {
        if rng.random::<f64>() < density {
            rng.random::<f64>()
        } else {
            0.0
        }
    })
    .unwrap()
}

pub fn random_signed(rng: &mut StreamRng, k: usize, support: f64) -> SignedStepGraphon<f64> {
    let mut values = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let v = 2.0 * rng.random::<f64>() - 1.0;
            values[i * k + j] = v;
            values[j * k + i] = v;
        }
    }
    SignedStepGraphon::from_values(k, support, values).unwrap()
}

pub fn random_signal(rng: &mut StreamRng, k: usize, support: f64) -> StepSignal<f64> {
    StepSignal::from_values(support, (0..k).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect()).unwrap()
}

/// `max_{S, T} |sum_{j in T} sum_{i in S} m_ij|` by enumerating every pair of
/// subsets, summing in ascending index order.
pub fn brute_force_cut(k: usize, masses: &[f64]) -> f64 {
    let mut best = 0.0f64;
    let mut colsum = vec![0.0; k];
    for s in 0u32..1 << k {
        for (j, c) in colsum.iter_mut().enumerate() {
            *c = 0.0;
            for i in 0..k {
                if s >> i & 1 == 1 {
                    *c += masses[i * k + j];
                }
            }
        }
        for t in 0u32..1 << k {
            let mut total = 0.0;
            for (j, &c) in colsum.iter().enumerate() {
                if t >> j & 1 == 1 {
                    total += c;
                }
            }
            best = best.max(total.abs());
        }
    }
    best
}

pub fn masses_of(w: &SignedStepGraphon<f64>) -> Vec<f64> {
    let h = w.cell_width();
    let area = h * h;
    w.values().iter().map(|&v| v * area).collect()
}
