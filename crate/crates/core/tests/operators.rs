mod common;

use common::*;
use graphon_core::cut::cut_distance_steps;
use graphon_core::operators::{apply_chebyshev, apply_polynomial, apply_spectral, operator_norm_bound, operator_norm_gap};
use graphon_core::*;
use proptest::prelude::*;

fn op_of(w: &StepGraphon<f64>) -> GraphonOperator<f64> {
    GraphonOperator::new(&GraphonSpec::Step(w.clone())).unwrap()
}

/// A signal with `mult` steps per kernel cell on the stretched support.
fn signal_for(op: &GraphonOperator<f64>, r: &mut graphon_core::rng::StreamRng, mult: usize) -> StepSignal<f64> {
    let (s, k) = op.grid().unwrap();
    random_signal(r, k * mult, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear(seed in any::<u64>(), k in 1usize..=16, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut r = rng(seed);
        let op = op_of(&random_step(&mut r, k, 2.0));
        let f = signal_for(&op, &mut r, 1);
        let g = signal_for(&op, &mut r, 1);
        let lhs = op.apply(&f.scaled(a).add_scaled(b, &g).unwrap()).unwrap();
        let rhs = op.apply(&f).unwrap().scaled(a).add_scaled(b, &op.apply(&g).unwrap()).unwrap();
        prop_assert!(lhs.l2_distance(&rhs) <= 1e-12 * (1.0 + rhs.l2_norm()));
    }

    #[test]
    fn self_adjoint(seed in any::<u64>(), k in 1usize..=16, mf in 1usize..=3, mg in 1usize..=3) {
        let mut r = rng(seed);
        let op = op_of(&random_step(&mut r, k, 0.7));
        let f = signal_for(&op, &mut r, mf);
        let g = signal_for(&op, &mut r, mg);
        let tf_g = op.apply(&f).unwrap().inner(&g);
        let f_tg = f.inner(&op.apply(&g).unwrap());
        prop_assert!((tf_g - f_tg).abs() <= 1e-10);
    }
}

/// `(||T_{W^s} f||_2, ||f||_2, ||W||_1, ||W||_2)` for random pairs.
fn random_pairs(n: usize, seed: u64) -> Vec<(f64, f64, f64, f64)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for trial in 0..n {
        let k = 1 + trial % 24;
        let w = random_sparse_step(&mut r, k, 0.25 + (trial % 8) as f64 * 0.5, 0.6);
        if w.l1_norm() == 0.0 {
            continue;
        }
        let spec = GraphonSpec::Step(w);
        let op = GraphonOperator::new(&spec).unwrap();
        let f = signal_for(&op, &mut r, 1 + trial % 3);
        out.push((op.apply(&f).unwrap().l2_norm(), f.l2_norm(), spec.l1_norm(), spec.l2_norm()));
    }
    out
}

#[test]
fn hilbert_schmidt_bound_holds() {
    for (tf, f, l1, l2) in random_pairs(500, 77) {
        assert!(tf <= l2 / l1.sqrt() * f + 1e-10);
    }
}

#[test]
fn unit_mass_form_holds_below_unit_mass() {
    let pairs = random_pairs(500, 78);
    assert!(pairs.iter().any(|p| p.2 <= 1.0));
    for (tf, f, l1, l2) in pairs.into_iter().filter(|p| p.2 <= 1.0) {
        assert!(tf <= l2 / l1 * f + 1e-10);
    }
}

#[test]
fn quadratic_filter_spectral_vs_direct() {
    let mut r = rng(64);
    let w = random_step(&mut r, 64, 1.0);
    let op = op_of(&w);
    let bound = operator_norm_bound(&GraphonSpec::Step(w)).unwrap();
    let h = SpectralFilter::fit(|x: f64| x * x, -bound, bound, 8).unwrap();
    let p = PolynomialFilter::new(vec![0.0, 0.0, 1.0]);
    for _ in 0..5 {
        let f = signal_for(&op, &mut r, 1);
        let direct = apply_polynomial(&p, &op, &f).unwrap();
        let spectral = apply_spectral(&h, &op, &f, 64, &EigenOptions::default()).unwrap();
        assert_eq!(spectral.truncation_bound, 0.0);
        let rel = spectral.signal.l2_distance(&direct) / direct.l2_norm();
        assert!(rel < 1e-8, "{rel}");
    }
}

#[test]
fn chebyshev_and_spectral_routes_agree() {
    let mut r = rng(128);
    let w = random_step(&mut r, 128, 1.0);
    let op = op_of(&w);
    let bound = operator_norm_bound(&GraphonSpec::Step(w)).unwrap();
    let h = SpectralFilter::fit(|x: f64| x * x.exp(), -bound, bound, 24).unwrap();
    assert!(h.max_error(|x| x * x.exp(), 1000) < 1e-10);
    for _ in 0..20 {
        let f = signal_for(&op, &mut r, 2);
        let cheb = apply_chebyshev(&h, &op, &f).unwrap();
        let spec = apply_spectral(&h, &op, &f, 128, &EigenOptions::default()).unwrap();
        let rel = spec.signal.l2_distance(&cheb) / cheb.l2_norm();
        assert!(rel < 1e-6, "{rel}");
    }
}

// W_i = W + 2^-i E for a fixed symmetric perturbation E: the stretched cut
// distance, the operator-norm gap and the filtered-signal gap all shrink.
#[test]
fn shrinking_perturbations_converge() {
    let mut r = rng(9);
    let k = 10;
    let base = StepGraphon::from_fn(k, 1.0, |_, _| 0.2 + 0.6 * rand::Rng::random::<f64>(&mut r)).unwrap();
    let bump = random_signed(&mut r, k, 1.0);
    let f = random_signal(&mut r, 40, 3.0);
    let g = random_signal(&mut r, 40, 3.0);
    let op = op_of(&base);
    let target = op.apply(&f).unwrap();
    let opts = DistanceOptions { alignment: Alignment::Identity, cut: CutMode::Exact };
    let mut gaps = Vec::new();
    let mut dists = Vec::new();
    let mut signal_gaps = Vec::new();
    for i in 1..=10 {
        let eps = 0.2 * 2f64.powi(-i);
        let wi = StepGraphon::from_fn(k, 1.0, |a, b| base.value(a, b) + eps * bump.values()[a * k + b]).unwrap();
        let (bs, _) = base.stretch().unwrap();
        let (ws, _) = wi.stretch().unwrap();
        dists.push(cut_distance_steps(&ws, &bs, opts).unwrap().distance);
        gaps.push(operator_norm_gap(&wi, &base, &EigenOptions::default()).unwrap());
        let fi = {
            let mut v = f.values().to_vec();
            for (x, y) in v.iter_mut().zip(g.values()) {
                *x += eps * y;
            }
            StepSignal::from_values(3.0, v).unwrap()
        };
        signal_gaps.push(op_of(&wi).apply(&fi).unwrap().l2_distance(&target));
    }
    for s in [&dists, &gaps, &signal_gaps] {
        for p in s.windows(2) {
            assert!(p[1] <= 1.1 * p[0], "{s:?}");
        }
        // Stretched supports move by O(eps), and a strip of width eps has
        // operator norm of order sqrt(eps): nine halvings give at least 2^4.5.
        assert!(s[s.len() - 1] < s[0] / 20.0, "{s:?}");
    }
}

#[test]
fn rank_one_action_closed_form() {
    // T f = c <g, f> g with g = e^{-x}: for f = e^{-x}, T f = e^{-x} / 2.
    let spec = GraphonSpec::rank_one_exp(1.0, 1.0).unwrap();
    let op = GraphonOperator::new(&spec).unwrap();
    let k = 4096;
    let t = 16.0;
    let h = t / k as f64;
    let f = StepSignal::from_values(t, (0..k).map(|i| (-(i as f64 + 0.5) * h).exp()).collect()).unwrap();
    let tf = op.apply(&f).unwrap();
    let expect = StepSignal::from_values(t, f.values().iter().map(|v| v / 2.0).collect()).unwrap();
    assert!(tf.l2_distance(&expect) < 1e-3);
}
