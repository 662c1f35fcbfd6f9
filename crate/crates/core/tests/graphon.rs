mod common;

use common::*;
use graphon_core::graphon::{canonical_graphon, compact_canonical_graphon};
use graphon_core::*;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

fn random_graph(seed: u64, n: usize, p: f64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_l1_is_exact(seed in any::<u64>(), n in 1usize..=30, p in 0.0f64..1.0) {
        let g = random_graph(seed, n, p);
        let w = canonical_graphon::<Rational64>(&g).unwrap();
        let n = n as i64;
        prop_assert_eq!(w.l1_norm(), Rational64::new(2 * g.edge_count() as i64, n * n));
        let c = compact_canonical_graphon::<Rational64>(&g).unwrap();
        prop_assert_eq!(c.l1_norm(), w.l1_norm());
    }

    #[test]
    fn stretch_normalizes_mass(seed in any::<u64>(), k in 1usize..=20, support in 0.05f64..8.0) {
        let mut r = rng(seed);
        let w = random_step(&mut r, k, support);
        prop_assume!(w.l1_norm() > 0.0);
        let (s, tag) = w.stretch().unwrap();
        prop_assert!((s.l1_norm() - 1.0).abs() < 1e-12);
        prop_assert_eq!(tag.factor, w.l1_norm().sqrt());
        // Change of variables: ||W^s||_2^2 = ||W||_2^2 / ||W||_1.
        prop_assert!((s.l2_norm().powi(2) - w.l2_norm().powi(2) / w.l1_norm()).abs() < 1e-12);
        for i in 0..k {
            for j in 0..k {
                prop_assert_eq!(s.value(i, j), s.value(j, i));
            }
        }
    }

    #[test]
    fn rational_stretch_round_trip(seed in any::<u64>(), k in 1usize..=8, num in 1i64..50, den in 1i64..50) {
        let mut r = rng(seed);
        let values: Vec<Rational64> = (0..k * k).map(|_| Rational64::new(r.random_range(0..8), 8)).collect();
        let mut sym = values.clone();
        for i in 0..k {
            for j in 0..i {
                sym[i * k + j] = values[j * k + i];
            }
        }
        let w = ExactStepGraphon::from_values(k, Rational64::new(3, 2), sym).unwrap();
        let rr = Rational64::new(num, den);
        let back = w.stretch_by(rr).unwrap().stretch_by(rr.recip()).unwrap();
        prop_assert_eq!(back, w.clone());
        // Mass scales by 1 / r^2 exactly.
        prop_assert_eq!(w.stretch_by(rr).unwrap().l1_norm(), w.l1_norm() / (rr * rr));
    }

    #[test]
    fn float_stretch_round_trip(seed in any::<u64>(), k in 1usize..=12, r0 in 0.1f64..10.0) {
        let mut r = rng(seed);
        let w = random_step(&mut r, k, 1.0);
        let back = w.stretch_by(r0).unwrap().stretch_by(1.0 / r0).unwrap();
        prop_assert_eq!(back.values(), w.values());
        prop_assert!((back.support() - w.support()).abs() <= 4.0 * f64::EPSILON);
    }
}

#[test]
fn analytic_families_stretch_to_unit_mass() {
    for w in [
        GraphonSpec::constant_box(0.3f64, 2.5).unwrap(),
        GraphonSpec::rank_one_exp(0.7, 2.0).unwrap(),
        GraphonSpec::CelebrityLimit,
    ] {
        let (s, _) = w.stretch().unwrap();
        assert!((s.l1_norm() - 1.0).abs() < 1e-12);
    }
    // RankOneExp(c, l): ||W||_1 = c / l^2, ||W||_2 = c / (2 l). Midpoint oracle:
    let w = GraphonSpec::rank_one_exp(0.7f64, 2.0).unwrap();
    let k = 2000;
    let h = 12.0 / k as f64;
    let (mut l1, mut l2) = (0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            let v = w.eval((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            l1 += v * h * h;
            l2 += v * v * h * h;
        }
    }
    assert!((l1 - w.l1_norm()).abs() < 1e-4);
    assert!((l2.sqrt() - w.l2_norm()).abs() < 1e-4);
}

#[test]
fn scalar_aliases_agree() {
    let g = Graph::celebrity(40, 0.5).unwrap();
    let a: StepGraphonF64 = canonical_graphon(&g).unwrap();
    let b: StepGraphonF32 = canonical_graphon(&g).unwrap();
    let c: ExactStepGraphon = canonical_graphon(&g).unwrap();
    assert!((a.l1_norm() - b.l1_norm() as f64).abs() < 1e-6);
    assert_eq!(c.l1_norm(), Rational64::new(2 * g.edge_count() as i64, 1600));
}
