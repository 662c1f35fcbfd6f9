mod common;

use common::rng;
use graphon_core::linalg::CsrSym;
use graphon_core::sampling::{grow_subgraphs, GrowthSchedule};
use graphon_core::spectral::*;
use graphon_core::*;
use nalgebra::DMatrix;
use rand::Rng;

#[test]
fn lanczos_matches_dense_oracle() {
    let mut r = rng(2024);
    let opts = EigenOptions { dense_threshold: 0, ..EigenOptions::default() };
    for case in 0..100 {
        let n = r.random_range(20..=500);
        let per_row = r.random_range(2..=8);
        let mut triplets = Vec::new();
        for i in 0..n {
            for _ in 0..per_row {
                let j = r.random_range(i..n);
                triplets.push((i, j, 2.0 * r.random::<f64>() - 1.0));
            }
        }
        let a = CsrSym::from_upper_triplets(n, &triplets);
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for &(i, j, v) in &triplets {
            dense[(i, j)] += v;
            if i != j {
                dense[(j, i)] += v;
            }
        }
        let mut oracle: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let rep: EigenReport<f64> = eigensolve(&a, 3, 3, &opts).unwrap();
        assert_eq!(rep.method, EigenMethod::Lanczos);
        for t in 1..=3 {
            let top = oracle[n - t];
            let bottom = oracle[t - 1];
            assert!((rep.lambda(t as i64) - top).abs() <= 1e-8 * top.abs(), "case {case}: {t}");
            assert!((rep.lambda(-(t as i64)) - bottom).abs() <= 1e-8 * bottom.abs(), "case {case}: -{t}");
        }
    }
}

#[test]
fn scaled_top_eigenvalue_of_small_graphs() {
    let opts = EigenOptions::default();
    let k4 = scaled_spectrum(&Graph::complete(4), &[1], &opts).unwrap();
    assert!((k4[0].1 - 3f64.sqrt() / 2.0).abs() < 1e-12);
    let star = scaled_spectrum(&Graph::star(8), &[1, -1], &opts).unwrap();
    assert!((star[0].1 - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((star[1].1 + 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn complete_growth_has_exact_top_eigenvalue() {
    let seq: Vec<Graph> = (2..=20).map(Graph::complete).collect();
    let traj = trajectory(&seq, &[1, -1], &EigenOptions::default()).unwrap();
    for p in &traj {
        assert!((p.lambda(1).unwrap() - (p.vertices - 1) as f64).abs() < 1e-10);
        assert!((p.lambda(-1).unwrap() + 1.0).abs() < 1e-10);
    }
    let avg = moving_scaled_averages(&traj, 5, &[1]).unwrap();
    let last = avg.last().unwrap();
    let expect = (16..=20).map(|n| (n - 1) as f64 / n as f64).sum::<f64>() / 5.0;
    assert!((last.a - expect).abs() < 1e-12);
}

#[test]
fn celebrity_growth_scaled_eigenvalue_tends_to_one() {
    let g = Graph::celebrity(20000, 0.5).unwrap();
    let steps = grow_subgraphs(&g, GrowthSchedule::new(2000, 10, true).unwrap(), 4).unwrap();
    let seq: Vec<Graph> = steps.into_iter().map(|s| s.graph).collect();
    let traj = trajectory(&seq, &[1], &EigenOptions::default()).unwrap();
    let last = traj.last().unwrap();
    // The kept graph is a clique K_c: lambda_1 / sqrt(2|E|) = sqrt((c-1)/c).
    assert_eq!(last.edges, last.vertices * (last.vertices - 1) / 2);
    let c = last.vertices as f64;
    let ratio = last.lambda(1).unwrap() / (2.0 * last.edges as f64).sqrt();
    assert!((ratio - ((c - 1.0) / c).sqrt()).abs() < 1e-12);
    assert!(c >= 500.0 && (ratio - 1.0).abs() < 0.02);
    let fits = fit_models(&traj, 5, 1, EdgeScale::TwoE).unwrap();
    assert!(fits[0].mse < fits[1].mse && fits[0].mse < fits[2].mse, "{fits:?}");
}

#[test]
fn mse_ranking_ignores_edge_scale() {
    let g = Graph::celebrity(8000, 0.5).unwrap();
    let steps = grow_subgraphs(&g, GrowthSchedule::new(400, 20, true).unwrap(), 8).unwrap();
    let seq: Vec<Graph> = steps.into_iter().map(|s| s.graph).collect();
    let traj = trajectory(&seq, &[1, 2], &EigenOptions::default()).unwrap();
    for t in [1, 2] {
        let a = fit_models(&traj, 10, t, EdgeScale::TwoE).unwrap();
        let b = fit_models(&traj, 10, t, EdgeScale::E).unwrap();
        assert!((a[0].mse - b[0].mse).abs() <= 1e-9 * a[0].mse.max(1e-300));
        assert!((a[0].slope - b[0].slope * 0.5f64.sqrt()).abs() <= 1e-12 * a[0].slope.abs());
    }
}

#[test]
fn slope_is_closed_form() {
    let (k, mse) = fit_through_origin(&[1.0, 2.0, 3.0], &[2.0, 4.3, 6.0]);
    assert_eq!(k, (2.0 + 8.6 + 18.0) / 14.0);
    let want = [2.0 - k, 4.3 - 2.0 * k, 6.0 - 3.0 * k].iter().map(|e| e * e).sum::<f64>() / 3.0;
    assert!((mse - want).abs() < 1e-15);
}

#[test]
fn short_tail_is_an_error() {
    let seq: Vec<Graph> = (2..=4).map(Graph::complete).collect();
    let traj = trajectory(&seq, &[1], &EigenOptions::default()).unwrap();
    assert!(matches!(fit_models(&traj, 2, 1, EdgeScale::TwoE), Err(GraphonError::InsufficientData(_))));
    assert!(trajectory(&seq, &[0], &EigenOptions::default()).is_err());
}
