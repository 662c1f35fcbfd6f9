mod common;

use graphon_core::cut::{cut_distance_steps, Alignment, CutMode, DistanceOptions};
use graphon_core::graph::celebrity_core_size;
use graphon_core::graphon::{canonical_graphon, restrict};
use graphon_core::sampling::*;
use graphon_core::*;

/// Stretched cut distance (identity alignment, heuristic cut) between the
/// canonical graphon of a sample at `(t, n)` and the stretched restriction.
fn sample_distance(w: &GraphonSpec<f64>, t: f64, n: usize, seed: u64) -> f64 {
    let g = sample_graph(w, t, n, seed).unwrap();
    let (gs, _) = canonical_graphon::<f64>(&g.graph).unwrap().stretch().unwrap();
    let (ws, _) = restrict(w, t, 128).unwrap().stretch().unwrap();
    let opts = DistanceOptions {
        alignment: Alignment::Identity,
        cut: CutMode::Heuristic { restarts: 4, seed: 0 },
    };
    cut_distance_steps(&gs, &ws, opts).unwrap().distance
}

// n must outgrow t: with n proportional to t the number of points per unit
// of the restricted graphon stays fixed and the distance does not shrink.
#[test]
fn stretched_distance_shrinks_along_the_schedule() {
    let w = GraphonSpec::rank_one_exp(1.0, 1.0).unwrap();
    let schedule = [(1.0, 100), (2.0, 400), (4.0, 1600)];
    let mut good = 0;
    for seed in 0..10 {
        let d: Vec<f64> = schedule.iter().map(|&(t, n)| sample_distance(&w, t, n, seed)).collect();
        good += d.windows(2).all(|p| p[1] < p[0]) as usize;
    }
    assert!(good >= 9, "{good}/10");
}

#[test]
fn sampling_is_deterministic() {
    let w = GraphonSpec::rank_one_exp(1.0, 1.0).unwrap();
    let f = SignalProfile::Exponential { amplitude: 1.0, rate: 1.0 };
    let a = sample_graph(&w, 4.0, 300, 42).unwrap();
    let b = sample_graph(&w, 4.0, 300, 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(sample_signal(&f, &a.points).unwrap(), sample_signal(&f, &b.points).unwrap());
    let grid = sample_double_sequence(&w, &[1.0, 2.0], &[50, 100], 3).unwrap();
    let again = sample_double_sequence(&w, &[1.0, 2.0], &[50, 100], 3).unwrap();
    assert_eq!(grid.cells, again.cells);
}

#[test]
fn sampled_signal_takes_values_of_f() {
    let w = GraphonSpec::constant_box(0.5, 1.0).unwrap();
    let f = SignalProfile::Linear { intercept: 1.0, slope: -0.25 };
    let g = sample_graph(&w, 3.0, 200, 1).unwrap();
    let s = sample_signal(&f, &g.points).unwrap();
    let lo = g.points.xs.iter().map(|&x| f.eval(x)).fold(f64::INFINITY, f64::min);
    let hi = g.points.xs.iter().map(|&x| f.eval(x)).fold(f64::NEG_INFINITY, f64::max);
    for (&v, &x) in s.values().iter().zip(&g.points.xs) {
        assert_eq!(v, f.eval(x));
        assert!(lo <= v && v <= hi);
    }
}

#[test]
fn celebrity_edge_count_matches_binomial() {
    let w = GraphonSpec::CelebrityLimit;
    let n = 100;
    let seeds = 200;
    let mean = (0..seeds)
        .map(|s| sample_graph(&w, 2.0, n, s).unwrap().graph.edge_count() as f64)
        .sum::<f64>()
        / seeds as f64;
    // Density moments convert to edge counts by n^2 / 2.
    let (m, sd) = box_density_moments(1.0, 1.0, 2.0, n);
    let scale = (n * n) as f64 / 2.0;
    assert!((m * scale - 1237.5).abs() < 1e-9);
    assert!((mean - 1237.5).abs() <= 3.0 * sd * scale / (seeds as f64).sqrt(), "{mean}");
}

#[test]
fn rank_one_densities_follow_limits() {
    let w = GraphonSpec::rank_one_exp(1.0, 1.0).unwrap();
    let mut prev = f64::INFINITY;
    for t in [2.0f64, 4.0, 8.0] {
        let limit = density_limit(&w, t, 0).unwrap();
        assert!((limit - (1.0 - (-t).exp()).powi(2) / (t * t)).abs() < 1e-15);
        let d = (0..4).map(|s| sample_graph(&w, t, 8000, s).unwrap().canonical_l1()).sum::<f64>() / 4.0;
        assert!((d - limit).abs() < 0.03 * limit, "{t}: {d} vs {limit}");
        assert!(d < prev);
        prev = d;
    }
}

#[test]
fn subsequence_picks_the_first_qualifying_column() {
    let w = GraphonSpec::CelebrityLimit;
    let ns = [20, 40, 80, 160, 320, 640];
    let ts = [1.0, 2.0];
    let grid = sample_double_sequence(&w, &ts, &ns, 6).unwrap();
    let opts = SubsequenceOptions { tolerances: Some(vec![0.5, 0.25]), ..SubsequenceOptions::default() };
    let sub = extract_sparse_subsequence(&grid, &w, &opts).unwrap();
    assert!(sub.gaps.is_empty());
    let phi = sub.phi();
    // Independent scan of row 1: target density 1/4.
    let first = (0..ns.len())
        .filter(|&j| j >= phi[0].unwrap())
        .find(|&j| {
            let c = &grid.cells[1][j];
            (c.canonical_l1() - 0.25).abs() <= 0.25
                && sub.rows[1].distances[j].is_some_and(|d| d <= 0.25)
        });
    assert_eq!(phi[1], first);
    assert!(phi[0] <= phi[1]);
}

#[test]
fn celebrity_growth_density_concentrates() {
    // Without isolation removal the sampled density concentrates near
    // (|V'| / n)^2; its mean rises slightly with the sample size.
    let n = 2000;
    let g = Graph::celebrity(n, 0.5).unwrap();
    let k = celebrity_core_size(n, 0.5) as f64;
    let q = k / n as f64;
    let steps = grow_subgraphs(&g, GrowthSchedule::new(200, 10, false).unwrap(), 5).unwrap();
    let last = &steps[9];
    assert_eq!(last.sampled, 2000);
    assert!((last.graph.edge_density() * 2.0 - (q * q - q / n as f64)).abs() < 1e-12);
    for s in &steps[4..] {
        let m = s.sampled as f64;
        // Hypergeometric clique count c: E[c(c - 1)] = m(m-1) k(k-1) / (n(n-1)).
        let nf = n as f64;
        let expect = (m - 1.0) / m * k * (k - 1.0) / (nf * (nf - 1.0));
        assert!((2.0 * s.graph.edge_density() - expect).abs() < 0.01, "{}", s.sampled);
    }
}
