//! Extreme eigenvalues of graphs and step kernels, and the scaled-eigenvalue
//! diagnostics built on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GraphonError, Result};
use crate::graph::Graph;
use crate::linalg::{lanczos_extremes, sym_eigen, DenseSym, LanczosOptions, SymmetricOperator};
use crate::scalar::{lit, Real};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenOptions {
    /// Residual target relative to the norm estimate.
    pub tol: f64,
    /// Largest dimension solved densely.
    pub dense_threshold: usize,
    /// Krylov basis size for the iterative path.
    pub basis: usize,
    pub max_restarts: usize,
    pub vectors: bool,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            dense_threshold: 2000,
            basis: 48,
            max_restarts: 500,
            vectors: false,
            seed: 0x6c61_6e63,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Dense,
    Lanczos,
}

/// Extreme eigenvalues: `positive` descending (all `>= 0`), `negative`
/// ascending (all `<= 0`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenReport<T> {
    pub positive: Vec<T>,
    pub negative: Vec<T>,
    /// `||A v - lambda v||_2` per pair when vectors were formed; for dense
    /// values-only solves, the backward error bound `n eps ||A||`.
    pub positive_residuals: Vec<f64>,
    pub negative_residuals: Vec<f64>,
    #[serde(skip)]
    pub positive_vectors: Option<Vec<Vec<T>>>,
    #[serde(skip)]
    pub negative_vectors: Option<Vec<Vec<T>>>,
    pub norm_estimate: T,
    pub method: EigenMethod,
}

impl<T: Real> EigenReport<T> {
    /// `lambda_t` for `t != 0`: `t > 0` counts down from the largest, `t < 0`
    /// up from the smallest. Indices beyond the computed range give 0.
    pub fn lambda(&self, t: i64) -> T {
        let pick = |v: &[T], i: i64| v.get((i - 1) as usize).copied().unwrap_or(T::zero());
        match t.cmp(&0) {
            std::cmp::Ordering::Greater => pick(&self.positive, t),
            std::cmp::Ordering::Less => pick(&self.negative, -t),
            std::cmp::Ordering::Equal => T::zero(),
        }
    }
}

fn residual<T: Real, A: SymmetricOperator<T> + ?Sized>(op: &A, lambda: T, v: &[T]) -> f64 {
    let mut y = vec![T::zero(); v.len()];
    op.apply(v, &mut y);
    let mut s = T::zero();
    for (&a, &b) in y.iter().zip(v) {
        let d = a - lambda * b;
        s += d * d;
    }
    s.sqrt().to_f64().unwrap_or(f64::NAN)
}

fn dense_of<T: Real, A: SymmetricOperator<T> + ?Sized>(op: &A) -> DenseSym<T> {
    let n = op.dim();
    let mut data = vec![T::zero(); n * n];
    let mut e = vec![T::zero(); n];
    let mut col = vec![T::zero(); n];
    for j in 0..n {
        e[j] = T::one();
        op.apply(&e, &mut col);
        e[j] = T::zero();
        data[j * n..(j + 1) * n].copy_from_slice(&col);
    }
    // Exact symmetry for the dense solver.
    for i in 0..n {
        for j in i + 1..n {
            let avg = (data[i * n + j] + data[j * n + i]) * lit(0.5);
            data[i * n + j] = avg;
            data[j * n + i] = avg;
        }
    }
    DenseSym::new(n, data).expect("symmetrized")
}

/// Largest `k_pos` and smallest `k_neg` eigenvalues of a symmetric operator.
///
/// Dimensions up to `dense_threshold` use Householder tridiagonalization and
/// QL; larger ones use thick-restart Lanczos followed by a deflation check:
/// Lanczos is rerun in the orthogonal complement of the converged vectors,
/// and any eigenvalue found there that beats a reported one (a missed copy
/// of a repeated eigenvalue) is swapped in.
pub fn eigensolve<T: Real, A: SymmetricOperator<T> + ?Sized>(
    op: &A,
    k_pos: usize,
    k_neg: usize,
    opts: &EigenOptions,
) -> Result<EigenReport<T>> {
    let n = op.dim();
    if k_pos + k_neg > n {
        return Err(GraphonError::InvalidParameter(format!(
            "requested {} eigenvalues of a {n}-dimensional operator",
            k_pos + k_neg
        )));
    }
    let (top, bottom, anorm, method, exact_vectors) = if n <= opts.dense_threshold {
        let eig = sym_eigen(&dense_of(op), opts.vectors)?;
        let anorm = eig
            .values
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()));
        let vec_of = |i: usize| eig.vector(i).map(|v| v.to_vec()).unwrap_or_default();
        let top: Vec<(T, Vec<T>)> = (0..k_pos).map(|i| (eig.values[n - 1 - i], vec_of(n - 1 - i))).collect();
        let bottom: Vec<(T, Vec<T>)> = (0..k_neg).map(|i| (eig.values[i], vec_of(i))).collect();
        (top, bottom, anorm, EigenMethod::Dense, opts.vectors)
    } else {
        let lopts = LanczosOptions {
            tol: opts.tol,
            basis: opts.basis,
            max_restarts: opts.max_restarts,
            seed: opts.seed,
        };
        let first = lanczos_extremes(op, k_pos, k_neg, &[], &lopts)?;
        let mut top = first.top;
        let mut bottom = first.bottom;
        let mut anorm = first.norm_estimate;
        for round in 0..8 {
            let locked: Vec<Vec<T>> = top.iter().chain(&bottom).map(|(_, v)| v.clone()).collect();
            let room = n - locked.len();
            let want_top = usize::from(k_pos > 0 && room > 0);
            let want_bot = usize::from(k_neg > 0 && room > want_top);
            if want_top + want_bot == 0 {
                break;
            }
            let probe_opts = LanczosOptions {
                seed: lopts.seed ^ (round as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                ..lopts.clone()
            };
            let probe = lanczos_extremes(op, want_top, want_bot, &locked, &probe_opts)?;
            anorm = anorm.max(probe.norm_estimate);
            let slack = lit::<T>(opts.tol) * anorm;
            let mut changed = false;
            if let (Some(p), Some(worst)) = (probe.top.into_iter().next(), top.last()) {
                if p.0 > worst.0 + slack {
                    top.push(p);
                    top.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                    top.truncate(k_pos);
                    changed = true;
                }
            }
            if let (Some(p), Some(worst)) = (probe.bottom.into_iter().next(), bottom.last()) {
                if p.0 < worst.0 - slack {
                    bottom.push(p);
                    bottom.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                    bottom.truncate(k_neg);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (top, bottom, anorm, EigenMethod::Lanczos, true)
    };
    let bound = n as f64 * f64::EPSILON * anorm.to_f64().unwrap_or(0.0);
    let res = |pairs: &[(T, Vec<T>)]| -> Vec<f64> {
        pairs
            .iter()
            .map(|(l, v)| if exact_vectors { residual(op, *l, v) } else { bound })
            .collect()
    };
    let (pr, nr) = (res(&top), res(&bottom));
    if exact_vectors && method == EigenMethod::Lanczos {
        let limit = 100.0 * opts.tol * anorm.to_f64().unwrap_or(0.0) + f64::MIN_POSITIVE;
        let worst = pr.iter().chain(&nr).cloned().fold(0.0, f64::max);
        if worst > limit {
            return Err(GraphonError::NoConvergence {
                iterations: opts.max_restarts,
                worst_residual: worst,
                residuals: pr.iter().chain(&nr).cloned().collect(),
            });
        }
    }
    let keep_pos = top.iter().take_while(|(l, _)| *l >= T::zero()).count();
    let keep_neg = bottom.iter().take_while(|(l, _)| *l <= T::zero()).count();
    let (top, bottom) = (&top[..keep_pos], &bottom[..keep_neg]);
    let vectors = |pairs: &[(T, Vec<T>)]| opts.vectors.then(|| pairs.iter().map(|(_, v)| v.clone()).collect());
    Ok(EigenReport {
        positive: top.iter().map(|(l, _)| *l).collect(),
        negative: bottom.iter().map(|(l, _)| *l).collect(),
        positive_residuals: pr[..keep_pos].to_vec(),
        negative_residuals: nr[..keep_neg].to_vec(),
        positive_vectors: vectors(top),
        negative_vectors: vectors(bottom),
        norm_estimate: anorm,
        method,
    })
}

/// Normalization of the generalized eigenvalue scaling: `sqrt(|E|)` or
/// `sqrt(2|E|)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeScale {
    #[serde(rename = "E")]
    E,
    #[default]
    #[serde(rename = "2E")]
    TwoE,
}

impl EdgeScale {
    pub fn denominator(self, edges: usize) -> f64 {
        match self {
            EdgeScale::E => (edges as f64).sqrt(),
            EdgeScale::TwoE => (2.0 * edges as f64).sqrt(),
        }
    }
}

impl std::str::FromStr for EdgeScale {
    type Err = GraphonError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" => Ok(EdgeScale::E),
            "2E" => Ok(EdgeScale::TwoE),
            _ => Err(GraphonError::InvalidParameter(format!("edge scale must be E or 2E, got {s}"))),
        }
    }
}

/// Eigenvalue counts needed to resolve every index in `t_set`.
fn counts_for(t_set: &[i64], n: usize) -> (usize, usize) {
    let k_pos = t_set.iter().filter(|&&t| t > 0).map(|&t| t as usize).max().unwrap_or(0).min(n);
    let k_neg = t_set
        .iter()
        .filter(|&&t| t < 0)
        .map(|&t| (-t) as usize)
        .max()
        .unwrap_or(0)
        .min(n - k_pos);
    (k_pos, k_neg)
}

/// `lambda_t / sqrt(2|E|)` for each `t` in `t_set`.
pub fn scaled_spectrum(g: &Graph, t_set: &[i64], opts: &EigenOptions) -> Result<Vec<(i64, f64)>> {
    if g.edge_count() == 0 {
        return Err(GraphonError::NoEdges);
    }
    let (k_pos, k_neg) = counts_for(t_set, g.n());
    let rep: EigenReport<f64> = eigensolve(g, k_pos, k_neg, opts)?;
    let d = EdgeScale::TwoE.denominator(g.edge_count());
    Ok(t_set.iter().map(|&t| (t, rep.lambda(t) / d)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub index: usize,
    pub vertices: usize,
    pub edges: usize,
    /// `(t, lambda_t)` for each tracked index.
    pub lambdas: Vec<(i64, f64)>,
}

impl TrajectoryPoint {
    pub fn lambda(&self, t: i64) -> Option<f64> {
        self.lambdas.iter().find(|(s, _)| *s == t).map(|(_, l)| *l)
    }
}

/// Tracked eigenvalues of each graph of a sequence, solved in parallel.
pub fn trajectory(seq: &[Graph], t_set: &[i64], opts: &EigenOptions) -> Result<Vec<TrajectoryPoint>> {
    if t_set.contains(&0) {
        return Err(GraphonError::InvalidParameter("eigenvalue index 0 is undefined".into()));
    }
    seq.par_iter()
        .enumerate()
        .map(|(index, g)| {
            if g.n() == 0 {
                return Err(GraphonError::EmptyGraph.at_step(index));
            }
            let (k_pos, k_neg) = counts_for(t_set, g.n());
            let rep: EigenReport<f64> = eigensolve(g, k_pos, k_neg, opts).map_err(|e| e.at_step(index))?;
            Ok(TrajectoryPoint {
                index,
                vertices: g.n(),
                edges: g.edge_count(),
                lambdas: t_set.iter().map(|&t| (t, rep.lambda(t))).collect(),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `lambda ~ k sqrt(|E|)` (or `sqrt(2|E|)`).
    Generalized,
    /// `lambda ~ k |V|`.
    Classical,
    /// `lambda ~ const`.
    Graphing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: Model,
    pub t: i64,
    /// Slope through the origin, or the level of the horizontal line.
    pub slope: f64,
    pub mse: f64,
    pub points: usize,
}

/// Least-squares slope through the origin and its mean squared residual.
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> (f64, f64) {
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let k = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mse = x.iter().zip(y).map(|(a, b)| (b - k * a).powi(2)).sum::<f64>() / x.len() as f64;
    (k, mse)
}

/// Fits the three scaling models to `lambda_t` over `traj[tail_from..]`.
pub fn fit_models(
    traj: &[TrajectoryPoint],
    tail_from: usize,
    t: i64,
    edge_scale: EdgeScale,
) -> Result<Vec<FitReport>> {
    let tail = traj.get(tail_from..).unwrap_or(&[]);
    if tail.len() < 2 {
        return Err(GraphonError::InsufficientData(format!(
            "tail window from {tail_from} has {} points; need 2",
            tail.len()
        )));
    }
    let y: Vec<f64> = tail
        .iter()
        .map(|p| {
            p.lambda(t).ok_or_else(|| {
                GraphonError::InvalidParameter(format!("eigenvalue index {t} was not tracked"))
            })
        })
        .collect::<Result<_>>()?;
    let xg: Vec<f64> = tail.iter().map(|p| edge_scale.denominator(p.edges)).collect();
    let xc: Vec<f64> = tail.iter().map(|p| p.vertices as f64).collect();
    let (kg, mg) = fit_through_origin(&xg, &y);
    let (kc, mc) = fit_through_origin(&xc, &y);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let mh = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / y.len() as f64;
    let n = y.len();
    Ok(vec![
        FitReport { model: Model::Generalized, t, slope: kg, mse: mg, points: n },
        FitReport { model: Model::Classical, t, slope: kc, mse: mc, points: n },
        FitReport { model: Model::Graphing, t, slope: mean, mse: mh, points: n },
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledAverage {
    pub index: usize,
    pub t: i64,
    /// Mean of `lambda_t / |V|` over the window.
    pub a: f64,
    /// Mean of `lambda_t / sqrt(|E|)` over the window.
    pub b: f64,
}

/// Windowed means `a_{t,n}` and `b_{t,n}` starting at every index with a
/// full window.
pub fn moving_scaled_averages(traj: &[TrajectoryPoint], window: usize, t_set: &[i64]) -> Result<Vec<ScaledAverage>> {
    if window == 0 || window > traj.len() {
        return Err(GraphonError::InsufficientData(format!(
            "window {window} for a trajectory of length {}",
            traj.len()
        )));
    }
    let mut out = Vec::new();
    for start in 0..=traj.len() - window {
        let win = &traj[start..start + window];
        for &t in t_set {
            let mut a = 0.0;
            let mut b = 0.0;
            for p in win {
                let l = p.lambda(t).ok_or_else(|| {
                    GraphonError::InvalidParameter(format!("eigenvalue index {t} was not tracked"))
                })?;
                a += l / p.vertices as f64;
                b += if p.edges > 0 { l / (p.edges as f64).sqrt() } else { 0.0 };
            }
            out.push(ScaledAverage {
                index: start,
                t,
                a: a / window as f64,
                b: b / window as f64,
            });
        }
    }
    Ok(out)
}

/// One CSV row of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub n_index: usize,
    #[serde(rename = "V")]
    pub vertices: usize,
    #[serde(rename = "E")]
    pub edges: usize,
    pub t: i64,
    pub lambda: f64,
    pub scaled_classical: f64,
    pub scaled_generalized: f64,
}

pub fn trajectory_rows(traj: &[TrajectoryPoint], edge_scale: EdgeScale) -> Vec<TrajectoryRow> {
    let mut rows = Vec::new();
    for p in traj {
        for &(t, lambda) in &p.lambdas {
            let d = edge_scale.denominator(p.edges);
            rows.push(TrajectoryRow {
                n_index: p.index,
                vertices: p.vertices,
                edges: p.edges,
                t,
                lambda,
                scaled_classical: lambda / p.vertices as f64,
                scaled_generalized: if d > 0.0 { lambda / d } else { 0.0 },
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_star() {
        let opts = EigenOptions::default();
        let r: EigenReport<f64> = eigensolve(&Graph::complete(4), 1, 3, &opts).unwrap();
        assert!((r.lambda(1) - 3.0).abs() < 1e-12);
        for t in 1..=3 {
            assert!((r.lambda(-t) + 1.0).abs() < 1e-12);
        }
        let s: EigenReport<f64> = eigensolve(&Graph::star(4), 2, 2, &opts).unwrap();
        assert!((s.lambda(1) - 2.0).abs() < 1e-12);
        assert!((s.lambda(-1) + 2.0).abs() < 1e-12);
        assert!(s.lambda(2).abs() < 1e-12 && s.lambda(-2).abs() < 1e-12);
        assert_eq!(s.lambda(9), 0.0);
    }

    #[test]
    fn scaled_examples() {
        let opts = EigenOptions::default();
        let k4 = scaled_spectrum(&Graph::complete(4), &[1], &opts).unwrap();
        assert!((k4[0].1 - 3f64.sqrt() / 2.0).abs() < 1e-12);
        let star = scaled_spectrum(&Graph::star(8), &[1], &opts).unwrap();
        assert!((star[0].1 - 0.5f64.sqrt()).abs() < 1e-12);
        let k2 = scaled_spectrum(&Graph::complete(2), &[1], &opts).unwrap();
        assert!((k2[0].1 - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(scaled_spectrum(&Graph::empty(3), &[1], &opts), Err(GraphonError::NoEdges));
    }

    #[test]
    fn lanczos_path_handles_repeated_eigenvalues() {
        // Disjoint union of three K_5: lambda = 4 three times.
        let mut edges = Vec::new();
        for c in 0..3 {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((5 * c + i, 5 * c + j));
                }
            }
        }
        let g = Graph::new(15, edges).unwrap();
        let opts = EigenOptions { dense_threshold: 4, basis: 10, ..Default::default() };
        let r: EigenReport<f64> = eigensolve(&g, 4, 2, &opts).unwrap();
        assert_eq!(r.method, EigenMethod::Lanczos);
        for t in 1..=3 {
            assert!((r.lambda(t) - 4.0).abs() < 1e-9, "{:?}", r.positive);
        }
        assert!(r.lambda(4) < 0.5);
        assert!((r.lambda(-1) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn fits_and_averages() {
        let (k, mse) = fit_through_origin(&[1.0, 2.0, 3.0], &[2.0, 4.3, 6.0]);
        assert!((k - 28.6 / 14.0).abs() < 1e-15);
        let want = [(2.0 - k), (4.3 - 2.0 * k), (6.0 - 3.0 * k)].iter().map(|r| r * r).sum::<f64>() / 3.0;
        assert!((mse - want).abs() < 1e-15);
        let graphs: Vec<Graph> = (2..=20).map(Graph::complete).collect();
        let traj = trajectory(&graphs, &[1, -1], &EigenOptions::default()).unwrap();
        for p in &traj {
            assert!((p.lambda(1).unwrap() - (p.vertices - 1) as f64).abs() < 1e-10);
        }
        let fits = fit_models(&traj, 10, 1, EdgeScale::TwoE).unwrap();
        assert!(fits[0].mse < fits[1].mse && fits[0].mse < fits[2].mse);
        assert!(fit_models(&traj, 18, 1, EdgeScale::TwoE).is_err());
        let avg = moving_scaled_averages(&traj, 5, &[1]).unwrap();
        assert_eq!(avg.len(), traj.len() - 4);
        assert!(avg.last().unwrap().a > avg[0].a);
    }
}
