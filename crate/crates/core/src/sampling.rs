//! Sampling graphs and signals from generalized graphons.
//!
//! A sampled graph on `n` vertices draws `n` i.i.d. uniform points on
//! `[0, t_m]` and joins each pair with probability `W(x_i, x_j)`. Vertices are
//! then numbered by increasing position so that the canonical graphon of the
//! sample lines up with `W` without a relabeling.
//!
//! Randomness is keyed by draw index: point `a` and the coins for pairs
//! `(a, b)`, `b < a`, come from stream `a + 1` of the seed. The sample on the
//! first `n` draws is therefore an induced subgraph of the sample on any
//! larger `n` with the same seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cut::{cut_distance_steps, Alignment, CutMode, DistanceOptions};
use crate::error::{GraphonError, Result};
use crate::graph::Graph;
use crate::graphon::{canonical_graphon, restrict, GraphonSpec};
use crate::rng::{derive_seed, stream_rng};
use crate::scalar::{lit, Real};
use crate::signal::{SignalProfile, StepSignal};

/// Sorted sample locations on `[0, t_m]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePoints<T> {
    pub t_m: T,
    pub xs: Vec<T>,
}

impl<T: Real> SamplePoints<T> {
    pub fn new(t_m: T, xs: Vec<T>) -> Result<Self> {
        if let Some(i) = (1..xs.len()).find(|&i| xs[i] < xs[i - 1]) {
            return Err(GraphonError::UnsortedPoints(i));
        }
        if let Some(i) = xs.iter().position(|&x| x < T::zero() || x > t_m) {
            return Err(GraphonError::InvalidParameter(format!(
                "sample point {i} lies outside [0, {t_m}]"
            )));
        }
        Ok(Self { t_m, xs })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledGraph<T> {
    pub graph: Graph,
    pub points: SamplePoints<T>,
    pub seed: u64,
}

impl<T: Real> SampledGraph<T> {
    /// `||W_{m,n}||_1 = 2|E| / n^2`.
    pub fn canonical_l1(&self) -> f64 {
        2.0 * self.graph.edge_density()
    }
}

/// Uniform draws in draw order (not yet sorted).
fn draw_points<T: Real>(t_m: T, n: usize, seed: u64) -> Vec<T> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| lit::<T>(rng.random::<f64>()) * t_m).collect()
}

pub fn sample_graph<T: Real>(w: &GraphonSpec<T>, t_m: T, n: usize, seed: u64) -> Result<SampledGraph<T>> {
    if !(t_m > T::zero()) {
        return Err(GraphonError::InvalidParameter(format!("t_m must be positive, got {t_m}")));
    }
    if n == 0 {
        return Err(GraphonError::EmptyGraph);
    }
    let raw = draw_points(t_m, n, seed);
    let check = w.value_bound() > T::one();
    let rows: Vec<Result<Vec<usize>>> = (1..n)
        .into_par_iter()
        .map(|a| {
            let mut rng = stream_rng(seed, a as u64 + 1);
            let mut out = Vec::new();
            for b in 0..a {
                let p = w.eval(raw[a], raw[b]);
                if check && p > T::one() {
                    return Err(GraphonError::ProbabilityOutOfRange {
                        x: raw[a].to_f64().unwrap_or(f64::NAN),
                        y: raw[b].to_f64().unwrap_or(f64::NAN),
                        value: p.to_f64().unwrap_or(f64::NAN),
                    });
                }
                let u: f64 = rng.random();
                if lit::<T>(u) < p {
                    out.push(b);
                }
            }
            Ok(out)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].partial_cmp(&raw[b]).unwrap().then(a.cmp(&b)));
    let mut rank = vec![0usize; n];
    for (r, &a) in order.iter().enumerate() {
        rank[a] = r;
    }
    let mut edges = Vec::new();
    for (a, row) in rows.into_iter().enumerate() {
        for b in row? {
            edges.push((rank[a + 1], rank[b]));
        }
    }
    let xs = order.iter().map(|&a| raw[a]).collect();
    Ok(SampledGraph {
        graph: Graph::new(n, edges)?,
        points: SamplePoints { t_m, xs },
        seed,
    })
}

/// `G_{m,n}` for every `(t_m, n)` pair of the schedules.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleGrid<T> {
    pub t_schedule: Vec<T>,
    pub n_schedule: Vec<usize>,
    /// `cells[m][j]` is the sample at `t_schedule[m]`, `n_schedule[j]`.
    pub cells: Vec<Vec<SampledGraph<T>>>,
}

fn check_increasing<T: PartialOrd>(xs: &[T]) -> Result<()> {
    match (1..xs.len()).find(|&i| !(xs[i] > xs[i - 1])) {
        Some(i) => Err(GraphonError::NonIncreasingSchedule(i)),
        None => Ok(()),
    }
}

/// Samples every cell of the `(t_m, n)` grid. Cell `(m, j)` uses the seed
/// `derive_seed(seed, [m, j])`, so each cell is reproducible on its own.
pub fn sample_double_sequence<T: Real>(
    w: &GraphonSpec<T>,
    t_schedule: &[T],
    n_schedule: &[usize],
    seed: u64,
) -> Result<SampleGrid<T>> {
    if t_schedule.is_empty() || n_schedule.is_empty() {
        return Err(GraphonError::InsufficientData("empty sampling schedule".into()));
    }
    check_increasing(t_schedule)?;
    let cells = t_schedule
        .iter()
        .enumerate()
        .map(|(m, &t)| {
            n_schedule
                .iter()
                .enumerate()
                .map(|(j, &n)| sample_graph(w, t, n, derive_seed(seed, &[m as u64, j as u64])))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleGrid {
        t_schedule: t_schedule.to_vec(),
        n_schedule: n_schedule.to_vec(),
        cells,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsequenceOptions {
    /// Resolution used to restrict analytic graphons to `[0, t_m]^2`.
    pub restrict_k: usize,
    pub cut: CutMode,
    /// Tolerance for row `m` (0-based); defaults to `1 / (m + 1)`.
    pub tolerances: Option<Vec<f64>>,
}

impl Default for SubsequenceOptions {
    fn default() -> Self {
        Self {
            restrict_k: 128,
            cut: CutMode::Heuristic { restarts: 8, seed: 0 },
            tolerances: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsequenceRow {
    pub m: usize,
    pub t_m: f64,
    pub tolerance: f64,
    /// `||W_m||_1 / t_m^2`.
    pub target_density: f64,
    /// `2|E| / n^2` per grid column.
    pub densities: Vec<f64>,
    /// Stretched cut distance (upper bound) per grid column; `None` when the
    /// density test already failed or the sample has no edges.
    pub distances: Vec<Option<f64>>,
    /// Column index of `phi(m)`.
    pub phi: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSubsequence {
    pub rows: Vec<SubsequenceRow>,
    /// Rows for which no grid column qualifies.
    pub gaps: Vec<usize>,
}

impl SparseSubsequence {
    pub fn phi(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.phi).collect()
    }
}

/// For each row `m` picks the smallest column `n`, no smaller than the
/// previous choice, whose sample passes both tests at tolerance `eps_m`:
/// its edge density is within `eps_m` of `||W_m||_1 / t_m^2`, and its
/// stretched canonical graphon is within `eps_m` of the stretched
/// restriction `W_m'`.
pub fn extract_sparse_subsequence<T: Real>(
    grid: &SampleGrid<T>,
    w: &GraphonSpec<T>,
    options: &SubsequenceOptions,
) -> Result<SparseSubsequence> {
    if grid.cells.is_empty() || grid.cells[0].is_empty() {
        return Err(GraphonError::InsufficientData("empty sample grid".into()));
    }
    let mut rows = Vec::with_capacity(grid.cells.len());
    let mut gaps = Vec::new();
    let mut floor = 0usize;
    for (m, row) in grid.cells.iter().enumerate() {
        let t_m = grid.t_schedule[m];
        let tol = match &options.tolerances {
            Some(t) => *t.get(m).ok_or_else(|| {
                GraphonError::InvalidParameter(format!("no tolerance given for row {m}"))
            })?,
            None => 1.0 / (m + 1) as f64,
        };
        let w_m = restrict(w, t_m, options.restrict_k)?;
        let target = w_m.l1_norm().to_f64().unwrap_or(f64::NAN);
        let stretched_target = if w_m.l1_norm() > T::zero() {
            Some(w_m.stretch()?.0)
        } else {
            None
        };
        let mut densities = Vec::with_capacity(row.len());
        let mut distances = Vec::with_capacity(row.len());
        let mut phi = None;
        for (j, cell) in row.iter().enumerate() {
            let density = cell.canonical_l1();
            densities.push(density);
            let mut distance = None;
            if phi.is_none() && j >= floor && (density - target).abs() <= tol {
                let sample_l1 = density > 0.0;
                distance = match (&stretched_target, sample_l1) {
                    (Some(target_s), true) => {
                        let (ws, _) = canonical_graphon::<T>(&cell.graph)?.stretch()?;
                        let opts = DistanceOptions {
                            alignment: Alignment::Identity,
                            cut: options.cut,
                        };
                        let d = cut_distance_steps(&ws, target_s, opts)?;
                        Some(d.distance.to_f64().unwrap_or(f64::NAN))
                    }
                    // Both zero: identical.
                    (None, false) => Some(0.0),
                    _ => None,
                };
                if distance.is_some_and(|d| d <= tol) {
                    phi = Some(j);
                }
            }
            distances.push(distance);
        }
        match phi {
            Some(j) => floor = j,
            None => gaps.push(m),
        }
        rows.push(SubsequenceRow {
            m,
            t_m: t_m.to_f64().unwrap_or(f64::NAN),
            tolerance: tol,
            target_density: target,
            densities,
            distances,
            phi,
        });
    }
    Ok(SparseSubsequence { rows, gaps })
}

/// Canonical step signal of `f` sampled at `points`: `n` equal steps on
/// `[0, 1]`, step `i` carrying `f(x_i)`.
pub fn sample_signal<T: Real>(f: &SignalProfile<T>, points: &SamplePoints<T>) -> Result<StepSignal<T>> {
    if let Some(i) = (1..points.xs.len()).find(|&i| points.xs[i] < points.xs[i - 1]) {
        return Err(GraphonError::UnsortedPoints(i));
    }
    if points.xs.is_empty() {
        return Err(GraphonError::InsufficientData("no sample points".into()));
    }
    StepSignal::from_values(T::one(), points.xs.iter().map(|&x| f.eval(x)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSchedule {
    pub batch: usize,
    pub steps: usize,
    pub drop_isolated: bool,
}

impl GrowthSchedule {
    pub fn new(batch: usize, steps: usize, drop_isolated: bool) -> Result<Self> {
        if batch == 0 || steps == 0 {
            return Err(GraphonError::InvalidParameter(
                "growth batch and steps must be positive".into(),
            ));
        }
        Ok(Self {
            batch,
            steps,
            drop_isolated,
        })
    }
}

/// One step of a growth sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrownSubgraph {
    pub graph: Graph,
    /// Original id of each vertex of `graph`.
    pub vertices: Vec<usize>,
    /// Size of the nested vertex sample before isolated vertices were dropped.
    pub sampled: usize,
}

/// Nested induced subgraphs on `batch, 2 batch, ...` uniformly chosen
/// vertices. Each step's sample extends the previous one; vertices are kept
/// in increasing original-id order.
pub fn grow_subgraphs(g: &Graph, schedule: GrowthSchedule, seed: u64) -> Result<Vec<GrownSubgraph>> {
    let total = schedule
        .batch
        .checked_mul(schedule.steps)
        .filter(|&t| t <= g.n())
        .ok_or_else(|| {
            GraphonError::InvalidParameter(format!(
                "growth schedule {} x {} exceeds {} vertices",
                schedule.batch,
                schedule.steps,
                g.n()
            ))
        })?;
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut stream_rng(seed, 0));
    order.truncate(total);
    Ok((1..=schedule.steps)
        .into_par_iter()
        .map(|s| {
            let mut vs = order[..s * schedule.batch].to_vec();
            vs.sort_unstable();
            let sub = g.induced_subgraph(&vs);
            let sampled = vs.len();
            if schedule.drop_isolated {
                let (graph, kept) = sub.without_isolated();
                let vertices = kept.into_iter().map(|v| vs[v]).collect();
                GrownSubgraph {
                    graph,
                    vertices,
                    sampled,
                }
            } else {
                GrownSubgraph {
                    graph: sub,
                    vertices: vs,
                    sampled,
                }
            }
        })
        .collect())
}

/// Induced subgraphs on the first `m_k` vertices of a seeded random order,
/// for each size in `sizes` (which must increase).
pub fn nested_subgraphs(g: &Graph, sizes: &[usize], seed: u64) -> Result<Vec<GrownSubgraph>> {
    check_increasing(sizes)?;
    if sizes.last().is_some_and(|&m| m > g.n()) {
        return Err(GraphonError::InvalidParameter(format!(
            "subgraph size exceeds {} vertices",
            g.n()
        )));
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut stream_rng(seed, 0));
    Ok(sizes
        .par_iter()
        .map(|&m| {
            let mut vs = order[..m].to_vec();
            vs.sort_unstable();
            GrownSubgraph {
                graph: g.induced_subgraph(&vs),
                vertices: vs,
                sampled: m,
            }
        })
        .collect())
}

/// `W_G 1[0, 1 - epsilon]^2` rescaled to the unit square, as a graph: the
/// subgraph induced by the vertices whose cells lie inside `[0, 1 - epsilon]`,
/// i.e. the first `floor((1 - epsilon) n)`. `epsilon = 0` returns `g`.
pub fn trim_tail(g: &Graph, epsilon: f64) -> Result<Graph> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(GraphonError::InvalidParameter(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    if epsilon == 0.0 {
        return Ok(g.clone());
    }
    let keep = ((1.0 - epsilon) * g.n() as f64).floor() as usize;
    let vs: Vec<usize> = (0..keep).collect();
    Ok(g.induced_subgraph(&vs))
}

/// Density limit `||W_m||_1 / t_m^2` of samples drawn on `[0, t_m]`, using
/// the closed form when one exists and `restrict` with `k` cells otherwise.
pub fn density_limit<T: Real>(w: &GraphonSpec<T>, t_m: T, k: usize) -> Result<T> {
    let t2 = t_m * t_m;
    Ok(match w {
        GraphonSpec::RankOneExp { amplitude, decay } => {
            let one = T::one();
            let e = one - (-*decay * t_m).exp();
            *amplitude * e * e / (*decay * *decay) / t2
        }
        GraphonSpec::ConstantBox { p, side } => {
            let s = if *side < t_m { *side } else { t_m };
            *p * s * s / t2
        }
        GraphonSpec::CelebrityLimit => {
            let s = if t_m < T::one() { t_m } else { T::one() };
            s * s / t2
        }
        GraphonSpec::Step(_) => restrict(w, t_m, k)?.l1_norm(),
    })
}

/// Mean and standard deviation of `2|E| / n^2` for samples from a constant
/// box `p 1[0, s]^2` on `[0, t]`: with `K ~ Bin(n, min(s, t) / t)` points in
/// the box, `|E| | K ~ Bin(C(K, 2), p)`.
pub fn box_density_moments(p: f64, side: f64, t: f64, n: usize) -> (f64, f64) {
    let q = (side.min(t) / t).clamp(0.0, 1.0);
    // E and Var of C(K,2) from the binomial pmf, evaluated in log space.
    let mut e_pairs = 0.0;
    let mut e_pairs2 = 0.0;
    let ln_q = q.ln();
    let ln_1q = (1.0 - q).ln();
    let mut ln_choose = 0.0f64;
    for k in 0..=n {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let lp = match (k, n - k) {
            (0, _) if q >= 1.0 => f64::NEG_INFINITY,
            (_, 0) if q <= 0.0 => f64::NEG_INFINITY,
            _ => {
                ln_choose
                    + if k > 0 { k as f64 * ln_q } else { 0.0 }
                    + if n > k { (n - k) as f64 * ln_1q } else { 0.0 }
            }
        };
        let pk = lp.exp();
        let c = (k * k.saturating_sub(1) / 2) as f64;
        e_pairs += pk * c;
        e_pairs2 += pk * c * c;
    }
    let var_pairs = (e_pairs2 - e_pairs * e_pairs).max(0.0);
    // Law of total variance for |E|.
    let mean_e = p * e_pairs;
    let var_e = p * (1.0 - p) * e_pairs + p * p * var_pairs;
    let scale = 2.0 / (n as f64 * n as f64);
    (mean_e * scale, var_e.sqrt() * scale)
}

/// `||W_m||_1`, the mass of `w` on `[0, t_m]^2`.
pub fn restricted_l1<T: Real>(w: &GraphonSpec<T>, t_m: T, k: usize) -> Result<T> {
    Ok(density_limit(w, t_m, k)? * t_m * t_m)
}
