//! Cut norm of step kernels and the (stretched) cut distance.
//!
//! For a kernel that is constant on the cells of a product grid, the supremum
//! over measurable `S, T` of `|int_{S x T} U|` is attained on unions of cells,
//! so the cut norm reduces to `max |sum_{i in S, j in T} m_ij|` over the cell
//! mass matrix `m`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GraphonError, Result};
use crate::graphon::{GraphonSpec, SignedStepGraphon, StepGraphon};
use crate::grid::{MassMatrix, MergedDifference};
use crate::rng::stream_rng;
use crate::scalar::{Real, Scalar};

/// Largest resolution accepted by exact `2^k` enumeration.
pub const EXACT_CUT_LIMIT: usize = 22;
/// Largest `k` accepted by exhaustive permutation alignment.
pub const EXACT_ALIGN_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CutMode {
    /// Enumerates every row subset. Needs `k <= 22`.
    Exact,
    /// Alternating maximization from seeded random starts. Returns a lower
    /// bound on the cut norm together with a witness attaining it.
    Heuristic { restarts: usize, seed: u64 },
}

impl Default for CutMode {
    fn default() -> Self {
        CutMode::Heuristic {
            restarts: 32,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutResult<T> {
    pub value: T,
    pub witness_rows: Vec<usize>,
    pub witness_cols: Vec<usize>,
    pub exact: bool,
}

/// `|sum_{j in cols} sum_{i in rows} m_ij|`, summed in ascending index order.
/// This is the same order both solvers use, so a witness re-evaluates to the
/// reported value bit for bit.
pub fn evaluate_cut<T: Scalar>(m: &MassMatrix<T>, rows: &[usize], cols: &[usize]) -> T {
    let mut total = T::zero();
    for &j in cols {
        let mut c = T::zero();
        for &i in rows {
            c += m.get(i, j);
        }
        total += c;
    }
    total.abs()
}

pub fn cut_norm_of_masses<T: Scalar>(m: &MassMatrix<T>, mode: CutMode) -> Result<CutResult<T>> {
    match mode {
        CutMode::Exact => exact_cut(m),
        CutMode::Heuristic { restarts, seed } => Ok(heuristic_cut(m, restarts.max(1), seed)),
    }
}

pub fn cut_norm<T: Scalar>(u: &SignedStepGraphon<T>, mode: CutMode) -> Result<CutResult<T>> {
    cut_norm_of_masses(&MassMatrix::from_signed(u), mode)
}

fn members(mask: u64, k: usize) -> Vec<usize> {
    (0..k).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Best column set for a fixed row set: all columns with positive sum for
/// the positive side, all with negative sum for the negative side.
fn best_cols<T: Scalar>(colsum: &[T]) -> (T, Vec<usize>, T, Vec<usize>) {
    let (mut pos, mut neg) = (T::zero(), T::zero());
    let (mut pc, mut nc) = (Vec::new(), Vec::new());
    for (j, &c) in colsum.iter().enumerate() {
        if c > T::zero() {
            pos += c;
            pc.push(j);
        } else if c < T::zero() {
            neg += c;
            nc.push(j);
        }
    }
    (pos, pc, neg.abs(), nc)
}

fn exact_cut<T: Scalar>(m: &MassMatrix<T>) -> Result<CutResult<T>> {
    let k = m.dim();
    if k > EXACT_CUT_LIMIT {
        return Err(GraphonError::ResolutionTooLarge {
            k,
            limit: EXACT_CUT_LIMIT,
        });
    }
    if k == 0 {
        return Ok(CutResult {
            value: T::zero(),
            witness_rows: vec![],
            witness_cols: vec![],
            exact: true,
        });
    }
    let total: u64 = 1 << k;
    let chunk: u64 = 1 << 10.min(k);
    // (value, mask, positive side)
    let best = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut best: (T, u64, bool) = (T::zero(), 0, true);
            let mut colsum = vec![T::zero(); k];
            for mask in (c * chunk).max(1)..((c + 1) * chunk).min(total) {
                for s in colsum.iter_mut() {
                    *s = T::zero();
                }
                for i in 0..k {
                    if mask >> i & 1 == 1 {
                        for (s, &v) in colsum.iter_mut().zip(m.row(i)) {
                            *s += v;
                        }
                    }
                }
                let (pos, _, neg, _) = best_cols(&colsum);
                if pos > best.0 {
                    best = (pos, mask, true);
                }
                if neg > best.0 {
                    best = (neg, mask, false);
                }
            }
            best
        })
        .reduce(
            || (T::zero(), 0, true),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1 && b.0 > T::zero()) {
                    b
                } else {
                    a
                }
            },
        );
    let rows = members(best.1, k);
    let colsum = column_sums(m, &rows);
    let (_, pc, _, nc) = best_cols(&colsum);
    let cols = if best.2 { pc } else { nc };
    let value = evaluate_cut(m, &rows, &cols);
    Ok(CutResult {
        value,
        witness_rows: rows,
        witness_cols: cols,
        exact: true,
    })
}

fn column_sums<T: Scalar>(m: &MassMatrix<T>, rows: &[usize]) -> Vec<T> {
    let mut colsum = vec![T::zero(); m.dim()];
    for &i in rows {
        for (s, &v) in colsum.iter_mut().zip(m.row(i)) {
            *s += v;
        }
    }
    colsum
}

/// Alternating maximization of `sigma * sum_{S x T} m` for `sigma = +-1`.
/// Start 0 is deterministic (rows with positive, resp. negative, row sum);
/// the others draw `S` uniformly from a seeded stream.
fn heuristic_cut<T: Scalar>(m: &MassMatrix<T>, restarts: usize, seed: u64) -> CutResult<T> {
    let k = m.dim();
    let rowsum: Vec<T> = (0..k)
        .map(|i| {
            let mut s = T::zero();
            for &v in m.row(i) {
                s += v;
            }
            s
        })
        .collect();
    let runs: Vec<(T, Vec<usize>, Vec<usize>)> = (0..restarts)
        .into_par_iter()
        .flat_map_iter(|r| {
            let mut out = Vec::with_capacity(2);
            for positive in [true, false] {
                let start: Vec<usize> = if r == 0 {
                    (0..k)
                        .filter(|&i| {
                            if positive {
                                rowsum[i] > T::zero()
                            } else {
                                rowsum[i] < T::zero()
                            }
                        })
                        .collect()
                } else {
                    let mut rng = stream_rng(seed, 2 * r as u64 + positive as u64);
                    (0..k).filter(|_| rng.random::<bool>()).collect()
                };
                out.push(climb(m, start, positive));
            }
            out.into_iter()
        })
        .collect();
    let mut best: (T, Vec<usize>, Vec<usize>) = (T::zero(), vec![], vec![]);
    for run in runs {
        if run.0 > best.0 {
            best = run;
        }
    }
    CutResult {
        value: best.0,
        witness_rows: best.1,
        witness_cols: best.2,
        exact: false,
    }
}

fn climb<T: Scalar>(m: &MassMatrix<T>, mut rows: Vec<usize>, positive: bool) -> (T, Vec<usize>, Vec<usize>) {
    let k = m.dim();
    let pick = |sums: &[T]| -> Vec<usize> {
        (0..sums.len())
            .filter(|&j| {
                if positive {
                    sums[j] > T::zero()
                } else {
                    sums[j] < T::zero()
                }
            })
            .collect()
    };
    let mut best = T::zero();
    let mut best_pair = (Vec::new(), Vec::new());
    for _ in 0..200 {
        let colsum = column_sums(m, &rows);
        let cols = pick(&colsum);
        let mut rowsum = vec![T::zero(); k];
        for (i, s) in rowsum.iter_mut().enumerate() {
            let row = m.row(i);
            for &j in &cols {
                *s += row[j];
            }
        }
        let next_rows = pick(&rowsum);
        let value = evaluate_cut(m, &next_rows, &cols);
        if value > best {
            best = value;
            best_pair = (next_rows.clone(), cols);
        } else {
            break;
        }
        if next_rows == rows {
            break;
        }
        rows = next_rows;
    }
    (best, best_pair.0, best_pair.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "align", rename_all = "snake_case")]
pub enum Alignment {
    /// Compare the graphons as given.
    Identity,
    /// Minimize over all `k1!` relabelings of the first graphon's cells with
    /// an exact inner cut norm. Needs `k1 <= 8` and a common refinement of at
    /// most 22 cells.
    Exact,
    /// Sort each graphon's cells by decreasing row mass.
    DegreeSort,
    /// Degree sort followed by first-improvement pairwise swaps on the first
    /// graphon's labels, at most `passes` sweeps.
    LocalSearch { passes: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceOptions {
    pub alignment: Alignment,
    pub cut: CutMode,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            alignment: Alignment::DegreeSort,
            cut: CutMode::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlignmentResult<T> {
    pub distance: T,
    /// Cell relabeling applied to the first graphon.
    pub permutation: Vec<usize>,
    /// Cell relabeling applied to the second graphon.
    pub permutation_second: Vec<usize>,
    /// True when the distance is the exact minimum over all relabelings of
    /// the first graphon's cells (the `Exact` alignment).
    pub exact: bool,
    pub cut: CutResult<T>,
}

fn identity(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// Cell order by decreasing row mass, ties by index.
pub fn degree_order<T: Scalar>(w: &StepGraphon<T>) -> Vec<usize> {
    let masses = w.row_masses();
    let mut order = identity(w.k());
    order.sort_by(|&a, &b| {
        masses[b]
            .partial_cmp(&masses[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

fn eval_pair<T: Real>(
    w1: &StepGraphon<T>,
    p1: &[usize],
    w2: &StepGraphon<T>,
    p2: &[usize],
    mode: CutMode,
) -> Result<CutResult<T>> {
    let d = MergedDifference::new(w1, Some(p1), w2, Some(p2));
    cut_norm_of_masses(&d.masses, mode)
}

/// `min_pi d_cut(w1^pi, w2)` over the relabelings allowed by the alignment
/// mode. Identity is always evaluated and kept unless strictly beaten.
pub fn cut_distance_steps<T: Real>(
    w1: &StepGraphon<T>,
    w2: &StepGraphon<T>,
    options: DistanceOptions,
) -> Result<AlignmentResult<T>> {
    let (k1, k2) = (w1.k(), w2.k());
    let exact_align = options.alignment == Alignment::Exact;
    let mode = if exact_align { CutMode::Exact } else { options.cut };
    if exact_align && k1 > EXACT_ALIGN_LIMIT {
        return Err(GraphonError::ResolutionTooLarge {
            k: k1,
            limit: EXACT_ALIGN_LIMIT,
        });
    }
    let id2 = identity(k2);
    let mut best_p1 = identity(k1);
    let mut best_p2 = id2.clone();
    let mut best = eval_pair(w1, &best_p1, w2, &best_p2, mode)?;
    let consider = |p1: &[usize], p2: &[usize], best: &mut CutResult<T>, bp1: &mut Vec<usize>, bp2: &mut Vec<usize>| -> Result<bool> {
        let r = eval_pair(w1, p1, w2, p2, mode)?;
        if r.value < best.value {
            *best = r;
            *bp1 = p1.to_vec();
            *bp2 = p2.to_vec();
            Ok(true)
        } else {
            Ok(false)
        }
    };
    match options.alignment {
        Alignment::Identity => {}
        Alignment::Exact => {
            // Heap's algorithm, iterative form.
            let mut p = identity(k1);
            let mut c = vec![0usize; k1];
            let mut i = 0;
            while i < k1 {
                if c[i] < i {
                    if i % 2 == 0 {
                        p.swap(0, i);
                    } else {
                        p.swap(c[i], i);
                    }
                    consider(&p, &id2, &mut best, &mut best_p1, &mut best_p2)?;
                    c[i] += 1;
                    i = 0;
                } else {
                    c[i] = 0;
                    i += 1;
                }
            }
        }
        Alignment::DegreeSort | Alignment::LocalSearch { .. } => {
            let (o1, o2) = (degree_order(w1), degree_order(w2));
            consider(&o1, &o2, &mut best, &mut best_p1, &mut best_p2)?;
            if let Alignment::LocalSearch { passes } = options.alignment {
                let p2 = best_p2.clone();
                let mut p1 = best_p1.clone();
                for _ in 0..passes {
                    let mut improved = false;
                    for a in 0..k1 {
                        for b in a + 1..k1 {
                            p1.swap(a, b);
                            if consider(&p1, &p2, &mut best, &mut best_p1, &mut best_p2)? {
                                improved = true;
                            } else {
                                p1.swap(a, b);
                            }
                        }
                    }
                    if !improved {
                        break;
                    }
                }
            }
        }
    }
    Ok(AlignmentResult {
        distance: best.value,
        permutation: best_p1,
        permutation_second: best_p2,
        exact: exact_align,
        cut: best,
    })
}

/// Cut distance between the stretched versions of two graphons.
///
/// Step graphons are compared exactly. Other families are discretized on
/// `resolution = (k, extent)` after stretching (required for families
/// without a finite step form).
pub fn stretched_cut_distance<T: Real>(
    w1: &GraphonSpec<T>,
    w2: &GraphonSpec<T>,
    options: DistanceOptions,
    resolution: Option<(usize, T)>,
) -> Result<AlignmentResult<T>> {
    let (s1, _) = w1.stretch()?;
    let (s2, _) = w2.stretch()?;
    let a = s1.to_step(resolution)?;
    let b = s2.to_step(resolution)?;
    cut_distance_steps(&a, &b, options)
}
