//! Regression of polynomial graph filters from diffusion data, under the
//! classical `A / m` and generalized `A / sqrt(2|E|)` scalings.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GraphonError, Result};
use crate::graph::Graph;
use crate::linalg::least_squares;
use crate::operators::PolynomialFilter;
use crate::rng::stream_rng;
use crate::sampling::nested_subgraphs;
use crate::scalar::{lit, Real};

/// Largest condition number accepted by [`fit_filter`].
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionSpec {
    /// Fraction of vertices, by decreasing degree, that carry the input.
    pub top_fraction: f64,
    pub degree: usize,
    /// Filter coefficients in the unscaled basis `A^i`; drawn uniformly from
    /// `[0, 1]` when absent.
    pub coefficients: Option<Vec<f64>>,
}

impl Default for DiffusionSpec {
    fn default() -> Self {
        Self {
            top_fraction: 0.10,
            degree: 3,
            coefficients: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diffusion<T> {
    pub input: Vec<T>,
    pub output: Vec<T>,
    pub coefficients: Vec<T>,
    /// Vertices carrying the input, by decreasing degree.
    pub sources: Vec<usize>,
}

/// Vertices ordered by decreasing degree, ties by increasing id.
pub fn degree_ranking(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    order
}

/// `sum_i c_i S^i x` by repeated matrix-vector products, `S = A / scale`.
pub fn apply_graph_filter<T: Real>(g: &Graph, coefficients: &[T], scale: T, x: &[T]) -> Vec<T> {
    let mut power = x.to_vec();
    let mut next = vec![T::zero(); x.len()];
    let mut out: Vec<T> = x.iter().map(|&v| v * coefficients.first().copied().unwrap_or(T::zero())).collect();
    for &c in coefficients.iter().skip(1) {
        g.adjacency_matvec(&power, &mut next);
        for v in next.iter_mut() {
            *v /= scale;
        }
        std::mem::swap(&mut power, &mut next);
        for (o, &p) in out.iter_mut().zip(&power) {
            *o += c * p;
        }
    }
    out
}

/// Input uniform on `[0, 1]` over the top-degree vertices (zero elsewhere)
/// and its image under `sum_i c_i A^i`.
pub fn synthesize_diffusion<T: Real>(g: &Graph, spec: &DiffusionSpec, seed: u64) -> Result<Diffusion<T>> {
    if g.n() == 0 {
        return Err(GraphonError::EmptyGraph);
    }
    if !(spec.top_fraction > 0.0 && spec.top_fraction <= 1.0) {
        return Err(GraphonError::InvalidParameter(format!(
            "top fraction must lie in (0, 1], got {}",
            spec.top_fraction
        )));
    }
    let take = ((spec.top_fraction * g.n() as f64).ceil() as usize).clamp(1, g.n());
    let mut sources = degree_ranking(g);
    sources.truncate(take);
    let mut rng = stream_rng(seed, 0);
    let mut input = vec![T::zero(); g.n()];
    for &v in &sources {
        input[v] = lit(rng.random::<f64>());
    }
    let coefficients: Vec<T> = match &spec.coefficients {
        Some(c) => {
            if c.len() != spec.degree + 1 {
                return Err(GraphonError::InvalidParameter(format!(
                    "degree {} needs {} coefficients, got {}",
                    spec.degree,
                    spec.degree + 1,
                    c.len()
                )));
            }
            c.iter().map(|&x| lit(x)).collect()
        }
        None => {
            let mut crng = stream_rng(seed, 1);
            (0..=spec.degree).map(|_| lit(crng.random::<f64>())).collect()
        }
    };
    let output = apply_graph_filter(g, &coefficients, T::one(), &input);
    Ok(Diffusion {
        input,
        output,
        coefficients,
        sources,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scaling", rename_all = "snake_case")]
pub enum Scaling {
    /// `S = A / m`.
    Classical { m: usize },
    /// `S = A / sqrt(2 |E|)`.
    Generalized,
}

impl Scaling {
    pub fn scale(self, g: &Graph) -> Result<f64> {
        match self {
            Scaling::Classical { m } if m > 0 => Ok(m as f64),
            Scaling::Classical { .. } => Err(GraphonError::InvalidParameter("classical scale m must be positive".into())),
            Scaling::Generalized if g.edge_count() > 0 => Ok((2.0 * g.edge_count() as f64).sqrt()),
            Scaling::Generalized => Err(GraphonError::NoEdges),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterFit<T> {
    pub filter: PolynomialFilter<T>,
    pub scaling: Scaling,
    pub scale: f64,
    pub condition: f64,
    pub residual_norm: T,
}

impl<T: Real> FilterFit<T> {
    pub fn predict(&self, g: &Graph, x: &[T]) -> Vec<T> {
        apply_graph_filter(g, &self.filter.coefficients, lit(self.scale), x)
    }
}

/// Least-squares fit of `y ~ sum_i c_i S^i x` by QR of the equilibrated
/// design `[x, S x, ..., S^d x]`.
pub fn fit_filter<T: Real>(x: &[T], y: &[T], g: &Graph, degree: usize, scaling: Scaling) -> Result<FilterFit<T>> {
    if x.len() != g.n() || y.len() != g.n() {
        return Err(GraphonError::InvalidParameter("signal length differs from vertex count".into()));
    }
    if degree + 1 > g.n() {
        return Err(GraphonError::InsufficientData(format!(
            "degree {degree} needs at least {} vertices",
            degree + 1
        )));
    }
    if x.iter().all(|&v| v == T::zero()) {
        return Err(GraphonError::ZeroDesign);
    }
    let scale = if degree == 0 { scaling.scale(g).unwrap_or(1.0) } else { scaling.scale(g)? };
    let s = lit::<T>(scale);
    let mut columns = vec![x.to_vec()];
    let mut next = vec![T::zero(); x.len()];
    for _ in 0..degree {
        g.adjacency_matvec(columns.last().unwrap(), &mut next);
        columns.push(next.iter().map(|&v| v / s).collect());
    }
    let ls = least_squares(&columns, y, MAX_CONDITION)?;
    Ok(FilterFit {
        filter: PolynomialFilter::new(ls.coefficients),
        scaling,
        scale,
        condition: ls.condition,
        residual_norm: ls.residual_norm,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEntry {
    pub k: usize,
    pub m_k: usize,
    pub edges: usize,
    pub classical: Option<f64>,
    pub generalized: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTrajectory {
    pub degree: usize,
    pub entries: Vec<TrajectoryEntry>,
}

impl CoefficientTrajectory {
    pub fn classical(&self) -> Vec<Option<f64>> {
        self.entries.iter().map(|e| e.classical).collect()
    }

    pub fn generalized(&self) -> Vec<Option<f64>> {
        self.entries.iter().map(|e| e.generalized).collect()
    }
}

/// Fits both scalings on induced subgraphs of increasing size and records the
/// leading coefficient. Signals are inherited by vertex identity; subgraph
/// vertex sets are nested prefixes of one seeded random order. The last size
/// must equal `g.n()`, so the last entry is the fit on the whole graph.
pub fn coefficient_trajectory(
    g: &Graph,
    sizes: &[usize],
    diffusion: &Diffusion<f64>,
    degree: usize,
    seed: u64,
) -> Result<CoefficientTrajectory> {
    if sizes.last() != Some(&g.n()) {
        return Err(GraphonError::InvalidParameter(
            "the last subgraph size must equal the vertex count".into(),
        ));
    }
    let subs = nested_subgraphs(g, sizes, seed)?;
    let entries = subs
        .par_iter()
        .enumerate()
        .map(|(k, sub)| {
            let x: Vec<f64> = sub.vertices.iter().map(|&v| diffusion.input[v]).collect();
            let y: Vec<f64> = sub.vertices.iter().map(|&v| diffusion.output[v]).collect();
            let m = sub.graph.n();
            let classical = fit_filter(&x, &y, &sub.graph, degree, Scaling::Classical { m });
            let generalized = fit_filter(&x, &y, &sub.graph, degree, Scaling::Generalized);
            let lead = |r: &Result<FilterFit<f64>>| r.as_ref().ok().map(|f| f.filter.coefficients[degree]);
            let error = match (&classical, &generalized) {
                (Err(e), _) | (_, Err(e)) => Some(e.clone().at_step(k).to_string()),
                _ => None,
            };
            TrajectoryEntry {
                k,
                m_k: m,
                edges: sub.graph.edge_count(),
                classical: lead(&classical),
                generalized: lead(&generalized),
                error,
            }
        })
        .collect();
    Ok(CoefficientTrajectory { degree, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum Ratios {
    /// `r_k = |c_{k+1} - c_k| / |c_last - c_bar|` for consecutive pairs.
    Values(Vec<f64>),
    /// `|c_last - c_bar| < 1e-15`: the tail has converged exactly.
    ExactConvergence,
}

/// Default start of the tail window: the last 16% of the sequence, and at
/// least two points.
pub fn default_tail_from(len: usize) -> usize {
    let tail = ((len as f64 * 0.16).round() as usize).max(2).min(len);
    len - tail
}

/// Relative error change of a coefficient sequence, with `c_bar` the mean of
/// `values[tail_from..]`.
pub fn convergence_ratios(values: &[f64], tail_from: usize) -> Result<Ratios> {
    let tail = values.get(tail_from..).unwrap_or(&[]);
    if tail.len() < 2 {
        return Err(GraphonError::InsufficientData(format!(
            "tail window from {tail_from} has {} values; need 2",
            tail.len()
        )));
    }
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let denom = (values[values.len() - 1] - mean).abs();
    if denom < 1e-15 {
        return Ok(Ratios::ExactConvergence);
    }
    Ok(Ratios::Values(values.windows(2).map(|w| (w[1] - w[0]).abs() / denom).collect()))
}

/// `sign(c) sqrt(|c|)`, used when plotting square roots of coefficients.
pub fn signed_sqrt(c: f64) -> f64 {
    c.signum() * c.abs().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_diffusion() {
        let g = Graph::complete(4);
        let out = apply_graph_filter(&g, &[1.0, 1.0, 1.0], 1.0, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(out, vec![4.0, 3.0, 3.0, 3.0]);
        let col = apply_graph_filter(&Graph::path(3), &[0.0, 1.0], 1.0, &[0.0, 1.0, 0.0]);
        assert_eq!(col, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn top_degree_selection_breaks_ties_by_id() {
        let g = Graph::star(9);
        let spec = DiffusionSpec { top_fraction: 0.2, degree: 0, coefficients: Some(vec![2.0]) };
        let d: Diffusion<f64> = synthesize_diffusion(&g, &spec, 1).unwrap();
        assert_eq!(d.sources, vec![0, 1]);
        assert!(d.input[2..].iter().all(|&v| v == 0.0));
        assert_eq!(d.output, d.input.iter().map(|v| 2.0 * v).collect::<Vec<_>>());
    }

    #[test]
    fn degree_zero_fit_is_scalar_least_squares() {
        let g = Graph::path(4);
        let x = [1.0_f64, 2.0, 0.0, 1.0];
        let y = [2.0, 3.0, 1.0, 3.0];
        let fit = fit_filter(&x, &y, &g, 0, Scaling::Generalized).unwrap();
        let want = (2.0 + 6.0 + 3.0) / 6.0;
        assert!((fit.filter.coefficients[0] - want).abs() < 1e-14);
        assert_eq!(fit_filter(&[0.0; 4], &y, &g, 1, Scaling::Generalized).unwrap_err(), GraphonError::ZeroDesign);
    }

    #[test]
    fn ratios_examples() {
        match convergence_ratios(&[1.0, 2.0, 4.0], 0).unwrap() {
            Ratios::Values(r) => {
                assert!((r[0] - 0.6).abs() < 1e-15);
                assert!((r[1] - 1.2).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(convergence_ratios(&[3.0; 5], 2).unwrap(), Ratios::ExactConvergence);
        assert!(convergence_ratios(&[1.0, 2.0], 1).is_err());
        assert_eq!(default_tail_from(100), 84);
        assert_eq!(signed_sqrt(-4.0), -2.0);
    }
}
