//! Step graphons, the closed family of analytic graphons, stretching and
//! restriction.
//!
//! A step graphon lives on `[0, support]^2`, split into `k x k` equal cells,
//! and is zero everywhere else on the quarter plane.

use serde::{Deserialize, Serialize};

use crate::error::{GraphonError, Result};
use crate::graph::Graph;
use crate::scalar::{count, lit, max, Real, Scalar};

/// Stretch factor attached to a stretched object: `W^r(x, y) = W(r x, r y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchTag<T> {
    pub factor: T,
}

fn check_grid<T: Scalar>(k: usize, support: T, values: &[T]) -> Result<()> {
    if k == 0 {
        return Err(GraphonError::InvalidParameter("grid resolution must be positive".into()));
    }
    if !(support > T::zero()) {
        return Err(GraphonError::InvalidParameter(format!(
            "support length must be positive, got {support:?}"
        )));
    }
    if values.len() != k * k {
        return Err(GraphonError::InvalidParameter(format!(
            "expected {} cell values, got {}",
            k * k,
            values.len()
        )));
    }
    for i in 0..k {
        for j in i + 1..k {
            if values[i * k + j] != values[j * k + i] {
                return Err(GraphonError::Asymmetric(i, j));
            }
        }
    }
    Ok(())
}

fn out_of_range<T: Scalar>(row: usize, col: usize, value: T, lower: T, upper: T) -> GraphonError {
    let f = |x: T| num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN);
    GraphonError::ValueOutOfRange {
        row,
        col,
        value: f(value),
        lower: f(lower),
        upper: f(upper),
    }
}

#[inline]
fn cell_of<T: Scalar>(x: T, support: T, k: usize) -> Option<usize> {
    if x < T::zero() || !(x < support) {
        return None;
    }
    let mut lo = 0usize;
    let mut hi = k;
    // Largest i with i * support / k <= x.
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if count::<T>(mid) * support / count::<T>(k) <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Non-negative symmetric step function on `[0, support]^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepGraphon<T> {
    k: usize,
    support: T,
    values: Vec<T>,
    value_bound: T,
}

impl<T: Scalar> StepGraphon<T> {
    /// `values` is row-major `k x k`.
    pub fn new(k: usize, support: T, values: Vec<T>, value_bound: T) -> Result<Self> {
        check_grid(k, support, &values)?;
        for (idx, &v) in values.iter().enumerate() {
            if v < T::zero() || v > value_bound {
                return Err(out_of_range(idx / k, idx % k, v, T::zero(), value_bound));
            }
        }
        Ok(Self {
            k,
            support,
            values,
            value_bound,
        })
    }

    /// Like [`StepGraphon::new`] with the bound set to the largest value.
    pub fn from_values(k: usize, support: T, values: Vec<T>) -> Result<Self> {
        let bound = values.iter().copied().fold(T::zero(), max);
        Self::new(k, support, values, bound)
    }

    pub fn zero(k: usize, support: T) -> Result<Self> {
        Self::new(k, support, vec![T::zero(); k * k], T::zero())
    }

    /// Fills the upper triangle from `f(i, j)` (with `i <= j`) and mirrors it.
    pub fn from_fn(k: usize, support: T, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut values = vec![T::zero(); k * k];
        for i in 0..k {
            for j in i..k {
                let v = f(i, j);
                values[i * k + j] = v;
                values[j * k + i] = v;
            }
        }
        Self::from_values(k, support, values)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn support(&self) -> T {
        self.support
    }

    #[inline]
    pub fn cell_width(&self) -> T {
        self.support / count(self.k)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.k + j]
    }

    pub fn value_bound(&self) -> T {
        self.value_bound
    }

    /// `(support / k)^2 * sum of cell values`.
    pub fn l1_norm(&self) -> T {
        let w = self.cell_width();
        let mut s = T::zero();
        for &v in &self.values {
            s += v;
        }
        w * w * s
    }

    pub fn eval(&self, x: T, y: T) -> T {
        match (
            cell_of(x, self.support, self.k),
            cell_of(y, self.support, self.k),
        ) {
            (Some(i), Some(j)) => self.value(i, j),
            _ => T::zero(),
        }
    }

    /// Integral of each row, `cell_width^2 * sum_j values[i][j]`.
    pub fn row_masses(&self) -> Vec<T> {
        let w = self.cell_width();
        self.values
            .chunks(self.k)
            .map(|row| {
                let mut s = T::zero();
                for &v in row {
                    s += v;
                }
                w * w * s
            })
            .collect()
    }

    /// `W^r(x, y) = W(r x, r y)`: only the support changes, values are kept.
    pub fn stretch_by(&self, r: T) -> Result<Self> {
        if !(r > T::zero()) {
            return Err(GraphonError::InvalidParameter(format!(
                "stretch factor must be positive, got {r:?}"
            )));
        }
        Ok(Self {
            support: self.support / r,
            ..self.clone()
        })
    }

    /// Relabels cells: the result has value `values[perm[i]][perm[j]]` at `(i, j)`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.k);
        let k = self.k;
        let mut values = vec![T::zero(); k * k];
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = self.value(perm[i], perm[j]);
            }
        }
        Self {
            values,
            ..self.clone()
        }
    }

    /// Drops trailing rows and columns that are identically zero, shrinking
    /// the support accordingly. The function on the quarter plane is unchanged.
    pub fn trimmed(&self) -> Self {
        let k = self.k;
        let last = (0..k)
            .rev()
            .find(|&i| self.values[i * k..(i + 1) * k].iter().any(|v| !v.is_zero()));
        let keep = match last {
            Some(i) => i + 1,
            None => 1,
        };
        if keep == k {
            return self.clone();
        }
        let mut values = Vec::with_capacity(keep * keep);
        for i in 0..keep {
            values.extend_from_slice(&self.values[i * k..i * k + keep]);
        }
        Self {
            k: keep,
            support: self.support * count(keep) / count(k),
            values,
            value_bound: self.value_bound,
        }
    }

    pub fn to_signed(&self) -> SignedStepGraphon<T> {
        SignedStepGraphon {
            k: self.k,
            support: self.support,
            values: self.values.clone(),
            value_bound: self.value_bound,
        }
    }
}

impl<T: Real> StepGraphon<T> {
    /// `(support / k) * sqrt(sum of squared cell values)`.
    pub fn l2_norm(&self) -> T {
        let s: T = self.values.iter().map(|&v| v * v).sum();
        self.cell_width() * s.sqrt()
    }

    /// Stretch by `sqrt(l1_norm)`, giving a graphon of unit 1-norm.
    pub fn stretch(&self) -> Result<(Self, StretchTag<T>)> {
        let l1 = self.l1_norm();
        if !(l1 > T::zero()) {
            return Err(GraphonError::ZeroGraphon);
        }
        let r = l1.sqrt();
        Ok((self.stretch_by(r)?, StretchTag { factor: r }))
    }
}

/// Symmetric step function that may take negative values, used for
/// differences of graphons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedStepGraphon<T> {
    k: usize,
    support: T,
    values: Vec<T>,
    value_bound: T,
}

impl<T: Scalar> SignedStepGraphon<T> {
    pub fn new(k: usize, support: T, values: Vec<T>, value_bound: T) -> Result<Self> {
        check_grid(k, support, &values)?;
        for (idx, &v) in values.iter().enumerate() {
            if v.abs() > value_bound {
                return Err(out_of_range(idx / k, idx % k, v, -value_bound, value_bound));
            }
        }
        Ok(Self {
            k,
            support,
            values,
            value_bound,
        })
    }

    pub fn from_values(k: usize, support: T, values: Vec<T>) -> Result<Self> {
        let bound = values.iter().map(|v| v.abs()).fold(T::zero(), max);
        Self::new(k, support, values, bound)
    }

    /// `a - b` for two graphons on the same grid.
    pub fn difference(a: &StepGraphon<T>, b: &StepGraphon<T>) -> Result<Self> {
        if a.k != b.k || a.support != b.support {
            return Err(GraphonError::IncompatibleGrids(format!(
                "k = {} on [0, {:?}] vs k = {} on [0, {:?}]",
                a.k, a.support, b.k, b.support
            )));
        }
        let values = a.values.iter().zip(&b.values).map(|(&x, &y)| x - y).collect();
        Self::from_values(a.k, a.support, values)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn support(&self) -> T {
        self.support
    }

    #[inline]
    pub fn cell_width(&self) -> T {
        self.support / count(self.k)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.k + j]
    }

    pub fn value_bound(&self) -> T {
        self.value_bound
    }

    pub fn l1_norm(&self) -> T {
        let w = self.cell_width();
        let mut s = T::zero();
        for &v in &self.values {
            s += v.abs();
        }
        w * w * s
    }

    pub fn eval(&self, x: T, y: T) -> T {
        match (
            cell_of(x, self.support, self.k),
            cell_of(y, self.support, self.k),
        ) {
            (Some(i), Some(j)) => self.value(i, j),
            _ => T::zero(),
        }
    }
}

/// A generalized graphon: a step graphon or one of a closed set of analytic
/// families with closed-form norms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphonSpec<T> {
    Step(StepGraphon<T>),
    /// `p * 1[0, side]^2`.
    ConstantBox { p: T, side: T },
    /// `amplitude * exp(-decay x) * exp(-decay y)`.
    RankOneExp { amplitude: T, decay: T },
    /// `1[0, 1]^2`, the stretched limit of the celebrity sequence.
    CelebrityLimit,
}

impl<T: Real> GraphonSpec<T> {
    pub fn constant_box(p: T, side: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(GraphonError::InvalidParameter(format!("box value must lie in [0, 1], got {p}")));
        }
        if !(side > T::zero()) {
            return Err(GraphonError::InvalidParameter(format!("box side must be positive, got {side}")));
        }
        Ok(GraphonSpec::ConstantBox { p, side })
    }

    pub fn rank_one_exp(amplitude: T, decay: T) -> Result<Self> {
        if !(amplitude >= T::zero()) || !amplitude.is_finite() {
            return Err(GraphonError::InvalidParameter(format!(
                "amplitude must be non-negative, got {amplitude}"
            )));
        }
        if !(decay > T::zero()) || !decay.is_finite() {
            return Err(GraphonError::InvalidParameter(format!("decay must be positive, got {decay}")));
        }
        Ok(GraphonSpec::RankOneExp { amplitude, decay })
    }

    pub fn l1_norm(&self) -> T {
        match self {
            GraphonSpec::Step(w) => w.l1_norm(),
            GraphonSpec::ConstantBox { p, side } => *p * *side * *side,
            GraphonSpec::RankOneExp { amplitude, decay } => *amplitude / (*decay * *decay),
            GraphonSpec::CelebrityLimit => T::one(),
        }
    }

    pub fn l2_norm(&self) -> T {
        match self {
            GraphonSpec::Step(w) => w.l2_norm(),
            GraphonSpec::ConstantBox { p, side } => *p * *side,
            GraphonSpec::RankOneExp { amplitude, decay } => *amplitude / (lit::<T>(2.0) * *decay),
            GraphonSpec::CelebrityLimit => T::one(),
        }
    }

    pub fn eval(&self, x: T, y: T) -> T {
        if x < T::zero() || y < T::zero() {
            return T::zero();
        }
        match self {
            GraphonSpec::Step(w) => w.eval(x, y),
            GraphonSpec::ConstantBox { p, side } => {
                if x < *side && y < *side {
                    *p
                } else {
                    T::zero()
                }
            }
            GraphonSpec::RankOneExp { amplitude, decay } => *amplitude * (-*decay * (x + y)).exp(),
            GraphonSpec::CelebrityLimit => {
                if x < T::one() && y < T::one() {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }

    /// Supremum of the graphon.
    pub fn value_bound(&self) -> T {
        match self {
            GraphonSpec::Step(w) => w.value_bound(),
            GraphonSpec::ConstantBox { p, .. } => *p,
            GraphonSpec::RankOneExp { amplitude, .. } => *amplitude,
            GraphonSpec::CelebrityLimit => T::one(),
        }
    }

    /// Side of the square carrying the support, `None` when unbounded.
    pub fn support(&self) -> Option<T> {
        match self {
            GraphonSpec::Step(w) => Some(w.support()),
            GraphonSpec::ConstantBox { side, .. } => Some(*side),
            GraphonSpec::RankOneExp { .. } => None,
            GraphonSpec::CelebrityLimit => Some(T::one()),
        }
    }

    pub fn stretch_by(&self, r: T) -> Result<Self> {
        if !(r > T::zero()) {
            return Err(GraphonError::InvalidParameter(format!(
                "stretch factor must be positive, got {r}"
            )));
        }
        Ok(match self {
            GraphonSpec::Step(w) => GraphonSpec::Step(w.stretch_by(r)?),
            GraphonSpec::ConstantBox { p, side } => GraphonSpec::ConstantBox {
                p: *p,
                side: *side / r,
            },
            GraphonSpec::RankOneExp { amplitude, decay } => GraphonSpec::RankOneExp {
                amplitude: *amplitude,
                decay: *decay * r,
            },
            GraphonSpec::CelebrityLimit if r == T::one() => GraphonSpec::CelebrityLimit,
            GraphonSpec::CelebrityLimit => GraphonSpec::ConstantBox {
                p: T::one(),
                side: T::one() / r,
            },
        })
    }

    /// Stretch by `sqrt(l1_norm)`; the result has unit 1-norm.
    pub fn stretch(&self) -> Result<(Self, StretchTag<T>)> {
        let l1 = self.l1_norm();
        if !(l1 > T::zero()) {
            return Err(GraphonError::ZeroGraphon);
        }
        let r = l1.sqrt();
        Ok((self.stretch_by(r)?, StretchTag { factor: r }))
    }

    /// Exact step representation, available for every variant except
    /// `RankOneExp`.
    pub fn to_step_exact(&self) -> Option<StepGraphon<T>> {
        match self {
            GraphonSpec::Step(w) => Some(w.clone()),
            GraphonSpec::ConstantBox { p, side } => {
                Some(StepGraphon::new(1, *side, vec![*p], *p).expect("validated box"))
            }
            GraphonSpec::RankOneExp { .. } => None,
            GraphonSpec::CelebrityLimit => {
                Some(StepGraphon::new(1, T::one(), vec![T::one()], T::one()).expect("unit box"))
            }
        }
    }

    /// Midpoint sampling on a `k x k` grid over `[0, extent]^2`.
    pub fn discretize(&self, k: usize, extent: T) -> Result<StepGraphon<T>> {
        let h = extent / count(k);
        let half = lit::<T>(0.5);
        StepGraphon::from_fn(k, extent, |i, j| {
            self.eval((count::<T>(i) + half) * h, (count::<T>(j) + half) * h)
        })
    }

    /// Exact step form when one exists, otherwise midpoint sampling with the
    /// given `(k, extent)`.
    pub fn to_step(&self, resolution: Option<(usize, T)>) -> Result<StepGraphon<T>> {
        if let Some(w) = self.to_step_exact() {
            return Ok(w);
        }
        match resolution {
            Some((k, extent)) => self.discretize(k, extent),
            None => Err(GraphonError::InvalidParameter(
                "an analytic graphon with unbounded support needs a discretization (k, extent)".into(),
            )),
        }
    }
}

/// Cell count above which exact restriction falls back to midpoint sampling.
const EXACT_RESTRICT_LIMIT: usize = 4096;

/// `W_m'(x, y) = W(t_m x, t_m y) 1[0,1]^2`: the restriction of `w` to
/// `[0, t_m]^2`, rescaled onto the unit square.
///
/// Step-representable inputs whose cell width divides `t_m` are extracted
/// exactly (zero padded past their support). Everything else is sampled at
/// cell midpoints on a `k x k` grid.
pub fn restrict<T: Real>(w: &GraphonSpec<T>, t_m: T, k: usize) -> Result<StepGraphon<T>> {
    if !(t_m > T::zero()) {
        return Err(GraphonError::InvalidParameter(format!("t_m must be positive, got {t_m}")));
    }
    if k == 0 {
        return Err(GraphonError::InvalidParameter("resolution must be positive".into()));
    }
    if let Some(step) = w.to_step_exact() {
        if let Some(exact) = restrict_step_exact(&step, t_m, k.max(EXACT_RESTRICT_LIMIT)) {
            return Ok(exact);
        }
    }
    let h = t_m / count(k);
    let half = lit::<T>(0.5);
    StepGraphon::from_fn(k, T::one(), |i, j| {
        w.eval((count::<T>(i) + half) * h, (count::<T>(j) + half) * h)
    })
}

fn restrict_step_exact<T: Real>(w: &StepGraphon<T>, t_m: T, limit: usize) -> Option<StepGraphon<T>> {
    let q = t_m / w.cell_width();
    let cells = q.round();
    if cells < T::one() || (q - cells).abs() > lit::<T>(1e-9) * q {
        return None;
    }
    let cells = cells.to_usize()?;
    if cells > limit {
        return None;
    }
    let kw = w.k();
    StepGraphon::new(
        cells,
        T::one(),
        (0..cells * cells)
            .map(|idx| {
                let (i, j) = (idx / cells, idx % cells);
                if i < kw && j < kw {
                    w.value(i, j)
                } else {
                    T::zero()
                }
            })
            .collect(),
        w.value_bound(),
    )
    .ok()
}

/// Canonical graphon of `g` on `[0, 1]^2`: value 1 on cell `(i, j)` iff
/// `(i, j)` is an edge.
pub fn canonical_graphon<T: Scalar>(g: &Graph) -> Result<StepGraphon<T>> {
    let n = g.n();
    if n == 0 {
        return Err(GraphonError::EmptyGraph);
    }
    let mut values = vec![T::zero(); n * n];
    for &(i, j) in g.edges() {
        values[i * n + j] = T::one();
        values[j * n + i] = T::one();
    }
    StepGraphon::new(n, T::one(), values, T::one())
}

/// The canonical graphon with its all-zero tail of trailing isolated
/// vertices cut off. Equal to [`canonical_graphon`] as a function on the
/// quarter plane, but only `(last non-isolated + 1)^2` cells are stored.
pub fn compact_canonical_graphon<T: Scalar>(g: &Graph) -> Result<StepGraphon<T>> {
    let n = g.n();
    if n == 0 {
        return Err(GraphonError::EmptyGraph);
    }
    let keep = (0..n).rev().find(|&v| g.degree(v) > 0).map_or(1, |v| v + 1);
    let mut values = vec![T::zero(); keep * keep];
    for &(i, j) in g.edges() {
        values[i * keep + j] = T::one();
        values[j * keep + i] = T::one();
    }
    let support = count::<T>(keep) / count::<T>(n);
    StepGraphon::new(keep, support, values, T::one())
}

/// Graphon of the degree-normalized adjacency: `1 / (d_i d_j)` on edges.
pub fn normalized_graphon<T: Scalar>(g: &Graph) -> Result<StepGraphon<T>> {
    let n = g.n();
    if n == 0 {
        return Err(GraphonError::EmptyGraph);
    }
    if let Some(v) = g.isolated_vertices().next() {
        return Err(GraphonError::IsolatedVertex(v));
    }
    let degrees: Vec<T> = g.degrees().into_iter().map(count).collect();
    let mut values = vec![T::zero(); n * n];
    for &(i, j) in g.edges() {
        let v = T::one() / (degrees[i] * degrees[j]);
        values[i * n + j] = v;
        values[j * n + i] = v;
    }
    StepGraphon::new(n, T::one(), values, T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn tri() -> Graph {
        Graph::complete(3)
    }

    #[test]
    fn canonical_norms() {
        let w = canonical_graphon::<f64>(&tri()).unwrap();
        assert_eq!(w.l1_norm(), 2.0 / 3.0);
        let single = canonical_graphon::<f64>(&Graph::empty(1)).unwrap();
        assert_eq!(single.l1_norm(), 0.0);
        // Star with three leaves: 2|E| = 6 unit cells of area 1/16.
        let star = canonical_graphon::<Rational64>(&Graph::star(3)).unwrap();
        assert_eq!(star.l1_norm(), Rational64::new(6, 16));
        assert_eq!(canonical_graphon::<f64>(&Graph::empty(0)), Err(GraphonError::EmptyGraph));
    }

    #[test]
    fn normalized_examples() {
        let k3 = normalized_graphon::<f64>(&tri()).unwrap();
        assert_eq!(k3.value(0, 1), 0.25);
        let edge = normalized_graphon::<f64>(&Graph::complete(2)).unwrap();
        assert_eq!(edge.value(0, 1), 1.0);
        let path = normalized_graphon::<f64>(&Graph::path(3)).unwrap();
        assert_eq!((path.value(0, 1), path.value(1, 2), path.value(0, 2)), (0.5, 0.5, 0.0));
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(normalized_graphon::<f64>(&g), Err(GraphonError::IsolatedVertex(2)));
    }

    #[test]
    fn stretch_examples() {
        let unit = GraphonSpec::<f64>::constant_box(1.0, 1.0).unwrap();
        let (s, tag) = unit.stretch().unwrap();
        assert_eq!(s, unit);
        assert_eq!(tag.factor, 1.0);

        let w = canonical_graphon::<f64>(&tri()).unwrap();
        let (s, tag) = w.stretch().unwrap();
        assert!((tag.factor - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.support() - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((s.l1_norm() - 1.0).abs() < 1e-12);

        let exp = GraphonSpec::<f64>::rank_one_exp(1.0, 1.0).unwrap();
        assert_eq!(exp.stretch().unwrap().0, exp);

        assert_eq!(
            GraphonSpec::Step(StepGraphon::<f64>::zero(2, 1.0).unwrap()).stretch(),
            Err(GraphonError::ZeroGraphon)
        );
    }

    #[test]
    fn stretch_round_trip_is_exact_over_rationals() {
        let w = canonical_graphon::<Rational64>(&Graph::path(4)).unwrap();
        let r = Rational64::new(7, 3);
        let back = w.stretch_by(r).unwrap().stretch_by(r.recip()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn restrict_examples() {
        let p = 0.3_f64;
        let boxed = GraphonSpec::constant_box(p, 1.0).unwrap();
        let r = restrict(&boxed, 2.0, 8).unwrap();
        assert!((r.l1_norm() - p / 4.0).abs() < 1e-15);
        assert_eq!(r.eval(0.25, 0.25), p);
        assert_eq!(r.eval(0.75, 0.25), 0.0);
        let same = restrict(&boxed, 1.0, 8).unwrap();
        assert_eq!(same.eval(0.9, 0.1), p);
        assert!((same.l1_norm() - p).abs() < 1e-15);

        let exp = GraphonSpec::rank_one_exp(1.0, 1.0).unwrap();
        let r = restrict(&exp, 8.0, 512).unwrap();
        let exact = (1.0 - (-8.0f64).exp()).powi(2);
        // Restricted to [0, 8]^2 and squeezed onto [0, 1]^2: mass / 64.
        assert!((r.l1_norm() * 64.0 - exact).abs() < 1e-3);
    }

    #[test]
    fn compact_matches_full() {
        let g = Graph::celebrity(60, 0.5).unwrap();
        let full = canonical_graphon::<f64>(&g).unwrap();
        let compact = compact_canonical_graphon::<f64>(&g).unwrap();
        assert!(compact.k() < full.k());
        assert_eq!(compact.l1_norm(), full.l1_norm());
        for &(x, y) in &[(0.01, 0.02), (0.2, 0.1), (0.5, 0.5), (0.1, 0.9)] {
            assert_eq!(compact.eval(x, y), full.eval(x, y));
        }
        assert_eq!(full.trimmed(), compact);
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(
            StepGraphon::new(2, 1.0, vec![0.0, 1.0, 0.5, 0.0], 1.0),
            Err(GraphonError::Asymmetric(0, 1))
        );
        assert!(StepGraphon::new(1, 1.0, vec![-0.1], 1.0).is_err());
        assert!(StepGraphon::new(1, 1.0, vec![2.0], 1.0).is_err());
        assert!(StepGraphon::new(1, 0.0, vec![0.5], 1.0).is_err());
        assert!(SignedStepGraphon::new(1, 1.0, vec![-0.5], 1.0).is_ok());
    }
}
