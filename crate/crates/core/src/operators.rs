//! The integral operator `T_{W^s} f (x) = int W^s(x, y) f(y) dy` and
//! polynomial and spectral filters built from it.

use serde::{Deserialize, Serialize};

use crate::error::{GraphonError, Result};
use crate::graphon::{GraphonSpec, StepGraphon, StretchTag};
use crate::grid::merge_grids;
use crate::linalg::{sym_eigen, DenseSym, SymmetricOperator};
use crate::scalar::{count, lit, Real};
use crate::signal::StepSignal;
use crate::spectral::{eigensolve, EigenOptions, EigenReport};

#[derive(Clone, Debug, PartialEq)]
enum Kernel<T> {
    /// Step kernel on `k` cells of width `h`; acts on cell integrals.
    Step(StepGraphon<T>),
    /// `c exp(-lambda x) exp(-lambda y)`.
    RankOne { amplitude: T, decay: T },
}

/// `T_{W^s}` for a generalized graphon `W`, built from its stretch.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphonOperator<T> {
    source: GraphonSpec<T>,
    stretched: GraphonSpec<T>,
    tag: StretchTag<T>,
    kernel: Kernel<T>,
}

/// The kernel matrix `M_ij = W_ij h` acting on the cell values of step
/// signals on the operator grid.
struct CellMatrix<'a, T> {
    w: &'a StepGraphon<T>,
}

impl<T: Real> SymmetricOperator<T> for CellMatrix<'_, T> {
    fn dim(&self) -> usize {
        self.w.k()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        let k = self.w.k();
        let h = self.w.cell_width();
        for (i, out) in y.iter_mut().enumerate() {
            let row = &self.w.values()[i * k..(i + 1) * k];
            let mut acc = T::zero();
            for (&v, &f) in row.iter().zip(x) {
                acc += v * f;
            }
            *out = acc * h;
        }
    }
}

impl<T: Real> GraphonOperator<T> {
    pub fn new(w: &GraphonSpec<T>) -> Result<Self> {
        let (stretched, tag) = w.stretch()?;
        let kernel = match &stretched {
            GraphonSpec::RankOneExp { amplitude, decay } => Kernel::RankOne {
                amplitude: *amplitude,
                decay: *decay,
            },
            other => Kernel::Step(other.to_step_exact().expect("compact variants have a step form")),
        };
        Ok(Self {
            source: w.clone(),
            stretched,
            tag,
            kernel,
        })
    }

    pub fn source(&self) -> &GraphonSpec<T> {
        &self.source
    }

    pub fn stretched(&self) -> &GraphonSpec<T> {
        &self.stretched
    }

    pub fn stretch_tag(&self) -> StretchTag<T> {
        self.tag
    }

    /// The stretched step kernel, if the operator has one.
    pub fn step_kernel(&self) -> Option<&StepGraphon<T>> {
        match &self.kernel {
            Kernel::Step(w) => Some(w),
            Kernel::RankOne { .. } => None,
        }
    }

    /// `(support, k)` of the step kernel.
    pub fn grid(&self) -> Option<(T, usize)> {
        self.step_kernel().map(|w| (w.support(), w.k()))
    }

    /// Kernel matrix `M_ij = W_ij h` as a dense symmetric matrix.
    pub fn cell_matrix(&self) -> Option<DenseSym<T>> {
        let w = self.step_kernel()?;
        let h = w.cell_width();
        Some(DenseSym::from_fn(w.k(), |i, j| w.value(i, j) * h))
    }

    /// `T f`. Step kernels integrate `f` exactly over their cells and return a
    /// step signal on the kernel grid. The rank-one kernel evaluates
    /// `c <g, f> g` in closed form and returns its cell averages on the grid
    /// of `f`.
    pub fn apply(&self, f: &StepSignal<T>) -> Result<StepSignal<T>> {
        match &self.kernel {
            Kernel::Step(w) => {
                let ints = f.cell_integrals(w.support(), w.k());
                let k = w.k();
                let values = (0..k)
                    .map(|i| {
                        let row = &w.values()[i * k..(i + 1) * k];
                        let mut acc = T::zero();
                        for (&v, &c) in row.iter().zip(&ints) {
                            acc += v * c;
                        }
                        acc
                    })
                    .collect();
                StepSignal::from_values(w.support(), values)
            }
            Kernel::RankOne { amplitude, decay } => {
                let k = f.k();
                let h = f.cell_width();
                // int over cell i of exp(-decay x).
                let mass: Vec<T> = (0..k)
                    .map(|i| {
                        let a = count::<T>(i) * h;
                        ((-*decay * a).exp() - (-*decay * (a + h)).exp()) / *decay
                    })
                    .collect();
                let mut inner = T::zero();
                for (&v, &m) in f.values().iter().zip(&mass) {
                    inner += v * m;
                }
                let values = mass.iter().map(|&m| *amplitude * inner * m / h).collect();
                StepSignal::from_values(f.support(), values)
            }
        }
    }

    /// Cell-value form of `f` on the kernel grid when that is exact, i.e.
    /// when `f` is constant on every kernel cell.
    fn on_grid(&self, f: &StepSignal<T>) -> Result<StepSignal<T>> {
        match self.grid() {
            Some((s, k)) => {
                if f.support() == s && f.k() == k {
                    Ok(f.clone())
                } else if f.refines_into(s, k) {
                    f.project_to(s, k)
                } else {
                    Err(GraphonError::IncompatibleGrids(format!(
                        "signal with {} steps on [0, {:?}] is not constant on the {k} kernel cells of [0, {:?}]",
                        f.k(),
                        f.support(),
                        s
                    )))
                }
            }
            None => Ok(f.clone()),
        }
    }
}

/// `||W^s||_2 = ||W||_2 / sqrt(||W||_1)`, the Hilbert-Schmidt norm of the
/// stretched kernel and so an upper bound on the norm of `T_{W^s}` on `L2`.
///
/// The sharper-looking `||W||_2 / ||W||_1` is a valid bound only when
/// `||W||_1 <= 1`: `W = 1[0, 2]^2` gives `1/2` while `||T_{W^s}|| = 1`.
pub fn operator_norm_bound<T: Real>(w: &GraphonSpec<T>) -> Result<T> {
    let l1 = w.l1_norm();
    if !(l1 > T::zero()) {
        return Err(GraphonError::ZeroGraphon);
    }
    Ok(w.l2_norm() / l1.sqrt())
}

/// `P(x) = c_0 + c_1 x + ... + c_d x^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFilter<T> {
    pub coefficients: Vec<T>,
}

impl<T: Real> PolynomialFilter<T> {
    pub fn new(coefficients: Vec<T>) -> Self {
        Self { coefficients }
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|&c| c != T::zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: T) -> T {
        self.coefficients.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }
}

/// `P(T) f` by Horner's rule: `d` kernel applications, never forming `T^d`.
///
/// For step kernels `f` must be constant on the kernel cells unless
/// `c_0 = 0`, in which case it is projected onto the kernel grid first (the
/// projection does not change `T^i f` for `i >= 1`).
pub fn apply_polynomial<T: Real>(p: &PolynomialFilter<T>, op: &GraphonOperator<T>, f: &StepSignal<T>) -> Result<StepSignal<T>> {
    let c = &p.coefficients;
    let f = match op.on_grid(f) {
        Ok(g) => g,
        Err(e) => {
            if c.first().is_some_and(|&c0| c0 != T::zero()) {
                return Err(e);
            }
            let (s, k) = op.grid().unwrap();
            f.project_to(s, k)?
        }
    };
    let d = p.degree();
    if c.is_empty() {
        return Ok(f.scaled(T::zero()));
    }
    let mut acc = f.scaled(c[d]);
    for i in (0..d).rev() {
        acc = op.apply(&acc)?.add_scaled(c[i], &f)?;
    }
    Ok(acc)
}

/// A scalar function on `[a, b]` stored as a Chebyshev series, shifted so
/// that `h(0) = 0` whenever `0` lies in `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralFilter<T> {
    pub a: T,
    pub b: T,
    pub coefficients: Vec<T>,
}

impl<T: Real> SpectralFilter<T> {
    /// Interpolates `h` at the `degree + 1` Chebyshev nodes of `[a, b]`.
    pub fn fit(h: impl Fn(T) -> T, a: T, b: T, degree: usize) -> Result<Self> {
        if !(b > a) {
            return Err(GraphonError::InvalidParameter(format!("empty interval [{a}, {b}]")));
        }
        let n = degree + 1;
        let pi = lit::<T>(std::f64::consts::PI);
        let half = lit::<T>(0.5);
        let fx: Vec<T> = (0..n)
            .map(|j| {
                let theta = pi * (count::<T>(j) + half) / count::<T>(n);
                h(half * (b + a) + half * (b - a) * theta.cos())
            })
            .collect();
        let mut coefficients: Vec<T> = (0..n)
            .map(|k| {
                let mut s = T::zero();
                for (j, &v) in fx.iter().enumerate() {
                    let theta = pi * (count::<T>(j) + half) / count::<T>(n);
                    s += v * (count::<T>(k) * theta).cos();
                }
                s * lit::<T>(2.0) / count::<T>(n)
            })
            .collect();
        coefficients[0] *= half;
        let mut filter = Self { a, b, coefficients };
        if a <= T::zero() && T::zero() <= b {
            let at_zero = filter.eval(T::zero());
            filter.coefficients[0] -= at_zero;
        }
        Ok(filter)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: T) -> T {
        let two = lit::<T>(2.0);
        let u = (two * x - (self.a + self.b)) / (self.b - self.a);
        let (mut b1, mut b2) = (T::zero(), T::zero());
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = c + two * u * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coefficients[0] + u * b1 - b2
    }

    /// `max |h_fit - h|` over `probes` equispaced points of `[a, b]`.
    pub fn max_error(&self, h: impl Fn(T) -> T, probes: usize) -> T {
        (0..probes)
            .map(|i| {
                let x = self.a + (self.b - self.a) * count::<T>(i) / count::<T>(probes.max(2) - 1);
                (self.eval(x) - h(x)).abs()
            })
            .fold(T::zero(), |m, e| m.max(e))
    }
}

#[derive(Clone, Debug)]
pub struct SpectralApplication<T> {
    pub signal: StepSignal<T>,
    /// `max |h|` over the magnitude range of discarded eigenvalues, times
    /// `||f||_2`. Zero when no eigenpair was discarded.
    pub truncation_bound: T,
    pub eigenvalues: Vec<T>,
}

/// `sum_t h(lambda_t) <f, phi_t> phi_t` over the `k_eigs` eigenpairs of
/// largest magnitude of the step kernel.
pub fn apply_spectral<T: Real>(
    h: &SpectralFilter<T>,
    op: &GraphonOperator<T>,
    f: &StepSignal<T>,
    k_eigs: usize,
    opts: &EigenOptions,
) -> Result<SpectralApplication<T>> {
    let w = op.step_kernel().ok_or_else(|| {
        GraphonError::InvalidParameter("spectral filtering needs a step kernel; discretize first".into())
    })?;
    let k = w.k();
    if k_eigs == 0 || k_eigs > k {
        return Err(GraphonError::InvalidParameter(format!("k_eigs must lie in 1..={k}, got {k_eigs}")));
    }
    let mut pairs: Vec<(T, Vec<T>)> = if k <= opts.dense_threshold {
        let eig = sym_eigen(&op.cell_matrix().expect("step kernel"), true)?;
        (0..k).map(|i| (eig.values[i], eig.vector(i).unwrap().to_vec())).collect()
    } else {
        let opts = EigenOptions { vectors: true, ..opts.clone() };
        let k_pos = k_eigs.min(k / 2);
        let k_neg = k_eigs.min(k - k_pos);
        let rep: EigenReport<T> = eigensolve(&CellMatrix { w }, k_pos, k_neg, &opts)?;
        rep.positive
            .into_iter()
            .zip(rep.positive_vectors.unwrap_or_default())
            .chain(rep.negative.into_iter().zip(rep.negative_vectors.unwrap_or_default()))
            .collect()
    };
    pairs.sort_by(|a, b| b.0.abs().partial_cmp(&a.0.abs()).unwrap_or(std::cmp::Ordering::Equal));
    let discarded_max = pairs.get(k_eigs).map(|p| p.0.abs());
    pairs.truncate(k_eigs);
    let cell = w.cell_width();
    let sq = cell.sqrt();
    let ints = f.cell_integrals(w.support(), k);
    let mut out = vec![T::zero(); k];
    for (lambda, u) in &pairs {
        // phi = u / sqrt(h) on each cell; <f, phi> = sum_j u_j int_j f / sqrt(h).
        let mut c = T::zero();
        for (&uj, &ij) in u.iter().zip(&ints) {
            c += uj * ij;
        }
        let coef = h.eval(*lambda) * c / sq;
        for (o, &ui) in out.iter_mut().zip(u) {
            *o += coef * ui / sq;
        }
    }
    let truncation_bound = match discarded_max {
        Some(mu) => {
            let probes = 257;
            let hmax = (0..probes)
                .map(|i| {
                    let x = -mu + lit::<T>(2.0) * mu * count::<T>(i) / count::<T>(probes - 1);
                    h.eval(x).abs()
                })
                .fold(T::zero(), |m, e| m.max(e));
            hmax * f.l2_norm()
        }
        None => T::zero(),
    };
    Ok(SpectralApplication {
        signal: StepSignal::from_values(w.support(), out)?,
        truncation_bound,
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
    })
}

/// `h(T) f` with `h` replaced by its Chebyshev series, evaluated by the
/// operator form of Clenshaw's recurrence on the kernel grid.
pub fn apply_chebyshev<T: Real>(h: &SpectralFilter<T>, op: &GraphonOperator<T>, f: &StepSignal<T>) -> Result<StepSignal<T>> {
    let f = match op.grid() {
        Some((s, k)) => f.project_to(s, k)?,
        None => f.clone(),
    };
    let two = lit::<T>(2.0);
    let span = h.b - h.a;
    let shift = (h.a + h.b) / span;
    // S g = (2 T g - (a + b) g) / (b - a)
    let s_apply = |g: &StepSignal<T>| -> Result<StepSignal<T>> {
        op.apply(g)?.scaled(two / span).add_scaled(-shift, g)
    };
    let zero = f.scaled(T::zero());
    let (mut b1, mut b2) = (zero.clone(), zero);
    for &c in h.coefficients.iter().skip(1).rev() {
        let b0 = s_apply(&b1)?.scaled(two).add_scaled(-T::one(), &b2)?.add_scaled(c, &f)?;
        b2 = b1;
        b1 = b0;
    }
    s_apply(&b1)?.add_scaled(-T::one(), &b2)?.add_scaled(h.coefficients[0], &f)
}

/// `||T_{U^s} - T_{V^s}||` on `L2`: the largest eigenvalue magnitude of the
/// difference of the stretched kernels, on the common refinement of their
/// grids.
pub fn operator_norm_gap<T: Real>(u: &StepGraphon<T>, v: &StepGraphon<T>, opts: &EigenOptions) -> Result<T> {
    let (us, _) = u.stretch()?;
    let (vs, _) = v.stretch()?;
    let (breaks, iu, iv) = merge_grids(us.support(), us.k(), vs.support(), vs.k());
    let dim = breaks.len() - 1;
    let widths: Vec<T> = breaks.windows(2).map(|w| w[1] - w[0]).collect();
    let val = |w: &StepGraphon<T>, idx: &[Option<usize>], i: usize, j: usize| match (idx[i], idx[j]) {
        (Some(p), Some(q)) => w.value(p, q),
        _ => T::zero(),
    };
    // Similarity transform sqrt(h_i) D_ij sqrt(h_j) makes the cell operator
    // symmetric with the same spectrum.
    let m = DenseSym::from_fn(dim, |i, j| {
        (val(&us, &iu, i, j) - val(&vs, &iv, i, j)) * (widths[i] * widths[j]).sqrt()
    });
    let rep: EigenReport<T> = eigensolve(&m, 1, 1, opts)?;
    Ok(rep.lambda(1).abs().max(rep.lambda(-1).abs()))
}
