//! Step signals on `[0, support]` and a closed set of analytic signal profiles.

use serde::{Deserialize, Serialize};

use crate::error::{GraphonError, Result};
use crate::scalar::{count, max, min, Real, Scalar};

/// Piecewise-constant function on `[0, support]` with `k` equal steps,
/// zero beyond the support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSignal<T> {
    support: T,
    values: Vec<T>,
    bound: T,
}

impl<T: Scalar> StepSignal<T> {
    pub fn new(support: T, values: Vec<T>, bound: T) -> Result<Self> {
        if values.is_empty() {
            return Err(GraphonError::InvalidParameter("signal needs at least one step".into()));
        }
        if !(support > T::zero()) {
            return Err(GraphonError::InvalidParameter(format!(
                "support length must be positive, got {support:?}"
            )));
        }
        if let Some(i) = values.iter().position(|v| v.abs() > bound) {
            return Err(GraphonError::InvalidParameter(format!(
                "value {:?} at step {i} exceeds bound {bound:?}",
                values[i]
            )));
        }
        Ok(Self {
            support,
            values,
            bound,
        })
    }

    /// Bound set to the largest absolute value.
    pub fn from_values(support: T, values: Vec<T>) -> Result<Self> {
        let bound = values.iter().map(|v| v.abs()).fold(T::zero(), max);
        Self::new(support, values, bound)
    }

    pub fn constant(k: usize, support: T, c: T) -> Result<Self> {
        Self::from_values(support, vec![c; k])
    }

    pub fn zero(k: usize, support: T) -> Result<Self> {
        Self::constant(k, support, T::zero())
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn support(&self) -> T {
        self.support
    }

    #[inline]
    pub fn cell_width(&self) -> T {
        self.support / count(self.k())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn l1_norm(&self) -> T {
        let mut s = T::zero();
        for v in &self.values {
            s += v.abs();
        }
        self.cell_width() * s
    }

    pub fn eval(&self, x: T) -> T {
        if x < T::zero() || !(x < self.support) {
            return T::zero();
        }
        let k = self.k();
        let (mut lo, mut hi) = (0usize, k);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if count::<T>(mid) * self.support / count::<T>(k) <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.values[lo]
    }

    /// `f^r(x) = f(r x)`: support divided by `r`, values kept.
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

    pub fn same_grid(&self, other: &Self) -> bool {
        self.k() == other.k() && self.support == other.support
    }

    /// Exact integrals of the signal over each cell of the uniform grid with
    /// `k` cells on `[0, support]`.
    pub fn cell_integrals(&self, support: T, k: usize) -> Vec<T> {
        let own_k = self.k();
        let own_break = |i: usize| count::<T>(i) * self.support / count::<T>(own_k);
        let target_break = |i: usize| count::<T>(i) * support / count::<T>(k);
        let mut out = vec![T::zero(); k];
        let mut a = 0usize;
        for (b, slot) in out.iter_mut().enumerate() {
            let (lo, hi) = (target_break(b), target_break(b + 1));
            while a < own_k && own_break(a + 1) <= lo {
                a += 1;
            }
            let mut c = a;
            let mut acc = T::zero();
            while c < own_k && own_break(c) < hi {
                let overlap = min(hi, own_break(c + 1)) - max(lo, own_break(c));
                if overlap > T::zero() {
                    acc += self.values[c] * overlap;
                }
                c += 1;
            }
            *slot = acc;
        }
        out
    }

    /// L2-orthogonal projection onto the uniform grid `(support, k)`: cell
    /// averages. Exact when that grid refines this one.
    pub fn project_to(&self, support: T, k: usize) -> Result<Self> {
        let width = support / count(k);
        let values = self
            .cell_integrals(support, k)
            .into_iter()
            .map(|v| v / width)
            .collect();
        Self::from_values(support, values)
    }

    /// Whether every breakpoint of `self` is a breakpoint of `(support, k)`
    /// and the support of `self` fits inside.
    pub fn refines_into(&self, support: T, k: usize) -> bool {
        if self.support > support {
            return false;
        }
        let own_k = self.k();
        let mut b = 0usize;
        for a in 1..=own_k {
            let x = count::<T>(a) * self.support / count::<T>(own_k);
            while b <= k && count::<T>(b) * support / count::<T>(k) < x {
                b += 1;
            }
            if b > k || count::<T>(b) * support / count::<T>(k) != x {
                return false;
            }
        }
        true
    }

    /// `self + a * other` on a shared grid.
    pub fn add_scaled(&self, a: T, other: &Self) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(GraphonError::IncompatibleGrids(format!(
                "{} steps on [0, {:?}] vs {} steps on [0, {:?}]",
                self.k(),
                self.support,
                other.k(),
                other.support
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| x + a * y)
            .collect();
        Self::from_values(self.support, values)
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            support: self.support,
            values: self.values.iter().map(|&v| a * v).collect(),
            bound: a.abs() * self.bound,
        }
    }
}

/// Breakpoints of the common refinement of two uniform grids on the half line.
fn merged_breaks<T: Real>(s1: T, k1: usize, s2: T, k2: usize) -> Vec<T> {
    let mut pts: Vec<T> = (0..=k1)
        .map(|i| count::<T>(i) * s1 / count::<T>(k1))
        .chain((0..=k2).map(|i| count::<T>(i) * s2 / count::<T>(k2)))
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup();
    pts
}

impl<T: Real> StepSignal<T> {
    pub fn l2_norm(&self) -> T {
        let s: T = self.values.iter().map(|&v| v * v).sum();
        (self.cell_width() * s).sqrt()
    }

    /// `<f, g>` in L2 of the half line, integrated exactly.
    pub fn inner(&self, other: &Self) -> T {
        let breaks = merged_breaks(self.support, self.k(), other.support, other.k());
        breaks
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) / (T::one() + T::one());
                self.eval(mid) * other.eval(mid) * (w[1] - w[0])
            })
            .sum()
    }

    /// `||f - g||_1` on the half line, integrated exactly.
    pub fn l1_distance(&self, other: &Self) -> T {
        let breaks = merged_breaks(self.support, self.k(), other.support, other.k());
        breaks
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) / (T::one() + T::one());
                (self.eval(mid) - other.eval(mid)).abs() * (w[1] - w[0])
            })
            .sum()
    }

    /// `||f - g||_2` on the half line, integrated exactly.
    pub fn l2_distance(&self, other: &Self) -> T {
        let breaks = merged_breaks(self.support, self.k(), other.support, other.k());
        let s: T = breaks
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) / (T::one() + T::one());
                let d = self.eval(mid) - other.eval(mid);
                d * d * (w[1] - w[0])
            })
            .sum();
        s.sqrt()
    }

    /// `||f - p||_1` on the half line for an analytic profile `p`,
    /// in closed form.
    pub fn l1_distance_to(&self, profile: &SignalProfile<T>) -> T {
        if let SignalProfile::Step(s) = profile {
            return self.l1_distance(s);
        }
        let w = self.cell_width();
        let mut total = T::zero();
        for (i, &v) in self.values.iter().enumerate() {
            let a = count::<T>(i) * w;
            let b = count::<T>(i + 1) * w;
            total += profile.abs_deviation(v, a, b);
        }
        total + profile.tail_l1(self.support)
    }
}

/// Analytic signals on the half line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalProfile<T> {
    Constant { value: T },
    /// `intercept + slope * x`.
    Linear { intercept: T, slope: T },
    /// `amplitude * exp(-rate * x)`.
    Exponential { amplitude: T, rate: T },
    Step(StepSignal<T>),
}

impl<T: Real> SignalProfile<T> {
    pub fn eval(&self, x: T) -> T {
        match self {
            SignalProfile::Constant { value } => *value,
            SignalProfile::Linear { intercept, slope } => *intercept + *slope * x,
            SignalProfile::Exponential { amplitude, rate } => *amplitude * (-*rate * x).exp(),
            SignalProfile::Step(s) => s.eval(x),
        }
    }

    pub fn stretch_by(&self, r: T) -> Result<Self> {
        if !(r > T::zero()) {
            return Err(GraphonError::InvalidParameter(format!(
                "stretch factor must be positive, got {r}"
            )));
        }
        Ok(match self {
            SignalProfile::Constant { value } => SignalProfile::Constant { value: *value },
            SignalProfile::Linear { intercept, slope } => SignalProfile::Linear {
                intercept: *intercept,
                slope: *slope * r,
            },
            SignalProfile::Exponential { amplitude, rate } => SignalProfile::Exponential {
                amplitude: *amplitude,
                rate: *rate * r,
            },
            SignalProfile::Step(s) => SignalProfile::Step(s.stretch_by(r)?),
        })
    }

    /// Antiderivative, for the analytic variants.
    fn antiderivative(&self, x: T) -> T {
        let two = T::one() + T::one();
        match self {
            SignalProfile::Constant { value } => *value * x,
            SignalProfile::Linear { intercept, slope } => *intercept * x + *slope * x * x / two,
            SignalProfile::Exponential { amplitude, rate } => -*amplitude / *rate * (-*rate * x).exp(),
            SignalProfile::Step(_) => unreachable!("step profiles are integrated on merged grids"),
        }
    }

    /// Where the monotone profile crosses level `v`, if it does.
    fn crossing(&self, v: T) -> Option<T> {
        match self {
            SignalProfile::Constant { .. } | SignalProfile::Step(_) => None,
            SignalProfile::Linear { intercept, slope } => {
                if slope.is_zero() {
                    None
                } else {
                    Some((v - *intercept) / *slope)
                }
            }
            SignalProfile::Exponential { amplitude, rate } => {
                let ratio = v / *amplitude;
                if ratio > T::zero() && ratio.is_finite() {
                    Some(-ratio.ln() / *rate)
                } else {
                    None
                }
            }
        }
    }

    /// `int_a^b |v - p(x)| dx` for a monotone analytic profile.
    fn abs_deviation(&self, v: T, a: T, b: T) -> T {
        let piece = |lo: T, hi: T| {
            let signed = v * (hi - lo) - (self.antiderivative(hi) - self.antiderivative(lo));
            signed.abs()
        };
        match self.crossing(v) {
            Some(c) if c > a && c < b => piece(a, c) + piece(c, b),
            _ => piece(a, b),
        }
    }

    /// `int_s^inf |p(x)| dx`.
    fn tail_l1(&self, s: T) -> T {
        match self {
            SignalProfile::Constant { value } if value.is_zero() => T::zero(),
            SignalProfile::Linear { intercept, slope } if intercept.is_zero() && slope.is_zero() => {
                T::zero()
            }
            SignalProfile::Constant { .. } | SignalProfile::Linear { .. } => T::infinity(),
            SignalProfile::Exponential { amplitude, rate } => {
                amplitude.abs() / *rate * (-*rate * s).exp()
            }
            SignalProfile::Step(_) => unreachable!("step profiles are integrated on merged grids"),
        }
    }
}

/// `f^r(x) = f(r x)`.
pub fn stretch_signal<T: Scalar>(f: &StepSignal<T>, r: T) -> Result<StepSignal<T>> {
    f.stretch_by(r)
}
