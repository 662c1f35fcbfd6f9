//! Cell masses of step kernels and the common refinement of two step graphons.

use crate::graphon::{SignedStepGraphon, StepGraphon};
use crate::scalar::{count, Real, Scalar};

/// Integrated masses `m_ij = int_{I_i x J_j} W` of a symmetric kernel over
/// the cells of a (possibly non-uniform) product grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MassMatrix<T> {
    dim: usize,
    masses: Vec<T>,
}

impl<T: Scalar> MassMatrix<T> {
    pub fn new(dim: usize, masses: Vec<T>) -> Self {
        assert_eq!(masses.len(), dim * dim);
        Self { dim, masses }
    }

    /// Masses `value * width^2` of a uniform signed step graphon.
    pub fn from_signed(w: &SignedStepGraphon<T>) -> Self {
        let h = w.cell_width();
        let area = h * h;
        Self::new(w.k(), w.values().iter().map(|&v| v * area).collect())
    }

    pub fn from_step(w: &StepGraphon<T>) -> Self {
        Self::from_signed(&w.to_signed())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.masses[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.masses[i * self.dim..(i + 1) * self.dim]
    }

    pub fn l1(&self) -> T {
        let mut s = T::zero();
        for m in &self.masses {
            s += m.abs();
        }
        s
    }
}

/// Difference `a^{pa} - b^{pb}` of two step graphons, with optional cell
/// relabelings, on the common refinement of their grids.
///
/// The refinement is exact for any pair of uniform grids: breakpoints of both
/// grids are merged, and beyond either support the graphon is zero.
#[derive(Clone, Debug)]
pub struct MergedDifference<T> {
    pub breaks: Vec<T>,
    pub masses: MassMatrix<T>,
}

impl<T: Real> MergedDifference<T> {
    pub fn new(
        a: &StepGraphon<T>,
        perm_a: Option<&[usize]>,
        b: &StepGraphon<T>,
        perm_b: Option<&[usize]>,
    ) -> Self {
        let value_a = |i: usize, j: usize| match perm_a {
            Some(p) => a.value(p[i], p[j]),
            None => a.value(i, j),
        };
        let value_b = |i: usize, j: usize| match perm_b {
            Some(p) => b.value(p[i], p[j]),
            None => b.value(i, j),
        };
        if a.k() == b.k() && a.support() == b.support() {
            let k = a.k();
            let h = a.cell_width();
            let area = h * h;
            let mut masses = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    masses.push((value_a(i, j) - value_b(i, j)) * area);
                }
            }
            let breaks = (0..=k).map(|i| count::<T>(i) * a.support() / count::<T>(k)).collect();
            return Self {
                breaks,
                masses: MassMatrix::new(k, masses),
            };
        }
        let (breaks, idx_a, idx_b) = merge_grids(a.support(), a.k(), b.support(), b.k());
        let dim = breaks.len() - 1;
        let widths: Vec<T> = breaks.windows(2).map(|w| w[1] - w[0]).collect();
        let mut masses = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let va = match (idx_a[i], idx_a[j]) {
                    (Some(p), Some(q)) => value_a(p, q),
                    _ => T::zero(),
                };
                let vb = match (idx_b[i], idx_b[j]) {
                    (Some(p), Some(q)) => value_b(p, q),
                    _ => T::zero(),
                };
                masses.push((va - vb) * widths[i] * widths[j]);
            }
        }
        Self {
            breaks,
            masses: MassMatrix::new(dim, masses),
        }
    }

    /// `||a^{pa} - b^{pb}||_1`.
    pub fn l1(&self) -> T {
        self.masses.l1()
    }
}

/// Merged breakpoints of two uniform grids and, for every merged interval,
/// the cell of each grid containing it (`None` past that grid's support).
/// Breakpoints closer than `1e-12` of the larger support are identified.
pub fn merge_grids<T: Real>(
    s1: T,
    k1: usize,
    s2: T,
    k2: usize,
) -> (Vec<T>, Vec<Option<usize>>, Vec<Option<usize>>) {
    let tol = T::from_f64(1e-12).unwrap() * s1.max(s2);
    let b1 = |i: usize| count::<T>(i) * s1 / count::<T>(k1);
    let b2 = |i: usize| count::<T>(i) * s2 / count::<T>(k2);
    let mut breaks = vec![T::zero()];
    let (mut i, mut j) = (1usize, 1usize);
    while i <= k1 || j <= k2 {
        let next = match (i <= k1, j <= k2) {
            (true, true) => {
                let (x, y) = (b1(i), b2(j));
                if (x - y).abs() <= tol {
                    i += 1;
                    j += 1;
                    x.max(y)
                } else if x < y {
                    i += 1;
                    x
                } else {
                    j += 1;
                    y
                }
            }
            (true, false) => {
                i += 1;
                b1(i - 1)
            }
            (false, true) => {
                j += 1;
                b2(j - 1)
            }
            (false, false) => unreachable!(),
        };
        if next - *breaks.last().unwrap() > tol {
            breaks.push(next);
        }
    }
    let locate = |s: T, k: usize, mid: T| -> Option<usize> {
        if mid >= s {
            return None;
        }
        let c = (mid / s * count::<T>(k)).floor().to_usize().unwrap_or(0);
        Some(c.min(k - 1))
    };
    let mut idx1 = Vec::with_capacity(breaks.len() - 1);
    let mut idx2 = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let mid = (w[0] + w[1]) / (T::one() + T::one());
        idx1.push(locate(s1, k1, mid));
        idx2.push(locate(s2, k2, mid));
    }
    (breaks, idx1, idx2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_of_nested_grids() {
        let (breaks, a, b) = merge_grids(1.0, 2, 2.0, 2);
        assert_eq!(breaks, vec![0.0, 0.5, 1.0, 2.0]);
        assert_eq!(a, vec![Some(0), Some(1), None]);
        assert_eq!(b, vec![Some(0), Some(0), Some(1)]);
    }

    #[test]
    fn l1_between_offset_boxes() {
        // 1 on [0, 1]^2 vs 1 on [0, 2]^2: difference has mass 3.
        let a = StepGraphon::new(1, 1.0_f64, vec![1.0], 1.0).unwrap();
        let b = StepGraphon::new(1, 2.0, vec![1.0], 1.0).unwrap();
        let d = MergedDifference::new(&a, None, &b, None);
        assert!((d.l1() - 3.0).abs() < 1e-15);
    }
}
