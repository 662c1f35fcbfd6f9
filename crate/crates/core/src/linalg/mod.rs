//! Dense and sparse symmetric linear algebra used by the spectral and
//! regression modules.

mod lanczos;
mod qr;
mod tridiag;

pub use lanczos::{lanczos_extremes, LanczosOptions, RitzPairs};
pub use qr::{jacobi_singular_values, least_squares, LeastSquares};
pub use tridiag::{sym_eigen, SymEigen};

use crate::graph::Graph;
use crate::scalar::Scalar;

/// A real symmetric linear map `y = A x`.
pub trait SymmetricOperator<T>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[T], y: &mut [T]);
}

impl<T: Scalar> SymmetricOperator<T> for Graph {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        self.adjacency_matvec(x, y);
    }
}

/// Dense symmetric matrix, column-major (equivalently row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSym<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseSym<T> {
    /// Builds from a full `n x n` array; only symmetry up to exact equality
    /// is accepted.
    pub fn new(n: usize, data: Vec<T>) -> Option<Self> {
        if data.len() != n * n {
            return None;
        }
        for i in 0..n {
            for j in i + 1..n {
                if data[i * n + j] != data[j * n + i] {
                    return None;
                }
            }
        }
        Some(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let mut data = vec![T::zero(); n * n];
        for &(i, j) in g.edges() {
            data[i * n + j] = T::one();
            data[j * n + i] = T::one();
        }
        Self { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}

impl<T: Scalar> SymmetricOperator<T> for DenseSym<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (i, out) in y.iter_mut().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut acc = T::zero();
            for (&a, &b) in row.iter().zip(x) {
                acc += a * b;
            }
            *out = acc;
        }
    }
}

/// Symmetric matrix in compressed sparse row form.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrSym<T> {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Scalar> CsrSym<T> {
    /// From `(i, j, v)` triplets of the upper triangle (`i <= j`); each
    /// off-diagonal entry is mirrored. Duplicates are summed.
    pub fn from_upper_triplets(n: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut entries: Vec<(usize, usize, T)> = Vec::with_capacity(2 * triplets.len());
        for &(i, j, v) in triplets {
            assert!(i < n && j < n, "triplet index out of range");
            entries.push((i, j, v));
            if i != j {
                entries.push((j, i, v));
            }
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut offsets = vec![0usize; n + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(entries.len());
        let mut vals: Vec<T> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            last = Some((i, j));
            offsets[i + 1] += 1;
            cols.push(j);
            vals.push(v);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Self {
            n,
            offsets,
            cols,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }
}

impl<T: Scalar> SymmetricOperator<T> for CsrSym<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for p in self.offsets[i]..self.offsets[i + 1] {
                acc += self.vals[p] * x[self.cols[p]];
            }
            *out = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_matches_dense() {
        let t = [(0, 0, 2.0), (0, 2, -1.0), (1, 2, 3.0), (1, 2, 1.0)];
        let csr = CsrSym::from_upper_triplets(3, &t);
        assert_eq!(csr.nnz(), 5);
        let dense = DenseSym::new(3, vec![2.0, 0.0, -1.0, 0.0, 0.0, 4.0, -1.0, 4.0, 0.0]).unwrap();
        let x = [1.0, 2.0, 3.0];
        let (mut a, mut b) = ([0.0; 3], [0.0; 3]);
        csr.apply(&x, &mut a);
        dense.apply(&x, &mut b);
        assert_eq!(a, b);
    }
}
