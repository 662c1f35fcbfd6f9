//! Thick-restart Lanczos with full reorthogonalization for the extreme
//! eigenpairs of a large symmetric operator.

use rand::Rng;

use crate::error::{GraphonError, Result};
use crate::linalg::{sym_eigen, DenseSym, SymmetricOperator};
use crate::rng::stream_rng;
use crate::scalar::{dot, lit, norm2 as norm, Real};

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Converged when `|beta s_last| <= tol * ||A||_est` for every wanted pair.
    pub tol: f64,
    /// Krylov basis size before a restart.
    pub basis: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            basis: 48,
            max_restarts: 500,
            seed: 0x6c61_6e63,
        }
    }
}

/// Converged extreme Ritz pairs: `top` descending, `bottom` ascending.
#[derive(Clone, Debug)]
pub struct RitzPairs<T> {
    pub top: Vec<(T, Vec<T>)>,
    pub bottom: Vec<(T, Vec<T>)>,
    /// `max |theta|` over every Ritz value seen.
    pub norm_estimate: T,
}

/// Two passes of classical Gram-Schmidt against `locked` then `basis`.
/// Returns the accumulated coefficients against `basis`.
fn orthogonalize<T: Real>(w: &mut [T], locked: &[Vec<T>], basis: &[Vec<T>]) -> Vec<T> {
    let mut coef = vec![T::zero(); basis.len()];
    for _ in 0..2 {
        for q in locked {
            let c = dot(q, w);
            for (wi, &qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
        let cs: Vec<T> = basis.iter().map(|q| dot(q, w)).collect();
        for (q, &c) in basis.iter().zip(&cs) {
            for (wi, &qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
        for (a, c) in coef.iter_mut().zip(cs) {
            *a += c;
        }
    }
    coef
}

struct Run<'a, T> {
    locked: &'a [Vec<T>],
    n: usize,
    seed: u64,
    draws: u64,
}

impl<T: Real> Run<'_, T> {
    /// A random unit vector orthogonal to `locked` and `basis`, or `None` if
    /// the complement is numerically empty.
    fn fresh(&mut self, basis: &[Vec<T>]) -> Option<Vec<T>> {
        for _ in 0..4 {
            let mut rng = stream_rng(self.seed, self.draws);
            self.draws += 1;
            let mut v: Vec<T> = (0..self.n).map(|_| lit(rng.random::<f64>() - 0.5)).collect();
            let before = norm(&v);
            orthogonalize(&mut v, self.locked, basis);
            let after = norm(&v);
            if after > before * lit(1e-8) {
                for x in v.iter_mut() {
                    *x /= after;
                }
                return Some(v);
            }
        }
        None
    }
}

/// Largest `k_top` and smallest `k_bottom` eigenpairs of `op` restricted to
/// the orthogonal complement of `locked` (orthonormal).
pub fn lanczos_extremes<T: Real, A: SymmetricOperator<T> + ?Sized>(
    op: &A,
    k_top: usize,
    k_bottom: usize,
    locked: &[Vec<T>],
    opts: &LanczosOptions,
) -> Result<RitzPairs<T>> {
    let n = op.dim();
    let room = n.saturating_sub(locked.len());
    let wanted = k_top + k_bottom;
    if wanted > room {
        return Err(GraphonError::InvalidParameter(format!(
            "requested {wanted} eigenpairs from a space of dimension {room}"
        )));
    }
    if wanted == 0 {
        return Ok(RitzPairs {
            top: vec![],
            bottom: vec![],
            norm_estimate: T::zero(),
        });
    }
    let m = opts.basis.max(2 * wanted + 8).min(room);
    let tol = lit::<T>(opts.tol);
    let mut run = Run {
        locked,
        n,
        seed: opts.seed,
        draws: 0,
    };
    let mut basis: Vec<Vec<T>> = vec![run.fresh(&[]).ok_or_else(|| {
        GraphonError::InvalidParameter("operator complement is empty".into())
    })?];
    // Projected matrix, row-major m x m.
    let mut h = vec![T::zero(); m * m];
    let mut kept = 0usize;
    let mut anorm = T::zero();
    let mut w = vec![T::zero(); n];
    let mut last_res: Vec<f64> = Vec::new();
    for restart in 0..=opts.max_restarts {
        // Expand to m vectors.
        let mut j = basis.len() - 1;
        let mut beta;
        let mut next: Option<Vec<T>>;
        loop {
            op.apply(&basis[j], &mut w);
            let coef = orthogonalize(&mut w, locked, &basis);
            for (i, &c) in coef.iter().enumerate() {
                if i >= kept || j == kept {
                    h[i * m + j] = c;
                    h[j * m + i] = c;
                }
            }
            beta = norm(&w);
            let scale = anorm.max(h[j * m + j].abs()).max(T::min_positive_value());
            if beta <= scale * T::epsilon() * lit(16.0) {
                // Invariant subspace: continue with a fresh direction.
                beta = T::zero();
                next = run.fresh(&basis);
            } else {
                next = Some(w.iter().map(|&x| x / beta).collect());
            }
            if j + 1 == m {
                break;
            }
            match next.take() {
                Some(v) => {
                    h[(j + 1) * m + j] = beta;
                    h[j * m + j + 1] = beta;
                    basis.push(v);
                    j += 1;
                }
                None => break,
            }
        }
        let dim = basis.len();
        let proj = DenseSym::from_fn(dim, |a, b| h[a * m + b]);
        let eig = sym_eigen(&proj, true)?;
        for th in &eig.values {
            anorm = anorm.max(th.abs());
        }
        let s_last = |i: usize| eig.vector(i).unwrap()[dim - 1];
        let res = |i: usize| (beta * s_last(i)).abs();
        let top_idx: Vec<usize> = (0..k_top).map(|i| dim - 1 - i).collect();
        let bot_idx: Vec<usize> = (0..k_bottom).collect();
        let thresh = tol * anorm.max(T::min_positive_value());
        // No fresh direction: the basis spans the whole complement.
        let exhausted = next.is_none();
        last_res = top_idx
            .iter()
            .chain(&bot_idx)
            .map(|&i| res(i).to_f64().unwrap_or(f64::NAN))
            .collect();
        let converged = exhausted || top_idx.iter().chain(&bot_idx).all(|&i| res(i) <= thresh);
        let ritz = |i: usize| -> Vec<T> {
            let s = eig.vector(i).unwrap();
            let mut x = vec![T::zero(); n];
            for (q, &c) in basis.iter().zip(s) {
                for (xi, &qi) in x.iter_mut().zip(q) {
                    *xi += c * qi;
                }
            }
            x
        };
        if converged {
            return Ok(RitzPairs {
                top: top_idx.iter().map(|&i| (eig.values[i], ritz(i))).collect(),
                bottom: bot_idx.iter().map(|&i| (eig.values[i], ritz(i))).collect(),
                norm_estimate: anorm,
            });
        }
        if restart == opts.max_restarts {
            break;
        }
        // Thick restart: keep extra Ritz vectors at each wanted end.
        let free = m - wanted;
        let extra = (free / 4).max(1);
        let keep_top = if k_top > 0 { (k_top + extra).min(dim) } else { 0 };
        let keep_bot = if k_bottom > 0 { (k_bottom + extra).min(dim - keep_top) } else { 0 };
        let mut keep: Vec<usize> = (0..keep_bot).collect();
        keep.extend((dim - keep_top..dim).filter(|&i| i >= keep_bot));
        let mut new_basis: Vec<Vec<T>> = keep.iter().map(|&i| ritz(i)).collect();
        h.iter_mut().for_each(|x| *x = T::zero());
        for (a, &i) in keep.iter().enumerate() {
            h[a * m + a] = eig.values[i];
        }
        kept = new_basis.len();
        let tail = match next {
            Some(v) => {
                for (a, &i) in keep.iter().enumerate() {
                    let c = beta * s_last(i);
                    h[a * m + kept] = c;
                    h[kept * m + a] = c;
                }
                Some(v)
            }
            None => run.fresh(&new_basis),
        };
        match tail {
            Some(v) => new_basis.push(v),
            None => break,
        }
        basis = new_basis;
    }
    let worst = last_res.iter().cloned().fold(0.0, f64::max);
    Err(GraphonError::NoConvergence {
        iterations: opts.max_restarts,
        worst_residual: worst,
        residuals: last_res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn path_graph_extremes() {
        let n = 300;
        let g = Graph::path(n);
        let r = lanczos_extremes::<f64, _>(&g, 3, 2, &[], &LanczosOptions::default()).unwrap();
        let exact = |k: usize| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        for (i, (v, _)) in r.top.iter().enumerate() {
            assert!((v - exact(i + 1)).abs() < 1e-9, "{v} vs {}", exact(i + 1));
        }
        for (i, (v, _)) in r.bottom.iter().enumerate() {
            assert!((v - exact(n - i)).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_operator() {
        let g = Graph::empty(50);
        let r = lanczos_extremes::<f64, _>(&g, 2, 2, &[], &LanczosOptions::default()).unwrap();
        assert!(r.top.iter().chain(&r.bottom).all(|(v, _)| *v == 0.0));
    }
}
