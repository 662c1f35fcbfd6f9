//! Least squares by Householder QR with column equilibration.

use crate::error::{GraphonError, Result};
use crate::scalar::{lit, Real};

/// Solution of `min ||A c - b||_2`.
#[derive(Clone, Debug)]
pub struct LeastSquares<T> {
    pub coefficients: Vec<T>,
    /// 2-norm condition number of the column-equilibrated design.
    pub condition: f64,
    pub residual_norm: T,
}

/// `columns[j]` is column `j` of `A`. Columns are scaled to unit norm before
/// factoring; coefficients are returned in the original scaling. Fails when
/// the equilibrated condition number exceeds `max_condition`.
pub fn least_squares<T: Real>(columns: &[Vec<T>], b: &[T], max_condition: f64) -> Result<LeastSquares<T>> {
    let p = columns.len();
    let rows = b.len();
    if p == 0 {
        return Err(GraphonError::InsufficientData("no design columns".into()));
    }
    if columns.iter().any(|c| c.len() != rows) {
        return Err(GraphonError::InvalidParameter("design columns differ in length".into()));
    }
    if rows < p {
        return Err(GraphonError::InsufficientData(format!("{rows} rows for {p} unknowns")));
    }
    let norms: Vec<T> = columns
        .iter()
        .map(|c| c.iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect();
    if norms.iter().all(|&s| s == T::zero()) {
        return Err(GraphonError::ZeroDesign);
    }
    if let Some(j) = norms.iter().position(|&s| s == T::zero() || !s.is_finite()) {
        return Err(GraphonError::RankDeficient {
            condition: f64::INFINITY,
            degree: j,
        });
    }
    // Column-major working copy.
    let mut a: Vec<Vec<T>> = columns
        .iter()
        .zip(&norms)
        .map(|(c, &s)| c.iter().map(|&x| x / s).collect())
        .collect();
    let mut rhs = b.to_vec();
    for k in 0..p {
        let alpha = {
            let x = &a[k][k..];
            let nx = x.iter().map(|&v| v * v).sum::<T>().sqrt();
            if x[0] > T::zero() {
                -nx
            } else {
                nx
            }
        };
        if alpha == T::zero() {
            continue;
        }
        // v = x - alpha e1, H = I - 2 v v^T / (v^T v)
        let mut v: Vec<T> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vv: T = v.iter().map(|&x| x * x).sum();
        if vv == T::zero() {
            continue;
        }
        let two = lit::<T>(2.0);
        for col in a.iter_mut().skip(k) {
            let s: T = col[k..].iter().zip(&v).map(|(&x, &y)| x * y).sum::<T>() * two / vv;
            for (x, &y) in col[k..].iter_mut().zip(&v) {
                *x -= s * y;
            }
        }
        let s: T = rhs[k..].iter().zip(&v).map(|(&x, &y)| x * y).sum::<T>() * two / vv;
        for (x, &y) in rhs[k..].iter_mut().zip(&v) {
            *x -= s * y;
        }
    }
    // R is the upper p x p block.
    let r: Vec<Vec<T>> = (0..p).map(|j| a[j][..p].to_vec()).collect();
    let sv = jacobi_singular_values(&r);
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(GraphonError::RankDeficient {
            condition,
            degree: p - 1,
        });
    }
    let mut c = vec![T::zero(); p];
    for i in (0..p).rev() {
        let mut s = rhs[i];
        for j in i + 1..p {
            s -= r[j][i] * c[j];
        }
        c[i] = s / r[i][i];
    }
    let residual_norm = rhs[p..].iter().map(|&x| x * x).sum::<T>().sqrt();
    for (ci, &s) in c.iter_mut().zip(&norms) {
        *ci /= s;
    }
    Ok(LeastSquares {
        coefficients: c,
        condition,
        residual_norm,
    })
}

/// Singular values of a small dense matrix given by columns, by one-sided
/// Jacobi rotations. Returned in descending order.
pub fn jacobi_singular_values<T: Real>(columns: &[Vec<T>]) -> Vec<f64> {
    let mut u: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| c.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    let p = u.len();
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for (x, y) in u[i].iter().zip(&u[j]) {
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (ui, uj) = {
                    let (lo, hi) = u.split_at_mut(j);
                    (&mut lo[i], &mut hi[0])
                };
                for (x, y) in ui.iter_mut().zip(uj.iter_mut()) {
                    let (a, b) = (*x, *y);
                    *x = c * a - s * b;
                    *y = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = u.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fit_and_residual() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ones = vec![1.0; 10];
        let b: Vec<f64> = x.iter().map(|v| 2.0 + 0.5 * v).collect();
        let ls = least_squares(&[ones, x], &b, 1e12).unwrap();
        assert!((ls.coefficients[0] - 2.0).abs() < 1e-13);
        assert!((ls.coefficients[1] - 0.5).abs() < 1e-13);
        assert!(ls.residual_norm < 1e-12);
    }

    #[test]
    fn rank_deficient_and_zero() {
        let a = vec![1.0, 2.0, 3.0];
        let err = least_squares(&[a.clone(), a.clone()], &[1.0, 1.0, 1.0], 1e12).unwrap_err();
        assert!(matches!(err, GraphonError::RankDeficient { .. }));
        let z = vec![0.0; 3];
        assert_eq!(
            least_squares(&[z], &[1.0, 1.0, 1.0], 1e12).unwrap_err(),
            GraphonError::ZeroDesign
        );
    }

    #[test]
    fn singular_values_of_diagonal() {
        let sv = jacobi_singular_values(&[vec![3.0, 0.0], vec![0.0, -4.0]]);
        assert!((sv[0] - 4.0).abs() < 1e-14 && (sv[1] - 3.0).abs() < 1e-14);
    }
}
