//! General (non-Hermitian) dense routines: SVD-based ones use faer, LU and QR use nalgebra.

use nalgebra::DMatrix;

use super::matrix::{CMatrix, C64};
use crate::{Error, Result};

pub fn to_nalgebra(a: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

pub fn from_nalgebra(m: &DMatrix<C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn to_faer(a: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// Full SVD `(U, σ, V)` with `σ` descending; `None` if the iteration fails.
fn svd_full(a: &CMatrix) -> Option<(faer::Mat<C64>, Vec<f64>, faer::Mat<C64>)> {
    let svd = to_faer(a).svd().ok()?;
    let s = svd.S().column_vector();
    let sv = (0..s.nrows()).map(|k| s[k].re).collect();
    Some((svd.U().to_owned(), sv, svd.V().to_owned()))
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> =
        to_faer(a).singular_values().unwrap_or_else(|_| to_nalgebra(a).singular_values().iter().copied().collect());
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Ratio of extreme singular values; infinite for rank-deficient or non-square input.
pub fn condition_number(a: &CMatrix) -> f64 {
    let s = singular_values(a);
    if !a.is_square() || s.is_empty() {
        return f64::INFINITY;
    }
    let smin = *s.last().unwrap();
    if smin == 0.0 {
        f64::INFINITY
    } else {
        s[0] / smin
    }
}

pub fn rank(a: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > rel_tol * top.max(f64::MIN_POSITIVE)).count()
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    to_nalgebra(a)
        .try_inverse()
        .map(|m| from_nalgebra(&m))
        .ok_or_else(|| Error::Precondition("matrix is singular".into()))
}

/// Orthonormal basis (as columns) of the null space of `a`.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> CMatrix {
    let (m, n) = a.shape();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m == 0 {
        return CMatrix::identity(n);
    }
    let (_, s, v) = svd_full(a).expect("SVD converged");
    let cut = rel_tol * s.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let null: Vec<usize> = (0..n).filter(|&k| s.get(k).is_none_or(|&x| x <= cut)).collect();
    CMatrix::from_fn(n, null.len(), |i, j| v[(i, null[j])])
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn range_basis(a: &CMatrix, rel_tol: f64) -> CMatrix {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return CMatrix::zeros(m, 0);
    }
    let (u, s, _) = svd_full(a).expect("SVD converged");
    let cut = rel_tol * s[0].max(f64::MIN_POSITIVE);
    let keep: Vec<usize> = (0..s.len()).filter(|&k| s[k] > cut).collect();
    CMatrix::from_fn(m, keep.len(), |i, j| u[(i, keep[j])])
}

/// Least-squares solution of `a x = b` through the pseudo-inverse.
pub fn lstsq(a: &CMatrix, b: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch("lstsq rows".into()));
    }
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(CMatrix::zeros(n, b.cols()));
    }
    let (u, s, v) = svd_full(a).ok_or_else(|| Error::Precondition("SVD did not converge".into()))?;
    let cut = rel_tol * s[0].max(f64::MIN_POSITIVE);
    let mut x = CMatrix::zeros(n, b.cols());
    for (k, &sk) in s.iter().enumerate().take_while(|(_, &sk)| sk > cut) {
        for c in 0..b.cols() {
            let coef: C64 = (0..m).map(|i| u[(i, k)].conj() * b[(i, c)]).sum::<C64>() / sk;
            for j in 0..n {
                x[(j, c)] += coef * v[(j, k)];
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::matrix::r;

    #[test]
    fn inverse_roundtrip() {
        let a = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).dist(&CMatrix::identity(2)) < 1e-14);
        assert!(inverse(&CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]])).is_err());
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = CMatrix::from_real_rows(&[&[1.0, 1.0, 0.0]]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.cols(), 2);
        assert!((&a * &ns).max_abs() < 1e-14);
        assert!((&ns.adjoint() * &ns).dist(&CMatrix::identity(2)) < 1e-13);
        assert_eq!(rank(&a, 1e-12), 1);
    }

    #[test]
    fn condition_of_singular_is_infinite() {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(condition_number(&a).is_infinite());
        assert!((condition_number(&CMatrix::identity(3)) - 1.0).abs() < 1e-14);
        let _ = r(0.0);
    }

    #[test]
    fn lstsq_exact_system() {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0], &[0.0, 0.0]]);
        let b = CMatrix::from_real_rows(&[&[1.0], &[4.0], &[0.0]]);
        let x = lstsq(&a, &b, 1e-12).unwrap();
        assert!(x.dist(&CMatrix::from_real_rows(&[&[1.0], &[2.0]])) < 1e-14);
    }
}
