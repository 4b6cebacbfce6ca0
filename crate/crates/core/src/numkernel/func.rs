use super::eig::{hermitian_eig, HermEig};
use super::matrix::CMatrix;
use crate::{Error, Result};

/// Relative eigenvalue cutoff for support decisions.
pub const ZERO_CUTOFF: f64 = 1e-12;
/// Floor below which a PSD argument is rejected.
pub const PSD_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFn {
    Log2,
    Sqrt,
    InvSqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OffSupport {
    /// Fail when `InvSqrt` meets a zero eigenvalue.
    #[default]
    Reject,
    /// Invert on the support only.
    PseudoInverse,
}

pub fn cutoff_for(a: &CMatrix) -> f64 {
    ZERO_CUTOFF * a.norm_inf().max(1.0)
}

/// Apply `f` to the spectrum of a Hermitian PSD matrix.
pub fn matrix_fn(a: &CMatrix, f: MatrixFn, off: OffSupport) -> Result<CMatrix> {
    let e = hermitian_eig(a)?;
    matrix_fn_eig(&e, cutoff_for(a), f, off)
}

pub fn matrix_fn_eig(e: &HermEig, cutoff: f64, f: MatrixFn, off: OffSupport) -> Result<CMatrix> {
    let lmin = e.eigenvalues.last().copied().unwrap_or(0.0);
    if lmin < -PSD_FLOOR.max(cutoff) {
        return Err(Error::NotPsd(lmin));
    }
    if f == MatrixFn::InvSqrt && off == OffSupport::Reject && e.eigenvalues.iter().any(|&l| l < cutoff) {
        return Err(Error::Precondition("inverse square root off the support; pass PseudoInverse".into()));
    }
    Ok(e.map_eigenvalues(|l| {
        if l < cutoff {
            return 0.0;
        }
        match f {
            MatrixFn::Log2 => l.log2(),
            MatrixFn::Sqrt => l.sqrt(),
            MatrixFn::InvSqrt => 1.0 / l.sqrt(),
        }
    }))
}

pub fn sqrtm(a: &CMatrix) -> Result<CMatrix> {
    matrix_fn(a, MatrixFn::Sqrt, OffSupport::Reject)
}

pub fn inv_sqrtm_pinv(a: &CMatrix) -> Result<CMatrix> {
    matrix_fn(a, MatrixFn::InvSqrt, OffSupport::PseudoInverse)
}

/// `(λ_min ≥ −tol, λ_min)` for the Hermitian part of `a`.
pub fn psd_check(a: &CMatrix, tol: f64) -> Result<(bool, f64)> {
    let e = hermitian_eig(a)?;
    let lmin = e.eigenvalues.last().copied().unwrap_or(0.0);
    Ok((lmin >= -tol, lmin))
}

/// Orthogonal projector onto the eigenvectors with eigenvalue at least the cutoff.
pub fn support_projector(a: &CMatrix) -> Result<CMatrix> {
    let e = hermitian_eig(a)?;
    let cut = cutoff_for(a);
    Ok(e.map_eigenvalues(|l| if l >= cut { 1.0 } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_diag() {
        let s = sqrtm(&CMatrix::diag_real(&[4.0, 9.0])).unwrap();
        assert!(s.dist(&CMatrix::diag_real(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn log_identity_is_zero() {
        let l = matrix_fn(&CMatrix::identity(3), MatrixFn::Log2, OffSupport::Reject).unwrap();
        assert!(l.max_abs() < 1e-15);
    }

    #[test]
    fn pseudo_inverse_sqrt() {
        let a = CMatrix::diag_real(&[0.25, 0.0]);
        let p = inv_sqrtm_pinv(&a).unwrap();
        assert!(p.dist(&CMatrix::diag_real(&[2.0, 0.0])) < 1e-14);
        assert!(matrix_fn(&a, MatrixFn::InvSqrt, OffSupport::Reject).is_err());
    }

    #[test]
    fn psd_examples() {
        let (ok, l) = psd_check(&CMatrix::identity(2), 1e-9).unwrap();
        assert!(ok && (l - 1.0).abs() < 1e-15);
        let (ok, l) = psd_check(&CMatrix::diag_real(&[1.0, -0.1]), 1e-9).unwrap();
        assert!(!ok && (l + 0.1).abs() < 1e-15);
    }

    #[test]
    fn negative_input_rejected() {
        assert!(sqrtm(&CMatrix::diag_real(&[1.0, -0.1])).is_err());
    }
}
