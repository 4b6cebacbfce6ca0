use nalgebra::DMatrix;

use super::matrix::{CMatrix, C64, ONE, ZERO};
use crate::{Error, Result};

/// Largest dimension handled by the cyclic Jacobi solver.
pub const JACOBI_MAX_DIM: usize = 32;

/// Eigendecomposition `A = U diag(λ) U†` with eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> CMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| u[(i, k)] * self.eigenvalues[k] * u[(j, k)].conj()).sum())
    }

    /// Rebuild `Σ f(λ_k) |u_k⟩⟨u_k|`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for k in 0..n {
            if fl[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = u[(i, k)] * fl[k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * u[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn eigenvector(&self, k: usize) -> CMatrix {
        let u = &self.eigenvectors;
        CMatrix::from_fn(u.rows(), 1, |i, _| u[(i, k)])
    }
}

/// Hermitian eigendecomposition of the Hermitian part of `a`.
pub fn hermitian_eig(a: &CMatrix) -> Result<HermEig> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let h = a.hermitian_part();
    let (vals, vecs) = if h.rows() <= JACOBI_MAX_DIM { jacobi(&h) } else { tridiagonal_qr(&h) };
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    let n = h.rows();
    let eigenvalues = order.iter().map(|&k| vals[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    Ok(HermEig { eigenvalues, eigenvectors })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eig(a).map(|e| e.eigenvalues)
}

fn off_norm_sq(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.rows();
    let mut a = h.clone();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    for _sweep in 0..100 {
        if off_norm_sq(&a).sqrt() <= eps * scale * 1e-2 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let rabs = apq.norm();
                if rabs <= eps * 1e-3 * scale {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / rabs;
                let zeta = (aqq - app) / (2.0 * rabs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                // G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on coordinates (p, q).
                let ph_c = phase.conj();
                let g_pp = C64::new(cth, 0.0);
                let g_pq = C64::new(sth, 0.0);
                let g_qp = -ph_c * sth;
                let g_qq = ph_c * cth;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[(i, i)].re).collect();
    (vals, v)
}

fn tridiagonal_qr(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.rows();
    let m = DMatrix::<C64>::from_fn(n, n, |i, j| h[(i, j)]);
    let se = nalgebra::SymmetricEigen::new(m);
    let vecs = CMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, j)]);
    (se.eigenvalues.iter().copied().collect(), vecs)
}

#[allow(dead_code)]
fn unit_check(u: &CMatrix) -> f64 {
    let p = &u.adjoint() * u;
    let mut err: f64 = 0.0;
    for i in 0..u.cols() {
        for j in 0..u.cols() {
            let target = if i == j { ONE } else { ZERO };
            err = err.max((p[(i, j)] - target).norm());
        }
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::matrix::c;

    #[test]
    fn identity_and_diagonal() {
        let e = hermitian_eig(&CMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let e = hermitian_eig(&CMatrix::diag_real(&[0.3, 0.7])).unwrap();
        assert!((e.eigenvalues[0] - 0.7).abs() < 1e-15 && (e.eigenvalues[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn pauli_x() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eig(&x).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().dist(&x) < 1e-14);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let a = CMatrix::from_fn(5, 5, |i, j| {
            let x = (i * 7 + j * 3) as f64 * 0.37;
            if i == j {
                c(x.sin(), 0.0)
            } else if i < j {
                c(x.cos(), (x * 1.3).sin())
            } else {
                let y = (j * 7 + i * 3) as f64 * 0.37;
                c(y.cos(), -(y * 1.3).sin())
            }
        });
        let e = hermitian_eig(&a).unwrap();
        assert!(e.reconstruct().dist(&a) < 1e-12);
        assert!(unit_check(&e.eigenvectors) < 1e-12);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn large_path_matches_jacobi() {
        let n = 40;
        let a = CMatrix::from_fn(n, n, |i, j| {
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            let z = c(((lo + 2 * hi) as f64).cos(), if i == j { 0.0 } else { (lo as f64 - hi as f64).sin() });
            if i <= j {
                z
            } else {
                z.conj()
            }
        });
        let e = hermitian_eig(&a).unwrap();
        assert!(e.reconstruct().dist(&a) < 1e-10);
        assert!(unit_check(&e.eigenvectors) < 1e-10);
        let (jv, _) = jacobi(&a.hermitian_part());
        let mut jv = jv;
        jv.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in jv.iter().zip(&e.eigenvalues) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn non_square_rejected() {
        assert!(hermitian_eig(&CMatrix::zeros(2, 3)).is_err());
    }
}
