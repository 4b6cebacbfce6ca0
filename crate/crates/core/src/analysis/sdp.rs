//! Feasibility of affine families of Hermitian blocks: maximize the smallest
//! eigenvalue over `{X : A vec(X) = b}` with a log-barrier Newton method.

use nalgebra::{DMatrix, DVector};

use crate::numkernel::{hermitian_eig, CMatrix, C64};

/// Real coordinates of a Hermitian `n×n` matrix: diagonal, then `Re`/`Im` of the upper triangle.
pub fn herm_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(CMatrix::unit(n, i, i));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = CMatrix::zeros(n, n);
            m[(i, j)] = C64::new(1.0, 0.0);
            m[(j, i)] = C64::new(1.0, 0.0);
            out.push(m);
            let mut m = CMatrix::zeros(n, n);
            m[(i, j)] = C64::new(0.0, 1.0);
            m[(j, i)] = C64::new(0.0, -1.0);
            out.push(m);
        }
    }
    out
}

/// Affine constraints on a tuple of Hermitian blocks, built from complex linear functionals.
pub struct AffineBlocks {
    pub sizes: Vec<usize>,
    offsets: Vec<usize>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl AffineBlocks {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &n in &sizes {
            offsets.push(acc);
            acc += n * n;
        }
        Self { sizes, offsets, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().map(|n| n * n).sum()
    }

    /// Add the constraints `L(X) = target` for a complex-matrix-valued linear map `L`
    /// given by its values on every real basis element of every block.
    pub fn add_matrix_constraint(&mut self, apply: impl Fn(usize, &CMatrix) -> Option<CMatrix>, target: &CMatrix) {
        let cols = self.dim();
        let n_out = target.data().len();
        let mut re = vec![vec![0.0; cols]; n_out];
        let mut im = vec![vec![0.0; cols]; n_out];
        for (k, &n) in self.sizes.iter().enumerate() {
            for (m, h) in herm_basis(n).iter().enumerate() {
                if let Some(y) = apply(k, h) {
                    for (q, z) in y.data().iter().enumerate() {
                        re[q][self.offsets[k] + m] = z.re;
                        im[q][self.offsets[k] + m] = z.im;
                    }
                }
            }
        }
        for (q, z) in target.data().iter().enumerate() {
            if re[q].iter().any(|&v| v != 0.0) || z.re != 0.0 {
                self.rows.push(std::mem::take(&mut re[q]));
                self.rhs.push(z.re);
            }
            if im[q].iter().any(|&v| v != 0.0) || z.im != 0.0 {
                self.rows.push(std::mem::take(&mut im[q]));
                self.rhs.push(z.im);
            }
        }
    }

    pub fn blocks_from(&self, x: &[f64]) -> Vec<CMatrix> {
        self.sizes
            .iter()
            .zip(&self.offsets)
            .map(|(&n, &off)| {
                let mut m = CMatrix::zeros(n, n);
                for (c, h) in herm_basis(n).iter().enumerate() {
                    if x[off + c] != 0.0 {
                        m += &h.scale_real(x[off + c]);
                    }
                }
                m
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum SdpOutcome {
    /// Affine system has no solution; `residual` is the least-squares misfit.
    Inconsistent { residual: f64 },
    /// Best smallest eigenvalue found with an upper bound from the barrier gap.
    Solved { t: f64, t_upper: f64, blocks: Vec<CMatrix>, affine_residual: f64 },
}

/// `Re Tr(AB)` without forming the product.
fn trace_prod(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

fn min_eig(m: &CMatrix) -> f64 {
    hermitian_eig(m).map(|e| *e.eigenvalues.last().unwrap()).unwrap_or(f64::NEG_INFINITY)
}

/// Inverse of a Hermitian positive-definite matrix, `None` if not positive definite.
fn pd_inverse_logdet(m: &CMatrix) -> Option<(CMatrix, f64)> {
    let e = hermitian_eig(m).ok()?;
    if *e.eigenvalues.last().unwrap() <= 0.0 {
        return None;
    }
    let logdet = e.eigenvalues.iter().map(|l| l.ln()).sum();
    Some((e.map_eigenvalues(|l| 1.0 / l), logdet))
}

/// Minimum-norm solution of `A x = b` and an orthonormal basis of `ker A`.
fn affine_solution(a: &faer::Mat<f64>, b: &[f64]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let (m, n) = (a.nrows(), a.ncols());
    let svd = a.svd().ok()?;
    let (u, v) = (svd.U(), svd.V());
    let sv = svd.S().column_vector();
    let smax = if sv.nrows() > 0 { sv[0] } else { 0.0 };
    let tol = 1e-11 * smax.max(1.0);
    let mut x = vec![0.0; n];
    let mut null = Vec::new();
    for k in 0..n {
        let s = if k < sv.nrows() { sv[k] } else { 0.0 };
        if s > tol {
            let coef = (0..m).map(|i| u[(i, k)] * b[i]).sum::<f64>() / s;
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += coef * v[(j, k)];
            }
        } else {
            null.push((0..n).map(|j| v[(j, k)]).collect());
        }
    }
    Some((x, null))
}

/// Maximize `min_k λ_min(X_k)` over the affine family; `stop_above` ends early once reached.
pub fn max_min_eigenvalue(sys: &AffineBlocks, stop_above: f64) -> SdpOutcome {
    let cols = sys.dim();
    let m = sys.rows.len();
    let a = faer::Mat::<f64>::from_fn(m, cols, |i, j| sys.rows[i][j]);
    let (x0v, null) = match affine_solution(&a, &sys.rhs) {
        Some(v) => v,
        None => return SdpOutcome::Inconsistent { residual: f64::INFINITY },
    };
    let affine_residual =
        (0..m).map(|i| ((0..cols).map(|j| a[(i, j)] * x0v[j]).sum::<f64>() - sys.rhs[i]).abs()).fold(0.0, f64::max);
    if affine_residual > 1e-8 {
        return SdpOutcome::Inconsistent { residual: affine_residual };
    }
    let c_blocks = sys.blocks_from(&x0v);
    let dirs: Vec<Vec<CMatrix>> = null.iter().map(|v| sys.blocks_from(v)).collect();
    let nz = dirs.len();
    let eval_blocks = |z: &[f64]| -> Vec<CMatrix> {
        let mut out = c_blocks.clone();
        for (m, zm) in z.iter().enumerate() {
            if *zm != 0.0 {
                for (o, d) in out.iter_mut().zip(&dirs[m]) {
                    *o += &d.scale_real(*zm);
                }
            }
        }
        out
    };
    let lam = |blocks: &[CMatrix]| blocks.iter().map(min_eig).fold(f64::INFINITY, f64::min);
    let total_dim: usize = sys.sizes.iter().sum();
    let mut z = vec![0.0; nz];
    let mut blocks = eval_blocks(&z);
    let mut t = lam(&blocks) - 1.0;
    let mut best = (lam(&blocks), blocks.clone());
    let mut s = 1.0;
    let mut t_upper = f64::INFINITY;
    // Barrier objective: s·t + Σ log det(X_k − tI).
    let phi = |z: &[f64], t: f64, s: f64| -> Option<f64> {
        let bl = eval_blocks(z);
        let mut acc = s * t;
        for x in &bl {
            let shifted = x - &CMatrix::identity(x.rows()).scale_real(t);
            acc += pd_inverse_logdet(&shifted)?.1;
        }
        Some(acc)
    };
    for _stage in 0..40 {
        for _newton in 0..60 {
            // Gradient and Hessian in (z, t).
            let nv = nz + 1;
            let mut g = DVector::<f64>::zeros(nv);
            let mut h = DMatrix::<f64>::zeros(nv, nv);
            g[nz] = s;
            let mut ok = true;
            for (k, x) in blocks.iter().enumerate() {
                let shifted = x - &CMatrix::identity(x.rows()).scale_real(t);
                let Some((inv, _)) = pd_inverse_logdet(&shifted) else {
                    ok = false;
                    break;
                };
                // Directions: dirs[m][k] for z_m, −I for t.
                let mut sd: Vec<CMatrix> = dirs.iter().map(|d| &inv * &d[k]).collect();
                sd.push(inv.scale_real(-1.0));
                for i in 0..nv {
                    g[i] += sd[i].trace().re;
                }
                for i in 0..nv {
                    for j in i..nv {
                        let v = -trace_prod(&sd[i], &sd[j]);
                        h[(i, j)] += v;
                        if i != j {
                            h[(j, i)] += v;
                        }
                    }
                }
            }
            if !ok {
                break;
            }
            // Newton step for maximization: solve (−H) d = g.
            let neg_h = -h.clone();
            let reg = 1e-14 * neg_h.diagonal().amax().max(1.0);
            let mut m = neg_h.clone();
            for i in 0..nv {
                m[(i, i)] += reg;
            }
            let Some(d) = m.clone().cholesky().map(|c| c.solve(&g)).or_else(|| m.lu().solve(&g)) else {
                break;
            };
            let dec = g.dot(&d);
            if dec / 2.0 <= 1e-10 {
                break;
            }
            let f0 = phi(&z, t, s).unwrap_or(f64::NEG_INFINITY);
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let zn: Vec<f64> = z.iter().enumerate().map(|(i, zi)| zi + step * d[i]).collect();
                let tn = t + step * d[nz];
                if let Some(fnew) = phi(&zn, tn, s) {
                    if fnew >= f0 + 0.25 * step * dec {
                        z = zn;
                        t = tn;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
            blocks = eval_blocks(&z);
        }
        let cur = lam(&blocks);
        if cur > best.0 {
            best = (cur, blocks.clone());
        }
        t_upper = t.max(cur) + total_dim as f64 / s;
        if t > 1e6 {
            break;
        }
        if best.0 >= stop_above || t_upper - best.0 < 1e-10 || t_upper < stop_above {
            break;
        }
        s *= 8.0;
    }
    SdpOutcome::Solved { t: best.0, t_upper, blocks: best.1, affine_residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_one_qubit_has_half() {
        // X Hermitian 2x2, Tr X = 1: max λ_min = 1/2.
        let mut sys = AffineBlocks::new(vec![2]);
        sys.add_matrix_constraint(|_, h| Some(CMatrix::from_fn(1, 1, |_, _| h.trace())), &CMatrix::identity(1));
        match max_min_eigenvalue(&sys, f64::INFINITY) {
            SdpOutcome::Solved { t, t_upper, .. } => {
                assert!((t - 0.5).abs() < 1e-7, "{t}");
                assert!(t_upper >= t);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn fixed_off_diagonal_forces_negative() {
        // Tr X = 1, X_01 = 1: λ_min = 1/2 − 1 at best.
        let mut sys = AffineBlocks::new(vec![2]);
        sys.add_matrix_constraint(
            |_, h| Some(CMatrix::from_fn(1, 2, |_, j| if j == 0 { h.trace() } else { h[(0, 1)] })),
            &CMatrix::from_real_rows(&[&[1.0, 1.0]]),
        );
        match max_min_eigenvalue(&sys, f64::INFINITY) {
            SdpOutcome::Solved { t, .. } => assert!((t + 0.5).abs() < 1e-7, "{t}"),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn inconsistent_system_detected() {
        let mut sys = AffineBlocks::new(vec![1]);
        sys.add_matrix_constraint(|_, h| Some(h.clone()), &CMatrix::identity(1));
        sys.add_matrix_constraint(|_, h| Some(h.clone()), &CMatrix::identity(1).scale_real(2.0));
        assert!(matches!(max_min_eigenvalue(&sys, 0.0), SdpOutcome::Inconsistent { .. }));
    }
}
