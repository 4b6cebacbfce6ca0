//! Entropic functionals in bits.

use crate::channels::Channel;
use crate::numkernel::{hermitian_eig, hermitian_eigenvalues, kron, reduce, CMatrix, MatrixFn, OffSupport, C64};
use crate::{Error, Result};

/// Tolerance for Hermiticity, positivity and normalization of states.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian PSD unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tol(m, STATE_TOL)
    }

    /// Validate with a custom tolerance, then symmetrize.
    pub fn with_tol(m: CMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
        if !m.is_finite() {
            return Err(Error::NotState("non-finite entries".into()));
        }
        if !m.is_hermitian(tol.max(1e-12) * (1.0 + m.max_abs())) {
            return Err(Error::NotState("not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotState(format!("trace {:.12} != 1", tr.re)));
        }
        let h = m.hermitian_part();
        let lmin = hermitian_eigenvalues(&h)?.last().copied().unwrap_or(0.0);
        if lmin < -tol {
            return Err(Error::NotState(format!("negative eigenvalue {lmin:.3e}")));
        }
        Ok(Self { m: h })
    }

    /// Wrap a matrix without validation; callers guarantee the invariants.
    pub fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m: m.hermitian_part() }
    }

    /// Normalize a nonzero PSD matrix to unit trace.
    pub fn normalized(m: &CMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::NotState("zero trace".into()));
        }
        Self::new(m.scale_real(1.0 / tr))
    }

    pub fn pure(v: &CMatrix) -> Result<Self> {
        let n: f64 = v.data().iter().map(|z| z.norm_sqr()).sum();
        if v.cols() != 1 || n.is_nan() || n <= 0.0 {
            return Err(Error::NotState("pure state needs a nonzero column vector".into()));
        }
        Ok(Self { m: CMatrix::projector(v).scale_real(1.0 / n) })
    }

    pub fn basis(d: usize, i: usize) -> Self {
        Self { m: CMatrix::unit(d, i, i) }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { m: CMatrix::identity(d).scale_real(1.0 / d as f64) }
    }

    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(CMatrix::diag_real(p))
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self { m: kron(&self.m, &other.m) }
    }

    /// Reduced state on the subsystems listed in `keep`.
    pub fn reduce(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        Ok(Self::from_matrix_unchecked(reduce(&self.m, dims, keep)?))
    }

    pub fn rank(&self) -> usize {
        let cut = crate::numkernel::func::cutoff_for(&self.m);
        hermitian_eigenvalues(&self.m).map(|e| e.iter().filter(|&&l| l >= cut).count()).unwrap_or(0)
    }
}

/// Probability-weighted list of states on a common space.
#[derive(Clone, Debug)]
pub struct Ensemble {
    items: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidParameter("empty ensemble".into()));
        }
        let d = items[0].1.dim();
        if items.iter().any(|(_, r)| r.dim() != d) {
            return Err(Error::DimensionMismatch("ensemble states differ in dimension".into()));
        }
        if items.iter().any(|(p, _)| p.is_nan() || *p < 0.0) {
            return Err(Error::InvalidParameter("negative ensemble weight".into()));
        }
        let total: f64 = items.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}")));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[(f64, DensityMatrix)] {
        &self.items
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.dim()
    }

    pub fn average(&self) -> DensityMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (p, r) in &self.items {
            m += &r.matrix().scale_real(*p);
        }
        DensityMatrix::from_matrix_unchecked(m)
    }

    /// `Σ p_x |x⟩⟨x| ⊗ ρ_x`.
    pub fn cq_state(&self) -> DensityMatrix {
        cq_from(self.items.iter().map(|(p, r)| (*p, r.matrix())))
    }
}

fn cq_from<'a>(items: impl ExactSizeIterator<Item = (f64, &'a CMatrix)>) -> DensityMatrix {
    let n = items.len();
    let mut out: Option<CMatrix> = None;
    for (x, (p, r)) in items.enumerate() {
        let term = kron(&CMatrix::unit(n, x, x), &r.scale_real(p));
        match out.as_mut() {
            Some(o) => *o += &term,
            None => out = Some(term),
        }
    }
    DensityMatrix::from_matrix_unchecked(out.expect("non-empty ensemble"))
}

/// Spectral entropy of a Hermitian PSD matrix; negative rounding noise is clipped.
pub fn entropy_of(m: &CMatrix) -> f64 {
    let vals = hermitian_eigenvalues(m).expect("square operator");
    spectrum_entropy(&vals)
}

pub fn spectrum_entropy(vals: &[f64]) -> f64 {
    let cut = crate::numkernel::ZERO_CUTOFF;
    -vals.iter().filter(|&&l| l > cut).map(|&l| l * l.log2()).sum::<f64>()
}

pub fn entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(rho.matrix()).max(0.0)
}

pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Entropy of the reduced state on `keep`.
pub fn subsystem_entropy(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<f64> {
    Ok(entropy_of(&reduce(m, dims, keep)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RelEntropy {
    Finite(f64),
    Infinite,
}

impl RelEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelEntropy::Finite(x) => Some(x),
            RelEntropy::Infinite => None,
        }
    }
}

/// Mass of `rho` outside the support of `sigma` that triggers an infinite value.
pub const SUPPORT_MASS_TOL: f64 = 1e-9;

/// `D(ρ‖σ) = Tr ρ(log ρ − log σ)`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &CMatrix) -> Result<RelEntropy> {
    if sigma.shape() != rho.matrix().shape() {
        return Err(Error::DimensionMismatch("relative entropy arguments".into()));
    }
    let es = hermitian_eig(sigma)?;
    let cut = crate::numkernel::func::cutoff_for(sigma);
    let proj = es.map_eigenvalues(|l| if l >= cut { 1.0 } else { 0.0 });
    let on_support = (&proj * rho.matrix()).trace().re;
    if 1.0 - on_support > SUPPORT_MASS_TOL {
        return Ok(RelEntropy::Infinite);
    }
    let log_sigma = crate::numkernel::func::matrix_fn_eig(&es, cut, MatrixFn::Log2, OffSupport::PseudoInverse)?;
    let cross = (rho.matrix() * &log_sigma).trace().re;
    Ok(RelEntropy::Finite(-entropy(rho) - cross))
}

/// `I(V;B)` for a state on `V ⊗ B`.
pub fn mutual_information(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    mi_of(rho.matrix(), dims)
}

pub fn mi_of(m: &CMatrix, (dv, db): (usize, usize)) -> Result<f64> {
    let d = [dv, db];
    let sv = subsystem_entropy(m, &d, &[0])?;
    let sb = subsystem_entropy(m, &d, &[1])?;
    let svb = entropy_of(m);
    Ok(sv + sb - svb)
}

/// `I(V;B|W) = I(V;BW) − I(V;W)` for a state on `V ⊗ W ⊗ B`.
pub fn conditional_mutual_information(rho: &DensityMatrix, dims: (usize, usize, usize)) -> Result<f64> {
    let (dv, dw, db) = dims;
    let m = rho.matrix();
    let i_v_bw = mi_of(m, (dv, dw * db))?;
    let vw = reduce(m, &[dv, dw, db], &[0, 1])?;
    let i_v_w = mi_of(&vw, (dv, dw))?;
    Ok(i_v_bw - i_v_w)
}

/// `S(N(ρ)) − S(N^c(ρ))`.
pub fn coherent_information(rho: &DensityMatrix, n: &Channel) -> Result<f64> {
    coherent_information_of(rho.matrix(), n)
}

pub fn coherent_information_of(rho: &CMatrix, n: &Channel) -> Result<f64> {
    if rho.rows() != n.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} into channel with input {}",
            rho.rows(),
            n.d_in()
        )));
    }
    // Joint output V ρ V† has B and E marginals.
    let joint = n.isometry().matrix().sandwich(rho);
    let dims = [n.d_out(), n.d_env()];
    Ok(subsystem_entropy(&joint, &dims, &[0])? - subsystem_entropy(&joint, &dims, &[1])?)
}

/// `I(X;B) − I(X;E)` for the cq states induced by the ensemble.
pub fn private_information(ens: &Ensemble, n: &Channel) -> Result<f64> {
    if ens.dim() != n.d_in() {
        return Err(Error::DimensionMismatch("ensemble versus channel input".into()));
    }
    let nc = n.complement();
    let k = ens.items().len();
    let outs_b: Vec<(f64, CMatrix)> = ens.items().iter().map(|(p, r)| (*p, n.apply(r.matrix()))).collect();
    let outs_e: Vec<(f64, CMatrix)> = ens.items().iter().map(|(p, r)| (*p, nc.apply(r.matrix()))).collect();
    let xb = cq_from(outs_b.iter().map(|(p, m)| (*p, m)));
    let xe = cq_from(outs_e.iter().map(|(p, m)| (*p, m)));
    Ok(mi_of(xb.matrix(), (k, n.d_out()))? - mi_of(xe.matrix(), (k, nc.d_out()))?)
}

/// Residual of the telescoping identity for a state on `B₁..Bₙ E₁..Eₙ`.
pub fn telescoping_check(rho: &DensityMatrix, b_dims: &[usize], e_dims: &[usize]) -> Result<f64> {
    let n = b_dims.len();
    if n < 2 || e_dims.len() != n {
        return Err(Error::InvalidParameter("telescoping needs n >= 2 matched B/E factors".into()));
    }
    let dims: Vec<usize> = b_dims.iter().chain(e_dims).copied().collect();
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch("state does not factor as B1..Bn E1..En".into()));
    }
    let m = rho.matrix();
    let b = |i: usize| i;
    let e = |i: usize| n + i;
    let all_b: Vec<usize> = (0..n).map(b).collect();
    let all_e: Vec<usize> = (0..n).map(e).collect();
    let lhs = subsystem_entropy(m, &dims, &all_b)? - subsystem_entropy(m, &dims, &all_e)?;
    let mut rhs = 0.0;
    for i in 0..n {
        // V_i = E_1..E_{i-1} B_{i+1}..B_n.
        let v: Vec<usize> = (0..i).map(e).chain((i + 1..n).map(b)).collect();
        let bi: Vec<usize> = std::iter::once(b(i)).chain(v.iter().copied()).collect();
        let ei: Vec<usize> = std::iter::once(e(i)).chain(v.iter().copied()).collect();
        rhs += subsystem_entropy(m, &dims, &bi)? - subsystem_entropy(m, &dims, &ei)?;
    }
    Ok((lhs - rhs).abs())
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let diff = a - b;
    Ok(0.5 * hermitian_eigenvalues(&diff)?.iter().map(|l| l.abs()).sum::<f64>())
}

/// Trace norm of an arbitrary matrix via singular values.
pub fn trace_norm(a: &CMatrix) -> f64 {
    crate::numkernel::singular_values(a).iter().sum()
}

pub fn fidelity_pure(v: &CMatrix, rho: &CMatrix) -> C64 {
    (&(&v.adjoint() * rho) * v)[(0, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::r;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&CMatrix::column(&[r(s), r(0.0), r(0.0), r(s)])).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!(entropy(&DensityMatrix::basis(3, 1)).abs() < 1e-12);
        assert!((entropy(&DensityMatrix::maximally_mixed(4)) - 2.0).abs() < 1e-12);
        let s = entropy(&DensityMatrix::diagonal(&[0.7, 0.3]).unwrap());
        assert!((s - binary_entropy(0.3)).abs() < 1e-12);
        assert!((s - 0.881_290_899_230_292).abs() < 1e-12);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.11) - 0.499_915_958_164_528).abs() < 1e-12);
        assert!((binary_entropy(0.2) - binary_entropy(0.8)).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        assert!(relative_entropy(&rho, rho.matrix()).unwrap().finite().unwrap().abs() < 1e-12);
        let zero = DensityMatrix::basis(2, 0);
        let d = relative_entropy(&zero, DensityMatrix::maximally_mixed(2).matrix()).unwrap();
        assert!((d.finite().unwrap() - 1.0).abs() < 1e-12);
        let d = relative_entropy(&zero, DensityMatrix::basis(2, 1).matrix()).unwrap();
        assert_eq!(d, RelEntropy::Infinite);
    }

    #[test]
    fn mutual_information_examples() {
        let prod = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap().tensor(&DensityMatrix::maximally_mixed(2));
        assert!(mutual_information(&prod, (2, 2)).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell(), (2, 2)).unwrap() - 2.0).abs() < 1e-12);
        let cl = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&cl, (2, 2)).unwrap() - 1.0).abs() < 1e-12);
        assert!(mutual_information(&cl, (3, 2)).is_err());
    }

    #[test]
    fn cmi_of_product_with_bell() {
        let s = DensityMatrix::basis(2, 0).tensor(&bell());
        // V = first qubit, W = second, B = third.
        assert!(conditional_mutual_information(&s, (2, 2, 2)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn telescoping_product_state() {
        let q = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let mut s = q.clone();
        for _ in 0..3 {
            s = s.tensor(&q);
        }
        assert!(telescoping_check(&s, &[2, 2], &[2, 2]).unwrap() < 1e-12);
    }

    #[test]
    fn state_validation() {
        assert!(DensityMatrix::new(CMatrix::diag_real(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(CMatrix::diag_real(&[1.1, -0.1])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real_rows(&[&[0.5, 0.2], &[0.0, 0.5]])).is_err());
    }
}
