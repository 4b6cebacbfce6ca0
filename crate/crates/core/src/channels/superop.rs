use crate::numkernel::{hermitian_eig, kron, partial_trace, permute_systems, psd_check, CMatrix, ZERO};
use crate::{Error, Result};

use super::Channel;

/// `ϑ^Γ`: Choi operator (on `A ⊗ B`) to transfer matrix.
pub fn involution(j: &CMatrix, d_a: usize, d_b: usize) -> Result<CMatrix> {
    if j.shape() != (d_a * d_b, d_a * d_b) {
        return Err(Error::DimensionMismatch("Choi size against (d_A, d_B)".into()));
    }
    Ok(CMatrix::from_fn(d_b * d_b, d_a * d_a, |row, col| {
        let (r, v) = (row / d_b, row % d_b);
        let (i, jj) = (col / d_a, col % d_a);
        j[(jj * d_b + v, i * d_b + r)]
    }))
}

/// Inverse of [`involution`].
pub fn involution_inv(t: &CMatrix, d_a: usize, d_b: usize) -> Result<CMatrix> {
    if t.shape() != (d_b * d_b, d_a * d_a) {
        return Err(Error::DimensionMismatch("transfer size against (d_A, d_B)".into()));
    }
    Ok(CMatrix::from_fn(d_a * d_b, d_a * d_b, |row, col| {
        let (jj, v) = (row / d_b, row % d_b);
        let (i, r) = (col / d_b, col % d_b);
        t[(r * d_b + v, i * d_a + jj)]
    }))
}

/// `Tr_B[(I_A ⊗ J₂)(J₁^{T_B} ⊗ I_C)]`, the Choi operator of `N₂ ∘ N₁`.
pub fn link_product_compose(j2: &CMatrix, j1: &CMatrix, dims: (usize, usize, usize)) -> Result<CMatrix> {
    let (da, db, dc) = dims;
    if j1.shape() != (da * db, da * db) || j2.shape() != (db * dc, db * dc) {
        return Err(Error::DimensionMismatch("link product Choi sizes".into()));
    }
    let left = kron(&CMatrix::identity(da), j2);
    let right = kron(&crate::numkernel::partial_transpose(j1, 1, (da, db))?, &CMatrix::identity(dc));
    crate::numkernel::reduce(&(&left * &right), &[da, db, dc], &[0, 2])
}

/// Linear map on operators stored by its transfer matrix; not necessarily CP or TP.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    d_in: usize,
    d_out: usize,
    transfer: CMatrix,
}

impl SuperOperator {
    pub fn from_transfer(transfer: CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if transfer.shape() != (d_out * d_out, d_in * d_in) {
            return Err(Error::DimensionMismatch("transfer size".into()));
        }
        if !transfer.is_finite() {
            return Err(Error::InvalidParameter("non-finite transfer entries".into()));
        }
        Ok(Self { d_in, d_out, transfer })
    }

    pub fn from_choi(j: &CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        Self::from_transfer(involution(j, d_in, d_out)?, d_in, d_out)
    }

    /// Tabulate a linear map from its action on matrix units.
    pub fn from_fn(d_in: usize, d_out: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let mut t = CMatrix::zeros(d_out * d_out, d_in * d_in);
        for a in 0..d_in {
            for b in 0..d_in {
                let y = f(&CMatrix::unit(d_in, a, b));
                assert_eq!(y.shape(), (d_out, d_out), "map output shape");
                let col = b * d_in + a;
                let v = y.vec_col();
                for k in 0..d_out * d_out {
                    t[(k, col)] = v[(k, 0)];
                }
            }
        }
        Self { d_in, d_out, transfer: t }
    }

    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidParameter("empty Kraus set".into()))?;
        let (d_out, d_in) = first.shape();
        let mut t = CMatrix::zeros(d_out * d_out, d_in * d_in);
        for k in kraus {
            if k.shape() != (d_out, d_in) {
                return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
            }
            t += &kron(&k.conj(), k);
        }
        Ok(Self { d_in, d_out, transfer: t })
    }

    pub fn identity(d: usize) -> Self {
        Self { d_in: d, d_out: d, transfer: CMatrix::identity(d * d) }
    }

    pub fn zero(d_in: usize, d_out: usize) -> Self {
        Self { d_in, d_out, transfer: CMatrix::zeros(d_out * d_out, d_in * d_in) }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn transfer(&self) -> &CMatrix {
        &self.transfer
    }

    pub fn choi(&self) -> CMatrix {
        involution_inv(&self.transfer, self.d_in, self.d_out).expect("shape fixed at construction")
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.shape(), (self.d_in, self.d_in), "input dimension");
        let y = &self.transfer * &x.vec_col();
        CMatrix::unvec_col(&y, self.d_out, self.d_out).expect("shape fixed at construction")
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SuperOperator) -> Result<SuperOperator> {
        if first.d_out != self.d_in {
            return Err(Error::DimensionMismatch("composition inner dimension".into()));
        }
        Ok(Self { d_in: first.d_in, d_out: self.d_out, transfer: &self.transfer * &first.transfer })
    }

    pub fn add(&self, other: &SuperOperator) -> Result<SuperOperator> {
        if (self.d_in, self.d_out) != (other.d_in, other.d_out) {
            return Err(Error::DimensionMismatch("sum of maps with different dims".into()));
        }
        Ok(Self { d_in: self.d_in, d_out: self.d_out, transfer: &self.transfer + &other.transfer })
    }

    pub fn sub(&self, other: &SuperOperator) -> Result<SuperOperator> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> SuperOperator {
        Self { d_in: self.d_in, d_out: self.d_out, transfer: self.transfer.scale_real(s) }
    }

    /// `self ⊗ other` with input `A₁A₂` and output `B₁B₂`.
    pub fn tensor(&self, other: &SuperOperator) -> SuperOperator {
        let j = kron(&self.choi(), &other.choi());
        let dims = [self.d_in, self.d_out, other.d_in, other.d_out];
        let j = permute_systems(&j, &dims, &[0, 2, 1, 3]).expect("dims factor");
        SuperOperator::from_choi(&j, self.d_in * other.d_in, self.d_out * other.d_out).expect("dims match")
    }

    pub fn inverse(&self) -> Result<SuperOperator> {
        if self.d_in != self.d_out {
            return Err(Error::Precondition("only square maps are invertible".into()));
        }
        let t = crate::numkernel::inverse(&self.transfer)?;
        Ok(Self { d_in: self.d_in, d_out: self.d_out, transfer: t })
    }

    /// Largest entry of `Tr_B(J) − I`.
    pub fn tp_deviation(&self) -> f64 {
        let tb = partial_trace(&self.choi(), 1, (self.d_in, self.d_out)).expect("dims");
        tb.dist(&CMatrix::identity(self.d_in))
    }

    /// Minimal eigenvalue of the Choi operator.
    pub fn choi_min_eigenvalue(&self) -> f64 {
        psd_check(&self.choi(), 0.0).map(|(_, l)| l).unwrap_or(f64::NEG_INFINITY)
    }

    pub fn is_cptp(&self, tol: f64) -> bool {
        self.choi_min_eigenvalue() >= -tol && self.tp_deviation() <= tol
    }

    /// Maximum entrywise distance between transfer matrices (action on matrix units).
    pub fn dist(&self, other: &SuperOperator) -> f64 {
        if self.transfer.shape() != other.transfer.shape() {
            return f64::INFINITY;
        }
        self.transfer.dist(&other.transfer)
    }

    /// Kraus form of a CP map; the Choi operator must be PSD within `tol`.
    pub fn kraus(&self, tol: f64) -> Result<Vec<CMatrix>> {
        let e = hermitian_eig(&self.choi())?;
        let lmin = e.eigenvalues.last().copied().unwrap_or(0.0);
        if lmin < -tol {
            return Err(Error::NotPsd(lmin));
        }
        let top = e.eigenvalues.first().copied().unwrap_or(0.0).max(1.0);
        let mut ops = Vec::new();
        for (k, &l) in e.eigenvalues.iter().enumerate() {
            if l <= 1e-14 * top {
                continue;
            }
            let s = l.sqrt();
            // |A⟩⟩ = Σ_i |i⟩ ⊗ A|i⟩, index i·d_out + b.
            let op = CMatrix::from_fn(self.d_out, self.d_in, |b, i| e.eigenvectors[(i * self.d_out + b, k)] * s);
            ops.push(op);
        }
        if ops.is_empty() {
            ops.push(CMatrix::zeros(self.d_out, self.d_in));
        }
        Ok(ops)
    }

    /// Convert a CPTP map to a [`Channel`] with a minimal Kraus set.
    pub fn to_channel(&self, tol: f64) -> Result<Channel> {
        let dev = self.tp_deviation();
        if dev > tol {
            return Err(Error::NotTracePreserving(dev));
        }
        let ops = self.kraus(tol)?;
        Channel::from_kraus_tol(ops, tol.max(super::isometry::TP_TOL))
    }

    pub fn is_zero(&self) -> bool {
        self.transfer.data().iter().all(|&z| z == ZERO)
    }
}
