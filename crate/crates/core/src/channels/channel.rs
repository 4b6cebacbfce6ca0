use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::isometry::{Isometry, TP_TOL};
use super::superop::{involution, SuperOperator};
use crate::info::DensityMatrix;
use crate::numkernel::{kron, CMatrix, ZERO};
use crate::{Error, Result};

/// Named parameter families with known structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    AmplitudeDamping { gamma: f64 },
    Dephasing { alpha: f64 },
    Erasure { d: usize, lambda: f64 },
    Platypus { s: f64, t: f64 },
    FlaggedAd { p: f64, gamma: f64, eta: f64 },
    Gao { alpha: f64 },
    Mad { gamma0: f64, gamma1: f64 },
}

/// Flag structure of a flagged channel: output `F ⊗ B'`, environment `F ⊗ E'`.
#[derive(Clone, Debug)]
pub struct FlagLayout {
    pub probs: Vec<f64>,
    pub block_out: usize,
    pub block_env: usize,
    /// Branch channels padded to `block_out`/`block_env`.
    pub branches: Vec<Arc<Channel>>,
}

/// CPTP map held through a Stinespring isometry.
#[derive(Clone, Debug)]
pub struct Channel {
    iso: Isometry,
    kraus: Vec<CMatrix>,
    family: Option<Family>,
    flags: Option<FlagLayout>,
    choi: OnceLock<CMatrix>,
    transfer: OnceLock<CMatrix>,
}

impl Channel {
    pub fn from_isometry(iso: Isometry) -> Self {
        let kraus = iso.kraus().into_iter().filter(|k| k.data().iter().any(|&z| z != ZERO)).collect();
        Self { iso, kraus, family: None, flags: None, choi: OnceLock::new(), transfer: OnceLock::new() }
    }

    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        Self::from_kraus_tol(kraus, TP_TOL)
    }

    /// Accept Kraus operators whose completeness deviates by at most `tol`.
    pub fn from_kraus_tol(kraus: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidParameter("empty Kraus set".into()))?;
        let d_a = first.cols();
        let dev = super::isometry::gram_deviation(&kraus, d_a);
        if dev > tol {
            return Err(Error::NotTracePreserving(dev));
        }
        let kraus = if dev > TP_TOL { renormalize_kraus(&kraus)? } else { kraus };
        Ok(Self::from_isometry(Isometry::from_kraus(&kraus)?))
    }

    pub fn from_choi(j: &CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        SuperOperator::from_choi(j, d_in, d_out)?.to_channel(TP_TOL)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_isometry(Isometry::new(CMatrix::identity(d), d, 1).expect("identity is isometric"))
    }

    /// Unitary conjugation `ρ ↦ UρU†`.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        let d = u.rows();
        Ok(Self::from_isometry(Isometry::new(u, d, 1)?))
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub(crate) fn with_flags(mut self, flags: FlagLayout) -> Self {
        self.flags = Some(flags);
        self
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn flags(&self) -> Option<&FlagLayout> {
        self.flags.as_ref()
    }

    pub fn isometry(&self) -> &Isometry {
        &self.iso
    }

    /// Nonzero Kraus operators.
    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.iso.d_a()
    }

    pub fn d_out(&self) -> usize {
        self.iso.d_b()
    }

    pub fn d_env(&self) -> usize {
        self.iso.d_e()
    }

    /// Channel to the environment of the same isometry.
    pub fn complement(&self) -> Channel {
        let mut c = Channel::from_isometry(self.iso.swapped());
        if let Some(fl) = &self.flags {
            c.flags = Some(FlagLayout {
                probs: fl.probs.clone(),
                block_out: fl.block_env,
                block_env: fl.block_out,
                branches: fl.branches.iter().map(|b| Arc::new(b.complement())).collect(),
            });
        }
        c
    }

    /// `Σ A_k X A_k†` for any operator `X` on the input.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.shape(), (self.d_in(), self.d_in()), "channel input dimension");
        let mut out = CMatrix::zeros(self.d_out(), self.d_out());
        for k in &self.kraus {
            out += &k.sandwich(x);
        }
        out
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.d_in() {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} into channel with input {}",
                rho.dim(),
                self.d_in()
            )));
        }
        Ok(DensityMatrix::from_matrix_unchecked(self.apply(rho.matrix())))
    }

    /// `Σ_{ij} |i⟩⟨j| ⊗ N(|i⟩⟨j|)`.
    pub fn choi(&self) -> &CMatrix {
        self.choi.get_or_init(|| {
            let (da, db) = (self.d_in(), self.d_out());
            let mut j = CMatrix::zeros(da * db, da * db);
            for k in &self.kraus {
                // |A_k⟩⟩ with index i·d_B + b.
                let v = CMatrix::from_fn(da * db, 1, |idx, _| k[(idx % db, idx / db)]);
                j += &CMatrix::projector(&v);
            }
            j
        })
    }

    /// `Σ_k conj(A_k) ⊗ A_k`.
    pub fn transfer(&self) -> &CMatrix {
        self.transfer.get_or_init(|| {
            let (da, db) = (self.d_in(), self.d_out());
            let mut t = CMatrix::zeros(db * db, da * da);
            for k in &self.kraus {
                t += &kron(&k.conj(), k);
            }
            t
        })
    }

    pub fn superop(&self) -> SuperOperator {
        SuperOperator::from_transfer(self.transfer().clone(), self.d_in(), self.d_out()).expect("dims")
    }

    /// Transfer computed through the Choi operator, for cross-checks.
    pub fn transfer_via_choi(&self) -> CMatrix {
        involution(self.choi(), self.d_in(), self.d_out()).expect("dims")
    }
}

/// Polish a nearly complete Kraus set: `A_k ↦ A_k G^{−1/2}` with `G = Σ A_k†A_k`.
fn renormalize_kraus(kraus: &[CMatrix]) -> Result<Vec<CMatrix>> {
    let d = kraus[0].cols();
    let mut g = CMatrix::zeros(d, d);
    for k in kraus {
        g += &(&k.adjoint() * k);
    }
    let gi = crate::numkernel::func::matrix_fn(
        &g,
        crate::numkernel::MatrixFn::InvSqrt,
        crate::numkernel::OffSupport::Reject,
    )?;
    Ok(kraus.iter().map(|k| k * &gi).collect())
}

/// Pair `(N, N^c)` generated by an isometry.
pub fn channel_from_isometry(v: Isometry) -> (Channel, Channel) {
    let n = Channel::from_isometry(v);
    let nc = n.complement();
    (n, nc)
}
