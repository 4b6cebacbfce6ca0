use super::channel::Channel;
use crate::info::DensityMatrix;
use crate::numkernel::{hermitian_eig, sqrtm, CMatrix};
use crate::Result;

/// Petz map `X ↦ σ^{1/2} A*(A(σ)^{−1/2} X A(σ)^{−1/2}) σ^{1/2}`, defined on `supp A(σ)`.
#[derive(Clone, Debug)]
pub struct PetzRecovery {
    kraus: Vec<CMatrix>,
    support: CMatrix,
    complement_basis: Vec<CMatrix>,
}

pub fn petz_recovery(a: &Channel, sigma: &DensityMatrix) -> Result<PetzRecovery> {
    if sigma.dim() != a.d_in() {
        return Err(crate::Error::DimensionMismatch("reference state versus channel input".into()));
    }
    let out = a.apply(sigma.matrix());
    let e = hermitian_eig(&out)?;
    let cut = crate::numkernel::func::cutoff_for(&out);
    let inv_sqrt = e.map_eigenvalues(|l| if l >= cut { 1.0 / l.sqrt() } else { 0.0 });
    let support = e.map_eigenvalues(|l| if l >= cut { 1.0 } else { 0.0 });
    let complement_basis =
        (0..e.eigenvalues.len()).filter(|&k| e.eigenvalues[k] < cut).map(|k| e.eigenvector(k)).collect();
    let s_half = sqrtm(sigma.matrix())?;
    let kraus = a.kraus().iter().map(|ek| &(&s_half * &ek.adjoint()) * &inv_sqrt).collect();
    Ok(PetzRecovery { kraus, support, complement_basis })
}

impl PetzRecovery {
    /// Kraus operators `σ^{1/2} E_i† A(σ)^{−1/2}`.
    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Projector onto `supp A(σ)`.
    pub fn support(&self) -> &CMatrix {
        &self.support
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.kraus[0].rows();
        let mut out = CMatrix::zeros(d, d);
        for k in &self.kraus {
            out += &k.sandwich(x);
        }
        out
    }

    /// Completion to a channel on the full space; off-support inputs are sent to `|0⟩⟨0|`.
    pub fn as_channel(&self) -> Result<Channel> {
        let d = self.kraus[0].rows();
        let mut ops = self.kraus.clone();
        let zero = CMatrix::ket(d, 0);
        for v in &self.complement_basis {
            ops.push(CMatrix::outer(&zero, v));
        }
        Channel::from_kraus_tol(ops, 1e-7)
    }
}
