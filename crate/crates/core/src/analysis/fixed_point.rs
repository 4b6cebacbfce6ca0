//! Fixed-point uniqueness through the Kraus-product span criterion.

use crate::channels::Channel;
use crate::info::DensityMatrix;
use crate::numkernel::func::inv_sqrtm_pinv;
use crate::numkernel::{null_space, rank, sqrtm, CMatrix};
use crate::zoo::amplitude_damping;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct FixedPointReport {
    /// True when the Kraus products span the full matrix algebra.
    pub unique: bool,
    /// Dimension of the span reached.
    pub span_dim: usize,
    /// Shortest product length that reached full span, if any.
    pub length: Option<usize>,
    /// Dimension of the eigenvalue-1 eigenspace of `T_N`.
    pub fixed_space_dim: usize,
    /// The fixed state when the eigenvalue-1 eigenspace is one dimensional.
    pub fixed_state: Option<DensityMatrix>,
}

fn span_rank(ops: &[CMatrix], d: usize) -> usize {
    if ops.is_empty() {
        return 0;
    }
    let m = CMatrix::from_fn(d * d, ops.len(), |r, k| ops[k].data()[r]);
    rank(&m, 1e-10)
}

/// Span test over Kraus products of length `≤ max_len`; `false` is inconclusive, not a disproof.
pub fn unique_fixed_point_check(n: &Channel, max_len: usize) -> Result<FixedPointReport> {
    let d = n.d_in();
    if d != n.d_out() {
        return Err(Error::NotSquare(d, n.d_out()));
    }
    if d > 6 || max_len == 0 || max_len > 4 {
        return Err(Error::Precondition(format!("requires d <= 6 and 1 <= n <= 4, got d = {d}, n = {max_len}")));
    }
    let kraus = n.kraus();
    let mut all: Vec<CMatrix> = Vec::new();
    let mut layer: Vec<CMatrix> = vec![CMatrix::identity(d)];
    let mut span_dim = 0;
    let mut length = None;
    for len in 1..=max_len {
        layer = layer.iter().flat_map(|p| kraus.iter().map(move |k| k * p)).collect();
        all.extend(layer.iter().cloned());
        span_dim = span_rank(&all, d);
        if span_dim == d * d {
            length = Some(len);
            break;
        }
        // Keep the layer small: only a basis of its span matters for later products.
        if layer.len() > d * d {
            layer = basis_of(&layer, d);
        }
    }
    let t = n.transfer();
    let shifted = t - &CMatrix::identity(d * d);
    let ker = null_space(&shifted, 1e-9);
    let fixed_state = if ker.cols() == 1 {
        let col = CMatrix::from_fn(d * d, 1, |i, _| ker[(i, 0)]);
        let m = CMatrix::unvec_col(&col, d, d)?;
        let tr = m.trace();
        (tr.norm() > 1e-12).then(|| DensityMatrix::with_tol(m.scale(tr.inv()).hermitian_part(), 1e-8).ok()).flatten()
    } else {
        None
    };
    Ok(FixedPointReport { unique: length.is_some(), span_dim, length, fixed_space_dim: ker.cols(), fixed_state })
}

fn basis_of(ops: &[CMatrix], d: usize) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = Vec::new();
    let mut r = 0;
    for op in ops {
        out.push(op.clone());
        let nr = span_rank(&out, d);
        if nr == r {
            out.pop();
        } else {
            r = nr;
        }
    }
    out
}

/// Kraus operators `A_ij = ρ^{1/2} E_i† A_{γ'}(ρ)^{-1/2} E_j` with `γ' = (1−2γ)/(1−γ)`.
pub fn recovered_ad_channel(gamma: f64, rho_b: &DensityMatrix) -> Result<Channel> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::InvalidParameter(format!("gamma {gamma} outside (0, 1/2)")));
    }
    let gp = (1.0 - 2.0 * gamma) / (1.0 - gamma);
    let d = amplitude_damping(gp)?;
    let e = d.kraus();
    let out = d.apply(rho_b.matrix());
    let left = sqrtm(rho_b.matrix())?;
    let mid = inv_sqrtm_pinv(&out)?;
    let mut ks = Vec::new();
    for ei in e {
        for ej in e {
            ks.push(&(&(&left * &ei.adjoint()) * &mid) * ej);
        }
    }
    Channel::from_kraus_tol(ks, 1e-8)
}
