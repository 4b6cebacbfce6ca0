use crate::numkernel::{CMatrix, ONE, ZERO};
use crate::{Error, Result};

/// Rejection threshold for `‖V†V − I‖`.
pub const ISOMETRY_TOL: f64 = 1e-8;
/// Rejection threshold for `‖Σ A_k†A_k − I‖`.
pub const TP_TOL: f64 = 1e-9;

/// Stinespring isometry `V: A → B ⊗ E`, rows indexed by `b·d_E + e`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    matrix: CMatrix,
    d_a: usize,
    d_b: usize,
    d_e: usize,
}

pub(crate) fn gram_deviation(ops: &[CMatrix], d: usize) -> f64 {
    let mut g = CMatrix::zeros(d, d);
    for k in ops {
        g += &(&k.adjoint() * k);
    }
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let t = if i == j { ONE } else { ZERO };
            dev = dev.max((g[(i, j)] - t).norm());
        }
    }
    dev
}

impl Isometry {
    pub fn new(matrix: CMatrix, d_b: usize, d_e: usize) -> Result<Self> {
        if matrix.rows() != d_b * d_e {
            return Err(Error::DimensionMismatch(format!(
                "isometry has {} rows, expected d_B*d_E = {}",
                matrix.rows(),
                d_b * d_e
            )));
        }
        let d_a = matrix.cols();
        let dev = gram_deviation(std::slice::from_ref(&matrix), d_a);
        if dev > ISOMETRY_TOL {
            return Err(Error::NotIsometry(dev));
        }
        Ok(Self { matrix, d_a, d_b, d_e })
    }

    /// Stack Kraus operators: `V|ψ⟩ = Σ_k A_k|ψ⟩ ⊗ |k⟩`.
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidParameter("empty Kraus set".into()))?;
        let (d_b, d_a) = first.shape();
        if kraus.iter().any(|k| k.shape() != (d_b, d_a)) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        let d_e = kraus.len();
        let m = CMatrix::from_fn(d_b * d_e, d_a, |row, a| kraus[row % d_e][(row / d_e, a)]);
        let dev = gram_deviation(kraus, d_a);
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { matrix: m, d_a, d_b, d_e })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d_a, self.d_b, self.d_e)
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn d_e(&self) -> usize {
        self.d_e
    }

    /// Kraus operators of `Tr_E`: `A_k[b,a] = V[b·d_E + k, a]`.
    pub fn kraus(&self) -> Vec<CMatrix> {
        (0..self.d_e).map(|k| CMatrix::from_fn(self.d_b, self.d_a, |b, a| self.matrix[(b * self.d_e + k, a)])).collect()
    }

    /// Exchange the roles of B and E.
    pub fn swapped(&self) -> Isometry {
        let m = crate::numkernel::ops::permute_rows(&self.matrix, &[self.d_b, self.d_e], &[1, 0])
            .expect("row dims factor by construction");
        Isometry { matrix: m, d_a: self.d_a, d_b: self.d_e, d_e: self.d_b }
    }

    /// Joint output `V ρ V†` on `B ⊗ E`.
    pub fn joint_output(&self, rho: &CMatrix) -> CMatrix {
        self.matrix.sandwich(rho)
    }
}
