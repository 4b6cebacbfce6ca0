//! Seeded sampling of states, isometries and channels.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{Channel, Isometry};
use crate::info::DensityMatrix;
use crate::numkernel::{c, CMatrix};

/// Counter-based generator keyed by a 64-bit seed.
#[derive(Clone, Debug)]
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent stream `k` derived from `seed`.
    pub fn stream(seed: u64, k: u64) -> Self {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(k);
        Self(r)
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| c(self.normal(), self.normal()))
    }
}

/// Hilbert–Schmidt random state of rank `min(d, k)` (`k = d` gives the HS measure).
pub fn random_state_rank(rng: &mut Rng, d: usize, k: usize) -> DensityMatrix {
    let g = rng.ginibre(d, k.max(1));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(m.scale_real(1.0 / tr))
}

pub fn random_state(rng: &mut Rng, d: usize) -> DensityMatrix {
    random_state_rank(rng, d, d)
}

pub fn random_pure(rng: &mut Rng, d: usize) -> CMatrix {
    let v = rng.ginibre(d, 1);
    let n = v.frobenius();
    v.scale_real(1.0 / n)
}

/// Haar-like isometry `d_a → d_b ⊗ d_e` from a QR-orthonormalized Ginibre matrix.
pub fn random_isometry(rng: &mut Rng, d_a: usize, d_b: usize, d_e: usize) -> Isometry {
    let rows = d_b * d_e;
    assert!(rows >= d_a, "isometry needs d_b*d_e >= d_a");
    let g = crate::numkernel::dense::to_nalgebra(&rng.ginibre(rows, d_a));
    let q = g.qr().q();
    let m = crate::numkernel::dense::from_nalgebra(&q);
    Isometry::new(m, d_b, d_e).expect("QR output is an isometry")
}

/// Random channel with `k` Kraus operators.
pub fn random_channel(rng: &mut Rng, d_in: usize, d_out: usize, k: usize) -> Channel {
    Channel::from_isometry(random_isometry(rng, d_in, d_out, k.max(d_in.div_ceil(d_out))))
}

/// Random pure-state-dominated entangled state on `d_v ⊗ d_a`, mixed with a little noise.
pub fn random_entangled_state(rng: &mut Rng, d_v: usize, d_a: usize) -> DensityMatrix {
    let v = random_pure(rng, d_v * d_a);
    let noise = random_state(rng, d_v * d_a);
    let w = 0.1 * rng.uniform();
    let m = &CMatrix::outer(&v, &v).scale_real(1.0 - w) + &noise.matrix().scale_real(w);
    DensityMatrix::from_matrix_unchecked(m)
}
