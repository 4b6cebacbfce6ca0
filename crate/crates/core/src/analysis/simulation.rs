//! Simulation-based additivity checks and the Smith–Yard construction.

use serde::Serialize;

use super::capacity::{q1, Strategy};
use crate::channels::{compose_all, tensor, Channel};
use crate::info::{coherent_information_of, private_information, DensityMatrix, Ensemble};
use crate::numkernel::{c, hermitian_eig, CMatrix, ZERO_CUTOFF};
use crate::zoo::erasure;
use crate::{Error, Result};

/// Tolerance for `D ∘ N̂ ∘ E = N` on matrix units.
pub const SIMULATION_TOL: f64 = 1e-9;
/// Slack for weak domination `Q⁽¹⁾(N̂) ≤ Q⁽¹⁾(N)`.
pub const DOMINATION_SLACK: f64 = 1e-6;
/// Largest ancilla dimension accepted by [`smith_yard_state`].
pub const MAX_SMITH_YARD_DC: usize = 9;

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    /// Largest matrix-unit deviation of `D ∘ N̂ ∘ E` from `N`.
    pub simulation_residual: f64,
    pub simulation_ok: bool,
    pub q1_target: f64,
    pub q1_simulator: f64,
    pub domination_ok: bool,
}

impl SimulationReport {
    pub fn passed(&self) -> bool {
        self.simulation_ok && self.domination_ok
    }
}

/// Largest deviation between two channels over all matrix units `|i⟩⟨j|`.
pub fn matrix_unit_residual(a: &Channel, b: &Channel) -> Result<f64> {
    if a.d_in() != b.d_in() || a.d_out() != b.d_out() {
        return Err(Error::DimensionMismatch(format!("{}→{} vs {}→{}", a.d_in(), a.d_out(), b.d_in(), b.d_out())));
    }
    let d = a.d_in();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let e = CMatrix::unit(d, i, j);
            worst = worst.max(a.apply(&e).dist(&b.apply(&e)));
        }
    }
    Ok(worst)
}

/// Check `D ∘ N̂ ∘ E = N` and `Q⁽¹⁾(N̂) ≤ Q⁽¹⁾(N)`.
pub fn simulation_additivity_check(
    n: &Channel,
    n_hat: &Channel,
    e: &Channel,
    d: &Channel,
    strategy: &Strategy,
) -> Result<SimulationReport> {
    let sim = compose_all(&[d, n_hat, e])?;
    let simulation_residual = matrix_unit_residual(&sim, n)?;
    let q1_target = q1(n, strategy)?.value;
    let q1_simulator = q1(n_hat, strategy)?.value;
    Ok(SimulationReport {
        simulation_residual,
        simulation_ok: simulation_residual <= SIMULATION_TOL,
        q1_target,
        q1_simulator,
        domination_ok: q1_simulator <= q1_target + DOMINATION_SLACK,
    })
}

/// Purify each ensemble member into its own `C` sector and mix; returns `(ρ_AC, d_C)` with `d_C = Σ rank ρ_x`.
pub fn smith_yard_state(ens: &Ensemble) -> Result<(DensityMatrix, usize)> {
    let d_a = ens.dim();
    let mut parts = Vec::new();
    for (p, rho) in ens.items() {
        let eig = hermitian_eig(rho.matrix())?;
        let cut = ZERO_CUTOFF * eig.eigenvalues[0].max(1.0);
        let comps: Vec<(f64, CMatrix)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &mu)| mu > cut)
            .map(|(k, &mu)| (mu, eig.eigenvector(k)))
            .collect();
        parts.push((*p, comps));
    }
    let d_c: usize = parts.iter().map(|(_, v)| v.len()).sum();
    if d_c > MAX_SMITH_YARD_DC {
        return Err(Error::Precondition(format!("ancilla dimension {d_c} exceeds {MAX_SMITH_YARD_DC}")));
    }
    let dim = d_a * d_c;
    let mut m = CMatrix::zeros(dim, dim);
    let mut sector = 0;
    for (p, comps) in &parts {
        let mut psi = CMatrix::zeros(dim, 1);
        for (k, (mu, v)) in comps.iter().enumerate() {
            for a in 0..d_a {
                psi[(a * d_c + sector + k, 0)] += v[(a, 0)] * c(mu.sqrt(), 0.0);
            }
        }
        sector += comps.len();
        m += &CMatrix::outer(&psi, &psi).scale_real(*p);
    }
    Ok((DensityMatrix::from_matrix_unchecked(m), d_c))
}

#[derive(Clone, Debug, Serialize)]
pub struct SmithYardReport {
    pub d_c: usize,
    pub coherent_information: f64,
    pub private_information: f64,
    /// `I_c − ½ I_p`.
    pub identity_residual: f64,
}

/// Evaluate the Smith–Yard identity `I_c(ρ_AC, N ⊗ E_{d_C,1/2}) = ½ I_p`.
pub fn smith_yard_identity(ens: &Ensemble, n: &Channel) -> Result<SmithYardReport> {
    let (rho, d_c) = smith_yard_state(ens)?;
    let ic = coherent_information_of(rho.matrix(), &tensor(n, &erasure(d_c, 0.5)?))?;
    let ip = private_information(ens, n)?;
    Ok(SmithYardReport { d_c, coherent_information: ic, private_information: ip, identity_residual: ic - 0.5 * ip })
}
