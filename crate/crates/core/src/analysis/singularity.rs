//! ε-log-singularity rates, Platypus amplification and the ε² log ε scaling law.

use serde::Serialize;

use super::capacity::q1_platypus_restricted;
use crate::channels::{tensor, Channel};
use crate::info::{coherent_information_of, entropy_of, mi_of, DensityMatrix};
use crate::numkernel::{c, hermitian_eigenvalues, CMatrix};
use crate::zoo::{amplitude_damping, erasure, erasure_q1, platypus, platypus_subspace};
use crate::{Error, Result};

/// `n` logarithmically spaced points in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)).collect()
}

/// Twelve points in `[1e-6, 1e-2]`.
pub fn default_eps_grid() -> Vec<f64> {
    log_grid(1e-6, 1e-2, 12)
}

#[derive(Clone, Debug, Serialize)]
pub struct RateEstimate {
    /// Coefficient of `ε |log₂ ε|` in `S(σ(ε)) − S(σ(0))`.
    pub rate: f64,
    /// Coefficient of the linear `ε` term fitted alongside.
    pub linear: f64,
    /// RMS misfit of `ΔS/ε`.
    pub residual: f64,
    /// Grid actually used by the fit.
    pub eps: Vec<f64>,
    pub dropped_largest: bool,
    /// `max ‖σ(ε) − σ(0)‖₁ / ε` over the grid.
    pub lipschitz_constant: f64,
    /// False when `‖σ(ε) − σ(0)‖₁/ε` grows by more than 10× toward small ε.
    pub lipschitz_ok: bool,
}

/// Least squares for `y = a x + b`; returns `(a, b, rms)`.
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - a * mx;
    let rms = (x.iter().zip(y).map(|(u, v)| (v - a * u - b).powi(2)).sum::<f64>() / n).sqrt();
    (a, b, rms)
}

fn check_grid(eps: &[f64]) -> Result<Vec<f64>> {
    let mut g: Vec<f64> = eps.to_vec();
    g.sort_by(f64::total_cmp);
    if g.len() < 6 {
        return Err(Error::Precondition(format!("need at least 6 ε points, got {}", g.len())));
    }
    if g[0] <= 0.0 || g[g.len() - 1] / g[0] < 100.0 * (1.0 - 1e-12) {
        return Err(Error::Precondition("ε grid must be positive and span at least two decades".into()));
    }
    Ok(g)
}

/// Fit `S(σ(ε)) − S(σ(0)) ≈ r ε|log₂ ε| + c ε` over the grid.
pub fn log_singularity_rate(family: impl Fn(f64) -> Result<CMatrix>, eps: &[f64]) -> Result<RateEstimate> {
    let grid = check_grid(eps)?;
    let state = |e: f64| -> Result<CMatrix> {
        let m = family(e)?;
        DensityMatrix::with_tol(m, 1e-9)
            .map(|d| d.into_matrix())
            .map_err(|err| Error::NotState(format!("σ({e:e}): {err}")))
    };
    let s0m = state(0.0)?;
    let s0 = entropy_of(&s0m);
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut lip = Vec::new();
    for &e in &grid {
        let m = state(e)?;
        x.push(-e.log2());
        y.push((entropy_of(&m) - s0) / e);
        lip.push(crate::info::trace_norm(&(&m - &s0m)) / e);
    }
    let (mut rate, mut linear, mut residual) = line_fit(&x, &y);
    let mut used = grid.clone();
    let mut dropped = false;
    if grid.len() >= 8 {
        let k = grid.len() - 2;
        let (a, b, r) = line_fit(&x[..k], &y[..k]);
        if r < residual {
            (rate, linear, residual) = (a, b, r);
            used.truncate(k);
            dropped = true;
        }
    }
    let lipschitz_constant = lip.iter().cloned().fold(0.0, f64::max);
    let lipschitz_ok = lip[0] <= 10.0 * lip[lip.len() - 1].max(1e-300);
    Ok(RateEstimate { rate, linear, residual, eps: used, dropped_largest: dropped, lipschitz_constant, lipschitz_ok })
}

/// `a|φ⟩⟨φ| + (1−a)ρ₀ − bε|φ⟩⟨φ| + bε|ψ⟩⟨ψ|` with `φ = |0⟩`, `ψ = |1⟩`, `ρ₀ = |2⟩⟨2|`.
pub fn singularity_case1(a: f64, b: f64, e: f64) -> CMatrix {
    CMatrix::diag_real(&[a - b * e, b * e, 1.0 - a])
}

/// Case 1 plus the coherence `b√(ε(1−ε))(|ψ⟩⟨φ| + |φ⟩⟨ψ|)`.
pub fn singularity_case2(a: f64, b: f64, e: f64) -> CMatrix {
    let mut m = singularity_case1(a, b, e);
    let off = b * (e * (1.0 - e)).sqrt();
    m[(0, 1)] = c(off, 0.0);
    m[(1, 0)] = c(off, 0.0);
    m
}

/// Full-rank `σ(0)` perturbed by a traceless Hermitian `H` inside its support.
pub fn singularity_case3(e: f64) -> CMatrix {
    let s0 = CMatrix::diag_real(&[0.5, 0.3, 0.2]);
    let mut h = CMatrix::diag_real(&[0.4, -0.1, -0.3]);
    h[(0, 1)] = c(0.2, 0.1);
    h[(1, 0)] = c(0.2, -0.1);
    h[(1, 2)] = c(0.0, 0.15);
    h[(2, 1)] = c(0.0, -0.15);
    &s0 + &h.scale_real(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AmplificationCase {
    /// `s ≤ 1−s−t`: optimizer on `{|0⟩,|2⟩}`, perturbation along `|11⟩`.
    I,
    /// `s ≥ 1−s−t`: optimizer on `{|0⟩,|1⟩}`, perturbation along `|21⟩`.
    II,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmplificationReport {
    pub s: f64,
    pub t: f64,
    pub lambda: f64,
    pub case: AmplificationCase,
    pub u_star: f64,
    pub q1: f64,
    pub lambda_bound: f64,
    pub lambda_in_region: bool,
    pub eps: Vec<f64>,
    /// `I_c(ρ(ε), N ⊗ E_{2,λ}) − Q⁽¹⁾(N) − Q⁽¹⁾(E_{2,λ})` per grid point.
    pub gain: Vec<f64>,
    pub max_gain: f64,
    pub r_b: RateEstimate,
    pub r_e: RateEstimate,
    pub r_b_analytic: f64,
    pub r_e_analytic: f64,
}

/// Input `ρ(ε) = u*|00⟩⟨00| + (1−u*)|ψ_ε⟩⟨ψ_ε|` on `A ⊗ A'` (dims 3, 2).
pub fn amplification_input(case: AmplificationCase, u: f64, e: f64) -> CMatrix {
    let (rest, pert) = match case {
        AmplificationCase::I => (4, 3),
        AmplificationCase::II => (2, 5),
    };
    let mut psi = CMatrix::zeros(6, 1);
    psi[(rest, 0)] = c((1.0 - e).sqrt(), 0.0);
    psi[(pert, 0)] = c(e.sqrt(), 0.0);
    let mut m = CMatrix::outer(&psi, &psi).scale_real(1.0 - u);
    m[(0, 0)] += c(u, 0.0);
    m
}

/// Log-singularity amplification of `N_{s,t} ⊗ E_{2,λ}`.
pub fn platypus_amplification(s: f64, t: f64, lambda: f64, eps: &[f64]) -> Result<AmplificationReport> {
    if !(s > 0.0 && s + t < 1.0) {
        return Err(Error::Precondition(format!("amplification needs s > 0 and s + t < 1, got ({s}, {t})")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!("lambda {lambda} outside [0, 1]")));
    }
    let (u, q1) = q1_platypus_restricted(s, t)?;
    if q1 <= 1e-6 {
        return Err(Error::Precondition(format!(
            "Q1(N_{{s,t}}) = {q1:.3e} is not positive; use the Smith-Yard construction at this point"
        )));
    }
    let case = if platypus_subspace(s, t) == [0, 2] { AmplificationCase::I } else { AmplificationCase::II };
    let w = match case {
        AmplificationCase::I => s + t,
        AmplificationCase::II => 1.0 - s,
    };
    let lambda_bound = (1.0 - w * u) / (1.0 + u - 2.0 * w * u);
    let r_b_analytic = (1.0 - u) * (1.0 - lambda);
    let r_e_analytic = match case {
        AmplificationCase::I => lambda * u * (1.0 - u) * (1.0 - s - t) / (1.0 - (s + t) * u),
        AmplificationCase::II => lambda * u * (1.0 - u) * s / (1.0 - (1.0 - s) * u),
    };
    let joint: Channel = tensor(&platypus(s, t)?, &erasure(2, lambda)?);
    let comp = joint.complement();
    let baseline = q1 + erasure_q1(2, lambda);
    let grid = check_grid(eps)?;
    let gain = grid
        .iter()
        .map(|&e| coherent_information_of(&amplification_input(case, u, e), &joint).map(|v| v - baseline))
        .collect::<Result<Vec<f64>>>()?;
    let max_gain = gain.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let r_b = log_singularity_rate(|e| Ok(joint.apply(&amplification_input(case, u, e))), &grid)?;
    let r_e = log_singularity_rate(|e| Ok(comp.apply(&amplification_input(case, u, e))), &grid)?;
    Ok(AmplificationReport {
        s,
        t,
        lambda,
        case,
        u_star: u,
        q1,
        lambda_bound,
        lambda_in_region: (0.5..lambda_bound).contains(&lambda),
        eps: grid,
        gain,
        max_gain,
        r_b,
        r_e,
        r_b_analytic,
        r_e_analytic,
    })
}

/// `ρ_VA(ε) = (1−ε)|11⟩⟨11| + (ε/2)(|01⟩ + |10⟩)(⟨01| + ⟨10|)`.
pub fn scaling_state(e: f64) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        m[(i, j)] = c(e / 2.0, 0.0);
    }
    m[(3, 3)] = c(1.0 - e, 0.0);
    m
}

/// `ρ_VB(ε) = (id ⊗ A_γ)(ρ_VA(ε))`.
pub fn scaling_output(gamma: f64, e: f64) -> Result<CMatrix> {
    let ch = tensor(&Channel::identity(2), &amplitude_damping(gamma)?);
    Ok(ch.apply(&scaling_state(e)))
}

/// Second-order expansions `(λ₂(ε), λ₃(ε))` of the coherent block eigenvalues.
pub fn scaling_eigen_expansion(gamma: f64, e: f64) -> (f64, f64) {
    let q = (1.0 - gamma) / (4.0 * gamma) * e * e;
    (gamma + (1.0 - 2.0 * gamma) / 2.0 * e + q, (1.0 - gamma) / 2.0 * e - q)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub gamma: f64,
    /// Fitted coefficient of `ε² log₂ ε` in `I(V;B)` (bits).
    pub coefficient: f64,
    /// Companion `ε²` coefficient.
    pub quadratic: f64,
    /// `−(1−γ)/(4γ)`; the same number in any log base since both sides scale together.
    pub predicted: f64,
    pub relative_error: f64,
    pub residual: f64,
    pub eps: Vec<f64>,
    pub mutual_information: Vec<f64>,
    pub dropped_largest: bool,
}

/// Fit `I(V;B) ≈ C′ ε² log₂ ε + C₂ ε²`.
pub fn epsilon_scaling_mi(gamma: f64, eps: &[f64]) -> Result<ScalingFit> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma {gamma} outside (0, 1)")));
    }
    let grid = check_grid(eps)?;
    let mi = grid.iter().map(|&e| mi_of(&scaling_output(gamma, e)?, (2, 2))).collect::<Result<Vec<f64>>>()?;
    let x: Vec<f64> = grid.iter().map(|e| e.log2()).collect();
    let y: Vec<f64> = grid.iter().zip(&mi).map(|(e, v)| v / (e * e)).collect();
    let (mut a, mut b, mut res) = line_fit(&x, &y);
    let mut used = grid.clone();
    let mut dropped = false;
    if grid.len() >= 8 {
        let k = grid.len() - 2;
        let (a2, b2, r2) = line_fit(&x[..k], &y[..k]);
        if r2 < res {
            (a, b, res) = (a2, b2, r2);
            used.truncate(k);
            dropped = true;
        }
    }
    let predicted = -(1.0 - gamma) / (4.0 * gamma);
    Ok(ScalingFit {
        gamma,
        coefficient: a,
        quadratic: b,
        predicted,
        relative_error: ((a - predicted) / predicted).abs(),
        residual: res,
        eps: used,
        mutual_information: mi,
        dropped_largest: dropped,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionCheck {
    pub eps: Vec<f64>,
    pub residual_l2: Vec<f64>,
    pub residual_l3: Vec<f64>,
    /// Log-log slopes of the residuals against ε.
    pub order_l2: f64,
    pub order_l3: f64,
    /// `max residual / ε³`.
    pub cubic_constant: f64,
}

/// Compare the second-order eigenvalue expansions against numeric eigenvalues.
pub fn scaling_expansion_check(gamma: f64, eps: &[f64]) -> Result<ExpansionCheck> {
    let mut r2 = Vec::new();
    let mut r3 = Vec::new();
    for &e in eps {
        let ev = hermitian_eigenvalues(&scaling_output(gamma, e)?)?;
        let (l2, l3) = scaling_eigen_expansion(gamma, e);
        let closest = |target: f64| ev.iter().map(|v| (v - target).abs()).fold(f64::INFINITY, f64::min);
        r2.push(closest(l2));
        r3.push(closest(l3));
    }
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let slope = |r: &[f64]| line_fit(&lx, &r.iter().map(|v| v.max(1e-300).ln()).collect::<Vec<_>>()).0;
    let cubic_constant =
        eps.iter().zip(r2.iter().zip(&r3)).map(|(e, (a, b))| a.max(*b) / e.powi(3)).fold(0.0, f64::max);
    Ok(ExpansionCheck {
        order_l2: slope(&r2),
        order_l3: slope(&r3),
        eps: eps.to_vec(),
        residual_l2: r2,
        residual_l3: r3,
        cubic_constant,
    })
}
