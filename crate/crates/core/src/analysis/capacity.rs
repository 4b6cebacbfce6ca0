//! Maximization of coherent and private information.

use serde::Serialize;

use super::optimize::{grid_golden_max, nelder_mead_restarted, NelderMeadOptions};
use crate::channels::{Channel, Family};
use crate::info::{coherent_information_of, private_information, DensityMatrix, Ensemble};
use crate::numkernel::{c, CMatrix};
use crate::random::Rng;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// Family-specific restriction when the channel is recognized, multistart otherwise.
    Auto,
    /// Optimize over diagonal inputs only.
    DiagonalGrid,
    Multistart {
        restarts: usize,
        seed: u64,
    },
}

impl Strategy {
    pub fn multistart_default() -> Self {
        Strategy::Multistart { restarts: 32, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub enum Argmax {
    State(DensityMatrix),
    Ensemble(Ensemble),
}

#[derive(Clone, Debug)]
pub struct OptimizationReport {
    pub value: f64,
    pub argmax: Argmax,
    pub restarts: usize,
    pub converged: bool,
    /// Best value reached by each restart.
    pub trace: Vec<f64>,
    pub warnings: Vec<String>,
    pub strategy: String,
}

impl OptimizationReport {
    pub fn state(&self) -> Option<&DensityMatrix> {
        match &self.argmax {
            Argmax::State(s) => Some(s),
            Argmax::Ensemble(_) => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportSummary {
    pub value: f64,
    pub restarts: usize,
    pub converged: bool,
    pub strategy: String,
    pub warnings: Vec<String>,
}

impl From<&OptimizationReport> for ReportSummary {
    fn from(r: &OptimizationReport) -> Self {
        Self {
            value: r.value,
            restarts: r.restarts,
            converged: r.converged,
            strategy: r.strategy.clone(),
            warnings: r.warnings.clone(),
        }
    }
}

/// `ρ = LL†/Tr(LL†)` with `L` lower triangular; `d²` real parameters.
pub fn state_from_cholesky(x: &[f64], d: usize) -> CMatrix {
    let mut l = CMatrix::zeros(d, d);
    let mut k = d;
    for i in 0..d {
        l[(i, i)] = c(x[i], 0.0);
        for j in 0..i {
            l[(i, j)] = c(x[k], x[k + 1]);
            k += 2;
        }
    }
    let m = &l * &l.adjoint();
    let tr = m.trace().re;
    if tr <= 0.0 {
        return CMatrix::identity(d).scale_real(1.0 / d as f64);
    }
    m.scale_real(1.0 / tr).hermitian_part()
}

/// Probability vector `x_i² / Σ x²`.
pub fn simplex_from_squares(x: &[f64]) -> Vec<f64> {
    let s: f64 = x.iter().map(|v| v * v).sum();
    if s <= 0.0 {
        return vec![1.0 / x.len() as f64; x.len()];
    }
    x.iter().map(|v| v * v / s).collect()
}

fn ic(n: &Channel, rho: &CMatrix) -> f64 {
    coherent_information_of(rho, n).unwrap_or(f64::NEG_INFINITY)
}

fn finalize(
    n: &Channel,
    rho: CMatrix,
    trace: Vec<f64>,
    converged: bool,
    warnings: Vec<String>,
    strategy: &str,
) -> OptimizationReport {
    let state = DensityMatrix::from_matrix_unchecked(rho);
    let value = ic(n, state.matrix());
    OptimizationReport {
        value,
        argmax: Argmax::State(state),
        restarts: trace.len(),
        converged,
        trace,
        warnings,
        strategy: strategy.into(),
    }
}

fn diagonal_justified(n: &Channel) -> bool {
    matches!(
        n.family(),
        Some(
            Family::AmplitudeDamping { .. }
                | Family::Dephasing { .. }
                | Family::Erasure { .. }
                | Family::Platypus { .. }
        )
    )
}

/// Maximize `I_c` over diagonal inputs.
pub fn q1_diagonal(n: &Channel) -> OptimizationReport {
    let d = n.d_in();
    let mut warnings = Vec::new();
    if !diagonal_justified(n) {
        warnings.push("diagonal restriction has no optimality proof for this channel".into());
    }
    if d == 1 {
        return finalize(n, CMatrix::identity(1), vec![ic(n, &CMatrix::identity(1))], true, warnings, "diagonal_grid");
    }
    if d == 2 {
        let f = |u: f64| ic(n, &CMatrix::diag_real(&[u, 1.0 - u]));
        let (u, v) = grid_golden_max(f, 0.0, 1.0, 200, 1e-11);
        return finalize(n, CMatrix::diag_real(&[u, 1.0 - u]), vec![v], true, warnings, "diagonal_grid");
    }
    let steps = match d {
        3 => 60,
        4 => 16,
        5 => 8,
        _ => 4,
    };
    let mut best = (f64::NEG_INFINITY, vec![1.0 / d as f64; d]);
    let mut comp = vec![0usize; d];
    simplex_points(d, steps, &mut comp, 0, steps, &mut |p| {
        let v = ic(n, &CMatrix::diag_real(p));
        if v > best.0 {
            best = (v, p.to_vec());
        }
    });
    let obj = |x: &[f64]| -ic(n, &CMatrix::diag_real(&simplex_from_squares(x)));
    let x0: Vec<f64> = best.1.iter().map(|p| p.sqrt().max(1e-3)).collect();
    let res = nelder_mead_restarted(obj, &x0, &NelderMeadOptions { initial_step: 0.05, ..Default::default() }, 4);
    let p = if -res.f >= best.0 { simplex_from_squares(&res.x) } else { best.1.clone() };
    finalize(n, CMatrix::diag_real(&p), vec![(-res.f).max(best.0)], res.converged, warnings, "diagonal_grid")
}

/// Enumerate compositions of `steps` into `d` parts, scaled to probabilities.
fn simplex_points(d: usize, steps: usize, comp: &mut [usize], k: usize, left: usize, f: &mut impl FnMut(&[f64])) {
    if k == d - 1 {
        comp[k] = left;
        let p: Vec<f64> = comp.iter().map(|&c| c as f64 / steps as f64).collect();
        f(&p);
        return;
    }
    for v in 0..=left {
        comp[k] = v;
        simplex_points(d, steps, comp, k + 1, left - v, f);
    }
}

/// Nelder–Mead over Cholesky factors from random starts plus the maximally mixed state.
pub fn q1_multistart(n: &Channel, restarts: usize, seed: u64) -> Result<OptimizationReport> {
    let d = n.d_in();
    if d > 16 {
        return Err(Error::Precondition(format!("multistart supports d_A <= 16, got {d}")));
    }
    let np = d * d;
    let mut rng = Rng::new(seed);
    let obj = |x: &[f64]| -ic(n, &state_from_cholesky(x, d));
    let opts = NelderMeadOptions { max_evals: 400 * np.max(10), initial_step: 0.3, ..Default::default() };
    let mut trace = Vec::with_capacity(restarts);
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for r in 0..restarts.max(1) {
        let x0: Vec<f64> = if r == 0 {
            let mut v = vec![0.0; np];
            v[..d].iter_mut().for_each(|x| *x = 1.0);
            v
        } else {
            (0..np).map(|_| rng.normal()).collect()
        };
        let res = nelder_mead_restarted(obj, &x0, &opts, 3);
        trace.push(-res.f);
        if best.as_ref().is_none_or(|b| -res.f > b.0) {
            best = Some((-res.f, res.x, res.converged));
        }
    }
    let (_, x, conv) = best.expect("at least one restart");
    Ok(finalize(n, state_from_cholesky(&x, d), trace, conv, Vec::new(), "multistart"))
}

/// `Q⁽¹⁾(N) = max_ρ I_c(ρ, N)` under the chosen strategy.
pub fn q1(n: &Channel, strategy: &Strategy) -> Result<OptimizationReport> {
    match strategy {
        Strategy::DiagonalGrid => Ok(q1_diagonal(n)),
        Strategy::Multistart { restarts, seed } => q1_multistart(n, *restarts, *seed),
        Strategy::Auto => match n.family() {
            Some(Family::Platypus { s, t }) => {
                let (s, t) = (*s, *t);
                let r = q1_platypus_restricted(s, t)?;
                let basis = crate::zoo::platypus_subspace(s, t);
                let mut p = [0.0; 3];
                p[basis[0]] = r.0;
                p[basis[1]] = 1.0 - r.0;
                let mut rep =
                    finalize(n, CMatrix::diag_real(&p), vec![r.1], true, Vec::new(), "auto:platypus_restricted");
                rep.strategy = "auto:platypus_restricted".into();
                Ok(rep)
            }
            Some(Family::AmplitudeDamping { .. } | Family::Dephasing { .. } | Family::Erasure { .. }) => {
                let mut r = q1_diagonal(n);
                r.strategy = "auto:diagonal".into();
                Ok(r)
            }
            _ => {
                let mut r = q1_multistart(n, 32, 0)?;
                r.strategy = "auto:multistart".into();
                Ok(r)
            }
        },
    }
}

/// `I_c` of `N_{s,t}` on `diag(u, 1−u)` in the restricted subspace.
pub fn platypus_restricted_ic(n: &Channel, basis: [usize; 2], u: f64) -> f64 {
    let mut p = [0.0; 3];
    p[basis[0]] = u;
    p[basis[1]] = 1.0 - u;
    ic(n, &CMatrix::diag_real(&p))
}

/// Single-parameter optimum `(u*, value)` for the Platypus family.
pub fn q1_platypus_restricted(s: f64, t: f64) -> Result<(f64, f64)> {
    let n = crate::zoo::platypus(s, t)?;
    let basis = crate::zoo::platypus_subspace(s, t);
    let f = |u: f64| platypus_restricted_ic(&n, basis, u);
    Ok(grid_golden_max(f, 0.0, 1.0, 400, 1e-10))
}

/// Two-parameter diagonal optimum over `diag(u₀, u₁, 1−u₀−u₁)`.
pub fn q1_platypus_diagonal_2d(s: f64, t: f64, grid: usize) -> Result<(Vec<f64>, f64)> {
    let n = crate::zoo::platypus(s, t)?;
    let f = |p: &[f64]| ic(&n, &CMatrix::diag_real(p));
    let mut best = (f64::NEG_INFINITY, vec![1.0, 0.0, 0.0]);
    for i in 0..=grid {
        for j in 0..=(grid - i) {
            let p = [i as f64 / grid as f64, j as f64 / grid as f64, (grid - i - j) as f64 / grid as f64];
            let v = f(&p);
            if v > best.0 {
                best = (v, p.to_vec());
            }
        }
    }
    let obj = |x: &[f64]| -f(&simplex_from_squares(x));
    // Seeds: the grid optimum and each edge of the simplex.
    let mut seeds = vec![best.1.iter().map(|p| p.sqrt()).collect::<Vec<_>>()];
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let g = |u: f64| {
            let mut p = [0.0; 3];
            p[a] = u;
            p[b] = 1.0 - u;
            f(&p)
        };
        let (u, v) = grid_golden_max(g, 0.0, 1.0, 200, 1e-11);
        let mut p = vec![0.0; 3];
        p[a] = u;
        p[b] = 1.0 - u;
        if v > best.0 {
            best = (v, p.clone());
        }
        seeds.push(p.iter().map(|x| x.sqrt()).collect());
    }
    for x0 in seeds {
        let x0: Vec<f64> = x0.iter().map(|v| if *v == 0.0 { 1e-4 } else { *v }).collect();
        let res = nelder_mead_restarted(obj, &x0, &NelderMeadOptions { initial_step: 0.02, ..Default::default() }, 4);
        if -res.f > best.0 {
            best = (-res.f, simplex_from_squares(&res.x));
        }
    }
    Ok((best.1, best.0))
}

/// Platypus two-state ensemble `{(p, |0⟩⟨0|), (1−p, u|1⟩⟨1| + (1−u)|2⟩⟨2|)}`.
pub fn platypus_two_state_ensemble(p: f64, u: f64) -> Result<Ensemble> {
    Ensemble::new(vec![(p, DensityMatrix::basis(3, 0)), (1.0 - p, DensityMatrix::diagonal(&[0.0, u, 1.0 - u])?)])
}

/// `P⁽¹⁾` lower bound over the two-state family, maximizing over `(p, u)`.
pub fn p1_platypus_two_state(s: f64, t: f64) -> Result<OptimizationReport> {
    let n = crate::zoo::platypus(s, t)?;
    let f = |p: f64, u: f64| {
        platypus_two_state_ensemble(p.clamp(0.0, 1.0), u.clamp(0.0, 1.0))
            .and_then(|e| private_information(&e, &n))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let g = 24;
    let mut best = (f64::NEG_INFINITY, 1.0, 0.5);
    for i in 0..=g {
        for j in 0..=g {
            let (p, u) = (i as f64 / g as f64, j as f64 / g as f64);
            let v = f(p, u);
            if v > best.0 {
                best = (v, p, u);
            }
        }
    }
    // Box constraints through a sine map.
    let to_unit = |x: f64| 0.5 * (1.0 + x.sin());
    let from_unit = |y: f64| (2.0 * y - 1.0).clamp(-1.0, 1.0).asin();
    let obj = |x: &[f64]| -f(to_unit(x[0]), to_unit(x[1]));
    let res = nelder_mead_restarted(
        obj,
        &[from_unit(best.1), from_unit(best.2)],
        &NelderMeadOptions { initial_step: 0.1, ..Default::default() },
        4,
    );
    let (p, u) = if -res.f > best.0 { (to_unit(res.x[0]), to_unit(res.x[1])) } else { (best.1, best.2) };
    let ens = platypus_two_state_ensemble(p, u)?;
    let value = private_information(&ens, &n)?;
    Ok(OptimizationReport {
        value,
        argmax: Argmax::Ensemble(ens),
        restarts: 1,
        converged: res.converged,
        trace: vec![value],
        warnings: Vec::new(),
        strategy: "two_state_family".into(),
    })
}
