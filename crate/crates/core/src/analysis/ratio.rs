//! Sampling estimators for mutual-information ratios and contraction coefficients.
//!
//! All returned infima are upper bounds on the true infimum and all suprema are lower
//! bounds on the true supremum: the search is over finitely many states.

use serde::Serialize;

use super::optimize::{nelder_mead, NelderMeadOptions};
use super::singularity::{log_grid, scaling_state};
use crate::channels::{tensor, Channel};
use crate::info::subsystem_entropy;
use crate::numkernel::{c, kron, sqrtm, CMatrix};
use crate::random::{random_pure, random_state, random_state_rank, Rng};
use crate::{Error, Result};

/// Denominators below this are treated as 0/0 and excluded.
pub const DENOMINATOR_FLOOR: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct RatioOptions {
    pub dim_v: usize,
    pub samples: usize,
    /// Number of best samples polished by Nelder–Mead.
    pub local_refine: usize,
    pub seed: u64,
}

impl Default for RatioOptions {
    fn default() -> Self {
        Self { dim_v: 2, samples: 600, local_refine: 5, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioEstimate {
    pub value: f64,
    /// Always `"upper bound on infimum"`.
    pub label: String,
    #[serde(skip)]
    pub state: CMatrix,
    pub evaluated: usize,
    pub excluded: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionEstimate {
    /// Lower bound on the supremum of `I(V;B₁)/I(V;B₂)`.
    pub sup: f64,
    /// Upper bound on the infimum.
    pub inf: f64,
    pub evaluated: usize,
    pub excluded: usize,
}

/// `I(V;B)` and `I(V;E)` for `(id_V ⊗ N)` acting on `ρ_VA`.
#[derive(Clone, Debug)]
pub struct MiProbe {
    joint: Channel,
    dims: [usize; 3],
}

impl MiProbe {
    pub fn new(n: &Channel, dim_v: usize) -> Self {
        Self { joint: tensor(&Channel::identity(dim_v), n), dims: [dim_v, n.d_out(), n.d_env()] }
    }

    pub fn eval(&self, rho_va: &CMatrix) -> Result<(f64, f64)> {
        let out = self.joint.isometry().joint_output(rho_va);
        let d = &self.dims;
        let sv = subsystem_entropy(&out, d, &[0])?;
        let sb = subsystem_entropy(&out, d, &[1])?;
        let se = subsystem_entropy(&out, d, &[2])?;
        let svb = subsystem_entropy(&out, d, &[0, 1])?;
        let sve = subsystem_entropy(&out, d, &[0, 2])?;
        Ok((sv + sb - svb, sv + se - sve))
    }
}

fn gram_state(x: &[f64], n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |i, j| c(x[2 * (i * n + j)], x[2 * (i * n + j) + 1]));
    let m = &g * &g.adjoint();
    let tr = m.trace().re.max(1e-300);
    m.scale_real(1.0 / tr).hermitian_part()
}

fn gram_params(rho: &CMatrix) -> Vec<f64> {
    let s = sqrtm(rho).unwrap_or_else(|_| rho.clone());
    s.data().iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Candidate `ρ_VA` of sample index `k`: Hilbert–Schmidt, low rank, or near-product.
fn sample_state(rng: &mut Rng, k: usize, dv: usize, da: usize) -> CMatrix {
    let n = dv * da;
    match k % 4 {
        0 => random_state(rng, n).into_matrix(),
        1 => {
            let k = 1 + rng.below(2);
            random_state_rank(rng, n, k).into_matrix()
        }
        2 if dv == 2 && da == 2 => {
            let eps = log_grid(1e-4, 0.3, 16);
            scaling_state(eps[rng.below(eps.len())])
        }
        _ => {
            let prod = kron(random_state(rng, dv).matrix(), random_state(rng, da).matrix());
            let v = random_pure(rng, n);
            let e = 10f64.powf(-4.0 + 3.5 * rng.uniform());
            &prod.scale_real(1.0 - e) + &CMatrix::outer(&v, &v).scale_real(e)
        }
    }
}

/// Sample, keep the best `local_refine` states and polish them; `objective` returns `None` when excluded.
fn search(
    opts: &RatioOptions,
    da: usize,
    cq: bool,
    objective: &dyn Fn(&CMatrix) -> Option<f64>,
) -> (f64, CMatrix, usize, usize) {
    let dv = opts.dim_v;
    let mut rng = Rng::new(opts.seed);
    let mut scored: Vec<(f64, CMatrix)> = Vec::new();
    let mut excluded = 0;
    for k in 0..opts.samples {
        let rho = if cq { cq_sample(&mut rng, k, dv, da) } else { sample_state(&mut rng, k, dv, da) };
        match objective(&rho) {
            Some(v) => scored.push((v, rho)),
            None => excluded += 1,
        }
    }
    let evaluated = opts.samples;
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let Some((mut best, mut best_state)) = scored.first().cloned() else {
        return (f64::NAN, CMatrix::zeros(0, 0), evaluated, excluded);
    };
    let n = dv * da;
    for (_, start) in scored.iter().take(opts.local_refine) {
        let res = if cq {
            let x0 = cq_params(start, dv, da);
            let f = |x: &[f64]| objective(&cq_state(x, dv, da)).unwrap_or(f64::INFINITY);
            let r =
                nelder_mead(f, &x0, &NelderMeadOptions { max_evals: 3000, initial_step: 0.05, ..Default::default() });
            (r.f, cq_state(&r.x, dv, da))
        } else {
            let x0 = gram_params(start);
            let f = |x: &[f64]| objective(&gram_state(x, n)).unwrap_or(f64::INFINITY);
            let r =
                nelder_mead(f, &x0, &NelderMeadOptions { max_evals: 3000, initial_step: 0.05, ..Default::default() });
            (r.f, gram_state(&r.x, n))
        };
        if res.0 < best {
            (best, best_state) = res;
        }
    }
    (best, best_state, evaluated, excluded)
}

/// `Σ_x p_x |x⟩⟨x| ⊗ ρ_x` with `dim_v` classical letters.
fn cq_sample(rng: &mut Rng, k: usize, dv: usize, da: usize) -> CMatrix {
    let w: Vec<f64> = (0..dv).map(|_| rng.uniform() + 1e-3).collect();
    let tot: f64 = w.iter().sum();
    let mut m = CMatrix::zeros(dv * da, dv * da);
    for (x, wx) in w.iter().enumerate() {
        let rho = if k.is_multiple_of(2) { random_state(rng, da) } else { random_state_rank(rng, da, 1) };
        let term = kron(&CMatrix::unit(dv, x, x), rho.matrix()).scale_real(wx / tot);
        m += &term;
    }
    m
}

fn cq_params(rho: &CMatrix, dv: usize, da: usize) -> Vec<f64> {
    let mut x = Vec::new();
    for v in 0..dv {
        let idx: Vec<usize> = (0..da).map(|a| v * da + a).collect();
        x.extend(gram_params(&rho.submatrix(&idx, &idx)));
    }
    x
}

fn cq_state(x: &[f64], dv: usize, da: usize) -> CMatrix {
    let per = 2 * da * da;
    let mut m = CMatrix::zeros(dv * da, dv * da);
    for v in 0..dv {
        let xs = &x[v * per..(v + 1) * per];
        let g = CMatrix::from_fn(da, da, |i, j| c(xs[2 * (i * da + j)], xs[2 * (i * da + j) + 1]));
        let b = &g * &g.adjoint();
        for i in 0..da {
            for j in 0..da {
                m[(v * da + i, v * da + j)] = b[(i, j)];
            }
        }
    }
    let tr = m.trace().re.max(1e-300);
    m.scale_real(1.0 / tr)
}

fn check_inputs(n1: &Channel, n2: &Channel, opts: &RatioOptions) -> Result<()> {
    if n1.d_in() != n2.d_in() {
        return Err(Error::DimensionMismatch(format!("input dims {} and {}", n1.d_in(), n2.d_in())));
    }
    if opts.dim_v == 0 || opts.samples == 0 {
        return Err(Error::InvalidParameter("dim_v and samples must be positive".into()));
    }
    Ok(())
}

fn ratio_estimate(n1: &Channel, n2: &Channel, opts: &RatioOptions, cq: bool) -> Result<RatioEstimate> {
    check_inputs(n1, n2, opts)?;
    let (p1, p2) = (MiProbe::new(n1, opts.dim_v), MiProbe::new(n2, opts.dim_v));
    let objective = |rho: &CMatrix| -> Option<f64> {
        let (b2, e2) = p2.eval(rho).ok()?;
        let den = b2 - e2;
        if den < DENOMINATOR_FLOOR {
            return None;
        }
        let (b1, e1) = p1.eval(rho).ok()?;
        Some((b1 - e1) / den)
    };
    let (value, state, evaluated, excluded) = search(opts, n1.d_in(), cq, &objective);
    if value.is_nan() {
        return Err(Error::Precondition("denominator vanished on every sample".into()));
    }
    Ok(RatioEstimate { value, label: "upper bound on infimum".into(), state, evaluated, excluded })
}

/// Estimate of `inf (I(V;B₁) − I(V;E₁)) / (I(V;B₂) − I(V;E₂))` over quantum `ρ_VA`.
pub fn mi_ratio_r3(n1: &Channel, n2: &Channel, opts: &RatioOptions) -> Result<RatioEstimate> {
    ratio_estimate(n1, n2, opts, false)
}

/// The same ratio restricted to classical-quantum `ρ_XA`.
pub fn mi_ratio_r4(n1: &Channel, n2: &Channel, opts: &RatioOptions) -> Result<RatioEstimate> {
    ratio_estimate(n1, n2, opts, true)
}

/// Bounds on `sup` and `inf` of `I(V;B₁)/I(V;B₂)`; `cq` restricts `V` to a classical register.
pub fn contraction_coefficients(
    n1: &Channel,
    n2: &Channel,
    opts: &RatioOptions,
    cq: bool,
) -> Result<ContractionEstimate> {
    check_inputs(n1, n2, opts)?;
    let (p1, p2) = (MiProbe::new(n1, opts.dim_v), MiProbe::new(n2, opts.dim_v));
    let ratio = |rho: &CMatrix| -> Option<f64> {
        let (b1, _) = p1.eval(rho).ok()?;
        let (b2, _) = p2.eval(rho).ok()?;
        (b1 > DENOMINATOR_FLOOR && b2 > DENOMINATOR_FLOOR).then(|| b1 / b2)
    };
    let (inf, _, evaluated, excluded) = search(opts, n1.d_in(), cq, &ratio);
    let neg = |rho: &CMatrix| ratio(rho).map(|v| -v);
    let (neg_sup, _, _, _) = search(opts, n1.d_in(), cq, &neg);
    if inf.is_nan() {
        return Err(Error::Precondition("mutual information vanished on every sample".into()));
    }
    Ok(ContractionEstimate { sup: -neg_sup, inf, evaluated, excluded })
}

/// Mixing threshold `p* = 1/(1+R)` evaluated at an estimated ratio.
pub fn mixing_threshold(r: f64) -> f64 {
    1.0 / (1.0 + r)
}

/// Conjectured closed form `γ₂(1−γ₁)/(γ₁(1−γ₂))`, reported only for comparison.
pub fn conjectured_inf_ratio(gamma1: f64, gamma2: f64) -> f64 {
    gamma2 * (1.0 - gamma1) / (gamma1 * (1.0 - gamma2))
}
