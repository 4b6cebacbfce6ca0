//! Named channel families.

use crate::analysis::certificate::{Certificate, Side, Verdict};
use crate::channels::{compose, flagged, switch_channel, Channel, Family, Isometry, SuperOperator};
use crate::numkernel::{r, CMatrix};
use crate::{Error, Result};

/// Distance to a region boundary below which classifications carry a boundary flag.
pub const BOUNDARY_TOL: f64 = 1e-6;

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

fn iso_from_columns(cols: &[Vec<(usize, f64)>], d_b: usize, d_e: usize) -> Isometry {
    let mut m = CMatrix::zeros(d_b * d_e, cols.len());
    for (a, col) in cols.iter().enumerate() {
        for &(row, v) in col {
            m[(row, a)] = r(v);
        }
    }
    Isometry::new(m, d_b, d_e).expect("family isometry")
}

/// `A_γ` from `U|0⟩ = |00⟩`, `U|1⟩ = √(1−γ)|10⟩ + √γ|01⟩`.
pub fn amplitude_damping(gamma: f64) -> Result<Channel> {
    check_unit("gamma", gamma)?;
    let iso = iso_from_columns(&[vec![(0, 1.0)], vec![(2, (1.0 - gamma).sqrt()), (1, gamma.sqrt())]], 2, 2);
    Ok(Channel::from_isometry(iso).with_family(Family::AmplitudeDamping { gamma }))
}

fn qubit_map(f: impl Fn(&CMatrix) -> [[crate::C64; 2]; 2]) -> SuperOperator {
    SuperOperator::from_fn(2, 2, |x| {
        let m = f(x);
        CMatrix::from_fn(2, 2, |i, j| m[i][j])
    })
}

/// `A_γ^{−1}` as a linear map.
pub fn ad_inverse(gamma: f64) -> Result<SuperOperator> {
    check_unit("gamma", gamma)?;
    if gamma >= 1.0 {
        return Err(Error::InvalidParameter("A_1 is not invertible".into()));
    }
    let k = 1.0 / (1.0 - gamma).sqrt();
    Ok(qubit_map(|x| {
        [[x[(0, 0)] - x[(1, 1)] * (gamma / (1.0 - gamma)), x[(0, 1)] * k], [x[(1, 0)] * k, x[(1, 1)] / (1.0 - gamma)]]
    }))
}

/// `A_{γ₂} ∘ A_{γ₁}^{−1}`; CPTP iff `γ₁ ≤ γ₂`.
pub fn ad_compose_inverse(gamma2: f64, gamma1: f64) -> Result<SuperOperator> {
    check_unit("gamma2", gamma2)?;
    check_unit("gamma1", gamma1)?;
    if gamma1 >= 1.0 {
        return Err(Error::InvalidParameter("gamma1 = 1 is not invertible".into()));
    }
    let a = (gamma2 - gamma1) / (1.0 - gamma1);
    let k = ((1.0 - gamma2) / (1.0 - gamma1)).sqrt();
    let d = (1.0 - gamma2) / (1.0 - gamma1);
    Ok(qubit_map(|x| [[x[(0, 0)] + x[(1, 1)] * a, x[(0, 1)] * k], [x[(1, 0)] * k, x[(1, 1)] * d]]))
}

/// `D_α`: off-diagonals scaled by `α`.
pub fn dephasing(alpha: f64) -> Result<Channel> {
    if alpha.abs() > 1.0 || alpha.is_nan() {
        return Err(Error::InvalidParameter(format!("|alpha| = {} > 1", alpha.abs())));
    }
    let p = ((1.0 + alpha) / 2.0).sqrt();
    let q = ((1.0 - alpha) / 2.0).sqrt();
    let iso = iso_from_columns(&[vec![(0, p), (1, q)], vec![(2, p), (3, -q)]], 2, 2);
    Ok(Channel::from_isometry(iso).with_family(Family::Dephasing { alpha }))
}

/// Closed-form `Q⁽¹⁾(D_α) = 1 − h((1+α)/2)`.
pub fn dephasing_q1(alpha: f64) -> f64 {
    1.0 - crate::info::binary_entropy((1.0 + alpha) / 2.0)
}

/// Ququart-to-qutrit map `Φ_α` built around two dephasing blocks.
pub fn gao_channel(alpha: f64) -> Result<Channel> {
    if alpha.abs() > 1.0 || alpha.is_nan() {
        return Err(Error::InvalidParameter(format!("|alpha| = {} > 1", alpha.abs())));
    }
    let s = SuperOperator::from_fn(4, 3, |x| {
        let mut y = CMatrix::zeros(3, 3);
        y[(0, 0)] = x[(0, 0)] + x[(1, 1)];
        y[(0, 1)] = x[(0, 2)] * alpha;
        y[(0, 2)] = x[(1, 3)] * alpha;
        y[(1, 0)] = x[(2, 0)] * alpha;
        y[(1, 1)] = x[(2, 2)];
        y[(2, 0)] = x[(3, 1)] * alpha;
        y[(2, 2)] = x[(3, 3)];
        y
    });
    Ok(s.to_channel(1e-12)?.with_family(Family::Gao { alpha }))
}

/// `(E, D)` with `D ∘ (D_α ⊕ D_α) ∘ E = Φ_α`.
pub fn gao_factorization(alpha: f64) -> Result<(Channel, Channel)> {
    if alpha.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!("|alpha| = {} > 1", alpha.abs())));
    }
    let mut p = CMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        p[(i, j)] = r(1.0);
    }
    let e = Channel::unitary(p)?;
    let mut k1 = CMatrix::zeros(3, 4);
    k1[(0, 0)] = r(1.0);
    k1[(1, 1)] = r(1.0);
    let mut k2 = CMatrix::zeros(3, 4);
    k2[(0, 2)] = r(1.0);
    k2[(2, 3)] = r(1.0);
    let d = Channel::from_kraus(vec![k1, k2])?;
    Ok((e, d))
}

/// Qutrit multi-level amplitude damping `A_{γ₀,γ₁}`.
pub fn mad_channel(gamma0: f64, gamma1: f64) -> Result<Channel> {
    check_unit("gamma0", gamma0)?;
    check_unit("gamma1", gamma1)?;
    let gamma2 = 1.0 - gamma0 - gamma1;
    if gamma2 < -1e-15 {
        return Err(Error::InvalidParameter("gamma0 + gamma1 > 1".into()));
    }
    let gamma2 = gamma2.max(0.0);
    // Rows b·3 + e.
    let iso = iso_from_columns(
        &[vec![(0, 1.0)], vec![(3, 1.0)], vec![(6, gamma2.sqrt()), (4, gamma1.sqrt()), (2, gamma0.sqrt())]],
        3,
        3,
    );
    Ok(Channel::from_isometry(iso).with_family(Family::Mad { gamma0, gamma1 }))
}

/// Simulation `A_{γ₀,γ₁} = A_{β₀,β₁} ∘ A_{γ₀′,γ₁′}` with `γ₀′+γ₁′ = ½`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MadSimulation {
    pub gamma0_prime: f64,
    pub gamma1_prime: f64,
    pub post_gamma0: f64,
    pub post_gamma1: f64,
}

/// Available when `γ₂ = 1 − γ₀ − γ₁ < ½`; splits the degradable stage proportionally.
pub fn mad_degradable_simulator(gamma0: f64, gamma1: f64) -> Result<MadSimulation> {
    mad_channel(gamma0, gamma1)?;
    let sum = gamma0 + gamma1;
    if 1.0 - sum >= 0.5 {
        return Err(Error::Precondition("simulator needs gamma2 < 1/2".into()));
    }
    let g0p = 0.5 * gamma0 / sum;
    let g1p = 0.5 - g0p;
    Ok(MadSimulation {
        gamma0_prime: g0p,
        gamma1_prime: g1p,
        post_gamma0: 2.0 * (gamma0 - g0p),
        post_gamma1: 2.0 * (gamma1 - g1p),
    })
}

/// `E_{d,λ}` with `U|i⟩ = √(1−λ)|i, e⟩ + √λ|e, i⟩` and `|e⟩ = |d⟩`.
pub fn erasure(d: usize, lambda: f64) -> Result<Channel> {
    if d < 2 {
        return Err(Error::InvalidParameter("erasure needs d >= 2".into()));
    }
    check_unit("lambda", lambda)?;
    let n = d + 1;
    let cols: Vec<Vec<(usize, f64)>> =
        (0..d).map(|i| vec![(i * n + d, (1.0 - lambda).sqrt()), (d * n + i, lambda.sqrt())]).collect();
    Ok(Channel::from_isometry(iso_from_columns(&cols, n, n)).with_family(Family::Erasure { d, lambda }))
}

/// `Q⁽¹⁾(E_{d,λ}) = max(0, (1−2λ) log₂ d)`.
pub fn erasure_q1(d: usize, lambda: f64) -> f64 {
    ((1.0 - 2.0 * lambda) * (d as f64).log2()).max(0.0)
}

/// `q1` of the qubit amplitude damping channel through its diagonal optimizer.
pub fn ad_q1(gamma: f64) -> f64 {
    if gamma >= 0.5 {
        return 0.0;
    }
    let f = |u: f64| crate::info::binary_entropy((1.0 - gamma) * u) - crate::info::binary_entropy(gamma * u);
    crate::analysis::optimize::golden_max(f, 0.0, 1.0, 1e-12).1
}

/// `Φ_{p,γ,η} = (1−p)|0⟩⟨0| ⊗ A_γ + p|1⟩⟨1| ⊗ A_η`.
pub fn flagged_ad(p: f64, gamma: f64, eta: f64) -> Result<Channel> {
    check_unit("p", p)?;
    let a = amplitude_damping(gamma)?;
    let b = amplitude_damping(eta)?;
    Ok(flagged(&[1.0 - p, p], &[&a, &b])?.with_family(Family::FlaggedAd { p, gamma, eta }))
}

/// Analytic classification of `Φ_{p,γ,η}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RegionVerdict {
    pub degradable: bool,
    pub antidegradable: bool,
    /// Some defining inequality is within [`BOUNDARY_TOL`] of equality.
    pub boundary: bool,
}

impl RegionVerdict {
    pub fn verdict(&self) -> Verdict {
        match (self.degradable, self.antidegradable) {
            (true, true) => Verdict::Symmetric,
            (true, false) => Verdict::Degradable,
            (false, true) => Verdict::AntiDegradable,
            (false, false) => Verdict::Neither,
        }
    }
}

pub fn flagged_ad_region(p: f64, gamma: f64, eta: f64) -> Result<RegionVerdict> {
    check_unit("p", p)?;
    check_unit("gamma", gamma)?;
    check_unit("eta", eta)?;
    let tol = 1e-12;
    let near = |x: f64, y: f64| (x - y).abs() <= BOUNDARY_TOL;
    // Degenerate mixtures reduce to a single flagged branch.
    if p == 0.0 || p == 1.0 {
        let g = if p == 0.0 { gamma } else { eta };
        return Ok(RegionVerdict {
            degradable: g <= 0.5 + tol,
            antidegradable: g >= 0.5 - tol,
            boundary: near(g, 0.5),
        });
    }
    let s = gamma + eta;
    let half = (p - 0.5).abs() <= 1e-12;
    let (deg, anti, boundary) = if half {
        (s <= 1.0 + tol, s >= 1.0 - tol, near(s, 1.0))
    } else if p > 0.5 {
        (s <= 1.0 + tol && eta <= 0.5 + tol, s >= 1.0 - tol && eta >= 0.5 - tol, near(s, 1.0) || near(eta, 0.5))
    } else {
        (s <= 1.0 + tol && gamma <= 0.5 + tol, s >= 1.0 - tol && gamma >= 0.5 - tol, near(s, 1.0) || near(gamma, 0.5))
    };
    Ok(RegionVerdict { degradable: deg, antidegradable: anti, boundary: boundary || (!half && near(p, 0.5)) })
}

/// Constructive degrading map of `Φ_{p,γ,η}` assembled from switch channels and AD compositions.
pub fn flagged_ad_degrading_map(p: f64, gamma: f64, eta: f64) -> Result<Channel> {
    let region = flagged_ad_region(p, gamma, eta)?;
    if !region.degradable {
        return Err(Error::Precondition(format!("Phi_(p={p},gamma={gamma},eta={eta}) is not degradable")));
    }
    let term = |i: usize, j: usize, w: f64, d: SuperOperator| -> Result<SuperOperator> {
        Ok(switch_channel(i, j, 2)?.tensor(&d).scale(w))
    };
    let sum = |terms: Vec<SuperOperator>| -> Result<SuperOperator> {
        let mut acc = SuperOperator::zero(4, 4);
        for t in terms {
            acc = acc.add(&t)?;
        }
        Ok(acc)
    };
    let map = if p == 0.0 || p == 1.0 {
        // Only one flag value ever occurs; degrade it in place and route the other arbitrarily.
        let g = if p == 0.0 { gamma } else { eta };
        let fl = if p == 0.0 { 0 } else { 1 };
        sum(vec![
            term(fl, fl, 1.0, ad_compose_inverse(1.0 - g, g)?)?,
            term(fl, 1 - fl, 1.0, SuperOperator::from_kraus(amplitude_damping(1.0)?.kraus())?)?,
        ])?
    } else if (p - 0.5).abs() <= 1e-12 {
        sum(vec![
            term(1, 0, 1.0, ad_compose_inverse(1.0 - eta, gamma)?)?,
            term(0, 1, 1.0, ad_compose_inverse(1.0 - gamma, eta)?)?,
        ])?
    } else if p > 0.5 {
        sum(vec![
            term(1, 0, 1.0, ad_compose_inverse(1.0 - eta, gamma)?)?,
            term(1, 1, (2.0 * p - 1.0) / p, ad_compose_inverse(1.0 - eta, eta)?)?,
            term(0, 1, (1.0 - p) / p, ad_compose_inverse(1.0 - gamma, eta)?)?,
        ])?
    } else {
        sum(vec![
            term(1, 0, p / (1.0 - p), ad_compose_inverse(1.0 - eta, gamma)?)?,
            term(0, 0, (1.0 - 2.0 * p) / (1.0 - p), ad_compose_inverse(1.0 - gamma, gamma)?)?,
            term(0, 1, 1.0, ad_compose_inverse(1.0 - gamma, eta)?)?,
        ])?
    };
    map.to_channel(1e-9)
}

fn check_simplex(s: f64, t: f64) -> Result<()> {
    if !(s >= 0.0 && t >= 0.0 && s + t <= 1.0 + 1e-15) {
        return Err(Error::InvalidParameter(format!("(s, t) = ({s}, {t}) outside the simplex")));
    }
    Ok(())
}

/// Generalized Platypus `N_{s,t}` from `F|0⟩ = √s|00⟩ + √(1−s−t)|11⟩ + √t|22⟩`, `F|1⟩ = |20⟩`, `F|2⟩ = |21⟩`.
pub fn platypus(s: f64, t: f64) -> Result<Channel> {
    check_simplex(s, t)?;
    let u = (1.0 - s - t).max(0.0);
    let iso =
        iso_from_columns(&[vec![(0, s.sqrt()), (4, u.sqrt()), (8, t.sqrt())], vec![(6, 1.0)], vec![(7, 1.0)]], 3, 3);
    Ok(Channel::from_isometry(iso).with_family(Family::Platypus { s, t }))
}

/// Input basis vectors spanning the Platypus restriction: `{0,1}` if `s ≥ (1−t)/2`, else `{0,2}`.
pub fn platypus_subspace(s: f64, t: f64) -> [usize; 2] {
    if s >= (1.0 - t) / 2.0 {
        [0, 1]
    } else {
        [0, 2]
    }
}

/// Restriction of `N_{s,t}` to a qubit input subspace.
pub fn platypus_restricted_to(s: f64, t: f64, basis: [usize; 2]) -> Result<Channel> {
    let n = platypus(s, t)?;
    let mut emb = CMatrix::zeros(3, 2);
    emb[(basis[0], 0)] = r(1.0);
    emb[(basis[1], 1)] = r(1.0);
    let m = n.isometry().matrix() * &emb;
    Ok(Channel::from_isometry(Isometry::new(m, 3, 3)?))
}

pub fn platypus_subchannel(s: f64, t: f64) -> Result<Channel> {
    platypus_restricted_to(s, t, platypus_subspace(s, t))
}

/// `A` with `N_{s,t} = N̂_{s,t} ∘ A`, available when `s + t = 1` or `s = 0`.
pub fn platypus_simulation_map(s: f64, t: f64) -> Result<Channel> {
    check_simplex(s, t)?;
    // The subspace index that absorbs the third level.
    let merged = if (s + t - 1.0).abs() <= 1e-12 {
        1
    } else if s == 0.0 {
        2
    } else {
        return Err(Error::Precondition("simulation map exists only for s + t = 1 or s = 0".into()));
    };
    let other = 3 - merged;
    // Keep |0⟩ and the subspace vector, send |other⟩ onto it.
    let mut k1 = CMatrix::zeros(2, 3);
    k1[(0, 0)] = r(1.0);
    k1[(1, merged)] = r(1.0);
    let mut k2 = CMatrix::zeros(2, 3);
    k2[(1, other)] = r(1.0);
    Channel::from_kraus(vec![k1, k2])
}

fn zero_column_witness(tn: &CMatrix, tnc: &CMatrix) -> Option<String> {
    let n = tn.cols();
    (0..n).find_map(|j| {
        let zn = (0..tn.rows()).all(|i| tn[(i, j)].norm() <= 1e-14);
        let nzc = (0..tnc.rows()).any(|i| tnc[(i, j)].norm() > 1e-12);
        (zn && nzc).then(|| format!("column {j} of T_N is zero but column {j} of T_Nc is not"))
    })
}

/// Anti-degradability test through `J_D = ϑ^{Γ,−1}(T_N T_{N^c}^{−1})`; degradability
/// is refuted by a zero column of `T_N` that is nonzero in `T_{N^c}`.
pub fn platypus_antideg_certificate(s: f64, t: f64) -> Result<Certificate> {
    let n = platypus(s, t)?;
    let nc = n.complement();
    let (tn, tnc) = (n.transfer(), nc.transfer());
    let deg = match zero_column_witness(tn, tnc) {
        Some(w) => Side::Refuted { witness: w },
        None => Side::Unknown { reason: "no zero-column witness".into() },
    };
    if t <= 0.0 {
        return Ok(Certificate::new(deg, Side::Unknown { reason: "t = 0: T_Nc is not invertible".into() }));
    }
    let tnc_inv = crate::numkernel::inverse(tnc)?;
    let td = SuperOperator::from_transfer(tn * &tnc_inv, 3, 3)?;
    let j = td.choi();
    let (_, lmin) = crate::numkernel::psd_check(&j, 0.0)?;
    let corner = j[(8, 8)].re;
    let anti = if lmin >= -1e-9 && td.tp_deviation() <= 1e-9 {
        let map = td.to_channel(1e-8)?;
        let residual = compose(&map, &nc)?.transfer().dist(tn);
        Side::Certified { map: Box::new(map), residual }
    } else {
        Side::Refuted { witness: format!("J_D has eigenvalue {lmin:.6e} (corner entry {corner:.6e})") }
    };
    let mut cert = Certificate::new(deg, anti);
    cert.min_eigenvalue = Some(lmin);
    cert.choi = Some(j);
    Ok(cert)
}

/// Parse `"ad:γ"`, `"platypus:s,t"`, `"erasure:d,λ"`, `"flagged_ad:p,γ,η"`,
/// `"dephasing:α"`, `"gao:α"` or `"mad:γ0,γ1"`.
pub fn parse_family(spec: &str) -> Result<Channel> {
    let (name, args) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("'{spec}': expected name:args")))?;
    let vals: Vec<f64> = args
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{a}': {e}"))))
        .collect::<Result<_>>()?;
    let want = |n: usize| -> Result<()> {
        if vals.len() != n {
            return Err(Error::Parse(format!("{name} takes {n} parameter(s), got {}", vals.len())));
        }
        Ok(())
    };
    match name.trim() {
        "ad" => {
            want(1)?;
            amplitude_damping(vals[0])
        }
        "platypus" => {
            want(2)?;
            platypus(vals[0], vals[1])
        }
        "erasure" => {
            want(2)?;
            if vals[0].fract() != 0.0 || vals[0] < 0.0 {
                return Err(Error::Parse("erasure dimension must be a positive integer".into()));
            }
            erasure(vals[0] as usize, vals[1])
        }
        "flagged_ad" => {
            want(3)?;
            flagged_ad(vals[0], vals[1], vals[2])
        }
        "dephasing" => {
            want(1)?;
            dephasing(vals[0])
        }
        "gao" => {
            want(1)?;
            gao_channel(vals[0])
        }
        "mad" => {
            want(2)?;
            mad_channel(vals[0], vals[1])
        }
        other => Err(Error::Parse(format!("unknown family '{other}'"))),
    }
}
