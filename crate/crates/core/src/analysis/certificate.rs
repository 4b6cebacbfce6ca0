//! Degradability certificates.

use serde::Serialize;

use super::sdp::{max_min_eigenvalue, AffineBlocks, SdpOutcome};
use crate::channels::{compose, involution, Channel, SuperOperator};
use crate::numkernel::{condition_number, inverse, null_space, psd_check, reduce, CMatrix};

/// PSD and trace-preservation tolerance for candidate maps.
pub const CERT_TOL: f64 = 1e-8;
/// Largest Choi dimension handed to the feasibility solver.
pub const SDP_MAX_CHOI: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Degradable,
    AntiDegradable,
    /// Both directions certified.
    Symmetric,
    Neither,
    Indeterminate,
}

impl Verdict {
    pub fn is_degradable(self) -> bool {
        matches!(self, Verdict::Degradable | Verdict::Symmetric)
    }

    pub fn is_antidegradable(self) -> bool {
        matches!(self, Verdict::AntiDegradable | Verdict::Symmetric)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Degradable => "Degradable",
            Verdict::AntiDegradable => "AntiDegradable",
            Verdict::Symmetric => "Symmetric",
            Verdict::Neither => "Neither",
            Verdict::Indeterminate => "Indeterminate",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome for one direction (degrading or anti-degrading map).
#[derive(Clone, Debug)]
pub enum Side {
    Certified { map: Box<Channel>, residual: f64 },
    Refuted { witness: String },
    Unknown { reason: String },
}

impl Side {
    pub fn is_certified(&self) -> bool {
        matches!(self, Side::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Side::Refuted { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            Side::Certified { residual, .. } => format!("certified (residual {residual:.3e})"),
            Side::Refuted { witness } => format!("refuted: {witness}"),
            Side::Unknown { reason } => format!("unknown: {reason}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    pub degradable: Side,
    pub antidegradable: Side,
    /// Smallest Choi eigenvalue of the candidate map, when one was formed.
    pub min_eigenvalue: Option<f64>,
    pub choi: Option<CMatrix>,
}

impl Certificate {
    pub fn new(degradable: Side, antidegradable: Side) -> Self {
        let verdict = match (&degradable, &antidegradable) {
            (d, a) if d.is_certified() && a.is_certified() => Verdict::Symmetric,
            (d, _) if d.is_certified() => Verdict::Degradable,
            (_, a) if a.is_certified() => Verdict::AntiDegradable,
            (d, a) if d.is_refuted() && a.is_refuted() => Verdict::Neither,
            _ => Verdict::Indeterminate,
        };
        Self { verdict, degradable, antidegradable, min_eigenvalue: None, choi: None }
    }

    /// The degrading map (or anti-degrading map) carried by the certificate.
    pub fn map(&self) -> Option<&Channel> {
        match (&self.degradable, &self.antidegradable) {
            (Side::Certified { map, .. }, _) | (_, Side::Certified { map, .. }) => Some(map),
            _ => None,
        }
    }

    pub fn residual(&self) -> f64 {
        match (&self.degradable, &self.antidegradable) {
            (Side::Certified { residual, .. }, _) | (_, Side::Certified { residual, .. }) => *residual,
            _ => f64::NAN,
        }
    }

    pub fn witness(&self) -> Option<String> {
        let mut w = Vec::new();
        for (name, s) in [("degradable", &self.degradable), ("anti-degradable", &self.antidegradable)] {
            match s {
                Side::Refuted { witness } => w.push(format!("{name}: {witness}")),
                Side::Unknown { reason } => w.push(format!("{name}: {reason}")),
                Side::Certified { .. } => {}
            }
        }
        (!w.is_empty()).then(|| w.join("; "))
    }
}

fn certify_candidate(td: SuperOperator, src: &Channel, dst: &Channel) -> (Side, f64) {
    let lmin = td.choi_min_eigenvalue();
    let tp = td.tp_deviation();
    if lmin >= -CERT_TOL && tp <= CERT_TOL {
        match td.to_channel(CERT_TOL) {
            Ok(map) => {
                let residual = compose(&map, src).map(|c| c.transfer().dist(dst.transfer())).unwrap_or(f64::INFINITY);
                (Side::Certified { map: Box::new(map), residual }, lmin)
            }
            Err(e) => (Side::Unknown { reason: format!("candidate map rejected: {e}") }, lmin),
        }
    } else if tp > CERT_TOL {
        (Side::Refuted { witness: format!("unique candidate is not trace preserving ({tp:.3e})") }, lmin)
    } else {
        (Side::Refuted { witness: format!("unique candidate has Choi eigenvalue {lmin:.6e}") }, lmin)
    }
}

/// Kernel obstruction: `T_dst = T_D T_src` forces `ker T_src ⊆ ker T_dst`.
fn kernel_witness(t_src: &CMatrix, t_dst: &CMatrix) -> Option<String> {
    let ns = null_space(t_src, 1e-10);
    if ns.cols() == 0 {
        return None;
    }
    let img = t_dst * &ns;
    let worst = img.max_abs();
    (worst > 1e-8).then(|| format!("ker T_src not contained in ker T_dst (|T_dst v| = {worst:.3e})"))
}

/// Search for a CPTP `D` with `D ∘ src = dst`.
pub fn find_map(src: &Channel, dst: &Channel) -> (Side, Option<f64>) {
    if src.d_in() != dst.d_in() {
        return (Side::Refuted { witness: "input dimensions differ".into() }, None);
    }
    let (ts, td) = (src.transfer(), dst.transfer());
    if ts.is_square() && condition_number(ts) < 1e8 {
        let inv = match inverse(ts) {
            Ok(i) => i,
            Err(e) => return (Side::Unknown { reason: e.to_string() }, None),
        };
        let cand = SuperOperator::from_transfer(td * &inv, src.d_out(), dst.d_out()).expect("dims");
        let (side, l) = certify_candidate(cand, src, dst);
        return (side, Some(l));
    }
    if let Some(w) = kernel_witness(ts, td) {
        return (Side::Refuted { witness: w }, None);
    }
    if let (Some(fs), Some(fd)) = (src.flags(), dst.flags()) {
        if fs.probs.len() == fd.probs.len() && fs.branches.len() == fd.branches.len() {
            return flagged_feasibility(src, dst);
        }
    }
    if src.d_out() * dst.d_out() <= SDP_MAX_CHOI {
        return full_feasibility(src, dst);
    }
    (Side::Unknown { reason: "transfer matrix not invertible and map too large for feasibility search".into() }, None)
}

fn sdp_side(
    outcome: SdpOutcome,
    build: impl FnOnce(&[CMatrix]) -> Option<SuperOperator>,
    src: &Channel,
    dst: &Channel,
) -> (Side, Option<f64>) {
    match outcome {
        SdpOutcome::Inconsistent { residual } => {
            (Side::Refuted { witness: format!("linear constraints inconsistent (misfit {residual:.3e})") }, None)
        }
        SdpOutcome::Solved { t, t_upper, blocks, .. } => {
            if t >= -CERT_TOL {
                match build(&blocks).map(|s| certify_candidate(s, src, dst)) {
                    Some((side, l)) => (side, Some(l)),
                    None => (Side::Unknown { reason: "could not assemble map".into() }, Some(t)),
                }
            } else if t_upper < -1e-6 {
                (Side::Refuted { witness: format!("no PSD solution: max min-eigenvalue <= {t_upper:.3e}") }, Some(t))
            } else {
                (Side::Unknown { reason: format!("feasibility undecided (t in [{t:.3e}, {t_upper:.3e}])") }, Some(t))
            }
        }
    }
}

fn full_feasibility(src: &Channel, dst: &Channel) -> (Side, Option<f64>) {
    let (db, de) = (src.d_out(), dst.d_out());
    let mut sys = AffineBlocks::new(vec![db * de]);
    let ts = src.transfer().clone();
    sys.add_matrix_constraint(|_, h| Some(&involution(h, db, de).expect("dims") * &ts), dst.transfer());
    sys.add_matrix_constraint(|_, h| Some(reduce(h, &[db, de], &[0]).expect("dims")), &CMatrix::identity(db));
    let out = max_min_eigenvalue(&sys, 0.0);
    sdp_side(out, |bl| SuperOperator::from_choi(&bl[0], db, de).ok(), src, dst)
}

/// Block reduction for flagged channels: `D = Σ_{ji} |j⟩⟨j| ⊗ D_ji(⟨i|·|i⟩)`.
fn flagged_feasibility(src: &Channel, dst: &Channel) -> (Side, Option<f64>) {
    let (fs, fd) = (src.flags().unwrap(), dst.flags().unwrap());
    let nf = fs.probs.len();
    let (bo, eo) = (fs.block_out, fd.block_out);
    let mut sys = AffineBlocks::new(vec![bo * eo; nf * nf]);
    let block = |j: usize, i: usize| j * nf + i;
    for j in 0..nf {
        let target = fd.branches[j].transfer().scale_real(fd.probs[j]);
        let ts: Vec<CMatrix> = fs.branches.iter().zip(&fs.probs).map(|(b, p)| b.transfer().scale_real(*p)).collect();
        sys.add_matrix_constraint(
            |k, h| {
                let (jj, i) = (k / nf, k % nf);
                (jj == j).then(|| &involution(h, bo, eo).expect("dims") * &ts[i])
            },
            &target,
        );
    }
    for i in 0..nf {
        sys.add_matrix_constraint(
            |k, h| (k % nf == i).then(|| reduce(h, &[bo, eo], &[0]).expect("dims")),
            &CMatrix::identity(bo),
        );
    }
    let out = max_min_eigenvalue(&sys, 0.0);
    let build = |bl: &[CMatrix]| -> Option<SuperOperator> {
        let mut acc = SuperOperator::zero(nf * bo, nf * eo);
        for j in 0..nf {
            for i in 0..nf {
                let d = SuperOperator::from_choi(&bl[block(j, i)], bo, eo).ok()?;
                let sw = crate::channels::switch_channel(j, i, nf).ok()?;
                acc = acc.add(&sw.tensor(&d)).ok()?;
            }
        }
        Some(acc)
    };
    sdp_side(out, build, src, dst)
}

/// Generic degradability test in both directions.
pub fn degradability_certificate(n: &Channel) -> Certificate {
    let nc = n.complement();
    let (deg, l1) = find_map(n, &nc);
    let (anti, l2) = find_map(&nc, n);
    let mut cert = Certificate::new(deg, anti);
    cert.min_eigenvalue = match (l1, l2) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    cert
}

/// Whether `j` is PSD within [`CERT_TOL`].
pub fn choi_is_psd(j: &CMatrix) -> bool {
    psd_check(j, CERT_TOL).map(|(ok, _)| ok).unwrap_or(false)
}
