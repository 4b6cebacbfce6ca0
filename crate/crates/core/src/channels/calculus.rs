use std::sync::Arc;

use super::channel::{Channel, FlagLayout};
use super::isometry::Isometry;
use super::superop::SuperOperator;
use crate::numkernel::{kron, CMatrix};
use crate::{Error, Result};

/// `N₂ ∘ N₁`. Large Kraus products are compressed through the Choi operator.
pub fn compose(n2: &Channel, n1: &Channel) -> Result<Channel> {
    if n1.d_out() != n2.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "composition: first maps to {}, second expects {}",
            n1.d_out(),
            n2.d_in()
        )));
    }
    let mut ops = Vec::with_capacity(n1.kraus().len() * n2.kraus().len());
    for b in n2.kraus() {
        for a in n1.kraus() {
            ops.push(b * a);
        }
    }
    if ops.len() > n1.d_in() * n2.d_out() {
        let s = n2.superop().compose(&n1.superop())?;
        return s.to_channel(super::isometry::TP_TOL);
    }
    Channel::from_kraus(ops)
}

/// `N_1 ∘ N_2 ∘ … ∘ N_k`; the last entry acts first.
pub fn compose_all(chain: &[&Channel]) -> Result<Channel> {
    let (last, rest) = chain.split_last().ok_or_else(|| Error::InvalidParameter("empty chain".into()))?;
    let mut acc = (*last).clone();
    for n in rest.iter().rev() {
        acc = compose(n, &acc)?;
    }
    Ok(acc)
}

/// `N₁ ⊗ N₂` with output `B₁B₂` and environment `E₁E₂`.
pub fn tensor(n1: &Channel, n2: &Channel) -> Channel {
    let (v1, v2) = (n1.isometry(), n2.isometry());
    let joint = kron(v1.matrix(), v2.matrix());
    let m = crate::numkernel::ops::permute_rows(&joint, &[v1.d_b(), v1.d_e(), v2.d_b(), v2.d_e()], &[0, 2, 1, 3])
        .expect("row dims factor");
    Channel::from_isometry(Isometry::new(m, v1.d_b() * v2.d_b(), v1.d_e() * v2.d_e()).expect("product of isometries"))
}

/// Block-diagonal action `⊕ Φ_k`; off-diagonal input blocks are annihilated.
pub fn direct_sum(channels: &[&Channel]) -> Result<Channel> {
    if channels.is_empty() {
        return Err(Error::InvalidParameter("direct sum of an empty list".into()));
    }
    let d_in: usize = channels.iter().map(|c| c.d_in()).sum();
    let d_out: usize = channels.iter().map(|c| c.d_out()).sum();
    let mut ops = Vec::new();
    let (mut oi, mut oo) = (0, 0);
    for ch in channels {
        for k in ch.kraus() {
            let mut e = CMatrix::zeros(d_out, d_in);
            for b in 0..ch.d_out() {
                for a in 0..ch.d_in() {
                    e[(oo + b, oi + a)] = k[(b, a)];
                }
            }
            ops.push(e);
        }
        oi += ch.d_in();
        oo += ch.d_out();
    }
    Channel::from_kraus(ops)
}

fn pad_isometry(v: &Isometry, d_b: usize, d_e: usize) -> Isometry {
    let m = CMatrix::from_fn(d_b * d_e, v.d_a(), |row, a| {
        let (b, e) = (row / d_e, row % d_e);
        if b < v.d_b() && e < v.d_e() {
            v.matrix()[(b * v.d_e() + e, a)]
        } else {
            crate::numkernel::ZERO
        }
    });
    Isometry::new(m, d_b, d_e).expect("zero padding keeps isometry")
}

/// `Σ p_i |i⟩⟨i| ⊗ N_i`, with the flag copied to the environment.
pub fn flagged(ps: &[f64], channels: &[&Channel]) -> Result<Channel> {
    if ps.len() != channels.len() || ps.is_empty() {
        return Err(Error::InvalidParameter("flagged: need one probability per channel".into()));
    }
    if ps.iter().any(|&p| p.is_nan() || p < 0.0) || (ps.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("flag probabilities {ps:?} are not a distribution")));
    }
    let d_a = channels[0].d_in();
    if channels.iter().any(|c| c.d_in() != d_a) {
        return Err(Error::DimensionMismatch("flagged channels must share the input".into()));
    }
    let nf = ps.len();
    let d_b = channels.iter().map(|c| c.d_out()).max().unwrap();
    let d_e = channels.iter().map(|c| c.d_env()).max().unwrap();
    let padded: Vec<Isometry> = channels.iter().map(|c| pad_isometry(c.isometry(), d_b, d_e)).collect();
    let rows_out = nf * d_b;
    let rows_env = nf * d_e;
    let mut m = CMatrix::zeros(rows_out * rows_env, d_a);
    for (i, (v, &p)) in padded.iter().zip(ps).enumerate() {
        let w = p.sqrt();
        for b in 0..d_b {
            for e in 0..d_e {
                let row = (i * d_b + b) * rows_env + (i * d_e + e);
                for a in 0..d_a {
                    m[(row, a)] = v.matrix()[(b * d_e + e, a)] * w;
                }
            }
        }
    }
    let iso = Isometry::new(m, rows_out, rows_env)?;
    let layout = FlagLayout {
        probs: ps.to_vec(),
        block_out: d_b,
        block_env: d_e,
        branches: padded.into_iter().map(|v| Arc::new(Channel::from_isometry(v))).collect(),
    };
    Ok(Channel::from_isometry(iso).with_flags(layout))
}

/// `S_ij(ρ) = ⟨j|ρ|j⟩ |i⟩⟨i|` on a `d_f`-dimensional flag.
pub fn switch_channel(i: usize, j: usize, d_f: usize) -> Result<SuperOperator> {
    if i >= d_f || j >= d_f {
        return Err(Error::InvalidParameter(format!("switch indices ({i},{j}) outside flag of dimension {d_f}")));
    }
    SuperOperator::from_kraus(&[CMatrix::unit(d_f, i, j)])
}
