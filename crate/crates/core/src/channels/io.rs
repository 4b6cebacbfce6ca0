//! JSON channel files: `{"kind", "dims", "entries"}` with row-major `[re, im]` pairs.
//!
//! `isometry` files use `dims = [d_A, d_B, d_E]` and one `(d_B·d_E) × d_A` matrix.
//! `kraus` files use `dims = [d_A, d_B, k]` and `k` stacked `d_B × d_A` matrices.

use serde::{Deserialize, Serialize};

use super::{Channel, Isometry};
use crate::numkernel::{c, CMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Isometry,
    Kraus,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub kind: ChannelKind,
    pub dims: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
}

impl ChannelFile {
    pub fn from_channel(n: &Channel) -> Self {
        let v = n.isometry();
        Self {
            kind: ChannelKind::Isometry,
            dims: vec![v.d_a(), v.d_b(), v.d_e()],
            entries: v.matrix().data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<Channel> {
        let [d_a, d_b, third] = <[usize; 3]>::try_from(self.dims.as_slice())
            .map_err(|_| Error::Parse("dims must have three entries".into()))?;
        let data: Vec<_> = self.entries.iter().map(|[re, im]| c(*re, *im)).collect();
        match self.kind {
            ChannelKind::Isometry => {
                let m = CMatrix::from_vec(d_b * third, d_a, data)?;
                Ok(Channel::from_isometry(Isometry::new(m, d_b, third)?))
            }
            ChannelKind::Kraus => {
                let per = d_b * d_a;
                if data.len() != per * third {
                    return Err(Error::Parse(format!("expected {} entries, found {}", per * third, data.len())));
                }
                let ops =
                    data.chunks(per).map(|ch| CMatrix::from_vec(d_b, d_a, ch.to_vec())).collect::<Result<Vec<_>>>()?;
                Channel::from_kraus(ops)
            }
        }
    }
}

pub fn parse_channel(json: &str) -> Result<Channel> {
    let f: ChannelFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    f.to_channel()
}

pub fn channel_to_json(n: &Channel) -> String {
    serde_json::to_string(&ChannelFile::from_channel(n)).expect("plain data serializes")
}

pub fn read_channel(path: &std::path::Path) -> Result<Channel> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_channel(&s)
}
