//! Channel representations and calculus.

mod calculus;
mod channel;
pub mod io;
mod isometry;
mod petz;
mod superop;

pub use calculus::{compose, compose_all, direct_sum, flagged, switch_channel, tensor};
pub use channel::{channel_from_isometry, Channel, Family, FlagLayout};
pub use isometry::{Isometry, ISOMETRY_TOL, TP_TOL};
pub use petz::{petz_recovery, PetzRecovery};
pub use superop::{involution, involution_inv, link_product_compose, SuperOperator};

use crate::numkernel::CMatrix;

/// `choi_of(N)`.
pub fn choi_of(n: &Channel) -> &CMatrix {
    n.choi()
}

/// `transfer_of(N)`.
pub fn transfer_of(n: &Channel) -> &CMatrix {
    n.transfer()
}

/// Largest deviation between two maps over all matrix units.
pub fn action_distance(a: &SuperOperator, b: &SuperOperator) -> f64 {
    a.dist(b)
}
