//! Optimizers, certificates and estimators built on the channel calculus.

pub mod capacity;
pub mod certificate;
pub mod fixed_point;
pub mod optimize;
pub mod ratio;
pub mod sdp;
pub mod simulation;
pub mod singularity;

pub use capacity::{q1, q1_platypus_restricted, Argmax, OptimizationReport, Strategy};
pub use certificate::{degradability_certificate, Certificate, Side, Verdict};
pub use fixed_point::{recovered_ad_channel, unique_fixed_point_check, FixedPointReport};
pub use ratio::{contraction_coefficients, mi_ratio_r3, mi_ratio_r4, RatioOptions};
pub use simulation::{simulation_additivity_check, smith_yard_state};
pub use singularity::{epsilon_scaling_mi, log_singularity_rate, platypus_amplification, RateEstimate};
