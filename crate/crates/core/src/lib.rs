//! Opportunistic space-division multiple access with multi-antenna
//! receivers.
//!
//! A base station with `M` antennas transmits on `M` random orthonormal
//! beams. Each of `K` users combines its `N` receive antennas (selection,
//! maximum-ratio or optimum combining), feeds back one SINR per beam, and
//! every beam is awarded to the user reporting the largest value.
//!
//! - [`channel`], [`beamforming`]: Rayleigh channels, Haar beams, RNG streams.
//! - [`combining`]: per-beam SINRs for each combiner.
//! - [`scheduling`]: beam award, sum rate, the per-antenna baseline and
//!   reproducible Monte Carlo throughput.
//! - [`analytics`]: closed-form SIR CDFs, Fréchet limits, throughput
//!   integrals and scaling laws.
//! - [`harness`]: figure CSVs and validation suites behind the `osdma` CLI.

// `!(x > 0.0)` and friends are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod beamforming;
pub mod channel;
pub mod combining;
pub mod config;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod scheduling;

pub use analytics::{
    asymptotic_throughput, cdf_max, cdf_measured, cdf_mrc, cdf_oc, cdf_sc, characteristic_extreme,
    exact_throughput, frechet_cdf, scaling_law, sh_baseline_cdf, FrechetApprox, SirCdf,
};
pub use beamforming::{identity_beams, random_orthonormal_beams, BeamMatrix};
pub use channel::{sample_channels, ChannelMatrix, NoiseProfile, RngStream};
pub use combining::{CombinerKind, EffectiveChannel, FeedbackTable};
pub use config::{SchedulerKind, SimConfig};
pub use error::{Error, Result};
pub use scheduling::{
    monte_carlo_paired, monte_carlo_throughput, schedule, sum_rate, BeamAssignment, Policy,
    ThroughputStats,
};
