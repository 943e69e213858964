//! Experiment plumbing: empirical CDFs, SIR samplers, figure CSVs and
//! validation suites.

pub mod ecdf;
pub mod figures;
pub mod sampling;
pub mod validation;

pub use ecdf::{ks_two_sample, Ecdf, MIN_KS_SAMPLES};
pub use figures::{plot_script, point_seed, render_figure, run_figure, FigureData, Overrides};
pub use sampling::sample_max_sir;
pub use validation::{
    ordering_violation, run_validation, Check, Suite, ValidationReport, WEIGHTS_PER_DRAW,
};
