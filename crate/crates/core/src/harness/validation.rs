//! Machine-readable validation suites.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::SirCdf;
use crate::beamforming::random_orthonormal_beams_from;
use crate::channel::{ChannelMatrix, NoiseProfile, RngStream};
use crate::combining::{CombinerKind, EffectiveChannel};
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::harness::ecdf::Ecdf;
use crate::harness::figures::point_seed;
use crate::harness::sampling::sample_max_sir;
use crate::scheduling::{monte_carlo_paired, Policy};

/// Random combining vectors tried per draw by the ordering suite.
pub const WEIGHTS_PER_DRAW: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Cdf,
    Ordering,
    Throughput,
    Baseline,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Cdf,
        Suite::Ordering,
        Suite::Throughput,
        Suite::Baseline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Cdf => "cdf",
            Suite::Ordering => "ordering",
            Suite::Throughput => "throughput",
            Suite::Baseline => "baseline",
        }
    }

    /// Trials (or samples) the suite uses when none are requested.
    pub fn default_trials(self) -> usize {
        match self {
            Suite::Cdf => 100_000,
            Suite::Ordering | Suite::Throughput | Suite::Baseline => 10_000,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown validation suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    /// How `measured` is compared with `threshold`, e.g. `"<"` or `">="`.
    pub comparison: &'static str,
    pub passed: bool,
}

impl Check {
    fn below(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            comparison: "<",
            passed: measured < threshold,
        }
    }

    fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            comparison: ">=",
            passed: measured >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub m: usize,
    pub n: usize,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs `suite` with the dimensions, trial count and seed of `cfg`.
pub fn run_validation(suite: Suite, cfg: &SimConfig) -> Result<ValidationReport> {
    let checks = match suite {
        Suite::Cdf => cdf_suite(cfg)?,
        Suite::Ordering => ordering_suite(cfg)?,
        Suite::Throughput => throughput_suite(cfg)?,
        Suite::Baseline => baseline_suite(cfg)?,
    };
    Ok(ValidationReport {
        suite: suite.to_string(),
        seed: cfg.master_seed,
        trials: cfg.trials,
        m: cfg.m,
        n: cfg.n,
        checks,
    })
}

fn cdf_suite(cfg: &SimConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, c) in CombinerKind::ALL.into_iter().enumerate() {
        let base = SirCdf::new(
            c,
            cfg.m,
            if c == CombinerKind::Measured {
                1
            } else {
                cfg.n
            },
        )?;
        let seed = point_seed(cfg.master_seed, &[0xcdf, i as u64, 1]);
        let (xs, _) = sample_max_sir(c, cfg.m, cfg.n, 1, cfg.trials, seed)?;
        let d = Ecdf::new(xs)?.ks_distance(|x| base.eval(x))?;
        checks.push(Check::below(format!("ks_{c}"), d, 0.01));
    }
    let base = SirCdf::new(CombinerKind::Oc, cfg.m, cfg.n)?;
    let seed = point_seed(cfg.master_seed, &[0xcdf, 3, 5]);
    let (xs, _) = sample_max_sir(CombinerKind::Oc, cfg.m, cfg.n, 5, cfg.trials, seed)?;
    let d = Ecdf::new(xs)?.ks_distance(|x| base.max_cdf(5, x))?;
    checks.push(Check::below("ks_oc_max_of_5", d, 0.015));
    Ok(checks)
}

/// Largest amount by which another combiner beats OC on any beam of one
/// draw, as `(best of MRC and SC, best random weight vector)`. Negative
/// when OC wins everywhere.
pub fn ordering_violation(g: &EffectiveChannel, weights: &[Vec<Complex64>]) -> Result<(f64, f64)> {
    let (mut fixed, mut random) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for beam in 0..g.m() {
        let oc = g.oc(beam)?;
        fixed = fixed.max(g.mrc(beam)?.max(g.sc(beam)?) - oc);
        for w in weights {
            random = random.max(g.generic(w, beam)? - oc);
        }
    }
    Ok((fixed, random))
}

fn ordering_suite(cfg: &SimConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, sigma2) in [0.0, 1.0].into_iter().enumerate() {
        if sigma2 == 0.0 && cfg.m <= cfg.n {
            continue;
        }
        let seed = point_seed(cfg.master_seed, &[0x0bde, i as u64]);
        let per_draw: Vec<Result<(f64, f64)>> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngStream::new(seed, t).rng();
                let a = random_orthonormal_beams_from(cfg.m, &mut rng, cfg.per_beam_power())?;
                let h = ChannelMatrix::sample(0, cfg.n, cfg.m, &mut rng)?;
                let weights: Vec<Vec<Complex64>> = (0..WEIGHTS_PER_DRAW)
                    .map(|_| {
                        (0..cfg.n)
                            .map(|_| {
                                Complex64::new(
                                    StandardNormal.sample(&mut rng),
                                    StandardNormal.sample(&mut rng),
                                )
                            })
                            .collect()
                    })
                    .collect();
                ordering_violation(&EffectiveChannel::new(&h, &a, sigma2)?, &weights)
            })
            .collect();
        let (mut fixed, mut random, mut skipped) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0usize);
        for r in per_draw {
            match r {
                Ok((f, w)) => {
                    fixed = fixed.max(f);
                    random = random.max(w);
                }
                Err(Error::DegenerateDraw(_)) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        if skipped > 0 {
            log::info!("ordering suite skipped {skipped} degenerate draws at sigma2 = {sigma2}");
        }
        checks.push(Check::below(
            format!("oc_minus_best_of_mrc_sc_sigma2_{sigma2}"),
            fixed,
            1e-9,
        ));
        checks.push(Check::below(
            format!("oc_minus_random_weights_sigma2_{sigma2}"),
            random,
            1e-9,
        ));
    }
    Ok(checks)
}

/// `mean(a - w b) - 3 se`, the lower 3-SE bound on the paired contrast.
fn lower_bound(run: &crate::scheduling::PairedRun, a: usize, b: usize, w: f64) -> f64 {
    let (mean, se) = run.contrast(a, b, w);
    mean - 3.0 * se
}

fn throughput_suite(cfg: &SimConfig) -> Result<Vec<Check>> {
    let policies = [
        Policy::Proposed(CombinerKind::Oc),
        Policy::Proposed(CombinerKind::Mrc),
        Policy::Proposed(CombinerKind::Sc),
    ];
    let mut c = cfg.clone();
    c.combiner = CombinerKind::Oc;
    let run = monte_carlo_paired(&c, &policies)?;
    Ok(vec![
        Check::at_least(
            "oc_minus_1.15_sc_lower_3se",
            lower_bound(&run, 0, 2, 1.15),
            0.0,
        ),
        Check::at_least(
            "oc_minus_1.05_mrc_lower_3se",
            lower_bound(&run, 0, 1, 1.05),
            0.0,
        ),
    ])
}

fn baseline_suite(cfg: &SimConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for k in [5usize, 50] {
        let mut c = cfg.clone();
        c.k = k;
        c.noise = NoiseProfile::uniform(k, cfg.noise.variance(0))?;
        c.combiner = CombinerKind::Sc;
        c.master_seed = point_seed(cfg.master_seed, &[0xba5e, k as u64]);
        let run = monte_carlo_paired(
            &c,
            &[Policy::Proposed(CombinerKind::Sc), Policy::ShBaseline],
        )?;
        let min_gap = run.rates[0]
            .iter()
            .zip(&run.rates[1])
            .map(|(s, b)| s - b)
            .fold(f64::INFINITY, f64::min);
        let differing = run.rates[0]
            .iter()
            .zip(&run.rates[1])
            .filter(|(s, b)| s != b)
            .count();
        log::info!(
            "K = {k}: baseline differs from SC in {differing} of {} trials",
            run.rates[0].len()
        );
        checks.push(Check::at_least(
            format!("sc_minus_baseline_lower_3se_K{k}"),
            lower_bound(&run, 0, 1, 1.0),
            0.0,
        ));
        checks.push(Check::at_least(
            format!("sc_minus_baseline_min_per_trial_K{k}"),
            min_gap,
            -1e-12,
        ));
    }
    Ok(checks)
}
