//! Beam award, per-slot sum rate, the per-antenna baseline and the Monte
//! Carlo throughput estimator.
//!
//! Trials are independent: trial `t` draws its beams and then its channels
//! from `RngStream { master_seed, stream_id: t }`. Per-trial rates are
//! collected in trial order and reduced serially with compensated
//! summation, so a run is bitwise reproducible for any thread count.

use rayon::prelude::*;

use crate::beamforming::{random_orthonormal_beams_from, BeamMatrix};
use crate::channel::{sample_channels_from, ChannelMatrix, NoiseProfile, RngStream};
use crate::combining::{AntennaBeamReport, CombinerKind, EffectiveChannel, FeedbackTable};
use crate::config::{SchedulerKind, SimConfig};
use crate::error::{Error, Result};
use crate::numerics::compensated_sum;

/// Outcome for one beam in one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGrant {
    /// `None` only under the baseline, when nobody requested the beam.
    pub winner: Option<usize>,
    /// `γ*_m`; zero for an unassigned beam.
    pub sinr: f64,
    /// Number of antenna reports naming this beam (baseline only).
    pub requests: Option<usize>,
}

/// Per-beam winners for one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamAssignment {
    pub beams: Vec<BeamGrant>,
}

impl BeamAssignment {
    pub fn unassigned(&self) -> usize {
        self.beams.iter().filter(|b| b.winner.is_none()).count()
    }

    pub fn winners(&self) -> Vec<Option<usize>> {
        self.beams.iter().map(|b| b.winner).collect()
    }
}

/// Awards each beam to the user reporting the largest SINR on it. Ties go
/// to the lowest user index; a user may win several beams.
pub fn schedule(tables: &[FeedbackTable]) -> Result<BeamAssignment> {
    let first = tables.first().ok_or(Error::Empty("feedback tables"))?;
    let m = first.sinr.len();
    if m == 0 {
        return Err(Error::Empty("feedback table has no beams"));
    }
    if let Some(t) = tables
        .iter()
        .find(|t| t.sinr.len() != m || t.combiner != first.combiner)
    {
        return Err(Error::InvalidConfig(format!(
            "user {} reports {} beams with {} (expected {m} with {})",
            t.user_index,
            t.sinr.len(),
            t.combiner,
            first.combiner
        )));
    }
    let beams = (0..m)
        .map(|beam| {
            let mut best = first;
            for t in &tables[1..] {
                if t.sinr[beam] > best.sinr[beam] {
                    best = t;
                }
            }
            BeamGrant {
                winner: Some(best.user_index),
                sinr: best.sinr[beam],
                requests: None,
            }
        })
        .collect();
    Ok(BeamAssignment { beams })
}

/// `Σ_m log2(1 + γ*_m)` in bits/s/Hz; unassigned beams add nothing.
pub fn sum_rate(assignment: &BeamAssignment) -> f64 {
    assignment
        .beams
        .iter()
        .filter(|b| b.winner.is_some())
        .map(|b| b.sinr.ln_1p() / std::f64::consts::LN_2)
        .sum()
}

/// Baseline award from per-antenna reports: each beam goes to the report
/// naming it with the highest SINR, mapped back to that report's user.
pub fn schedule_antenna_reports(reports: &[AntennaBeamReport], m: usize) -> BeamAssignment {
    let mut beams = vec![
        BeamGrant {
            winner: None,
            sinr: 0.0,
            requests: Some(0),
        };
        m
    ];
    for r in reports {
        let slot = &mut beams[r.best_beam_index];
        *slot.requests.get_or_insert(0) += 1;
        if slot.winner.is_none() || r.best_sinr > slot.sinr {
            slot.winner = Some(r.user_index);
            slot.sinr = r.best_sinr;
        }
    }
    BeamAssignment { beams }
}

/// Per-antenna baseline: every receive antenna acts as a separate user and
/// feeds back only its best beam.
pub fn sh_baseline_schedule(
    channels: &[ChannelMatrix],
    a: &BeamMatrix,
    noise: &NoiseProfile,
) -> Result<BeamAssignment> {
    if channels.is_empty() {
        return Err(Error::Empty("channels"));
    }
    if noise.len() != channels.len() {
        return Err(Error::InvalidConfig(format!(
            "{} noise variances for {} users",
            noise.len(),
            channels.len()
        )));
    }
    let mut reports = Vec::new();
    for (k, h) in channels.iter().enumerate() {
        reports.extend(EffectiveChannel::new(h, a, noise.variance(k))?.antenna_reports()?);
    }
    Ok(schedule_antenna_reports(&reports, a.m()))
}

/// A scheduling rule evaluated inside a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    Proposed(CombinerKind),
    ShBaseline,
}

impl Policy {
    pub fn from_config(cfg: &SimConfig) -> Self {
        match cfg.scheduler {
            SchedulerKind::Proposed => Policy::Proposed(cfg.combiner),
            SchedulerKind::ShBaseline => Policy::ShBaseline,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Policy::Proposed(c) => c.to_string(),
            Policy::ShBaseline => "sh-baseline".into(),
        }
    }
}

/// Empirical throughput over many slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputStats {
    /// Trials that entered the average.
    pub trials: usize,
    pub mean_sum_rate: f64,
    pub std_error: f64,
    pub discarded_trials: usize,
    /// Mean `γ*_m` per beam (unassigned beams count as zero).
    pub per_beam_mean_sinr: Vec<f64>,
    /// Total beam-slots left unassigned (baseline only).
    pub unassigned_beams: usize,
}

/// Several policies evaluated on the same channel and beam draws.
#[derive(Debug, Clone)]
pub struct PairedRun {
    pub policies: Vec<Policy>,
    pub stats: Vec<ThroughputStats>,
    /// `rates[p][t]`: sum rate of policy `p` in the `t`-th kept trial.
    pub rates: Vec<Vec<f64>>,
}

impl PairedRun {
    /// Mean and standard error of `rate[a] - weight * rate[b]` over paired
    /// trials.
    pub fn contrast(&self, a: usize, b: usize, weight: f64) -> (f64, f64) {
        let diffs: Vec<f64> = self.rates[a]
            .iter()
            .zip(&self.rates[b])
            .map(|(x, y)| x - weight * y)
            .collect();
        mean_and_se(&diffs)
    }

    pub fn stats_for(&self, policy: Policy) -> Option<&ThroughputStats> {
        self.policies
            .iter()
            .position(|p| *p == policy)
            .map(|i| &self.stats[i])
    }
}

/// Sample mean and standard error (sample std over `sqrt(n)`).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = compensated_sum(values.iter().copied()) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

struct TrialOutcome {
    rates: Vec<f64>,
    winner_sinr: Vec<Vec<f64>>,
    unassigned: Vec<usize>,
}

fn run_trial(cfg: &SimConfig, policies: &[Policy], trial: u64) -> Result<TrialOutcome> {
    let mut rng = RngStream::new(cfg.master_seed, trial).rng();
    let a = random_orthonormal_beams_from(cfg.m, &mut rng, cfg.per_beam_power())?;
    let channels = sample_channels_from(cfg.k, cfg.m, cfg.n, &mut rng)?;
    let effective = channels
        .iter()
        .enumerate()
        .map(|(k, h)| EffectiveChannel::new(h, &a, cfg.noise.variance(k)))
        .collect::<Result<Vec<_>>>()?;

    let mut out = TrialOutcome {
        rates: Vec::with_capacity(policies.len()),
        winner_sinr: Vec::with_capacity(policies.len()),
        unassigned: Vec::with_capacity(policies.len()),
    };
    for policy in policies {
        let assignment = match *policy {
            Policy::Proposed(kind) => {
                let tables = effective
                    .iter()
                    .map(|g| g.feedback(kind))
                    .collect::<Result<Vec<_>>>()?;
                schedule(&tables)?
            }
            Policy::ShBaseline => {
                let mut reports = Vec::with_capacity(cfg.k * cfg.n);
                for g in &effective {
                    reports.extend(g.antenna_reports()?);
                }
                schedule_antenna_reports(&reports, cfg.m)
            }
        };
        out.rates.push(sum_rate(&assignment));
        out.winner_sinr
            .push(assignment.beams.iter().map(|b| b.sinr).collect());
        out.unassigned.push(assignment.unassigned());
    }
    Ok(out)
}

/// Runs `cfg.trials` slots, evaluating every policy on each slot's draw.
/// A trial that hits a degenerate draw under any policy is dropped for all
/// of them.
pub fn monte_carlo_paired(cfg: &SimConfig, policies: &[Policy]) -> Result<PairedRun> {
    cfg.validate()?;
    if policies.is_empty() {
        return Err(Error::Empty("policies"));
    }
    for p in policies {
        if *p == Policy::Proposed(CombinerKind::Measured) {
            return Err(Error::InvalidConfig(
                "the proposed scheduler needs sc, mrc or oc".into(),
            ));
        }
        if *p == Policy::Proposed(CombinerKind::Oc) && cfg.noise.is_noise_free() && cfg.m <= cfg.n {
            return Err(Error::InvalidConfig(
                "optimum combining without noise requires M > N".into(),
            ));
        }
    }

    let outcomes: Vec<Result<TrialOutcome>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, policies, t))
        .collect();

    let mut kept = Vec::with_capacity(outcomes.len());
    let mut discarded = 0usize;
    for (t, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(o) => kept.push(o),
            Err(Error::DegenerateDraw(why)) => {
                log::debug!("trial {t} discarded: {why}");
                discarded += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if kept.is_empty() {
        return Err(Error::AllTrialsDegenerate { trials: cfg.trials });
    }
    if discarded > 0 {
        log::info!(
            "{discarded} of {} trials discarded as degenerate",
            cfg.trials
        );
    }

    let mut stats = Vec::with_capacity(policies.len());
    let mut rates = Vec::with_capacity(policies.len());
    for (p, policy) in policies.iter().enumerate() {
        let r: Vec<f64> = kept.iter().map(|o| o.rates[p]).collect();
        let (mean, se) = mean_and_se(&r);
        let per_beam_mean_sinr = (0..cfg.m)
            .map(|b| compensated_sum(kept.iter().map(|o| o.winner_sinr[p][b])) / kept.len() as f64)
            .collect();
        let unassigned_beams = kept.iter().map(|o| o.unassigned[p]).sum();
        if unassigned_beams > 0 {
            log::info!(
                "{}: {unassigned_beams} beam-slots went unrequested",
                policy.label()
            );
        }
        stats.push(ThroughputStats {
            trials: kept.len(),
            mean_sum_rate: mean,
            std_error: se,
            discarded_trials: discarded,
            per_beam_mean_sinr,
            unassigned_beams,
        });
        rates.push(r);
    }
    Ok(PairedRun {
        policies: policies.to_vec(),
        stats,
        rates,
    })
}

/// Average sum rate of the scheduler and combiner selected in `cfg`.
pub fn monte_carlo_throughput(cfg: &SimConfig) -> Result<ThroughputStats> {
    let mut run = monte_carlo_paired(cfg, &[Policy::from_config(cfg)])?;
    Ok(run.stats.remove(0))
}
