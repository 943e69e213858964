//! Experiment configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#'
//! M = 4
//! N = 2
//! K = 50
//! sigma2 = 1.0          # or a comma-separated list, one value per user
//! total_power = 4
//! combiner = oc
//! scheduler = proposed
//! trials = 10000
//! seed = 1
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::channel::NoiseProfile;
use crate::combining::CombinerKind;
use crate::error::{Error, Result};

/// Environment variable consulted for the master seed.
pub const SEED_ENV: &str = "OSDMA_SEED";

pub const DEFAULT_SEED: u64 = 20_070_101;

/// How beams are awarded each slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchedulerKind {
    /// Every user feeds back all `M` combined SINRs; each beam goes to the
    /// best user.
    Proposed,
    /// Every receive antenna competes as its own user and reports only its
    /// favourite beam.
    ShBaseline,
}

impl SchedulerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchedulerKind::Proposed => "proposed",
            SchedulerKind::ShBaseline => "sh-baseline",
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for SchedulerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "proposed" => Ok(SchedulerKind::Proposed),
            "sh-baseline" | "baseline" | "sh" => Ok(SchedulerKind::ShBaseline),
            other => Err(Error::InvalidConfig(format!("unknown scheduler '{other}'"))),
        }
    }
}

/// Fully resolved parameters for one Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub noise: NoiseProfile,
    pub total_power: f64,
    pub combiner: CombinerKind,
    pub scheduler: SchedulerKind,
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            m: 4,
            n: 2,
            k: 50,
            noise: NoiseProfile::uniform(50, 1.0).expect("valid default"),
            total_power: 4.0,
            combiner: CombinerKind::Oc,
            scheduler: SchedulerKind::Proposed,
            trials: 10_000,
            master_seed: DEFAULT_SEED,
        }
    }
}

impl SimConfig {
    /// Convenience constructor with the same noise power at every user and
    /// one unit of power per beam.
    pub fn uniform(
        m: usize,
        n: usize,
        k: usize,
        sigma2: f64,
        combiner: CombinerKind,
    ) -> Result<Self> {
        let cfg = Self {
            m,
            n,
            k,
            noise: NoiseProfile::uniform(k, sigma2)?,
            total_power: m as f64,
            combiner,
            scheduler: SchedulerKind::Proposed,
            trials: 10_000,
            master_seed: DEFAULT_SEED,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn per_beam_power(&self) -> f64 {
        self.total_power / self.m as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 || self.k == 0 {
            return Err(Error::InvalidConfig("M, N and K must be at least 1".into()));
        }
        if self.n > self.m {
            return Err(Error::InvalidConfig(format!(
                "N = {} exceeds M = {}",
                self.n, self.m
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.total_power > 0.0) || !self.total_power.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "total power must be positive, got {}",
                self.total_power
            )));
        }
        if self.noise.len() != self.k {
            return Err(Error::InvalidConfig(format!(
                "noise profile has {} entries for K = {}",
                self.noise.len(),
                self.k
            )));
        }
        if self.scheduler == SchedulerKind::Proposed && self.combiner == CombinerKind::Measured {
            return Err(Error::InvalidConfig(
                "the proposed scheduler needs sc, mrc or oc".into(),
            ));
        }
        if self.combiner == CombinerKind::Oc && self.noise.is_noise_free() && self.m <= self.n {
            return Err(Error::InvalidConfig(
                "optimum combining without noise requires M > N".into(),
            ));
        }
        Ok(())
    }

    /// Applies one `key = value` setting. Keys match the field names (and
    /// the CLI flags); `total-power` and `total_power` are both accepted.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidConfig(format!("invalid value '{value}' for {what}"));
        match key.trim() {
            "M" | "m" => self.m = value.parse().map_err(|_| bad("M"))?,
            "N" | "n" => self.n = value.parse().map_err(|_| bad("N"))?,
            "K" | "k" => {
                self.k = value.parse().map_err(|_| bad("K"))?;
                if self.noise.len() != self.k {
                    // keep a uniform profile in step with K
                    if let Some(&v) = self.noise.variances().first() {
                        if self.noise.variances().iter().all(|&x| x == v) {
                            self.noise = NoiseProfile::uniform(self.k.max(1), v)?;
                        }
                    }
                }
            }
            "sigma2" => self.noise = parse_noise(value, self.k)?,
            "total_power" | "total-power" => {
                self.total_power = value.parse().map_err(|_| bad("total_power"))?
            }
            "combiner" => self.combiner = value.parse()?,
            "scheduler" => self.scheduler = value.parse()?,
            "trials" => self.trials = value.parse().map_err(|_| bad("trials"))?,
            "seed" | "master_seed" => self.master_seed = value.parse().map_err(|_| bad("seed"))?,
            other => return Err(Error::InvalidConfig(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a flat key-value document on top of the defaults.
    pub fn parse_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_kv(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies every setting in `text` without validating the result.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        // K first so a scalar sigma2 expands to the right length
        let entries = kv_entries(text)?;
        for (k, v) in entries.iter().filter(|(k, _)| k == "K" || k == "k") {
            self.set(k, v)?;
        }
        for (k, v) in entries.iter().filter(|(k, _)| k != "K" && k != "k") {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse_kv(&std::fs::read_to_string(path)?)
    }

    /// The configuration rendered in the same key-value format.
    pub fn to_kv(&self) -> String {
        let noise = render_noise(&self.noise);
        format!(
            "M = {}\nN = {}\nK = {}\nsigma2 = {}\ntotal_power = {}\ncombiner = {}\nscheduler = {}\ntrials = {}\nseed = {}\n",
            self.m,
            self.n,
            self.k,
            noise,
            self.total_power,
            self.combiner,
            self.scheduler,
            self.trials,
            self.master_seed
        )
    }
}

pub(crate) fn kv_entries(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// A single value applies to every user; a list must have `k` entries.
pub fn parse_noise(value: &str, k: usize) -> Result<NoiseProfile> {
    let parts = value
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("invalid noise variance '{p}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    match parts.as_slice() {
        [single] => NoiseProfile::uniform(k, *single),
        list if list.len() == k => NoiseProfile::new(list.to_vec()),
        list => Err(Error::InvalidConfig(format!(
            "{} noise variances given for K = {k}",
            list.len()
        ))),
    }
}

pub fn render_noise(noise: &NoiseProfile) -> String {
    let v = noise.variances();
    if v.iter().all(|&x| x == v[0]) {
        format!("{}", v[0])
    } else {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Reads the master seed from [`SEED_ENV`], if set.
pub fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidConfig(format!("{SEED_ENV} is not a u64: '{s}'"))),
        Err(_) => Ok(None),
    }
}
