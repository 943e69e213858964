//! Per-antenna and combined SINRs for every (user, beam) pair.
//!
//! All formulas work on the effective channel `G = H A` (`N x M`), whose
//! column `i` is `H a_i`. With per-beam power `P` and noise power `σ²`:
//!
//! * measured, antenna `j`: `P|g_ji|² / (P Σ_{m≠i} |g_jm|² + σ²)`
//! * selection: the best measured SINR over antennas
//! * maximum ratio: `P‖g_i‖⁴ / (P Σ_{m≠i} |g_i^H g_m|² + ‖g_i‖² σ²)`
//! * optimum: `P g_i^H R⁻¹ g_i` with `R = P Σ_{m≠i} g_m g_m^H + σ² I`
//!
//! Zero denominators and singular `R` only happen on measure-zero draws in
//! the noise-free regime; they surface as [`Error::DegenerateDraw`] so the
//! caller can drop the trial instead of clamping an extreme value.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::beamforming::BeamMatrix;
use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::numerics::{dot_conj, norm_sqr, solve_hermitian_posdef, ComplexMatrix};

/// Receiver combining technique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CombinerKind {
    /// Single-antenna SINR, only used by the per-antenna baseline.
    Measured,
    Sc,
    Mrc,
    Oc,
}

impl CombinerKind {
    /// The three combiners a user can feed back.
    pub const EFFECTIVE: [CombinerKind; 3] =
        [CombinerKind::Sc, CombinerKind::Mrc, CombinerKind::Oc];
    pub const ALL: [CombinerKind; 4] = [
        CombinerKind::Measured,
        CombinerKind::Sc,
        CombinerKind::Mrc,
        CombinerKind::Oc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CombinerKind::Measured => "measured",
            CombinerKind::Sc => "sc",
            CombinerKind::Mrc => "mrc",
            CombinerKind::Oc => "oc",
        }
    }
}

impl fmt::Display for CombinerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for CombinerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "measured" => Ok(CombinerKind::Measured),
            "sc" => Ok(CombinerKind::Sc),
            "mrc" => Ok(CombinerKind::Mrc),
            "oc" => Ok(CombinerKind::Oc),
            other => Err(Error::InvalidConfig(format!("unknown combiner '{other}'"))),
        }
    }
}

/// The `M` effective SINRs one user reports for a slot.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackTable {
    pub user_index: usize,
    pub combiner: CombinerKind,
    pub sinr: Vec<f64>,
}

/// What a single receive antenna reports under the per-antenna scheme:
/// its preferred beam and the SINR it measures there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaBeamReport {
    pub user_index: usize,
    pub antenna_index: usize,
    pub best_beam_index: usize,
    pub best_sinr: f64,
}

/// `G = H A` for one user, with the beam power and noise power attached.
#[derive(Debug, Clone)]
pub struct EffectiveChannel {
    user_index: usize,
    g: ComplexMatrix,
    power: f64,
    sigma2: f64,
}

impl EffectiveChannel {
    pub fn new(h: &ChannelMatrix, a: &BeamMatrix, sigma2: f64) -> Result<Self> {
        if !(sigma2 >= 0.0) || !sigma2.is_finite() {
            return Err(Error::Domain(format!(
                "noise variance must be >= 0, got {sigma2}"
            )));
        }
        let g = h.matrix().matmul(a.matrix())?;
        Ok(Self {
            user_index: h.user_index,
            g,
            power: a.per_beam_power(),
            sigma2,
        })
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn m(&self) -> usize {
        self.g.cols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.g
    }

    fn check_beam(&self, beam: usize) -> Result<()> {
        if beam >= self.m() {
            return Err(Error::InvalidDimensions(format!(
                "beam {beam} out of range for M = {}",
                self.m()
            )));
        }
        Ok(())
    }

    pub fn measured(&self, antenna: usize, beam: usize) -> Result<f64> {
        self.check_beam(beam)?;
        if antenna >= self.n() {
            return Err(Error::InvalidDimensions(format!(
                "antenna {antenna} out of range for N = {}",
                self.n()
            )));
        }
        let row = self.g.row(antenna);
        let signal = self.power * row[beam].norm_sqr();
        let interference: f64 = row
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != beam)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        let denom = self.power * interference + self.sigma2;
        if denom <= 0.0 {
            return Err(Error::DegenerateDraw("zero interference-plus-noise power"));
        }
        Ok(signal / denom)
    }

    pub fn sc(&self, beam: usize) -> Result<f64> {
        let mut best = self.measured(0, beam)?;
        for j in 1..self.n() {
            let v = self.measured(j, beam)?;
            // strict comparison keeps the lowest antenna on ties
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    pub fn mrc(&self, beam: usize) -> Result<f64> {
        self.check_beam(beam)?;
        let gi = self.g.column(beam);
        let s = norm_sqr(&gi);
        if s <= 0.0 {
            return Err(Error::DegenerateDraw("zero desired-signal norm"));
        }
        let cross: f64 = (0..self.m())
            .filter(|&m| m != beam)
            .map(|m| dot_conj(&gi, &self.g.column(m)).norm_sqr())
            .sum();
        let denom = self.power * cross + s * self.sigma2;
        if denom <= 0.0 {
            return Err(Error::DegenerateDraw("zero interference-plus-noise power"));
        }
        Ok(self.power * s * s / denom)
    }

    pub fn oc(&self, beam: usize) -> Result<f64> {
        self.check_beam(beam)?;
        let n = self.n();
        let mut r = ComplexMatrix::zeros(n, n);
        for m in (0..self.m()).filter(|&m| m != beam) {
            for p in 0..n {
                let gp = self.g[(p, m)];
                for q in 0..=p {
                    r[(p, q)] += self.power * gp * self.g[(q, m)].conj();
                }
            }
        }
        for p in 0..n {
            r[(p, p)] += Complex64::new(self.sigma2, 0.0);
            for q in 0..p {
                r[(q, p)] = r[(p, q)].conj();
            }
        }
        let gi = self.g.column(beam);
        let x = solve_hermitian_posdef(&r, &gi).map_err(|e| match e {
            Error::NotPositiveDefinite { .. } => {
                Error::DegenerateDraw("singular interference covariance")
            }
            other => other,
        })?;
        Ok((self.power * dot_conj(&gi, &x).re).max(0.0))
    }

    pub fn generic(&self, w: &[Complex64], beam: usize) -> Result<f64> {
        self.check_beam(beam)?;
        if w.len() != self.n() {
            return Err(Error::DimensionMismatch {
                op: "generic_combiner_sinr",
                left: (w.len(), 1),
                right: (self.n(), 1),
            });
        }
        let wn = norm_sqr(w);
        if wn <= 0.0 {
            return Err(Error::Domain("combining weight vector is zero".into()));
        }
        let out = |m: usize| dot_conj(w, &self.g.column(m)).norm_sqr();
        let signal = self.power * out(beam);
        let interference: f64 = (0..self.m()).filter(|&m| m != beam).map(out).sum();
        let denom = self.power * interference + wn * self.sigma2;
        if denom <= 0.0 {
            return Err(Error::DegenerateDraw("zero interference-plus-noise power"));
        }
        Ok(signal / denom)
    }

    pub fn sinr(&self, kind: CombinerKind, beam: usize) -> Result<f64> {
        match kind {
            CombinerKind::Measured => Err(Error::InvalidConfig(
                "measured SINR is per antenna; use `measured`".into(),
            )),
            CombinerKind::Sc => self.sc(beam),
            CombinerKind::Mrc => self.mrc(beam),
            CombinerKind::Oc => self.oc(beam),
        }
    }

    pub fn feedback(&self, kind: CombinerKind) -> Result<FeedbackTable> {
        let sinr = (0..self.m())
            .map(|i| self.sinr(kind, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(FeedbackTable {
            user_index: self.user_index,
            combiner: kind,
            sinr,
        })
    }

    /// One report per receive antenna: best beam by measured SINR, ties
    /// to the lowest beam index.
    pub fn antenna_reports(&self) -> Result<Vec<AntennaBeamReport>> {
        (0..self.n())
            .map(|j| {
                let mut best_beam = 0;
                let mut best = self.measured(j, 0)?;
                for i in 1..self.m() {
                    let v = self.measured(j, i)?;
                    if v > best {
                        best = v;
                        best_beam = i;
                    }
                }
                Ok(AntennaBeamReport {
                    user_index: self.user_index,
                    antenna_index: j,
                    best_beam_index: best_beam,
                    best_sinr: best,
                })
            })
            .collect()
    }
}

pub fn measured_sinr(
    h: &ChannelMatrix,
    a: &BeamMatrix,
    antenna: usize,
    beam: usize,
    sigma2: f64,
) -> Result<f64> {
    EffectiveChannel::new(h, a, sigma2)?.measured(antenna, beam)
}

pub fn sc_sinr(h: &ChannelMatrix, a: &BeamMatrix, beam: usize, sigma2: f64) -> Result<f64> {
    EffectiveChannel::new(h, a, sigma2)?.sc(beam)
}

pub fn mrc_sinr(h: &ChannelMatrix, a: &BeamMatrix, beam: usize, sigma2: f64) -> Result<f64> {
    EffectiveChannel::new(h, a, sigma2)?.mrc(beam)
}

pub fn oc_sinr(h: &ChannelMatrix, a: &BeamMatrix, beam: usize, sigma2: f64) -> Result<f64> {
    EffectiveChannel::new(h, a, sigma2)?.oc(beam)
}

/// SINR of beam `beam` after combining the antennas with weights `w`.
pub fn generic_combiner_sinr(
    w: &[Complex64],
    h: &ChannelMatrix,
    a: &BeamMatrix,
    beam: usize,
    sigma2: f64,
) -> Result<f64> {
    EffectiveChannel::new(h, a, sigma2)?.generic(w, beam)
}

pub fn feedback_table(
    h: &ChannelMatrix,
    a: &BeamMatrix,
    sigma2: f64,
    combiner: CombinerKind,
) -> Result<FeedbackTable> {
    EffectiveChannel::new(h, a, sigma2)?.feedback(combiner)
}

pub fn antenna_reports(
    h: &ChannelMatrix,
    a: &BeamMatrix,
    sigma2: f64,
) -> Result<Vec<AntennaBeamReport>> {
    EffectiveChannel::new(h, a, sigma2)?.antenna_reports()
}
