//! Monte Carlo samplers for the noise-free effective SIR.

use rayon::prelude::*;

use crate::beamforming::random_orthonormal_beams_from;
use crate::channel::{sample_channels_from, RngStream};
use crate::combining::{CombinerKind, EffectiveChannel};
use crate::error::{Error, Result};

/// Samples of the best-of-`k` SIR on the first beam with `σ² = 0`. Each
/// sample uses a fresh beam matrix and fresh channels from stream `s` of
/// `seed`. For [`CombinerKind::Measured`] the SIR is that of receive
/// antenna 0. Degenerate draws are skipped and counted.
pub fn sample_max_sir(
    combiner: CombinerKind,
    m: usize,
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<(Vec<f64>, usize)> {
    if samples == 0 {
        return Err(Error::Empty("sample count"));
    }
    let draws: Vec<Result<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = RngStream::new(seed, s).rng();
            let a = random_orthonormal_beams_from(m, &mut rng, 1.0)?;
            let channels = sample_channels_from(k, m, n, &mut rng)?;
            let mut best = f64::NEG_INFINITY;
            for h in &channels {
                let g = EffectiveChannel::new(h, &a, 0.0)?;
                let v = match combiner {
                    CombinerKind::Measured => g.measured(0, 0)?,
                    other => g.sinr(other, 0)?,
                };
                best = best.max(v);
            }
            Ok(best)
        })
        .collect();

    let mut out = Vec::with_capacity(samples);
    let mut discarded = 0;
    for d in draws {
        match d {
            Ok(v) => out.push(v),
            Err(Error::DegenerateDraw(_)) => discarded += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((out, discarded))
}
