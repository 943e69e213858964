//! Rayleigh block-fading channels and reproducible random streams.
//!
//! Every trial owns an [`RngStream`] keyed by `(master_seed, stream_id)`.
//! The stream maps onto a ChaCha8 generator seeded from the master seed
//! with the stream id selecting one of its 2^64 independent streams, so a
//! trial's draws never depend on which thread ran it or in what order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Identifies one reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Derives an independent master seed for a sub-experiment, e.g. one
    /// point on a figure's x-axis.
    pub fn derive_seed(master_seed: u64, tag: u64) -> u64 {
        splitmix64(master_seed ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15)))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Circularly-symmetric complex Gaussian with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// One user's `N x M` channel. Row `j` holds the gains from every base
/// station antenna to receive antenna `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub user_index: usize,
    h: ComplexMatrix,
}

impl ChannelMatrix {
    /// Wraps a fixed gain matrix. Requires `rows <= cols`.
    pub fn new(user_index: usize, h: ComplexMatrix) -> Result<Self> {
        if h.rows() > h.cols() {
            return Err(Error::InvalidDimensions(format!(
                "channel must have N <= M, got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        Ok(Self { user_index, h })
    }

    /// Draws i.i.d. unit-variance Rayleigh gains.
    pub fn sample<R: Rng + ?Sized>(
        user_index: usize,
        n: usize,
        m: usize,
        rng: &mut R,
    ) -> Result<Self> {
        validate_dims(n, m)?;
        let data = (0..n * m).map(|_| complex_gaussian(rng)).collect();
        Self::new(user_index, ComplexMatrix::from_vec(n, m, data)?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.h
    }

    /// Receive antenna count.
    pub fn n(&self) -> usize {
        self.h.rows()
    }

    /// Transmit antenna count.
    pub fn m(&self) -> usize {
        self.h.cols()
    }

    /// Same user with every gain multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            user_index: self.user_index,
            h: self.h.scale(c),
        }
    }
}

fn validate_dims(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidDimensions(
            "N and M must be at least 1".into(),
        ));
    }
    if n > m {
        return Err(Error::InvalidDimensions(format!(
            "receive antennas N = {n} exceed transmit antennas M = {m}"
        )));
    }
    Ok(())
}

/// Draws `k` independent users from `rng`, in user order.
pub fn sample_channels_from<R: Rng + ?Sized>(
    k: usize,
    m: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<ChannelMatrix>> {
    if k == 0 {
        return Err(Error::InvalidDimensions("K must be at least 1".into()));
    }
    validate_dims(n, m)?;
    (0..k)
        .map(|user| ChannelMatrix::sample(user, n, m, rng))
        .collect()
}

/// Draws `k` independent `n x m` Rayleigh channels from the start of `stream`.
pub fn sample_channels(
    k: usize,
    m: usize,
    n: usize,
    stream: RngStream,
) -> Result<Vec<ChannelMatrix>> {
    sample_channels_from(k, m, n, &mut stream.rng())
}

/// Per-user noise power `σ_k²` on each receive antenna (linear scale).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile {
    variances: Vec<f64>,
}

impl NoiseProfile {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() {
            return Err(Error::Empty("noise profile"));
        }
        if let Some(v) = variances.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!(
                "noise variances must be finite and nonnegative, got {v}"
            )));
        }
        Ok(Self { variances })
    }

    /// Every user shares `sigma2`.
    pub fn uniform(k: usize, sigma2: f64) -> Result<Self> {
        Self::new(vec![sigma2; k])
    }

    pub fn len(&self) -> usize {
        self.variances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variances.is_empty()
    }

    pub fn variance(&self, user: usize) -> f64 {
        self.variances[user]
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// True when every user is interference-limited (`σ² = 0`).
    pub fn is_noise_free(&self) -> bool {
        self.variances.iter().all(|&v| v == 0.0)
    }
}
