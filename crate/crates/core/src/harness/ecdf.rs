//! Empirical CDFs and Kolmogorov-Smirnov distances.

use crate::error::{Error, Result};

/// Minimum sample count accepted by [`Ecdf::ks_distance`].
pub const MIN_KS_SAMPLES: usize = 100;

/// Right-continuous empirical CDF over a sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    /// Sorts `samples`; NaNs are rejected.
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("ECDF samples"));
        }
        if samples.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("ECDF samples contain NaN".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// `sup_x |F_n(x) - F(x)|` for a continuous reference CDF, checked on
    /// both sides of every jump.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> Result<f64> {
        if self.len() < MIN_KS_SAMPLES {
            return Err(Error::Domain(format!(
                "KS distance needs at least {MIN_KS_SAMPLES} samples, got {}",
                self.len()
            )));
        }
        let n = self.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = cdf(x);
            d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
        }
        Ok(d.clamp(0.0, 1.0))
    }
}

/// Two-sample KS statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf) -> f64 {
    let (xs, ys) = (a.values(), b.values());
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
