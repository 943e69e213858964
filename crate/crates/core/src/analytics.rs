//! Closed-form statistics of the effective signal-to-interference ratio in
//! the noise-free regime, their multiuser maxima, Fréchet limits and the
//! resulting throughput integrals and scaling laws.
//!
//! With `s(x) = (1 + x)^-(M-1)` the per-user CDFs are
//!
//! ```text
//! measured  1 - s
//! SC        (1 - s)^N
//! MRC       1 - s - Σ_{p=1}^{N-1} C(M+N-p-2, M-2) x^(N-p) / (1+x)^(M+N-p-1)
//! OC        1 - (1+x)^-(M-N) - Σ_{p=1}^{N-1} C(M-p-1, M-N-1) x^(N-p) / (1+x)^(M-p)
//! ```
//!
//! Everything is evaluated through the survival function `1 - F`, which
//! keeps the Pareto tails accurate far beyond the point where `F` rounds
//! to one.

use std::f64::consts::LN_2;

use crate::combining::CombinerKind;
use crate::error::{Error, Result};
use crate::numerics::{find_root_monotone, integrate, integrate_semi_infinite, DEFAULT_ROOT_TOL};

/// Relative tolerance used for every throughput integral.
pub const THROUGHPUT_REL_TOL: f64 = 1e-6;

/// Past this point `(1 + x)^p` is evaluated in the log domain.
const LOG_DOMAIN_THRESHOLD: f64 = 1e3;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

// x^a / (1 + x)^b for integer exponents, x >= 0.
fn ratio_power(x: f64, a: u32, b: u32) -> f64 {
    if x == 0.0 {
        return if a == 0 { 1.0 } else { 0.0 };
    }
    if x > LOG_DOMAIN_THRESHOLD {
        (f64::from(a) * x.ln() - f64::from(b) * x.ln_1p()).exp()
    } else {
        x.powi(a as i32) / (1.0 + x).powi(b as i32)
    }
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("SIR argument must be >= 0, got {x}")))
    }
}

/// Per-user effective-SIR distribution for one combiner and array size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SirCdf {
    pub combiner: CombinerKind,
    pub m: usize,
    pub n: usize,
}

impl SirCdf {
    /// Checks the validity domain: `M >= 2`, `M >= N >= 1`, and `M > N`
    /// for optimum combining.
    pub fn new(combiner: CombinerKind, m: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        if m < 2 {
            return Err(Error::Domain(format!(
                "closed-form CDFs need M >= 2, got {m}"
            )));
        }
        if n > m {
            return Err(Error::Domain(format!("N = {n} exceeds M = {m}")));
        }
        if combiner == CombinerKind::Oc && m == n {
            return Err(Error::Domain("optimum-combining CDF requires M > N".into()));
        }
        Ok(Self { combiner, m, n })
    }

    /// `1 - F(x)`; equals one for `x <= 0`.
    pub fn survival(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 1.0;
        }
        let (m, n) = (self.m as u32, self.n as u32);
        let s = ratio_power(x, 0, m - 1);
        let v = match self.combiner {
            CombinerKind::Measured => s,
            // 1 - (1 - s)^N
            CombinerKind::Sc => -(f64::from(n) * (-s).ln_1p()).exp_m1(),
            CombinerKind::Mrc => {
                s + (1..n)
                    .map(|p| {
                        binomial(u64::from(m + n - p - 2), u64::from(m - 2)) as f64
                            * ratio_power(x, n - p, m + n - p - 1)
                    })
                    .sum::<f64>()
            }
            CombinerKind::Oc => {
                ratio_power(x, 0, m - n)
                    + (1..n)
                        .map(|p| {
                            binomial(u64::from(m - p - 1), u64::from(m - n - 1)) as f64
                                * ratio_power(x, n - p, m - p)
                        })
                        .sum::<f64>()
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// `F(x)`; zero for `x <= 0`.
    pub fn eval(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    /// `F(x)^K`, the CDF of the best of `k` i.i.d. users.
    pub fn max_cdf(&self, k: usize, x: f64) -> f64 {
        (k as f64 * (-self.survival(x)).ln_1p()).exp()
    }

    /// `1 - F(x)^K`, computed without cancellation.
    pub fn max_survival(&self, k: usize, x: f64) -> f64 {
        -(k as f64 * (-self.survival(x)).ln_1p()).exp_m1()
    }
}

/// Per-antenna SIR CDF, `1 - (1+x)^-(M-1)`.
pub fn cdf_measured(x: f64, m: usize) -> Result<f64> {
    check_x(x)?;
    Ok(SirCdf::new(CombinerKind::Measured, m, 1)?.eval(x))
}

/// Selection-combining SIR CDF.
pub fn cdf_sc(x: f64, m: usize, n: usize) -> Result<f64> {
    check_x(x)?;
    Ok(SirCdf::new(CombinerKind::Sc, m, n)?.eval(x))
}

/// Maximum-ratio-combining SIR CDF.
pub fn cdf_mrc(x: f64, m: usize, n: usize) -> Result<f64> {
    check_x(x)?;
    Ok(SirCdf::new(CombinerKind::Mrc, m, n)?.eval(x))
}

/// Optimum-combining SIR CDF (needs `M > N`).
pub fn cdf_oc(x: f64, m: usize, n: usize) -> Result<f64> {
    check_x(x)?;
    Ok(SirCdf::new(CombinerKind::Oc, m, n)?.eval(x))
}

/// `base(x)^K`. `K = 0` gives one (the maximum of nothing).
pub fn cdf_max(base: &SirCdf, k: usize, x: f64) -> f64 {
    base.max_cdf(k, x)
}

/// Approximate CDF of the best per-antenna SIR on a beam requested
/// `k_i` times: `[1 - (1+x)^-(M-1)]^(N K_i)`.
pub fn sh_baseline_cdf(x: f64, m: usize, n: usize, k_i: usize) -> Result<f64> {
    check_x(x)?;
    if k_i == 0 {
        return Err(Error::Domain("K_i must be at least 1".into()));
    }
    if n == 0 || n > m {
        return Err(Error::Domain(format!(
            "need 1 <= N <= M, got N = {n}, M = {m}"
        )));
    }
    Ok(SirCdf::new(CombinerKind::Measured, m, 1)?.max_cdf(n * k_i, x))
}

/// Fréchet approximation `exp(-(scale / x)^q)` to the best-of-K SIR at
/// `M = 4`, `N = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetApprox {
    pub combiner: CombinerKind,
    pub k: usize,
    /// Normalizer `a_K`.
    pub scale: f64,
    /// Tail exponent `q`.
    pub exponent: f64,
}

impl FrechetApprox {
    pub const M: usize = 4;
    pub const N: usize = 2;

    /// OC: `q = 2`, `a_K = sqrt(3K) - 1`; MRC: `q = 3`, `(4K)^(1/3) - 1`;
    /// SC: `q = 3`, `(2K)^(1/3) - 1`.
    pub fn new(combiner: CombinerKind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("K must be at least 1".into()));
        }
        let kf = k as f64;
        let (scale, exponent) = match combiner {
            CombinerKind::Oc => ((3.0 * kf).sqrt() - 1.0, 2.0),
            CombinerKind::Mrc => ((4.0 * kf).cbrt() - 1.0, 3.0),
            CombinerKind::Sc => ((2.0 * kf).cbrt() - 1.0, 3.0),
            CombinerKind::Measured => {
                return Err(Error::Domain(
                    "Fréchet approximation is defined for sc, mrc and oc only".into(),
                ))
            }
        };
        Ok(Self {
            combiner,
            k,
            scale,
            exponent,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        frechet_cdf(self, x)
    }
}

pub fn frechet_cdf(approx: &FrechetApprox, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-(approx.scale / x).powf(approx.exponent)).exp()
    }
}

/// Root of `base(x) = 1 - 1/K`.
pub fn characteristic_extreme(base: &SirCdf, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("K must be at least 2, got {k}")));
    }
    let kf = k as f64;
    // K (1 - F) - 1 decreases from K - 1 to -1
    let g = |x: f64| kf * base.survival(x) - 1.0;
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoSignChange {
                lo: 0.0,
                hi,
                g_lo: g(0.0),
                g_hi: g(hi),
            });
        }
    }
    find_root_monotone(g, 0.0, hi, DEFAULT_ROOT_TOL)
}

/// `(beams / ln 2) ∫ (1 - F_max(x)) / (1 + x) dx` for an arbitrary CDF of
/// the per-beam maximum, over `(0, upper)` or `(0, ∞)` when `upper` is
/// `None`. This is the per-slot expected sum rate after integrating
/// `∫ log2(1 + x) dF_max` by parts.
pub fn throughput_from_cdf<F: Fn(f64) -> f64>(
    cdf_of_max: F,
    beams: usize,
    upper: Option<f64>,
) -> Result<f64> {
    let integrand = |x: f64| (1.0 - cdf_of_max(x)) / (1.0 + x);
    let integral = match upper {
        Some(u) => integrate(integrand, 0.0, u, THROUGHPUT_REL_TOL)?,
        None => integrate_semi_infinite(integrand, THROUGHPUT_REL_TOL)?,
    };
    Ok(beams as f64 * integral / LN_2)
}

/// Sum rate implied by the exact per-user CDF and `K` users.
pub fn exact_throughput(base: &SirCdf, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("K must be at least 1".into()));
    }
    let integral =
        integrate_semi_infinite(|x| base.max_survival(k, x) / (1.0 + x), THROUGHPUT_REL_TOL)?;
    Ok(base.m as f64 * integral / LN_2)
}

/// Sum rate implied by the Fréchet approximation at `M = 4`, `N = 2`.
pub fn asymptotic_throughput(combiner: CombinerKind, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("K must be at least 2, got {k}")));
    }
    let f = FrechetApprox::new(combiner, k)?;
    let integral = integrate_semi_infinite(
        |x| -(-(f.scale / x).powf(f.exponent)).exp_m1() / (1.0 + x),
        THROUGHPUT_REL_TOL,
    )?;
    Ok(FrechetApprox::M as f64 * integral / LN_2)
}

/// Large-K growth of the sum rate at `M = 4`, `N = 2`:
/// `4 log2 sqrt(3K)` (OC), `4 log2 (4K)^(1/3)` (MRC), `4 log2 (2K)^(1/3)` (SC).
pub fn scaling_law(combiner: CombinerKind, k: usize) -> Result<f64> {
    let kf = k as f64;
    let arg = match combiner {
        CombinerKind::Oc => (3.0 * kf).sqrt(),
        CombinerKind::Mrc => (4.0 * kf).cbrt(),
        CombinerKind::Sc => (2.0 * kf).cbrt(),
        CombinerKind::Measured => {
            return Err(Error::Domain("no scaling law for the measured SINR".into()))
        }
    };
    if !(arg > 1.0) {
        return Err(Error::Domain(format!(
            "scaling-law argument {arg} must exceed 1"
        )));
    }
    Ok(4.0 * arg.log2())
}

/// Empirical tail index `ln[(1 - F(x)) / (1 - F(cx))] / ln c`. Tends to the
/// Pareto exponent as `x` grows.
pub fn tail_exponent(base: &SirCdf, x: f64, c: f64) -> f64 {
    (base.survival(x) / base.survival(c * x)).ln() / c.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oc16(x: f64) -> f64 {
        1.0 - (1.0 + 3.0 * x) / (1.0 + x).powi(3)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 2), 3);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn hand_values() {
        assert_eq!(cdf_measured(0.0, 4).unwrap(), 0.0);
        assert!((cdf_measured(1.0, 4).unwrap() - 0.875).abs() < 1e-15);
        assert!((cdf_sc(1.0, 4, 2).unwrap() - 0.765625).abs() < 1e-15);
        assert!((cdf_mrc(1.0, 4, 2).unwrap() - 0.6875).abs() < 1e-15);
        assert!((cdf_oc(1.0, 4, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((sh_baseline_cdf(1.0, 4, 2, 2).unwrap() - 0.875f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn single_antenna_collapse() {
        for &x in &[0.0, 0.3, 1.0, 7.0, 2e3] {
            let m = cdf_measured(x, 4).unwrap();
            assert!((cdf_sc(x, 4, 1).unwrap() - m).abs() < 1e-15);
            assert!((cdf_mrc(x, 4, 1).unwrap() - m).abs() < 1e-15);
            assert!(
                (sh_baseline_cdf(x, 4, 2, 1).unwrap() - cdf_sc(x, 4, 2).unwrap()).abs() < 1e-15
            );
            let base = SirCdf::new(CombinerKind::Measured, 4, 1).unwrap();
            assert!((sh_baseline_cdf(x, 4, 1, 5).unwrap() - cdf_max(&base, 5, x)).abs() < 1e-15);
        }
    }

    #[test]
    fn oc_reduces_to_closed_form_at_four_by_two() {
        for i in 0..100 {
            let x = 0.05 * i as f64 * (1.0 + i as f64 / 10.0);
            assert!((cdf_oc(x, 4, 2).unwrap() - oc16(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(cdf_measured(-0.1, 4).is_err());
        assert!(cdf_measured(1.0, 1).is_err());
        assert!(cdf_sc(1.0, 2, 3).is_err());
        assert!(cdf_oc(1.0, 2, 2).is_err());
        assert!(cdf_mrc(f64::NAN, 4, 2).is_err());
        assert!(sh_baseline_cdf(1.0, 4, 2, 0).is_err());
        assert!(FrechetApprox::new(CombinerKind::Measured, 10).is_err());
        assert!(scaling_law(CombinerKind::Oc, 0).is_err());
        assert!(characteristic_extreme(&SirCdf::new(CombinerKind::Oc, 4, 2).unwrap(), 1).is_err());
    }

    #[test]
    fn cdf_max_basics() {
        let base = SirCdf::new(CombinerKind::Oc, 4, 2).unwrap();
        for &x in &[0.5, 1.0, 3.0] {
            assert!((cdf_max(&base, 1, x) - base.eval(x)).abs() < 1e-15);
        }
        assert!((cdf_max(&base, 2, 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn frechet_hand_values() {
        let f = FrechetApprox::new(CombinerKind::Oc, 3).unwrap();
        assert_eq!(f.scale, 2.0);
        assert_eq!(frechet_cdf(&f, 0.0), 0.0);
        assert_eq!(frechet_cdf(&f, -1.0), 0.0);
        assert!((frechet_cdf(&f, 2.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn characteristic_extreme_hand_root() {
        let base = SirCdf::new(CombinerKind::Measured, 2, 1).unwrap();
        assert!((characteristic_extreme(&base, 2).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn characteristic_extreme_grows_with_k() {
        let base = SirCdf::new(CombinerKind::Oc, 4, 2).unwrap();
        let mut prev = 0.0;
        for k in 2..=100 {
            let r = characteristic_extreme(&base, k).unwrap();
            assert!(r > prev);
            assert!((base.eval(r) - (1.0 - 1.0 / k as f64)).abs() < 1e-10);
            prev = r;
        }
    }

    #[test]
    fn scaling_law_hand_values() {
        assert!((scaling_law(CombinerKind::Oc, 48).unwrap() - 4.0 * 12f64.log2()).abs() < 1e-12);
        assert!((scaling_law(CombinerKind::Oc, 48).unwrap() - 14.3399).abs() < 1e-4);
        assert!((scaling_law(CombinerKind::Mrc, 2).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_ordering_and_monotonicity() {
        let oc = asymptotic_throughput(CombinerKind::Oc, 50).unwrap();
        let mrc = asymptotic_throughput(CombinerKind::Mrc, 50).unwrap();
        let sc = asymptotic_throughput(CombinerKind::Sc, 50).unwrap();
        assert!(oc > mrc && mrc > sc);
        let target = 4.0 * 150f64.sqrt().log2();
        assert!((oc - target).abs() <= 0.12 * target);
        for c in CombinerKind::EFFECTIVE {
            let mut prev = 0.0;
            for k in [2, 5, 10, 50, 100, 1000] {
                let v = asymptotic_throughput(c, k).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn truncated_constant_cdf_fixture() {
        for x_max in [1.0, 10.0, 123.0] {
            let v = throughput_from_cdf(|_| 0.0, 4, Some(x_max)).unwrap();
            assert!((v - 4.0 * (1.0 + x_max).log2()).abs() < 1e-9 * v);
        }
    }

    #[test]
    fn survival_tail_is_accurate_far_out() {
        let base = SirCdf::new(CombinerKind::Oc, 4, 2).unwrap();
        // (1 + 3x)/(1 + x)^3 ~ 3/x^2
        let x = 1e8;
        assert!((base.survival(x) * x * x / 3.0 - 1.0).abs() < 1e-7);
    }
}
