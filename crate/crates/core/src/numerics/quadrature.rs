//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Semi-infinite integrals are mapped onto `(0, 1)` with `x = t / (1 - t)`,
//! so `dx = dt / (1 - t)^2`. Kronrod nodes are interior, so neither end of
//! the mapped interval is ever evaluated.

use crate::error::{Error, Result};

/// Default relative tolerance for throughput integrals.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Maximum number of bisections applied to any single subinterval.
pub const MAX_DEPTH: u32 = 30;

const MAX_INTERVALS: usize = 4000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    depth: u32,
    estimate: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Domain(format!("integrand is not finite at {x}")))
        }
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&node, &wk)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * node;
        let pair = eval(center - dx)? + eval(center + dx)?;
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

fn segment<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, depth: u32) -> Result<Segment> {
    let (estimate, error) = gauss_kronrod(f, lo, hi)?;
    Ok(Segment {
        lo,
        hi,
        depth,
        estimate,
        error,
    })
}

/// Adaptive integration of `f` over the finite interval `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
        return Err(Error::Domain(format!(
            "rel_tol must lie in (0, 1e-2], got {rel_tol}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(0.0);
    }

    let mut segments = vec![segment(&f, lo, hi, 0)?];
    loop {
        let total: f64 = segments.iter().map(|s| s.estimate).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let roundoff = 50.0 * f64::EPSILON * segments.iter().map(|s| s.estimate.abs()).sum::<f64>();
        if error <= (rel_tol * total.abs()).max(roundoff) {
            return Ok(total);
        }

        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("segment list is never empty");
        let s = segments[worst];
        if s.depth >= MAX_DEPTH || segments.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence {
                estimate: total,
                achieved_tol: if total == 0.0 {
                    f64::INFINITY
                } else {
                    error / total.abs()
                },
            });
        }
        let mid = 0.5 * (s.lo + s.hi);
        segments[worst] = segment(&f, s.lo, mid, s.depth + 1)?;
        segments.push(segment(&f, mid, s.hi, s.depth + 1)?);
    }
}

/// Adaptive integration of `f` over `(0, ∞)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<f64> {
    integrate(
        |t: f64| {
            let u = 1.0 - t;
            f(t / u) / (u * u)
        },
        0.0,
        1.0,
        rel_tol,
    )
}
