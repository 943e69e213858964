//! Characteristic extremes, Fréchet fit quality and Pareto tail indices
//! of the per-user SIR distributions.
//!
//! cargo run --release --example extreme_values

use osdma::analytics::{characteristic_extreme, tail_exponent, FrechetApprox, SirCdf};
use osdma::combining::CombinerKind;

fn main() -> osdma::Result<()> {
    for c in [CombinerKind::Oc, CombinerKind::Mrc, CombinerKind::Sc] {
        let base = SirCdf::new(c, 4, 2)?;
        println!(
            "{c}: tail index at x = 1e3 is {:.3}",
            tail_exponent(&base, 1e3, 2.0)
        );
        for k in [100, 10_000] {
            let root = characteristic_extreme(&base, k)?;
            let fr = FrechetApprox::new(c, k)?;
            let (lo, hi) = (fr.scale / 4.0, 10.0 * fr.scale);
            let gap = (0..=1000)
                .map(|i| lo + (hi - lo) * i as f64 / 1000.0)
                .map(|x| (fr.eval(x) - base.max_cdf(k, x)).abs())
                .fold(0.0, f64::max);
            println!(
                "  K = {k:>5}: root of F = 1 - 1/K is {root:.3}, closed-form a_K = {:.3}, sup |Frechet - F^K| = {gap:.4}",
                fr.scale
            );
        }
    }
    Ok(())
}
