//! Closed-form SIR distributions checked against simulated samples.
//!
//! cargo run --release --example closed_form_cdfs

use osdma::analytics::SirCdf;
use osdma::combining::CombinerKind;
use osdma::harness::{sample_max_sir, Ecdf};

fn main() -> osdma::Result<()> {
    let (m, n) = (4, 2);
    println!(
        "{:>9} {:>3} {:>9} {:>9} {:>9}  KS",
        "combiner", "K", "F(1)", "F(5)", "F(20)"
    );
    for (i, c) in CombinerKind::ALL.into_iter().enumerate() {
        let base = SirCdf::new(c, m, if c == CombinerKind::Measured { 1 } else { n })?;
        for k in [1, 5] {
            let (xs, _) = sample_max_sir(c, m, n, k, 50_000, 100 + i as u64)?;
            let ks = Ecdf::new(xs)?.ks_distance(|x| base.max_cdf(k, x))?;
            println!(
                "{c:>9} {k:>3} {:>9.5} {:>9.5} {:>9.5}  {ks:.4}",
                base.max_cdf(k, 1.0),
                base.max_cdf(k, 5.0),
                base.max_cdf(k, 20.0)
            );
        }
    }
    Ok(())
}
