//! Exact noise-free throughput against its Fréchet approximation and the
//! logarithmic scaling law, for growing K.
//!
//! cargo run --release --example asymptotic_throughput

use osdma::analytics::{asymptotic_throughput, exact_throughput, scaling_law, SirCdf};
use osdma::combining::CombinerKind;

fn main() -> osdma::Result<()> {
    println!(
        "{:>3} {:>6} {:>9} {:>11} {:>9} {:>13}",
        "", "K", "exact", "asymptotic", "scaling", "asym/scaling"
    );
    for c in [CombinerKind::Oc, CombinerKind::Mrc, CombinerKind::Sc] {
        let base = SirCdf::new(c, 4, 2)?;
        for k in [10, 100, 1000, 10_000] {
            let (e, a, s) = (
                exact_throughput(&base, k)?,
                asymptotic_throughput(c, k)?,
                scaling_law(c, k)?,
            );
            println!("{c:>3} {k:>6} {e:>9.4} {a:>11.4} {s:>9.4} {:>13.4}", a / s);
        }
    }
    Ok(())
}
