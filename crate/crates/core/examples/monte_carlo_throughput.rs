//! Paired Monte Carlo throughput of the three combiners and the
//! per-antenna baseline, with standard errors and paired contrasts.
//!
//! cargo run --release --example monte_carlo_throughput [K] [trials]

use osdma::scheduling::{monte_carlo_paired, Policy};
use osdma::{CombinerKind, SimConfig};

fn main() -> osdma::Result<()> {
    let mut args = std::env::args().skip(1);
    let k = args.next().map_or(50, |s| s.parse().expect("K"));
    let trials = args.next().map_or(10_000, |s| s.parse().expect("trials"));

    let mut cfg = SimConfig::uniform(4, 2, k, 1.0, CombinerKind::Oc)?;
    cfg.trials = trials;
    let policies = [
        Policy::Proposed(CombinerKind::Oc),
        Policy::Proposed(CombinerKind::Mrc),
        Policy::Proposed(CombinerKind::Sc),
        Policy::ShBaseline,
    ];
    let run = monte_carlo_paired(&cfg, &policies)?;
    println!("M = 4, N = 2, K = {k}, sigma2 = 1, {trials} trials");
    for (p, st) in run.policies.iter().zip(&run.stats) {
        println!(
            "{:>12}: {:.4} ± {:.4} bits/s/Hz",
            p.label(),
            st.mean_sum_rate,
            st.std_error
        );
    }
    for (b, name) in [(1, "mrc"), (2, "sc")] {
        let (d, se) = run.contrast(0, b, 1.0);
        println!("oc - {name}: {d:.4} ± {se:.4} (paired)");
    }
    Ok(())
}
