//! Writes every figure CSV into a directory.
//!
//! cargo run --release --example reproduce_figures [out_dir] [trials]
//!
//! `trials` (optional) overrides both the throughput trial count and the
//! CDF sample count, which is handy for a quick look.

use std::path::PathBuf;

use osdma::harness::{run_figure, Overrides};

fn main() -> osdma::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "figures".into()));
    let overrides = Overrides {
        trials: args.next().map(|s| s.parse().expect("trials")),
        ..Default::default()
    };
    for fig in 2..=7 {
        let path = dir.join(format!("fig{fig}.csv"));
        let data = run_figure(fig, &overrides, &path)?;
        let rows = data.csv.lines().filter(|l| !l.starts_with('#')).count() - 1;
        println!("figure {fig}: {rows} rows -> {}", path.display());
        for w in data.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
