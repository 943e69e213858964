//! Runs every validation suite and prints the JSON reports.
//!
//! cargo run --release --example validation_suites

use osdma::harness::{run_validation, Suite};
use osdma::SimConfig;

fn main() -> osdma::Result<()> {
    let mut all = true;
    for suite in Suite::ALL {
        let cfg = SimConfig {
            trials: suite.default_trials(),
            ..SimConfig::default()
        };
        let report = run_validation(suite, &cfg)?;
        all &= report.passed();
        println!("{}", report.to_json());
    }
    println!("all suites passed: {all}");
    Ok(())
}
