//! Random orthonormal beams: unitarity and the Beta(1, M-1) law of one
//! entry's squared magnitude.
//!
//! cargo run --release --example haar_beams

use osdma::beamforming::random_orthonormal_beams;
use osdma::channel::RngStream;
use osdma::harness::Ecdf;

fn main() -> osdma::Result<()> {
    let m = 4;
    let a = random_orthonormal_beams(m, RngStream::new(1, 0), 1.0)?;
    println!(
        "one {m}x{m} draw, max |A^H A - I| = {:.2e}",
        a.unitarity_error()
    );

    let samples: Vec<f64> = (0..20_000)
        .map(|t| {
            random_orthonormal_beams(m, RngStream::new(1, t), 1.0)
                .map(|a| a.matrix()[(0, 0)].norm_sqr())
        })
        .collect::<osdma::Result<_>>()?;
    let ks = Ecdf::new(samples)?.ks_distance(|x| 1.0 - (1.0 - x).powi(m as i32 - 1))?;
    println!(
        "KS distance of |a_11|^2 against Beta(1, {}) over 20000 draws: {ks:.4}",
        m - 1
    );
    Ok(())
}
