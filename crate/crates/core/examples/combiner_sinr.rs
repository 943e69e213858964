//! Per-beam SINR of one user under each receive combiner, plus a search
//! over random combining vectors that never beats optimum combining.
//!
//! cargo run --release --example combiner_sinr

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use osdma::beamforming::random_orthonormal_beams_from;
use osdma::channel::{ChannelMatrix, RngStream};
use osdma::combining::{CombinerKind, EffectiveChannel};

fn main() -> osdma::Result<()> {
    let mut rng = RngStream::new(7, 0).rng();
    let a = random_orthonormal_beams_from(4, &mut rng, 1.0)?;
    let h = ChannelMatrix::sample(0, 2, 4, &mut rng)?;
    let g = EffectiveChannel::new(&h, &a, 0.1)?;

    println!("beam  antenna0  antenna1        sc       mrc        oc  best-random");
    for beam in 0..4 {
        let best_random = (0..5000)
            .map(|_| {
                let w: Vec<Complex64> = (0..2)
                    .map(|_| {
                        Complex64::new(
                            StandardNormal.sample(&mut rng),
                            StandardNormal.sample(&mut rng),
                        )
                    })
                    .collect();
                g.generic(&w, beam)
            })
            .collect::<osdma::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!(
            "{beam:>4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>12.4}",
            g.measured(0, beam)?,
            g.measured(1, beam)?,
            g.sinr(CombinerKind::Sc, beam)?,
            g.sinr(CombinerKind::Mrc, beam)?,
            g.sinr(CombinerKind::Oc, beam)?,
            best_random
        );
    }
    Ok(())
}
