//! One scheduling slot: feedback tables, per-beam winners and sum rate,
//! next to the per-antenna baseline on the same draw.
//!
//! cargo run --release --example schedule_one_slot

use osdma::beamforming::random_orthonormal_beams_from;
use osdma::channel::{sample_channels_from, NoiseProfile, RngStream};
use osdma::combining::{CombinerKind, EffectiveChannel};
use osdma::scheduling::{schedule, sh_baseline_schedule, sum_rate};

fn main() -> osdma::Result<()> {
    let (m, n, k, sigma2) = (4, 2, 6, 1.0);
    let mut rng = RngStream::new(3, 0).rng();
    let a = random_orthonormal_beams_from(m, &mut rng, 1.0)?;
    let channels = sample_channels_from(k, m, n, &mut rng)?;

    for kind in CombinerKind::EFFECTIVE {
        let tables = channels
            .iter()
            .map(|h| EffectiveChannel::new(h, &a, sigma2)?.feedback(kind))
            .collect::<osdma::Result<Vec<_>>>()?;
        let asg = schedule(&tables)?;
        let winners: Vec<String> = asg
            .beams
            .iter()
            .map(|b| format!("u{}:{:.2}", b.winner.unwrap(), b.sinr))
            .collect();
        println!(
            "{kind:>3}: {}  -> {:.3} bits/s/Hz",
            winners.join(" "),
            sum_rate(&asg)
        );
    }

    let asg = sh_baseline_schedule(&channels, &a, &NoiseProfile::uniform(k, sigma2)?)?;
    let winners: Vec<String> = asg
        .beams
        .iter()
        .map(|b| match b.winner {
            Some(u) => format!("u{u}:{:.2}({} req)", b.sinr, b.requests.unwrap_or(0)),
            None => "unassigned".into(),
        })
        .collect();
    println!(
        "baseline: {}  -> {:.3} bits/s/Hz",
        winners.join(" "),
        sum_rate(&asg)
    );
    Ok(())
}
