//! Acceptance criteria. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fail.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use osdma::analytics::{
    asymptotic_throughput, cdf_measured, cdf_mrc, cdf_oc, cdf_sc, characteristic_extreme,
    scaling_law, tail_exponent, FrechetApprox, SirCdf,
};
use osdma::beamforming::random_orthonormal_beams_from;
use osdma::channel::{ChannelMatrix, NoiseProfile, RngStream};
use osdma::combining::{CombinerKind, EffectiveChannel};
use osdma::harness::{render_figure, sample_max_sir, Ecdf, Overrides};
use osdma::scheduling::{monte_carlo_paired, PairedRun, Policy, ThroughputStats};
use osdma::{Error, Result, SimConfig};

const SEED: u64 = 20_070_101;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

fn seed(tag: u64) -> u64 {
    RngStream::derive_seed(SEED, tag)
}

const EFFECTIVE3: [Policy; 3] = [
    Policy::Proposed(CombinerKind::Oc),
    Policy::Proposed(CombinerKind::Mrc),
    Policy::Proposed(CombinerKind::Sc),
];

fn paired(
    m: usize,
    k: usize,
    sigma2: f64,
    total_power: f64,
    trials: usize,
    s: u64,
    policies: &[Policy],
) -> Result<PairedRun> {
    let cfg = SimConfig {
        m,
        n: 2,
        k,
        noise: NoiseProfile::uniform(k, sigma2)?,
        total_power,
        combiner: CombinerKind::Sc,
        scheduler: osdma::SchedulerKind::Proposed,
        trials,
        master_seed: s,
    };
    monte_carlo_paired(&cfg, policies)
}

fn c1_cdf_fidelity() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (i, c) in CombinerKind::ALL.into_iter().enumerate() {
        let (xs, _) = sample_max_sir(c, 4, 2, 1, 100_000, seed(100 + i as u64))?;
        let e = Ecdf::new(xs)?;
        let d = match c {
            CombinerKind::Measured => e.ks_distance(|x| cdf_measured(x.max(0.0), 4).unwrap())?,
            CombinerKind::Sc => e.ks_distance(|x| cdf_sc(x.max(0.0), 4, 2).unwrap())?,
            CombinerKind::Mrc => e.ks_distance(|x| cdf_mrc(x.max(0.0), 4, 2).unwrap())?,
            CombinerKind::Oc => e.ks_distance(|x| cdf_oc(x.max(0.0), 4, 2).unwrap())?,
        };
        worst = worst.max(d);
        parts.push(format!("{c}={d:.4}"));
    }
    outcome(worst < 0.01, format!("KS {} (< 0.01)", parts.join(" ")))
}

fn c2_algebraic_reduction() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let x = i as f64 * 0.2;
        let closed = 1.0 - (1.0 + 3.0 * x) / (1.0 + x).powi(3);
        worst = worst.max((cdf_oc(x, 4, 2)? - closed).abs());
    }
    outcome(
        worst < 1e-12,
        format!("max |diff| = {worst:.2e} over 100 points"),
    )
}

fn c3_hand_values() -> Result<Outcome> {
    let checks = [
        (cdf_measured(1.0, 4)?, 0.875),
        (cdf_sc(1.0, 4, 2)?, 0.765625),
        (cdf_mrc(1.0, 4, 2)?, 0.6875),
        (cdf_oc(1.0, 4, 2)?, 0.5),
        (scaling_law(CombinerKind::Oc, 48)?, 4.0 * 12f64.log2()),
    ];
    let ok = checks.iter().all(|(got, want)| (got - want).abs() < 1e-12);
    let law = checks[4].0;
    outcome(
        ok && (law - 14.3399).abs() < 1e-4,
        format!("scaling_law(OC, 48) = {law:.4}"),
    )
}

fn c4_combiner_optimality() -> Result<Outcome> {
    let mut worst_fixed = f64::NEG_INFINITY;
    let mut worst_random = f64::NEG_INFINITY;
    for (tag, sigma2) in [(400u64, 0.0), (401, 1.0)] {
        let s = seed(tag);
        let per_draw: Vec<Result<(f64, f64)>> = (0..10_000u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngStream::new(s, t).rng();
                let a = random_orthonormal_beams_from(4, &mut rng, 1.0)?;
                let h = ChannelMatrix::sample(0, 2, 4, &mut rng)?;
                let g = EffectiveChannel::new(&h, &a, sigma2)?;
                let weights: Vec<[Complex64; 2]> = (0..1000)
                    .map(|_| {
                        let mut z = || {
                            Complex64::new(
                                StandardNormal.sample(&mut rng),
                                StandardNormal.sample(&mut rng),
                            )
                        };
                        [z(), z()]
                    })
                    .collect();
                let (mut fixed, mut random) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
                for beam in 0..4 {
                    let oc = g.oc(beam)?;
                    fixed = fixed.max(g.mrc(beam)?.max(g.sc(beam)?) - oc);
                    for w in &weights {
                        random = random.max(g.generic(w, beam)? - oc);
                    }
                }
                Ok((fixed, random))
            })
            .collect();
        for r in per_draw {
            let (f, w) = r?;
            worst_fixed = worst_fixed.max(f);
            worst_random = worst_random.max(w);
        }
    }
    outcome(
        worst_fixed <= 1e-9 && worst_random <= 1e-9,
        format!("max(other - oc): mrc/sc {worst_fixed:.2e}, random weights {worst_random:.2e} (<= 1e-9)"),
    )
}

fn c5_fig3() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut at50 = None;
    for k in [20, 50, 100] {
        let run = paired(4, k, 0.0, 4.0, 10_000, seed(500 + k as u64), &EFFECTIVE3)?;
        for (p, st) in run.policies.iter().zip(&run.stats) {
            let Policy::Proposed(c) = *p else {
                unreachable!()
            };
            let asym = asymptotic_throughput(c, k)?;
            let rel = (st.mean_sum_rate - asym).abs() / asym;
            ok &= rel <= 0.10;
            parts.push(format!("{c}@{k}:{:.1}%", 100.0 * rel));
        }
        if k == 50 {
            at50 = Some(
                run.stats
                    .iter()
                    .map(|s| s.mean_sum_rate)
                    .collect::<Vec<_>>(),
            );
        }
    }
    let r = at50.unwrap();
    let (oc_sc, oc_mrc) = (r[0] / r[2], r[0] / r[1]);
    ok &= oc_sc >= 1.3 && oc_mrc >= 1.3;
    outcome(
        ok,
        format!(
            "sim vs asymptotic {}; K=50 OC/SC {oc_sc:.3}, OC/MRC {oc_mrc:.3} (>= 1.3)",
            parts.join(" ")
        ),
    )
}

fn c6_fig5_ratios() -> Result<Outcome> {
    let run = paired(4, 50, 1.0, 4.0, 10_000, seed(600), &EFFECTIVE3)?;
    let (m_sc, se_sc) = run.contrast(0, 2, 1.15);
    let (m_mrc, se_mrc) = run.contrast(0, 1, 1.05);
    let (lb_sc, lb_mrc) = (m_sc - 3.0 * se_sc, m_mrc - 3.0 * se_mrc);
    let r = |i: usize| run.stats[i].mean_sum_rate;
    outcome(
        lb_sc >= 0.0 && lb_mrc >= 0.0,
        format!(
            "OC/SC {:.3}, OC/MRC {:.3}; 3-SE lower bounds of OC-1.15SC {lb_sc:.3}, OC-1.05MRC {lb_mrc:.3}",
            r(0) / r(2),
            r(0) / r(1)
        ),
    )
}

fn c7_fig6() -> Result<Outcome> {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for k in [10, 20, 50, 100] {
        let s2 = paired(2, k, 1.0, 2.0, 10_000, seed(700 + k as u64), &EFFECTIVE3)?;
        let s4 = paired(4, k, 1.0, 2.0, 10_000, seed(750 + k as u64), &EFFECTIVE3)?;
        for (a, b) in s4.stats.iter().zip(&s2.stats) {
            let margin = unpaired_margin(a, b);
            worst = worst.min(margin);
            ok &= margin > 0.0;
        }
    }
    outcome(
        ok,
        format!("min over K in {{10,20,50,100}} and combiners of C4 - C2 - 3 SE = {worst:.3}"),
    )
}

fn unpaired_margin(a: &ThroughputStats, b: &ThroughputStats) -> f64 {
    a.mean_sum_rate - b.mean_sum_rate - 3.0 * a.std_error.hypot(b.std_error)
}

fn c8_fig7() -> Result<Outcome> {
    let mut worst = f64::INFINITY;
    for (i, snr_db) in [0.0f64, 5.0, 10.0, 15.0, 20.0].into_iter().enumerate() {
        let sigma2 = 10f64.powf(-snr_db / 10.0);
        let run = paired(4, 5, sigma2, 4.0, 10_000, seed(800 + i as u64), &EFFECTIVE3)?;
        for other in [1, 2] {
            let (m, se) = run.contrast(0, other, 1.0);
            worst = worst.min(m - 3.0 * se);
        }
    }
    outcome(
        worst > 0.0,
        format!("min 3-SE lower bound of OC - max(MRC, SC) = {worst:.3}"),
    )
}

fn c9_extreme_values() -> Result<Outcome> {
    let oc = SirCdf::new(CombinerKind::Oc, 4, 2)?;
    let k = 10_000;
    let root = characteristic_extreme(&oc, k)?;
    let target = (3.0 * k as f64).sqrt() - 1.0;
    let rel = (root - target).abs() / target;

    let fr = FrechetApprox::new(CombinerKind::Oc, 100)?;
    let (lo, hi) = (fr.scale / 4.0, 10.0 * fr.scale);
    let gap = (0..=2000)
        .map(|i| lo + (hi - lo) * i as f64 / 2000.0)
        .map(|x| (fr.eval(x) - oc.max_cdf(100, x)).abs())
        .fold(0.0, f64::max);

    let q_oc = tail_exponent(&oc, 1e3, 2.0);
    let q_mrc = tail_exponent(&SirCdf::new(CombinerKind::Mrc, 4, 2)?, 1e3, 2.0);
    let q_sc = tail_exponent(&SirCdf::new(CombinerKind::Sc, 4, 2)?, 1e3, 2.0);
    let ok = rel < 0.02
        && gap < 0.05
        && (q_oc - 2.0).abs() <= 0.1
        && (q_mrc - 3.0).abs() <= 0.1
        && (q_sc - 3.0).abs() <= 0.1;
    outcome(
        ok,
        format!(
            "a_K rel err {:.3}%, Frechet sup gap {gap:.4}, tail exponents oc {q_oc:.3} mrc {q_mrc:.3} sc {q_sc:.3}",
            100.0 * rel
        ),
    )
}

fn c10_scaling_limit() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in CombinerKind::EFFECTIVE {
        let ratios = [100usize, 1000, 10_000]
            .iter()
            .map(|&k| Ok(asymptotic_throughput(c, k)? / scaling_law(c, k)?))
            .collect::<Result<Vec<f64>>>()?;
        ok &= ratios[0] > ratios[1] && ratios[1] > ratios[2];
        ok &= (0.9..=1.5).contains(&ratios[2]);
        parts.push(format!(
            "{c}: {:.4} > {:.4} > {:.4}",
            ratios[0], ratios[1], ratios[2]
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c11_baseline() -> Result<Outcome> {
    let mut worst = f64::INFINITY;
    let mut parts = Vec::new();
    for k in [5, 50] {
        let run = paired(
            4,
            k,
            1.0,
            4.0,
            10_000,
            seed(1100 + k as u64),
            &[Policy::Proposed(CombinerKind::Sc), Policy::ShBaseline],
        )?;
        let (m, se) = run.contrast(0, 1, 1.0);
        worst = worst.min(m - 3.0 * se);
        parts.push(format!(
            "K={k}: SC {:.3} vs baseline {:.3} (lower bound {:.4})",
            run.stats[0].mean_sum_rate,
            run.stats[1].mean_sum_rate,
            m - 3.0 * se
        ));
    }
    outcome(worst >= 0.0, parts.join("; "))
}

fn render_with_threads(threads: usize, figure: u8, o: &Overrides) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    pool.install(|| render_figure(figure, o)).map(|d| d.csv)
}

fn c12_determinism() -> Result<Outcome> {
    let cases = [
        (
            2u8,
            Overrides {
                trials: Some(20_000),
                ..Default::default()
            },
        ),
        (
            3,
            Overrides {
                trials: Some(2_000),
                ..Default::default()
            },
        ),
        (4, Overrides::default()),
        (
            5,
            Overrides {
                trials: Some(1_000),
                ..Default::default()
            },
        ),
        (
            6,
            Overrides {
                trials: Some(1_000),
                k: Some(20),
                ..Default::default()
            },
        ),
        (
            7,
            Overrides {
                trials: Some(2_000),
                ..Default::default()
            },
        ),
    ];
    let mut ok = true;
    for (fig, o) in &cases {
        let one = render_with_threads(1, *fig, o)?;
        let eight = render_with_threads(8, *fig, o)?;
        let again = render_with_threads(8, *fig, o)?;
        ok &= one == eight && eight == again;
    }
    let bin = env!("CARGO_BIN_EXE_osdma");
    let run = |threads: &str| {
        Command::new(bin)
            .args([
                "figure",
                "7",
                "--trials",
                "1000",
                "--seed",
                "5",
                "--threads",
                threads,
            ])
            .env_remove("OSDMA_SEED")
            .output()
    };
    let (a, b, c) = (run("1")?, run("8")?, run("8")?);
    ok &=
        a.status.success() && a.stdout == b.stdout && b.stdout == c.stdout && !a.stdout.is_empty();
    outcome(
        ok,
        "figures 2-7 in-process under 1 and 8 threads, and the binary under --threads 1/8",
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Result<Outcome>);

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let instant = Duration::from_secs(5);
    let criteria: [Criterion; 12] = [
        (1, "CDF fidelity", min(1), c1_cdf_fidelity),
        (2, "algebraic reduction", instant, c2_algebraic_reduction),
        (3, "hand-checkable values", instant, c3_hand_values),
        (4, "combiner optimality", min(2), c4_combiner_optimality),
        (5, "noise-free throughput vs asymptotics", min(5), c5_fig3),
        (6, "noisy throughput ratios", min(3), c6_fig5_ratios),
        (7, "fixed total power, M = 4 beats M = 2", min(3), c7_fig6),
        (8, "OC on top at every SNR", min(3), c8_fig7),
        (9, "extreme-value consistency", instant, c9_extreme_values),
        (10, "scaling-law limit", instant, c10_scaling_limit),
        (11, "baseline suboptimality", min(3), c11_baseline),
        (12, "determinism", Duration::MAX, c12_determinism),
    ];

    let mut failures = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let timing = if elapsed > budget {
            format!(" [over time budget {budget:?}]")
        } else {
            String::new()
        };
        println!(
            "criterion {id:>2} {}: {name} — {detail} ({:.1}s){timing}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !passed {
            failures += 1;
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 12 acceptance criteria passed");
}
