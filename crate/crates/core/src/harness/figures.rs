//! CSV reproductions of the throughput and CDF figures.
//!
//! Every file starts with `#`-prefixed metadata lines (the resolved
//! configuration, the seed and any figure-specific parameters) followed by
//! a header row and the data. Output is a pure function of the figure id
//! and overrides, so reruns are byte-identical regardless of thread count.

use std::fmt::Write as _;
use std::path::Path;

use crate::analytics::{asymptotic_throughput, exact_throughput, scaling_law, SirCdf};
use crate::channel::{NoiseProfile, RngStream};
use crate::combining::CombinerKind;
use crate::config::{SchedulerKind, SimConfig, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::harness::ecdf::Ecdf;
use crate::harness::sampling::sample_max_sir;
use crate::scheduling::{monte_carlo_paired, Policy};

pub const CDF_SAMPLES: usize = 100_000;
pub const THROUGHPUT_TRIALS: usize = 10_000;

/// Partial configuration layered over a figure's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub sigma2: Option<f64>,
    pub total_power: Option<f64>,
    pub combiner: Option<CombinerKind>,
    pub scheduler: Option<SchedulerKind>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

impl Overrides {
    /// Sets one field from a `key = value` pair using the configuration
    /// file's key names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidConfig(format!("invalid value '{value}' for {what}"));
        let value = value.trim();
        match key.trim() {
            "M" | "m" => self.m = Some(value.parse().map_err(|_| bad("M"))?),
            "N" | "n" => self.n = Some(value.parse().map_err(|_| bad("N"))?),
            "K" | "k" => self.k = Some(value.parse().map_err(|_| bad("K"))?),
            "sigma2" => {
                self.sigma2 = Some(
                    value
                        .parse()
                        .map_err(|_| bad("sigma2 (figures take one value)"))?,
                )
            }
            "total_power" | "total-power" => {
                self.total_power = Some(value.parse().map_err(|_| bad("total_power"))?)
            }
            "combiner" => self.combiner = Some(value.parse()?),
            "scheduler" => self.scheduler = Some(value.parse()?),
            "trials" => self.trials = Some(value.parse().map_err(|_| bad("trials"))?),
            "seed" | "master_seed" => self.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            other => return Err(Error::InvalidConfig(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies every setting of a configuration file.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (k, v) in crate::config::kv_entries(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }
}

/// A rendered figure and the overrides it had to ignore.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub figure: u8,
    pub csv: String,
    pub warnings: Vec<String>,
}

struct Csv {
    meta: String,
    body: String,
}

impl Csv {
    fn new(figure: u8, title: &str) -> Self {
        let mut c = Self {
            meta: String::new(),
            body: String::new(),
        };
        c.meta(&format!("figure = {figure}"));
        c.meta(&format!("title = {title}"));
        c
    }

    fn meta(&mut self, line: &str) {
        let _ = writeln!(self.meta, "# {line}");
    }

    fn config(&mut self, cfg: &SimConfig) {
        for line in cfg.to_kv().lines() {
            self.meta(line);
        }
    }

    fn header(&mut self, cols: &[&str]) {
        let _ = writeln!(self.body, "{}", cols.join(","));
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.body, "{}", cells.join(","));
    }

    fn finish(self) -> String {
        self.meta + &self.body
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// Per-point seed: the master seed mixed with every coordinate of the point.
pub fn point_seed(master: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(master, |s, &p| RngStream::derive_seed(s, p))
}

fn ignore<T>(warnings: &mut Vec<String>, figure: u8, name: &str, value: Option<T>) {
    if value.is_some() {
        warnings.push(format!("figure {figure} ignores the {name} override"));
    }
}

fn combiner_list(o: &Overrides) -> Vec<CombinerKind> {
    o.combiner
        .map_or_else(|| CombinerKind::EFFECTIVE.to_vec(), |c| vec![c])
}

/// Renders figure `figure` (2 through 7) in memory.
pub fn render_figure(figure: u8, o: &Overrides) -> Result<FigureData> {
    let mut warnings = Vec::new();
    let csv = match figure {
        2 => fig2(o, &mut warnings)?,
        3 => throughput_vs_k(3, o, &mut warnings)?,
        4 => fig4(o, &mut warnings)?,
        5 | 6 => throughput_vs_k(figure, o, &mut warnings)?,
        7 => fig7(o, &mut warnings)?,
        other => {
            return Err(Error::InvalidConfig(format!(
                "figure id must be in 2..=7, got {other}"
            )))
        }
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(FigureData {
        figure,
        csv,
        warnings,
    })
}

/// Renders a figure and writes its CSV to `path`.
pub fn run_figure(figure: u8, o: &Overrides, path: &Path) -> Result<FigureData> {
    let data = render_figure(figure, o)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, &data.csv)?;
    Ok(data)
}

fn fig2(o: &Overrides, warnings: &mut Vec<String>) -> Result<String> {
    ignore(warnings, 2, "sigma2", o.sigma2);
    ignore(warnings, 2, "total-power", o.total_power);
    ignore(warnings, 2, "scheduler", o.scheduler);
    let m = o.m.unwrap_or(4);
    let n = o.n.unwrap_or(2);
    let ks = o.k.map_or_else(|| vec![1, 5], |k| vec![k]);
    let samples = o.trials.unwrap_or(CDF_SAMPLES);
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let combiners = o
        .combiner
        .map_or_else(|| CombinerKind::ALL.to_vec(), |c| vec![c]);
    let grid: Vec<f64> = (0..=80).map(|i| i as f64 * 0.25).collect();

    let mut csv = Csv::new(2, "per-beam SIR CDF of the best user, noise free");
    csv.meta(&format!("M = {m}"));
    csv.meta(&format!("N = {n}"));
    csv.meta("sigma2 = 0");
    csv.meta(&format!("samples = {samples}"));
    csv.meta(&format!("seed = {seed}"));
    csv.meta("grid = 0:0.25:20");

    let mut rows = Vec::new();
    for &c in &combiners {
        let base_n = if c == CombinerKind::Measured { 1 } else { n };
        let base = match SirCdf::new(c, m, base_n) {
            Ok(b) => b,
            Err(e) => {
                warnings.push(format!("figure 2 skips {c}: {e}"));
                continue;
            }
        };
        for &k in &ks {
            let s = point_seed(seed, &[2, c as u64, k as u64]);
            let (xs, discarded) = sample_max_sir(c, m, n, k, samples, s)?;
            let ecdf = Ecdf::new(xs)?;
            if let Ok(d) = ecdf.ks_distance(|x| base.max_cdf(k, x)) {
                csv.meta(&format!("ks[{c},K={k}] = {d}"));
            }
            if discarded > 0 {
                csv.meta(&format!("discarded[{c},K={k}] = {discarded}"));
            }
            for &x in &grid {
                rows.push(vec![
                    num(x),
                    c.to_string(),
                    k.to_string(),
                    num(base.max_cdf(k, x)),
                    num(ecdf.eval(x)),
                ]);
            }
        }
    }
    csv.header(&["x", "combiner", "K", "F_analytical", "F_empirical"]);
    for r in &rows {
        csv.row(r);
    }
    Ok(csv.finish())
}

fn fig4(o: &Overrides, warnings: &mut Vec<String>) -> Result<String> {
    ignore(warnings, 4, "combiner", o.combiner);
    ignore(warnings, 4, "M", o.m);
    ignore(warnings, 4, "N", o.n);
    ignore(warnings, 4, "sigma2", o.sigma2);
    ignore(warnings, 4, "total-power", o.total_power);
    ignore(warnings, 4, "scheduler", o.scheduler);
    ignore(warnings, 4, "trials", o.trials);
    ignore(warnings, 4, "seed", o.seed);
    let ks = o.k.map_or_else(
        || vec![2, 5, 10, 20, 48, 50, 100, 200, 500, 1000, 10_000],
        |k| vec![k],
    );
    let mut csv = Csv::new(4, "large-K sum-rate scaling laws");
    csv.meta("M = 4");
    csv.meta("N = 2");
    csv.header(&["K", "C_scaling_OC", "C_scaling_MRC", "C_scaling_SC"]);
    for k in ks {
        let mut row = vec![k.to_string()];
        for c in [CombinerKind::Oc, CombinerKind::Mrc, CombinerKind::Sc] {
            row.push(scaling_law(c, k).map(num).unwrap_or_default());
        }
        csv.row(&row);
    }
    Ok(csv.finish())
}

fn labels(policies: &[Policy]) -> String {
    policies
        .iter()
        .map(Policy::label)
        .collect::<Vec<_>>()
        .join(";")
}

fn policies_for(o: &Overrides) -> Vec<Policy> {
    match o.scheduler {
        Some(SchedulerKind::ShBaseline) => vec![Policy::ShBaseline],
        _ => combiner_list(o).into_iter().map(Policy::Proposed).collect(),
    }
}

/// Drops policies the configuration cannot run (noise-free OC with M = N).
fn runnable(
    policies: &[Policy],
    cfg: &SimConfig,
    figure: u8,
    warnings: &mut Vec<String>,
) -> Vec<Policy> {
    policies
        .iter()
        .copied()
        .filter(|p| {
            let bad = match p {
                Policy::Proposed(CombinerKind::Measured) => true,
                Policy::Proposed(CombinerKind::Oc) => cfg.noise.is_noise_free() && cfg.m <= cfg.n,
                _ => false,
            };
            if bad {
                let w = format!(
                    "figure {figure} skips {} at M = {}, N = {}",
                    p.label(),
                    cfg.m,
                    cfg.n
                );
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
            !bad
        })
        .collect()
}

fn throughput_vs_k(figure: u8, o: &Overrides, warnings: &mut Vec<String>) -> Result<String> {
    let (ms, default_sigma2, default_ks, title): (Vec<usize>, f64, Vec<usize>, &str) = match figure
    {
        3 => (
            vec![4],
            0.0,
            vec![2, 5, 10, 20, 30, 50, 75, 100],
            "noise-free throughput versus K",
        ),
        5 => (
            vec![2, 4],
            1.0,
            vec![1, 2, 5, 10, 20, 50, 100],
            "throughput versus K, unit power per beam",
        ),
        _ => (
            vec![2, 4],
            1.0,
            vec![1, 2, 5, 10, 20, 50, 100],
            "throughput versus K, total power 2",
        ),
    };
    let ms = o.m.map_or(ms, |m| vec![m]);
    let n = o.n.unwrap_or(2);
    let sigma2 = o.sigma2.unwrap_or(default_sigma2);
    let ks = o.k.map_or(default_ks, |k| vec![k]);
    let trials = o.trials.unwrap_or(THROUGHPUT_TRIALS);
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let policies = policies_for(o);

    let mut csv = Csv::new(figure, title);
    let mut rows = Vec::new();
    for &m in &ms {
        let total_power = o
            .total_power
            .unwrap_or(if figure == 6 { 2.0 } else { m as f64 });
        for &k in &ks {
            let mut cfg = SimConfig {
                m,
                n,
                k,
                noise: NoiseProfile::uniform(k, sigma2)?,
                total_power,
                combiner: CombinerKind::Sc,
                scheduler: o.scheduler.unwrap_or(SchedulerKind::Proposed),
                trials,
                master_seed: point_seed(seed, &[u64::from(figure), m as u64, k as u64]),
            };
            let pols = runnable(&policies, &cfg, figure, warnings);
            if pols.is_empty() {
                continue;
            }
            if let Policy::Proposed(c) = pols[0] {
                cfg.combiner = c;
            }
            if rows.is_empty() {
                csv.config(&cfg);
                csv.meta("(M, K and seed above are those of the first point; each point's seed is derived from the master seed)");
                csv.meta(&format!("master_seed = {seed}"));
                csv.meta(&format!("policies = {}", labels(&policies)));
            }
            let run = monte_carlo_paired(&cfg, &pols)?;
            for (p, st) in pols.iter().zip(&run.stats) {
                let analytical = match p {
                    Policy::Proposed(c) if figure == 3 && sigma2 == 0.0 => {
                        if m == 4 && n == 2 && k >= 2 {
                            asymptotic_throughput(*c, k).map(num).unwrap_or_default()
                        } else {
                            SirCdf::new(*c, m, n)
                                .and_then(|b| exact_throughput(&b, k))
                                .map(num)
                                .unwrap_or_default()
                        }
                    }
                    _ => String::new(),
                };
                if st.discarded_trials > 0 {
                    csv.meta(&format!(
                        "discarded[{},M={m},K={k}] = {}",
                        p.label(),
                        st.discarded_trials
                    ));
                }
                rows.push(vec![
                    k.to_string(),
                    p.label(),
                    m.to_string(),
                    num(st.mean_sum_rate),
                    analytical,
                    num(st.std_error),
                ]);
            }
        }
    }
    csv.header(&[
        "K",
        "combiner",
        "M",
        "C_simulated",
        "C_analytical_or_blank",
        "std_error",
    ]);
    for r in &rows {
        csv.row(r);
    }
    Ok(csv.finish())
}

/// SNR points of the throughput-versus-SNR figure, in dB.
pub const FIG7_SNR_DB: [f64; 5] = [0.0, 5.0, 10.0, 15.0, 20.0];

fn fig7(o: &Overrides, warnings: &mut Vec<String>) -> Result<String> {
    ignore(warnings, 7, "sigma2", o.sigma2);
    let m = o.m.unwrap_or(4);
    let n = o.n.unwrap_or(2);
    let k = o.k.unwrap_or(5);
    let trials = o.trials.unwrap_or(THROUGHPUT_TRIALS);
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let total_power = o.total_power.unwrap_or(m as f64);
    let policies = policies_for(o);

    let mut csv = Csv::new(7, "throughput versus SNR = 1/sigma2");
    let mut rows = Vec::new();
    for (i, &snr_db) in FIG7_SNR_DB.iter().enumerate() {
        let sigma2 = 10f64.powf(-snr_db / 10.0);
        let mut cfg = SimConfig {
            m,
            n,
            k,
            noise: NoiseProfile::uniform(k, sigma2)?,
            total_power,
            combiner: CombinerKind::Sc,
            scheduler: o.scheduler.unwrap_or(SchedulerKind::Proposed),
            trials,
            master_seed: point_seed(seed, &[7, i as u64]),
        };
        let pols = runnable(&policies, &cfg, 7, warnings);
        if let Some(Policy::Proposed(c)) = pols.first() {
            cfg.combiner = *c;
        }
        if i == 0 {
            csv.config(&cfg);
            csv.meta(
                "(sigma2 and seed above are those of the first point; sigma2 = 10^(-snr_db/10))",
            );
            csv.meta(&format!("master_seed = {seed}"));
            csv.meta(&format!("policies = {}", labels(&policies)));
        }
        let run = monte_carlo_paired(&cfg, &pols)?;
        for (p, st) in pols.iter().zip(&run.stats) {
            rows.push(vec![
                num(snr_db),
                p.label(),
                num(st.mean_sum_rate),
                num(st.std_error),
            ]);
        }
    }
    csv.header(&["snr_db", "combiner", "C_simulated", "std_error"]);
    for r in &rows {
        csv.row(r);
    }
    Ok(csv.finish())
}

/// A matplotlib script that plots the CSV written for `figure`.
pub fn plot_script(figure: u8, csv_path: &str) -> String {
    let body = match figure {
        2 => "for (c, k), g in df.groupby(['combiner', 'K']):\n    ax.plot(g.x, g.F_analytical, label=f'{c} K={k} analytical')\n    ax.plot(g.x, g.F_empirical, '.', ms=3, label=f'{c} K={k} simulated')\nax.set_xlabel('SIR'); ax.set_ylabel('CDF')\n",
        4 => "for col in ['C_scaling_OC', 'C_scaling_MRC', 'C_scaling_SC']:\n    ax.semilogx(df.K, df[col], label=col)\nax.set_xlabel('K'); ax.set_ylabel('bits/s/Hz')\n",
        7 => "for c, g in df.groupby('combiner'):\n    ax.errorbar(g.snr_db, g.C_simulated, yerr=3 * g.std_error, label=c)\nax.set_xlabel('SNR (dB)'); ax.set_ylabel('bits/s/Hz')\n",
        _ => "for (c, m), g in df.groupby(['combiner', 'M']):\n    ax.errorbar(g.K, g.C_simulated, yerr=3 * g.std_error, label=f'{c} M={m}')\n    if g.C_analytical_or_blank.notna().any():\n        ax.plot(g.K, g.C_analytical_or_blank, '--', label=f'{c} M={m} analytical')\nax.set_xlabel('K'); ax.set_ylabel('bits/s/Hz')\n",
    };
    format!(
        "import matplotlib.pyplot as plt\nimport pandas as pd\n\ndf = pd.read_csv({csv_path:?}, comment='#')\nfig, ax = plt.subplots()\n{body}ax.legend()\nfig.savefig({png:?}, dpi=150)\n",
        png = format!("{}.png", csv_path.trim_end_matches(".csv"))
    )
}
