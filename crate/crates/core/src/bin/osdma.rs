#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use osdma::analytics::{asymptotic_throughput, exact_throughput, scaling_law, SirCdf};
use osdma::config::SEED_ENV;
use osdma::harness::{plot_script, render_figure, run_validation, Overrides, Suite};
use osdma::{monte_carlo_throughput, CombinerKind, Error, Result, SimConfig};

/// Opportunistic SDMA simulator: figure CSVs, validation suites and
/// closed-form throughput.
#[derive(Debug, Parser)]
#[command(name = "osdma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long = "M", global = true)]
    m: Option<usize>,
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    #[arg(long = "K", global = true)]
    k: Option<usize>,
    /// Noise variance: one value, or a comma-separated list with one entry per user.
    #[arg(long, global = true)]
    sigma2: Option<String>,
    #[arg(long = "total-power", global = true)]
    total_power: Option<f64>,
    /// sc, mrc, oc (or measured where meaningful).
    #[arg(long, global = true)]
    combiner: Option<String>,
    /// proposed or sh-baseline.
    #[arg(long, global = true)]
    scheduler: Option<String>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true, env = SEED_ENV)]
    seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores); results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproduce figure 2..7 as CSV.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(2..=7))]
        id: u8,
        /// Also write a matplotlib script next to the CSV (needs --out).
        #[arg(long)]
        plot: bool,
    },
    /// Run a validation suite (cdf, ordering, throughput, baseline) and print a JSON report.
    Validate { suite: String },
    /// Monte Carlo throughput of one configuration.
    Throughput,
    /// Closed-form per-user and best-of-K SIR CDF on a grid.
    Cdf {
        /// Largest x on the grid.
        #[arg(long, default_value_t = 20.0)]
        x_max: f64,
        /// Number of grid intervals.
        #[arg(long, default_value_t = 80)]
        points: usize,
    },
    /// Exact and asymptotic noise-free throughput for each combiner.
    Asymptotic,
    /// Scaling laws for each combiner.
    Scaling,
}

impl Cli {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        let mut push = |k: &'static str, val: Option<String>| {
            if let Some(val) = val {
                v.push((k, val));
            }
        };
        push("K", self.k.map(|x| x.to_string()));
        push("M", self.m.map(|x| x.to_string()));
        push("N", self.n.map(|x| x.to_string()));
        push("sigma2", self.sigma2.clone());
        push("total_power", self.total_power.map(|x| x.to_string()));
        push("combiner", self.combiner.clone());
        push("scheduler", self.scheduler.clone());
        push("trials", self.trials.map(|x| x.to_string()));
        push("seed", self.seed.map(|x| x.to_string()));
        v
    }

    fn config_text(&self) -> Result<Option<String>> {
        self.config
            .as_ref()
            .map(|p| std::fs::read_to_string(p).map_err(Error::from))
            .transpose()
    }

    /// Defaults, then the config file, then flags.
    fn sim_config(&self, default_trials: Option<usize>) -> Result<SimConfig> {
        let mut cfg = SimConfig::default();
        if let Some(t) = default_trials {
            cfg.trials = t;
        }
        if let Some(text) = self.config_text()? {
            cfg.apply_kv(&text)?;
        }
        for (k, v) in self.pairs() {
            cfg.set(k, &v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn overrides(&self) -> Result<Overrides> {
        let mut o = Overrides::default();
        if let Some(text) = self.config_text()? {
            o.apply_kv(&text)?;
        }
        for (k, v) in self.pairs() {
            o.set(k, &v)?;
        }
        Ok(o)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(path, text)?;
                log::info!("wrote {}", path.display());
            }
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn combiners(cfg_combiner: Option<&str>) -> Result<Vec<CombinerKind>> {
    match cfg_combiner {
        Some(c) => Ok(vec![c.parse()?]),
        None => Ok(CombinerKind::EFFECTIVE.to_vec()),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Figure { id, plot } => {
            let data = render_figure(*id, &cli.overrides()?)?;
            for w in &data.warnings {
                eprintln!("warning: {w}");
            }
            cli.emit(&data.csv)?;
            if *plot {
                match &cli.out {
                    Some(path) => {
                        let script = path.with_extension("py");
                        std::fs::write(&script, plot_script(*id, &path.to_string_lossy()))?;
                        log::info!("wrote {}", script.display());
                    }
                    None => eprintln!("warning: --plot needs --out; no script written"),
                }
            }
            Ok(true)
        }
        Command::Validate { suite } => {
            let suite: Suite = suite.parse()?;
            let cfg = cli.sim_config(Some(suite.default_trials()))?;
            let report = run_validation(suite, &cfg)?;
            cli.emit(&(report.to_json() + "\n"))?;
            for c in &report.checks {
                eprintln!(
                    "{} {}: {} {} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.comparison,
                    c.threshold
                );
            }
            Ok(report.passed())
        }
        Command::Throughput => {
            let cfg = cli.sim_config(None)?;
            let st = monte_carlo_throughput(&cfg)?;
            let mut out = meta(&cfg);
            let _ = writeln!(
                out,
                "combiner,scheduler,M,N,K,C_simulated,std_error,trials_used,discarded"
            );
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                cfg.combiner,
                cfg.scheduler,
                cfg.m,
                cfg.n,
                cfg.k,
                st.mean_sum_rate,
                st.std_error,
                st.trials,
                st.discarded_trials
            );
            cli.emit(&out)?;
            Ok(true)
        }
        Command::Cdf { x_max, points } => {
            if !(*x_max > 0.0) || *points == 0 {
                return Err(Error::InvalidConfig(
                    "--x-max must be positive and --points at least 1".into(),
                ));
            }
            let m = cli.m.unwrap_or(4);
            let n = cli.n.unwrap_or(2);
            let k = cli.k.unwrap_or(1);
            let kinds = match cli.combiner.as_deref() {
                Some(c) => vec![c.parse()?],
                None => CombinerKind::ALL.to_vec(),
            };
            let mut out = String::new();
            let _ = writeln!(out, "# M = {m}\n# N = {n}\n# K = {k}\n# sigma2 = 0");
            let _ = writeln!(out, "x,combiner,F,F_max_K");
            for c in kinds {
                let base = SirCdf::new(c, m, if c == CombinerKind::Measured { 1 } else { n })?;
                for i in 0..=*points {
                    let x = x_max * i as f64 / *points as f64;
                    let _ = writeln!(out, "{x},{c},{},{}", base.eval(x), base.max_cdf(k, x));
                }
            }
            cli.emit(&out)?;
            Ok(true)
        }
        Command::Asymptotic => {
            let m = cli.m.unwrap_or(4);
            let n = cli.n.unwrap_or(2);
            let k = cli.k.unwrap_or(50);
            let mut out = String::new();
            let _ = writeln!(out, "# M = {m}\n# N = {n}\n# K = {k}\n# sigma2 = 0");
            let _ = writeln!(
                out,
                "combiner,C_exact,C_asymptotic_or_blank,C_scaling_or_blank"
            );
            for c in combiners(cli.combiner.as_deref())? {
                let exact = exact_throughput(&SirCdf::new(c, m, n)?, k)?;
                let (asym, law) = if m == 4 && n == 2 && k >= 2 {
                    (
                        asymptotic_throughput(c, k)?.to_string(),
                        scaling_law(c, k)?.to_string(),
                    )
                } else {
                    (String::new(), String::new())
                };
                let _ = writeln!(out, "{c},{exact},{asym},{law}");
            }
            cli.emit(&out)?;
            Ok(true)
        }
        Command::Scaling => {
            let k = cli.k.unwrap_or(50);
            if cli.m.is_some_and(|m| m != 4) || cli.n.is_some_and(|n| n != 2) {
                eprintln!("warning: scaling laws are defined for M = 4, N = 2 only; M/N overrides ignored");
            }
            let mut out = String::from("# M = 4\n# N = 2\n");
            let _ = writeln!(out, "K,combiner,C_scaling");
            for c in combiners(cli.combiner.as_deref())? {
                let _ = writeln!(out, "{k},{c},{}", scaling_law(c, k)?);
            }
            cli.emit(&out)?;
            Ok(true)
        }
    }
}

fn meta(cfg: &SimConfig) -> String {
    let mut s = String::new();
    for line in cfg.to_kv().lines() {
        let _ = writeln!(s, "# {line}");
    }
    s
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
