use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use super::batch::{run_batch, verify_manifest, BatchReport};
use super::config::{Algorithm, ExperimentConfig};
use super::presets::figure_preset;
use crate::analysis::{burn_in_end, local_rates, write_contour_csv, ContourCell, ContourRow};
use crate::base::{read_gaps_csv, sci, StepRule};
use crate::error::{Error, Result};
use crate::herding::{herding_run, Density};
use crate::objectives::{InstanceSpec, Location, RegionSpec};
use crate::regions::jaggi_lower_bound;

#[derive(Debug, Parser)]
#[command(name = "fwkit", about = "Frank-Wolfe experiments with open-loop step sizes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance with one or more step rules.
    Solve(SolveArgs),
    /// Run the experiment batch behind a figure.
    Figure {
        /// nonpolytope, wolfe, afw-difw, local-rate or herding.
        preset: String,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Use the long iteration budgets.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Local convergence rates of a trace CSV.
    Rates {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        window: usize,
        #[arg(long, default_value_t = 1.8)]
        threshold: f64,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel herding on [0, 1].
    Herding {
        /// uniform, fourier:<file> or random:<seed>[:<degree>].
        #[arg(long, default_value = "uniform")]
        density: String,
        #[arg(long, default_value = "openloop:1")]
        rule: String,
        #[arg(long, default_value_t = 1024)]
        iters: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sparse lower bound min ||x||^2 over t-sparse simplex points.
    Jaggi {
        #[arg(long)]
        d: usize,
    },
    /// Check trace checksums against a batch manifest.
    Verify { dir: PathBuf },
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    /// TOML experiment file; other instance flags are ignored when given.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "fw")]
    pub algo: String,
    /// Repeatable.
    #[arg(long = "rule", default_values_t = vec!["openloop:4".to_string()])]
    pub rules: Vec<String>,
    /// simplex or lp_ball.
    #[arg(long, default_value = "simplex")]
    pub region: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// interior, boundary, exterior or face:<rho>.
    #[arg(long, default_value = "interior")]
    pub location: String,
    #[arg(long, default_value_t = 100)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub iters: usize,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long, default_value_t = default_jobs())]
    pub jobs: usize,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Parses `args` and runs the command, printing errors to stderr.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Runs a command; `Ok(false)` means some batch items failed.
pub fn run(command: Command) -> Result<bool> {
    match command {
        Command::Solve(args) => solve(args),
        Command::Figure { preset, out, full, jobs } => figure(&preset, out, full, jobs),
        Command::Rates {
            input,
            window,
            threshold,
            out,
        } => rates(input, window, threshold, out),
        Command::Herding {
            density,
            rule,
            iters,
            out,
        } => {
            let density = Density::from_arg(&density)?;
            let rule: StepRule = rule.parse().map_err(Error::Config)?;
            let (trace, state) = herding_run(&density, rule, iters)?;
            with_output(out, |w| trace.write_csv(w))?;
            eprintln!(
                "{} atoms, final f = {:e}",
                state.len(),
                trace.records.last().map_or(0.0, |r| r.h)
            );
            Ok(true)
        }
        Command::Jaggi { d } => {
            let mut out = io::stdout().lock();
            writeln!(out, "t,min_sq_norm,primal_gap")?;
            for t in 1..=d {
                let b = jaggi_lower_bound(d, t)?;
                writeln!(out, "{t},{},{}", sci(b), sci(b - 1.0 / d as f64))?;
            }
            Ok(true)
        }
        Command::Verify { dir } => {
            let bad = verify_manifest(&dir)?;
            for f in &bad {
                println!("checksum mismatch: {f}");
            }
            if bad.is_empty() {
                println!("all checksums match");
            }
            Ok(bad.is_empty())
        }
    }
}

fn with_output(path: Option<PathBuf>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(&mut io::stdout().lock())?,
    }
    Ok(())
}

fn report(batch: &BatchReport) -> bool {
    for e in batch.failures() {
        eprintln!("{} [{}]: {}", e.config, e.rule, e.status);
    }
    for e in batch.entries.iter().filter(|e| e.ok() && !e.fstar_certified) {
        eprintln!("{} [{}]: uncertified f*", e.config, e.rule);
    }
    batch.success()
}

fn solve(args: SolveArgs) -> Result<bool> {
    let mut configs = match &args.config {
        Some(path) => ExperimentConfig::parse_many(&fs::read_to_string(path)?)?,
        None => {
            let region = match args.region.as_str() {
                "simplex" => RegionSpec::Simplex { dimension: args.d },
                "lp_ball" => RegionSpec::LpBall {
                    p: args.p,
                    radius: args.radius,
                    dimension: args.d,
                },
                other => return Err(Error::Config(format!("unknown region {other:?}"))),
            };
            let location: Location = args.location.parse().map_err(Error::Config)?;
            vec![ExperimentConfig {
                name: "solve".into(),
                algorithm: args.algo.parse::<Algorithm>().map_err(Error::Config)?,
                rules: args.rules.clone(),
                iterations: args.iters,
                seed: args.seed,
                output: PathBuf::new(),
                density: None,
                instance: Some(InstanceSpec::new(location, args.seed, region)),
            }]
        }
    };
    for c in &mut configs {
        c.apply_seed_env()?;
    }
    let batch = run_batch(&configs, &args.out, args.jobs)?;
    for e in &batch.entries {
        if e.ok() {
            println!("{}", args.out.join(&e.file).display());
        }
    }
    Ok(report(&batch))
}

fn figure(preset: &str, out: PathBuf, full: bool, jobs: usize) -> Result<bool> {
    let mut configs = figure_preset(preset, full)?;
    for c in &mut configs {
        c.apply_seed_env()?;
    }
    let batch = run_batch(&configs, &out, jobs)?;
    if preset == "local-rate" {
        write_contours(&configs, &batch, &out)?;
    }
    println!("{} traces written under {}", batch.entries.len(), out.display());
    Ok(report(&batch))
}

/// Turns the local-rate traces into `contour_<family>.csv` files.
fn write_contours(configs: &[ExperimentConfig], batch: &BatchReport, out: &std::path::Path) -> Result<()> {
    for family in ["interior", "face"] {
        let mut rows = Vec::new();
        for (cfg, entry) in configs.iter().zip(&batch.entries) {
            if !cfg.name.starts_with(family) || !entry.ok() {
                continue;
            }
            let series = read_gaps_csv(File::open(out.join(&entry.file))?)?;
            let d = cfg.instance.as_ref().map_or(0, |i| i.dimension);
            rows.push(ContourRow {
                d,
                cells: local_rates(&series, 100)
                    .into_iter()
                    .map(|r| ContourCell {
                        t: r.start,
                        slope: r.slope,
                        r_squared: r.r_squared,
                    })
                    .collect(),
                burn_in: burn_in_end(&series, 1.8, 100),
                error: None,
            });
        }
        let path = out.join("local-rate").join(format!("contour_{family}.csv"));
        write_contour_csv(&rows, BufWriter::new(File::create(&path)?))?;
        for r in &rows {
            eprintln!("{family} d={}: burn-in ends at {:?}", r.d, r.burn_in);
        }
    }
    Ok(())
}

fn rates(input: PathBuf, window: usize, threshold: f64, out: Option<PathBuf>) -> Result<bool> {
    let series = read_gaps_csv(File::open(&input)?)?;
    let est = local_rates(&series, window);
    with_output(out, |w| {
        writeln!(w, "t,slope,r2")?;
        for r in &est {
            writeln!(w, "{},{},{}", r.start, sci(r.slope), sci(r.r_squared))?;
        }
        Ok(())
    })?;
    match burn_in_end(&series, threshold, window) {
        Some(t) => eprintln!("local rate reaches {threshold} at t = {t}"),
        None => eprintln!("local rate never reaches {threshold}"),
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subcommands_parse() {
        let parse = |args: &[&str]| Cli::try_parse_from(std::iter::once("fwkit").chain(args.iter().copied()));
        assert!(parse(&["solve", "--algo", "afw", "--rule", "linesearch", "--rule", "openloop:2"]).is_ok());
        assert!(parse(&["figure", "wolfe", "--full", "--jobs", "2"]).is_ok());
        assert!(parse(&["rates", "--in", "t.csv", "--window", "50"]).is_ok());
        assert!(parse(&["herding", "--density", "uniform", "--iters", "16"]).is_ok());
        assert!(parse(&["jaggi", "--d", "5"]).is_ok());
        assert!(parse(&["jaggi"]).is_err());
    }

    #[test]
    fn unknown_preset_fails() {
        let dir = tempfile::tempdir().unwrap();
        let cmd = Command::Figure {
            preset: "nope".into(),
            out: dir.path().to_path_buf(),
            full: false,
            jobs: 1,
        };
        assert!(run(cmd).is_err());
    }
}
