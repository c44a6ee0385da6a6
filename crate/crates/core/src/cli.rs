//! Batch front end behind the `hexplace` binary.
//!
//! Exit codes: 0 on success, 1 for usage or configuration problems, 2 for
//! I/O failures. Diagnostics go to stderr; set `HEXPLACE_LOG` to `error`,
//! `info` or `debug` to control their verbosity.

use std::ffi::OsString;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::engine::{run, RunOutput};
use crate::ensemble::{comparison_csv, compare, default_seeds, run_replications, EnsembleResult};
use crate::scenario::{parse_scenario, preset_scenario, write_scenario, Preset, ScenarioConfig};
use crate::stats::{write_summary, write_timeseries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;

pub const LOG_ENV: &str = "HEXPLACE_LOG";

#[derive(Debug, Parser)]
#[command(name = "hexplace", version, about = "Honeycomb epidemic simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario with one seed.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "max-steps")]
        max_steps: Option<u64>,
    },
    /// Write a built-in honeycomb experiment as scenario JSON.
    GenHex {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run many seeds of one scenario.
    Replicate {
        #[arg(long)]
        scenario: PathBuf,
        #[command(flatten)]
        seeds: SeedArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long = "max-steps")]
        max_steps: Option<u64>,
    },
    /// Rank scenarios by mean deaths over common seeds.
    Compare {
        #[arg(long, required = true, num_args = 1..)]
        scenario: Vec<PathBuf>,
        #[command(flatten)]
        seeds: SeedArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long = "max-steps")]
        max_steps: Option<u64>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SeedArgs {
    /// Use seeds 0..N.
    #[arg(long = "n")]
    n: Option<usize>,
    /// Explicit comma-separated seeds.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
}

impl SeedArgs {
    fn resolve(&self) -> Result<Vec<u64>, Failure> {
        let seeds = match (&self.n, &self.seeds) {
            (Some(n), _) => default_seeds(*n),
            (None, Some(list)) => list.clone(),
            (None, None) => Vec::new(),
        };
        if seeds.is_empty() {
            return Err(Failure::config("at least one replication is required"));
        }
        Ok(seeds)
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

/// Sets up stderr logging from `HEXPLACE_LOG` (default `error`).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "error");
    let _ = env_logger::Builder::from_env(env)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Run {
            scenario,
            seed,
            out,
            max_steps,
        } => cmd_run(&scenario, seed, &out, max_steps),
        Command::GenHex { preset, out } => cmd_gen_hex(&out, &preset),
        Command::Replicate {
            scenario,
            seeds,
            out,
            jobs,
            max_steps,
        } => seeds
            .resolve()
            .and_then(|seeds| cmd_replicate(&scenario, &seeds, &out, jobs, max_steps)),
        Command::Compare {
            scenario,
            seeds,
            out,
            jobs,
            max_steps,
        } => seeds
            .resolve()
            .and_then(|seeds| cmd_compare(&scenario, &seeds, &out, jobs, max_steps)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn load_scenario(path: &Path, max_steps: Option<u64>) -> Result<ScenarioConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let mut config =
        parse_scenario(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    if let Some(cap) = max_steps {
        config.max_steps = cap;
    }
    Ok(config)
}

fn scenario_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn timeseries_file_name(seed: u64) -> String {
    format!("timeseries_{seed}.csv")
}

pub fn summary_file_name(seed: u64) -> String {
    format!("summary_{seed}.json")
}

fn write_run(out_dir: &Path, seed: u64, output: &RunOutput) -> Result<(), Failure> {
    let ts_path = out_dir.join(timeseries_file_name(seed));
    let file = fs::File::create(&ts_path).map_err(|e| Failure::io(&ts_path, e))?;
    write_timeseries(&output.timeseries, BufWriter::new(file)).map_err(|e| Failure::io(&ts_path, e))?;

    let sum_path = out_dir.join(summary_file_name(seed));
    let file = fs::File::create(&sum_path).map_err(|e| Failure::io(&sum_path, e))?;
    write_summary(&output.summary, BufWriter::new(file)).map_err(|e| Failure::io(&sum_path, e))
}

fn cmd_run(scenario: &Path, seed: u64, out_dir: &Path, max_steps: Option<u64>) -> Result<(), Failure> {
    let config = load_scenario(scenario, max_steps)?;
    fs::create_dir_all(out_dir).map_err(|e| Failure::io(out_dir, e))?;
    let output = run(config, seed);
    log::info!(
        "seed {seed}: period {}, immune {}, dead {}",
        output.summary.simulation_period,
        output.summary.total_immune,
        output.summary.total_dead
    );
    write_run(out_dir, seed, &output)
}

fn cmd_gen_hex(out: &Path, preset: &str) -> Result<(), Failure> {
    let preset: Preset = preset.parse().map_err(Failure::config)?;
    let text = write_scenario(&preset_scenario(preset));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Failure::io(parent, e))?;
    }
    fs::write(out, text).map_err(|e| Failure::io(out, e))
}

fn cmd_replicate(
    scenario: &Path,
    seeds: &[u64],
    out_dir: &Path,
    jobs: usize,
    max_steps: Option<u64>,
) -> Result<(), Failure> {
    let config = load_scenario(scenario, max_steps)?;
    fs::create_dir_all(out_dir).map_err(|e| Failure::io(out_dir, e))?;
    let results = run_replications(&config, seeds, jobs, |seed, output| {
        write_run(out_dir, seed, output).map_err(|f| f.message)
    });

    let mut summaries = Vec::with_capacity(results.len());
    let mut failed = 0;
    for (seed, result) in seeds.iter().zip(results) {
        match result {
            Ok(s) => summaries.push((*seed, s)),
            Err(msg) => {
                eprintln!("error: seed {seed}: {msg}");
                failed += 1;
            }
        }
    }
    let (ok_seeds, ok_summaries) = summaries.into_iter().unzip();
    let ensemble = EnsembleResult::from_summaries(scenario_name(scenario), ok_seeds, ok_summaries);
    let path = out_dir.join("ensemble.json");
    let mut text = serde_json::to_string_pretty(&ensemble).expect("ensemble serializes");
    text.push('\n');
    fs::write(&path, text).map_err(|e| Failure::io(&path, e))?;

    if failed > 0 {
        return Err(Failure::config(format!("{failed} of {} replications failed", seeds.len())));
    }
    Ok(())
}

fn cmd_compare(
    scenarios: &[PathBuf],
    seeds: &[u64],
    out: &Path,
    jobs: usize,
    max_steps: Option<u64>,
) -> Result<(), Failure> {
    if scenarios.len() < 2 {
        return Err(Failure::config("compare needs at least two scenarios"));
    }
    let loaded = scenarios
        .iter()
        .map(|p| Ok((scenario_name(p), load_scenario(p, max_steps)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let results = compare(&loaded, seeds, jobs);
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Failure::io(parent, e))?;
    }
    fs::write(out, comparison_csv(&results)).map_err(|e| Failure::io(out, e))
}
