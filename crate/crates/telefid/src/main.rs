//! Command-line front end. All computation lives in the library; this binary
//! parses arguments, dispatches, writes output and maps errors to exit codes:
//! 0 success, 1 validation failure, 2 usage/input error, 3 optimizer
//! non-convergence.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use telefid::error::Error;
use telefid::montecarlo::SamplerConfig;
use telefid::optimizer::{optimize_corrections, OptimizerConfig};
use telefid::qubit::paulis;
use telefid::report::{
    analyze, region, render_region, render_report, render_sweep, sweep, OutputFormat,
};
use telefid::scenario::{Scenario, ScenarioFile};
use telefid::validation::{run_validation, ValidationOptions};

#[derive(Parser)]
#[command(
    name = "telefid",
    about = "Average fidelity and fidelity deviation of single-qubit teleportation through a Werner channel",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this path instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Report F, D, bounds, classification and region data for one scenario
    Analyze {
        /// optimal | permuted[:abcd] | random:<seed> | file:<path>
        #[arg(long)]
        scenario: String,
        /// Werner noise parameter in [0, 1]
        #[arg(long)]
        p: f64,
        /// Attach Monte-Carlo estimates with this many samples
        #[arg(long)]
        mc: Option<usize>,
        /// Seed for the Monte-Carlo sampler
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a scenario on a uniform grid of noise values
    Sweep {
        /// optimal | permuted[:abcd] | random:<seed> | file:<path>
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        p_start: f64,
        #[arg(long)]
        p_end: f64,
        /// Number of grid points (at least 2)
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit the (F, D)-plane geometry: triangles, half circle, thresholds
    Region {
        /// Noise value; repeat for several triangles
        #[arg(long = "p", required = true)]
        p_list: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for the corrections maximizing F at fixed measurement
    Optimize {
        /// pauli | file:<path> (uses the file's measurement unitaries)
        #[arg(long)]
        u: String,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the full oracle suite (closed forms vs Monte Carlo, bounds)
    Validate {
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    configure_threads_from_env();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Cap rayon's worker count from TELEFID_THREADS (default: all cores).
fn configure_threads_from_env() {
    if let Ok(value) = std::env::var("TELEFID_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Analyze {
            scenario,
            p,
            mc,
            seed,
            format,
            output,
        } => {
            let scenario = Scenario::parse(&scenario)?;
            let sampler = match mc {
                Some(n) => Some(SamplerConfig::new(seed, n)?),
                None => None,
            };
            let report = analyze(&scenario, p, sampler.as_ref())?;
            emit(&render_report(&report, format.into())?, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            scenario,
            p_start,
            p_end,
            steps,
            format,
            output,
        } => {
            let scenario = Scenario::parse(&scenario)?;
            let rows = sweep(&scenario, p_start, p_end, steps)?;
            emit(&render_sweep(&rows, format.into())?, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Region {
            p_list,
            format,
            output,
        } => {
            let data = region(&p_list)?;
            emit(&render_region(&data, format.into())?, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize {
            u,
            p,
            restarts,
            max_iters,
            tol,
            seed,
            output,
        } => {
            let measurement = match u.as_str() {
                "pauli" => paulis(),
                other => match other.strip_prefix("file:") {
                    Some(path) => ScenarioFile::load(path)?.measurement()?,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown measurement source '{other}'; expected pauli or file:<path>"
                        )))
                    }
                },
            };
            let channel = telefid::teleport::WernerChannel::new(p)?;
            let cfg = OptimizerConfig {
                restarts,
                max_iters,
                tol,
                seed,
            };
            let result = optimize_corrections(&measurement, &channel, &cfg)?;
            let mut text = serde_json::to_string_pretty(&result).map_err(Error::Json)?;
            text.push('\n');
            emit(&text, &output)?;
            if result.converged {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "optimizer did not converge: best F = {}, gap to F_max = {:.3e}",
                    result.f_best,
                    (1.0 + p) / 2.0 - result.f_best
                );
                Ok(ExitCode::from(3))
            }
        }
        Command::Validate { samples, seed } => {
            let opts = ValidationOptions::new(samples, seed)?;
            let report = run_validation(&opts)?;
            for check in &report.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!("{status} {}: {}", check.name, check.detail);
            }
            if report.passed() {
                println!("all {} checks passed", report.checks.len());
                Ok(ExitCode::SUCCESS)
            } else {
                let failed = report.checks.iter().filter(|c| !c.passed).count();
                println!("{failed} of {} checks failed", report.checks.len());
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn emit(text: &str, output: &OutputArgs) -> Result<(), Error> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
