use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use gic_satisfaction::cli::{self, Format, SweepParam, EXIT_INPUT_ERROR};
use gic_satisfaction::Scenario;

/// Satisfaction-equilibrium analysis of Gaussian interference channel
/// power-control games.
#[derive(Parser)]
#[command(name = "gic-se", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Existence, efficient equilibrium, PoE and MPoSa. Exit code 2 when no
    /// equilibrium exists in the power box.
    Analyze {
        scenario: PathBuf,
        /// Tolerance on |u_i - Γ_i| for the boundary tightness verdict.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
        /// Oracle grid intervals per axis used for the price of efficiency.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// CSV of satisfaction flags over a (K+1)^n power grid (n <= 3).
    Region {
        scenario: PathBuf,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of existence, ESE and MPoSa along a linear parameter sweep.
    Sweep {
        scenario: PathBuf,
        /// One of a12, a21, gamma_1, gamma_2, noise_1, noise_2, p_max.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of intervals; steps + 1 rows are written.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Satisfaction-response dynamics from the zero profile.
    Dynamics {
        scenario: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Per-iteration CSV trace.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a scenario in normalized form.
    Normalize {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> anyhow::Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scenario::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn sink(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Analyze {
            scenario,
            tol,
            json,
            text: _,
            grid,
        } => {
            let format = if json { Format::Json } else { Format::Text };
            let report = cli::analyze(&load(&scenario)?, tol, grid)?;
            print!("{}", report.render(format));
            Ok(report.exit_code())
        }
        Command::Region { scenario, grid, out } => {
            let scenario = load(&scenario)?;
            let mut w = sink(out.as_deref())?;
            cli::write_region(scenario.game(), grid, &mut w)?;
            w.flush()?;
            Ok(cli::EXIT_OK)
        }
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            steps,
            out,
        } => {
            let param: SweepParam = param.parse()?;
            let scenario = load(&scenario)?;
            let mut w = sink(out.as_deref())?;
            cli::write_sweep(scenario.game(), param, from, to, steps, &mut w)?;
            w.flush()?;
            Ok(cli::EXIT_OK)
        }
        Command::Dynamics {
            scenario,
            max_iters,
            tol,
            trace,
            json,
        } => {
            let scenario = load(&scenario)?;
            let mut trace_file = trace.as_deref().map(|p| sink(Some(p))).transpose()?;
            let summary = cli::run_dynamics(
                scenario.game(),
                max_iters,
                tol,
                trace_file.as_mut().map(|w| w as &mut dyn Write),
            )?;
            if let Some(w) = trace_file.as_mut() {
                w.flush()?;
            }
            print!("{}", summary.render(if json { Format::Json } else { Format::Text }));
            Ok(cli::EXIT_OK)
        }
        Command::Normalize { scenario, out } => {
            let scenario = load(&scenario)?;
            let mut w = sink(out.as_deref())?;
            w.write_all(scenario.to_normalized_toml().as_bytes())?;
            w.flush()?;
            Ok(cli::EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
