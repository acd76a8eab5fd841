use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ricci_soliton::cli::{
    describe_frame, load_scenario, parse_at, render_report, run, Format, FAMILIES,
};

/// Verify Ricci-soliton candidates on sampled points of a metric.
#[derive(Parser)]
#[command(name = "ricci-soliton", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file and report.
    ///
    /// Exit status: 0 when every check passes, 1 when some check fails,
    /// 2 when the scenario or arguments are invalid.
    Verify {
        scenario: PathBuf,
        /// Number of sample points (overrides `count`).
        #[arg(long)]
        samples: Option<usize>,
        /// Sampling seed (overrides `seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance applied to every check.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print metric, connection and curvature of a scenario at one point.
    Curvature {
        scenario: PathBuf,
        /// Coordinates as `u=..,v=..,x1=..`; omitted ones are 0.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// List metric families, candidate kinds and their scenario keys.
    ListFamilies,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

const INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(INPUT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(args.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Verify {
            scenario,
            samples,
            seed,
            tol,
            format,
            out,
        } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(n) = samples {
                anyhow::ensure!(n >= 1, "--samples must be at least 1");
                s.sampling.count = n;
            }
            if let Some(seed) = seed {
                s.sampling.seed = seed;
            }
            if let Some(t) = tol {
                anyhow::ensure!(t.is_finite() && t > 0.0, "--tol must be positive");
                s.tolerance = Some(t);
            }
            let report = run(&s)?;
            let format = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::Json => Format::Json,
            };
            let rendered = render_report(&report, format);
            match out {
                Some(path) => std::fs::write(&path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{rendered}"),
            }
            Ok(if report.overall_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Curvature { scenario, at } => {
            let s = load_scenario(&scenario)?;
            let p = parse_at(&s, &at)?;
            print!("{}", describe_frame(&s, &p)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::ListFamilies => {
            print!("{FAMILIES}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
