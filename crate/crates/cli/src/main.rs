use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scurve_cli::commands::{self, ForecastLaw, MapLaw};
use scurve_cli::config::ScenarioConfig;
use scurve_cli::verify::{self, VerifyOptions};
use scurve_cli::{CliError, Result};
use scurve_core::estimation::SeriesKind;

#[derive(Debug, Parser)]
#[command(
    name = "scurve",
    version,
    about = "Price laws, S-curves of adoption and their estimation"
)]
struct Cli {
    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Machine-readable JSON output at full precision
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a law to a CSV series
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// moore, wright, ai-loss or benchmark
        #[arg(long)]
        model: SeriesKind,
    },
    /// Price (or compute) and adoption share over a grid
    Forecast {
        /// Scenario configuration (JSON)
        #[arg(long)]
        input: PathBuf,
        /// moore, wright, ai or ves
        #[arg(long)]
        model: ForecastLaw,
        #[arg(allow_negative_numbers = true)]
        start: f64,
        end: f64,
        step: f64,
    },
    /// Logistic or log-logistic parameters implied by a price law
    Map {
        #[arg(long)]
        input: PathBuf,
        /// moore or wright
        #[arg(long)]
        model: MapLaw,
    },
    /// Half-life of adoption, or the standard table with --table
    Halflife {
        #[arg(long, conflicts_with_all = ["k", "sigma", "tau", "a"])]
        table: bool,
        #[arg(value_name = "K", required_unless_present = "table")]
        k: Option<f64>,
        #[arg(required_unless_present = "table")]
        sigma: Option<f64>,
        #[arg(required_unless_present = "table")]
        tau: Option<f64>,
        /// Shape of the cost decline
        #[arg(default_value_t = 1.0)]
        a: f64,
    },
    /// Run the self-check suite
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, hide = true)]
        perturb: Option<String>,
    },
}

fn run(cli: Cli) -> Result<String> {
    let json = cli.json;
    match cli.command {
        Command::Fit { input, model } => Ok(commands::render_fit(&commands::fit(&input, model)?)),
        Command::Forecast {
            input,
            model,
            start,
            end,
            step,
        } => {
            let cfg = ScenarioConfig::load(&input)?;
            let table = commands::forecast(&cfg, model, start, end, step)?;
            Ok(if json {
                table.to_json()
            } else {
                table.to_csv()
            })
        }
        Command::Map { input, model } => {
            let cfg = ScenarioConfig::load(&input)?;
            Ok(commands::render_map(&commands::map(&cfg, model)?))
        }
        Command::Halflife { table: true, .. } => {
            Ok(commands::render_table(&commands::halflife_table()?, json))
        }
        Command::Halflife {
            k, sigma, tau, a, ..
        } => {
            let missing = || CliError::Usage("halflife needs K, sigma and tau, or --table".into());
            let h = commands::halflife(
                k.ok_or_else(missing)?,
                sigma.ok_or_else(missing)?,
                tau.ok_or_else(missing)?,
                a,
            )?;
            Ok(commands::render_halflife(&h, json))
        }
        Command::Verify { seed, perturb } => {
            let report = verify::run(&VerifyOptions { seed, perturb })?;
            let text = report.render(json);
            if report.passed() {
                Ok(text)
            } else {
                // the report is the useful output here, so emit it before failing
                print!("{text}");
                Err(CliError::Verification {
                    failed: report.failures(),
                    total: report.checks.len(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli).and_then(|text| {
        match &out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
