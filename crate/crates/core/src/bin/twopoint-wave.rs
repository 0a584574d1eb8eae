use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twopoint_wave::output::{output_dir, run_to_dir, sweep, write_convergence_csv};
use twopoint_wave::props::{run_all, DEFAULT_SAMPLES};
use twopoint_wave::scenario::{convergence_study, Scenario};
use twopoint_wave::Error;

/// Galerkin solver and decay diagnostics for the damped wave equation with
/// coupled two-point boundary conditions.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and its checks.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refinement study against the scenario's manufactured solution.
    Converge {
        config: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario per value of a key, concurrently.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, num_args = 1.., required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded property suites for the norm and quadratic-form inequalities.
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::UnknownForm(_) | Error::Io(_) => 2,
        Error::Domain(_) | Error::Infeasible(_) | Error::FreeParameter { .. } => 3,
        _ => 4,
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn execute(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run { config, out } => {
            let scenario = Scenario::load(&config)?;
            let dir = output_dir(out.as_deref(), &config);
            let outcome = run_to_dir(&scenario, &dir)?;
            for c in &outcome.checks {
                println!("{:<13} {}  {}", c.check, verdict(c.passed), c.detail);
            }
            println!("output: {}", dir.display());
            Ok(outcome.passed())
        }
        Command::Converge {
            config,
            levels,
            out,
        } => {
            let scenario = Scenario::load(&config)?;
            let dir = output_dir(out.as_deref(), &config);
            let rows = convergence_study(&scenario, levels)?;
            std::fs::create_dir_all(&dir)?;
            write_convergence_csv(&dir.join("convergence.csv"), &rows)?;
            let na = |o: Option<f64>| o.map_or("NA".to_string(), |v| format!("{v:.3}"));
            println!(
                "{:>8} {:>12} {:>14} {:>14} {:>8} {:>8}",
                "n_nodes", "dt", "L2", "H1", "p_L2", "p_H1"
            );
            for r in &rows {
                println!(
                    "{:>8} {:>12.4e} {:>14.6e} {:>14.6e} {:>8} {:>8}",
                    r.n_nodes,
                    r.dt,
                    r.l2_error,
                    r.h1_error,
                    na(r.l2_order),
                    na(r.h1_order)
                );
            }
            println!("output: {}", dir.display());
            Ok(true)
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let scenario = Scenario::load(&config)?;
            let dir = output_dir(out.as_deref(), &config);
            let rows = sweep(&scenario, &param, &values, &dir)?;
            for r in &rows {
                match &r.error {
                    Some(e) => println!("{param}={:<10} FAIL  {e}", r.value),
                    None => println!("{param}={:<10} {}", r.value, verdict(r.passed)),
                }
            }
            println!("output: {}", dir.display());
            Ok(rows.iter().all(|r| r.passed))
        }
        Command::Props { seed, samples } => {
            let results = run_all(seed, samples);
            for r in &results {
                println!(
                    "{:<24} {}  {} / {} violations, worst excess {:.3e}",
                    r.name,
                    verdict(r.passed()),
                    r.violations,
                    r.samples,
                    r.worst_excess
                );
            }
            Ok(results.iter().all(|r| r.passed()))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
