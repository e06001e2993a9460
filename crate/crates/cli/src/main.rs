use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geoquant::density::DEFAULT_DT;
use geoquant::FlowMethod;
use geoquant_cli::commands::{self, EvolveArgs};
use geoquant_cli::verify::{DEFAULT_FD_TOL, DEFAULT_TOL};
use geoquant_cli::{run_verify, CliError, Suite, VerifyConfig};

#[derive(Parser)]
#[command(name = "geoquant", version, about = "Geometric quantum mechanics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized property suites and write a JSON report.
    Verify {
        /// realified, brackets, projective, density, composite, gates or all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Tolerance for algebraic identities.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Tolerance for finite-difference and integrator checks.
        #[arg(long, default_value_t = DEFAULT_FD_TOL)]
        fd_tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report destination; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Integrate the von Neumann equation and write the trajectory as CSV.
    Evolve {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        t_final: f64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value = "exact", value_parser = ["exact", "rk4"])]
        method: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the Bloch vector of a qubit or the Pauli coefficients of two qubits.
    Bloch {
        #[arg(long)]
        state: PathBuf,
    },
    /// Apply a circuit of builtin gates to a state.
    Gate {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Verify {
            suite,
            dim,
            trials,
            tol,
            fd_tol,
            seed,
            report,
        } => {
            let cfg = VerifyConfig {
                suite: suite.parse::<Suite>()?,
                dim,
                trials,
                seed,
                tol,
                fd_tol,
            };
            let result = run_verify(&cfg)?;
            let json = result.to_json();
            match report {
                Some(path) => fs::write(&path, &json).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?,
                None => print!("{json}"),
            }
            if result.passed() {
                eprintln!(
                    "{}: {} properties, no failures",
                    cfg.suite,
                    result.max_deviation.len()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                for f in &result.failures {
                    eprintln!(
                        "FAIL {} trial {}: deviation {:e}",
                        f.property, f.trial, f.deviation
                    );
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Evolve {
            state,
            hamiltonian,
            t_final,
            dt,
            method,
            out,
        } => {
            let method: FlowMethod = method
                .parse()
                .map_err(|e: geoquant::Error| CliError::Usage(e.to_string()))?;
            let summary = commands::evolve(&EvolveArgs {
                state: &state,
                hamiltonian: &hamiltonian,
                t_final,
                dt,
                method,
                out: &out,
            })?;
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bloch { state } => {
            println!("{}", commands::bloch(&state)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Gate { circuit, state } => {
            println!("{}", commands::gate(&circuit, &state)?.to_json());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
