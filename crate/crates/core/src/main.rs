//! Command-line driver: validate and inspect model files, solve composition
//! problems, and run the maximality equivalence check.
//!
//! Exit status is 0 on success, 1 when validation or solving fails, 2 on
//! usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use les_compose::model::{validate_les, LabelledEventStructure};
use les_compose::parse::{parse_model_file, parse_scenario_file};
use les_compose::render::{render_gantt, render_machine, render_table};
use les_compose::verify;
use les_compose::{enumerate_traces, solve_native, solve_oracle};

#[derive(Parser)]
#[command(
    name = "les-compose",
    version,
    about = "Compose dephased labelled event structures into an optimal schedule"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse model files and print an axiom-by-axiom validation report.
    Validate {
        /// Model file, repeatable.
        #[arg(long = "model", required = true)]
        models: Vec<PathBuf>,
    },
    /// Enumerate the traces (maximal configurations) of a model.
    Traces {
        #[arg(long = "model", required = true)]
        models: Vec<PathBuf>,
    },
    /// Solve a composition problem and print the schedule.
    Solve {
        /// Model file, repeatable; declaration order is the file order.
        #[arg(long = "model", required = true)]
        models: Vec<PathBuf>,
        /// Scenario file with gamma conflicts and offsets.
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Native)]
        backend: Backend,
        /// External solver command, required by the smt backend.
        #[arg(long, required_if_eq("backend", "smt"))]
        solver_cmd: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write the problem encoding to this path.
        #[arg(long)]
        emit_smt: Option<PathBuf>,
    },
    /// Check that the solver-side maximality formulation matches the
    /// definitional one on every configuration of a model.
    VerifyMaximality {
        #[arg(long = "model", required = true)]
        models: Vec<PathBuf>,
        /// Write the solver-facing equivalence query (one model only).
        #[arg(long)]
        emit_smt: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Backend {
    Oracle,
    Native,
    Smt,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Table,
    Machine,
    Gantt,
}

fn load_model(path: &Path) -> Result<LabelledEventStructure, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_model_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_models(paths: &[PathBuf]) -> Result<Vec<LabelledEventStructure>, String> {
    paths.iter().map(|p| load_model(p)).collect()
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Validate { models } => {
            for path in &models {
                let les = load_model(path)?;
                let report = validate_les(&les);
                println!("model {}", les.name());
                println!("{report}");
                if !report.passed() {
                    return Err(format!("model {} failed validation", les.name()));
                }
            }
            Ok(())
        }
        Command::Traces { models } => {
            for path in &models {
                let les = load_model(path)?;
                println!("model {}", les.name());
                for trace in enumerate_traces(&les) {
                    let ids: Vec<&str> = trace.events().iter().map(|e| e.local()).collect();
                    println!("{{{}}}", ids.join(", "));
                }
            }
            Ok(())
        }
        Command::Solve {
            models,
            scenario,
            backend,
            solver_cmd,
            format,
            emit_smt,
        } => {
            let models = load_models(&models)?;
            let text = std::fs::read_to_string(&scenario)
                .map_err(|e| format!("{}: {e}", scenario.display()))?;
            let (problem, warnings) = parse_scenario_file(&text, models)
                .map_err(|e| format!("{}: {e}", scenario.display()))?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            if let Some(path) = &emit_smt {
                std::fs::write(path, les_compose::smt::emit_smtlib(&problem))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let schedule = match backend {
                Backend::Oracle => solve_oracle(&problem).map_err(|e| e.to_string())?,
                Backend::Native => solve_native(&problem),
                Backend::Smt => {
                    let cmd = solver_cmd
                        .as_deref()
                        .ok_or("the smt backend requires --solver-cmd")?;
                    les_compose::smt::run_external(&problem, cmd).map_err(|e| e.to_string())?
                }
            };
            let rendered = match format {
                Format::Table => render_table(&problem, &schedule),
                Format::Machine => render_machine(&problem, &schedule),
                Format::Gantt => render_gantt(&problem, &schedule),
            };
            print!("{rendered}");
            Ok(())
        }
        Command::VerifyMaximality { models, emit_smt } => {
            if emit_smt.is_some() && models.len() != 1 {
                clap::Error::raw(
                    clap::error::ErrorKind::ArgumentConflict,
                    "--emit-smt requires exactly one --model\n",
                )
                .exit();
            }
            let mut all_hold = true;
            for path in &models {
                let les = load_model(path)?;
                if let Some(out) = &emit_smt {
                    std::fs::write(out, verify::emit_equivalence_smt(&les))
                        .map_err(|e| format!("{}: {e}", out.display()))?;
                }
                match verify::check_maximality_equivalence(&les).map_err(|e| e.to_string())? {
                    verify::Equivalence::Holds => {
                        println!("model {}: equivalence holds", les.name());
                    }
                    verify::Equivalence::Counterexample(c) => {
                        let ids: Vec<String> = c.iter().map(|e| e.qualified()).collect();
                        println!(
                            "model {}: counterexample {{{}}}",
                            les.name(),
                            ids.join(", ")
                        );
                        all_hold = false;
                    }
                }
            }
            if all_hold {
                Ok(())
            } else {
                Err("maximality equivalence failed".into())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
