//! `pqdyn`: check, run and box programs.
//!
//! Exit status is 0 on success, 1 for errors in the program (syntax, type,
//! evaluation) and 2 for errors in the environment (unreadable files, bad
//! prelude). Reports go to stdout, diagnostics to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pqdyn::circuit::{export_circuit, ExportFormat};
use pqdyn::eval::{box_declaration, run_main, EvalLimits, Mode, RunOptions, EVAL_STACK};
use pqdyn::parser::parse_program;
use pqdyn::prelude::{check_with_prelude, load_prelude, load_prelude_from};
use pqdyn::syntax::Program;
use pqdyn::typeck::{Env, ProgramCheck};

#[derive(Parser)]
#[command(name = "pqdyn", version, about = "Quantum circuit language with dynamic lifting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a file and print each declaration's annotated type.
    Check { file: PathBuf },
    /// Evaluate a declaration from the empty quantum state.
    Run {
        file: PathBuf,
        #[arg(long)]
        entry: String,
        #[arg(long, value_enum, default_value = "dist")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = 64)]
        max_depth: u32,
        #[arg(long, default_value_t = 1e-6)]
        mass_cutoff: f64,
        /// Drop paths whose probability is at most this.
        #[arg(long, default_value_t = 0.0)]
        prune: f64,
        /// Worker threads for sample mode.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Generate the circuit named by a declaration and print it.
    Box {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Dist,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

enum Failure {
    Language,
    Environment,
}

type Outcome = Result<(), Failure>;

fn env_error(msg: impl std::fmt::Display) -> Failure {
    eprintln!("pqdyn: {msg}");
    Failure::Environment
}

fn prelude() -> Result<Env, Failure> {
    match std::env::var_os("PQDYN_PRELUDE") {
        None => Ok(load_prelude()),
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| env_error(format!("{}: {e}", path.to_string_lossy())))?;
            load_prelude_from(&text).map_err(|e| env_error(format!("{}: {e}", path.to_string_lossy())))
        }
    }
}

fn load(file: &Path) -> Result<(Program, ProgramCheck), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| env_error(format!("{}: {e}", file.display())))?;
    let prelude = prelude()?;
    let program = parse_program(&text).map_err(|e| {
        eprintln!("{}:{e}", file.display());
        Failure::Language
    })?;
    let checked = check_with_prelude(&prelude, &program);
    Ok((program, checked))
}

fn report_errors(file: &Path, checked: &ProgramCheck) {
    for e in &checked.errors {
        eprintln!("{}:{e}", file.display());
    }
}

fn cmd_check(file: &Path) -> Outcome {
    let (program, checked) = load(file)?;
    for d in &program.declarations {
        if let Some(c) = checked.env.get(&d.name) {
            println!("{} : {}", c.name, c.ty);
        }
    }
    report_errors(file, &checked);
    if checked.is_ok() {
        Ok(())
    } else {
        Err(Failure::Language)
    }
}

/// Errors in declarations other than the requested one are reported but do
/// not stop it from running.
fn checked_entry(file: &Path, name: &str) -> Result<Env, Failure> {
    let (_, checked) = load(file)?;
    report_errors(file, &checked);
    if checked.env.get(name).is_none() {
        if checked.errors.iter().all(|e| e.decl.as_deref() != Some(name)) {
            eprintln!("{}: error: no declaration `{name}`", file.display());
        }
        return Err(Failure::Language);
    }
    Ok(checked.env)
}

fn cmd_run(file: &Path, entry: &str, opts: &RunOptions) -> Outcome {
    let env = checked_entry(file, entry)?;
    match run_main(&env, entry, opts) {
        Ok(report) => {
            println!("{}", report.to_json());
            Ok(())
        }
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            Err(Failure::Language)
        }
    }
}

fn cmd_box(file: &Path, name: &str, format: ExportFormat) -> Outcome {
    let env = checked_entry(file, name)?;
    match box_declaration(&env, name) {
        Ok(bc) => {
            let out = export_circuit(&bc.circuit, format);
            if out.ends_with('\n') || out.is_empty() {
                print!("{out}");
            } else {
                println!("{out}");
            }
            Ok(())
        }
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            Err(Failure::Language)
        }
    }
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Run { file, entry, mode, seed, shots, max_depth, mass_cutoff, prune, jobs } => {
            let opts = RunOptions {
                mode: match mode {
                    ModeArg::Dist => Mode::Dist,
                    ModeArg::Sample => Mode::Sample,
                },
                seed,
                shots,
                limits: EvalLimits { max_depth, mass_cutoff, prune_threshold: prune },
                jobs,
            };
            cmd_run(&file, &entry, &opts)
        }
        Command::Box { file, name, format } => {
            let format = match format {
                FormatArg::Json => ExportFormat::Json,
                FormatArg::Text => ExportFormat::Text,
            };
            cmd_box(&file, &name, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new().stack_size(EVAL_STACK).spawn(move || dispatch(cli));
    match worker.map(|h| h.join()) {
        Ok(Ok(Ok(()))) => ExitCode::SUCCESS,
        Ok(Ok(Err(Failure::Language))) => ExitCode::from(1),
        Ok(Ok(Err(Failure::Environment))) => ExitCode::from(2),
        Ok(Err(_)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pqdyn: {e}");
            ExitCode::from(2)
        }
    }
}
