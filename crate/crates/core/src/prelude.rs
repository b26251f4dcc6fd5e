//! The standard prelude of gate wrappers and the bundled example programs.

use thiserror::Error;

use crate::parser::{parse_program, SyntaxError};
use crate::syntax::{Program, Type};
use crate::typeck::{check_program, check_program_in, Env, ProgramCheck, TypeError};

pub const PRELUDE_SOURCE: &str = include_str!("../examples/prelude.pqd");

/// A bundled example: file name and source text.
#[derive(Clone, Copy, Debug)]
pub struct Example {
    pub file: &'static str,
    pub source: &'static str,
}

pub const EXAMPLES: [Example; 5] = [
    Example { file: "teleport_circ.pqd", source: include_str!("../examples/teleport_circ.pqd") },
    Example { file: "teleport_dyn.pqd", source: include_str!("../examples/teleport_dyn.pqd") },
    Example { file: "coin.pqd", source: include_str!("../examples/coin.pqd") },
    Example { file: "rus.pqd", source: include_str!("../examples/rus.pqd") },
    Example { file: "distillation.pqd", source: include_str!("../examples/distillation.pqd") },
];

#[derive(Clone, Debug, Error)]
pub enum PreludeError {
    #[error("prelude: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("prelude: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Type(Vec<TypeError>),
}

/// A checked prelude entry.
#[derive(Clone, Debug)]
pub struct PreludeEntry {
    pub name: String,
    pub ty: Type,
}

/// The bundled prelude, checked.
pub fn load_prelude() -> Env {
    load_prelude_from(PRELUDE_SOURCE).expect("bundled prelude checks")
}

/// Parses and checks a prelude from source text.
pub fn load_prelude_from(source: &str) -> Result<Env, PreludeError> {
    let p = parse_program(source)?;
    let r = check_program(&p);
    if r.is_ok() {
        Ok(r.env)
    } else {
        Err(PreludeError::Type(r.errors))
    }
}

/// Names and fully annotated types of the prelude's declarations.
pub fn prelude_entries(env: &Env) -> Vec<PreludeEntry> {
    env.decls().map(|d| PreludeEntry { name: d.name.clone(), ty: d.ty.clone() }).collect()
}

/// Checks a program on top of a prelude.
pub fn check_with_prelude(prelude: &Env, p: &Program) -> ProgramCheck {
    check_program_in(prelude, p)
}

/// The bundled examples, parsed.
pub fn load_examples() -> Vec<(&'static str, Program)> {
    EXAMPLES
        .iter()
        .map(|e| (e.file, parse_program(e.source).unwrap_or_else(|err| panic!("{}: {err}", e.file))))
        .collect()
}

pub fn example(file: &str) -> Option<Program> {
    load_examples().into_iter().find(|(f, _)| *f == file).map(|(_, p)| p)
}
