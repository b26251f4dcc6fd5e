//! An interpreter for a linear quantum circuit description language with
//! dynamic lifting: parser, modality-aware type checker, circuit builder,
//! branching state-vector simulator and the two evaluators tying them
//! together.

pub mod circuit;
pub mod eval;
pub mod parser;
pub mod prelude;
pub mod qsim;
pub mod syntax;
pub mod termgen;
pub mod typeck;
