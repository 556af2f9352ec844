//! Surface syntax for ring expressions and problem files.

mod parse;
mod print;
mod problem;

use thiserror::Error;

pub use parse::parse_poly;
pub use print::{print_poly, print_poly_with};
pub use problem::{parse_problem, ProblemFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: undeclared identifier `{name}`")]
    Undeclared { name: String, line: usize, column: usize },
}
