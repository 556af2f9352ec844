//! Exact arithmetic in the free unital ring ℤ⟨X⟩.

mod poly;
mod symbol;
mod word;

use thiserror::Error;

pub use poly::{Poly, SymbolOrder};
pub use symbol::{is_identifier, Symbol, SymbolKind};
pub use word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid symbol name `{0}`")]
    BadSymbolName(String),
}
