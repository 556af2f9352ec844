//! Witness transformers: every function here takes checker-valid witnesses
//! and returns a new witness. Outputs are not trusted on their own; callers
//! that care re-run [`check_certificate`](crate::witness::check_certificate).

mod builder;
mod lemma;
mod nil;
mod permutation;
mod sqrt;

use thiserror::Error;

use crate::ring::Poly;
use crate::witness::{GeneratorSet, Setting, WitnessDag, WitnessError};

pub use permutation::Permutation;

pub const DEFAULT_MAX_NODES: usize = 1_000_000;

/// Largest `Mult` expansion, in terms, a transform may attempt. Repeated
/// nesting of `Red` or `Semiprime` can square polynomial sizes long before
/// the node count is a concern.
pub const DEFAULT_MAX_TERMS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("conclusion {conclusion} is not the product {product} of the given factors")]
    FactorizationMismatch { conclusion: Poly, product: Poly },
    #[error("conclusions differ: {left} vs {right}")]
    ConclusionMismatch { left: Poly, right: Poly },
    #[error("expected a {expected} witness, found a {found} witness")]
    SettingMismatch { expected: Setting, found: Setting },
    #[error("node kind `{op}` cannot occur in a {setting} witness")]
    WrongNodeKind { setting: Setting, op: &'static str },
    #[error("incompatible generator sets: {0}")]
    GeneratorMismatch(String),
    #[error("{0}")]
    InvalidPermutation(String),
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("a conclusion would exceed {0} terms")]
    TermBudgetExceeded(usize),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Runs transforms under a node budget and a per-conclusion term budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transformer {
    pub max_nodes: usize,
    pub max_terms: usize,
}

impl Default for Transformer {
    fn default() -> Transformer {
        Transformer { max_nodes: DEFAULT_MAX_NODES, max_terms: DEFAULT_MAX_TERMS }
    }
}

impl Transformer {
    pub fn new(max_nodes: usize) -> Transformer {
        Transformer { max_nodes: max_nodes.max(1), ..Transformer::default() }
    }

    pub fn with_max_terms(self, max_terms: usize) -> Transformer {
        Transformer { max_terms: max_terms.max(1), ..self }
    }
}

/// Splits `U ∪ {a}` and `U ∪ {b}` into `(U, a, b)`. The distinguished
/// generator is the last element; everything else, families included, must
/// agree.
fn split_generators(p: &GeneratorSet, q: &GeneratorSet) -> Result<(GeneratorSet, Poly, Poly), TransformError> {
    let (Some((a, up)), Some((b, uq))) = (p.elements.split_last(), q.elements.split_last()) else {
        return Err(TransformError::GeneratorMismatch("both witnesses need a distinguished generator".into()));
    };
    if up != uq {
        return Err(TransformError::GeneratorMismatch("the shared generators U differ".into()));
    }
    if p.families != q.families {
        return Err(TransformError::GeneratorMismatch("the shared families differ".into()));
    }
    Ok((GeneratorSet::with_families(up.to_vec(), p.families.clone()), a.clone(), b.clone()))
}

fn merged_symbols(p: &WitnessDag, q: &WitnessDag) -> Vec<String> {
    let mut out = p.symbols().to_vec();
    for s in q.symbols() {
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

/// [`Transformer::rotate`] under the default budget.
pub fn rotate(w: &WitnessDag, u: &Poly, v: &Poly) -> Result<WitnessDag, TransformError> {
    Transformer::default().rotate(w, u, v)
}

/// [`Transformer::insert`] under the default budget.
pub fn insert(w: &WitnessDag, u: &Poly, v: &Poly, r: &Poly) -> Result<WitnessDag, TransformError> {
    Transformer::default().insert(w, u, v, r)
}

/// [`Transformer::permute`] under the default budget.
pub fn permute(w: &WitnessDag, factors: &[Poly], sigma: &Permutation) -> Result<WitnessDag, TransformError> {
    Transformer::default().permute(w, factors, sigma)
}

/// [`Transformer::nil_product`] under the default budget.
pub fn nil_product(p: &WitnessDag, q: &WitnessDag) -> Result<WitnessDag, TransformError> {
    Transformer::default().nil_product(p, q)
}

/// [`Transformer::nil_intersect`] under the default budget.
pub fn nil_intersect(p: &WitnessDag, q: &WitnessDag) -> Result<WitnessDag, TransformError> {
    Transformer::default().nil_intersect(p, q)
}

/// [`Transformer::sqrt_product`] under the default budget.
pub fn sqrt_product(p: &WitnessDag, q: &WitnessDag, m: &Poly) -> Result<WitnessDag, TransformError> {
    Transformer::default().sqrt_product(p, q, m)
}

/// [`Transformer::sqrt_intersect`] under the default budget.
pub fn sqrt_intersect(p: &WitnessDag, q: &WitnessDag) -> Result<WitnessDag, TransformError> {
    Transformer::default().sqrt_intersect(p, q)
}
