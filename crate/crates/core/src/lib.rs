//! Certified membership witnesses for the reduced ideal `Nil U` and the
//! semiprime ideal `√U` of the free ring ℤ⟨X⟩.
//!
//! * [`ring`]: exact free-ring arithmetic.
//! * [`expr`]: expression and problem-file syntax.
//! * [`witness`]: witness DAGs, certificates and the trusted checker.
//! * [`transforms`]: product, intersection and rearrangement of witnesses.
//! * [`commutativity`]: certificates for `[x, y] ∈ Nil((x - c₁)⋯(x - cₙ))`
//!   and the `xⁿ = x` commutativity demos.

pub mod commutativity;
pub mod expr;
pub mod ring;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod transforms;
pub mod witness;
