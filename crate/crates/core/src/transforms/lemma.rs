//! Rearranging factors inside a reduced ideal.
//!
//! Everything here reduces to two derived rules over `Nil U`:
//!
//! * rotation: `u·v ∈ I ⟹ v·u ∈ I`, via `v·(u·v)·u = (v·u)²`;
//! * insertion: `u·v ∈ I ⟹ u·r·v ∈ I`, via `(u·r)·(v·u)·(r·v) = (u·r·v)²`.
//!
//! An adjacent transposition `P·a·b·Q ↦ P·b·a·Q` rotates to `a·b·c` with
//! `c = Q·P`, inserts twice to reach `a·c·b·a·c`, multiplies by `b` on the
//! left to get `(b·a·c)²`, takes the root, and rotates back. Arbitrary
//! permutations are sorted into place with adjacent transpositions.

use super::builder::Builder;
use super::{Permutation, TransformError, Transformer};
use crate::ring::Poly;
use crate::witness::{NodeId, WitnessDag};

impl Transformer {
    /// From `w ⊢ u·v`, a witness of `v·u` with two more nodes.
    pub fn rotate(&self, w: &WitnessDag, u: &Poly, v: &Poly) -> Result<WitnessDag, TransformError> {
        let (mut b, root) = Builder::from_dag(w, self)?;
        let out = b.rotate(root, u, v)?;
        Ok(b.finish(out))
    }

    /// From `w ⊢ u·v`, a witness of `u·r·v` with four more nodes.
    pub fn insert(&self, w: &WitnessDag, u: &Poly, v: &Poly, r: &Poly) -> Result<WitnessDag, TransformError> {
        let (mut b, root) = Builder::from_dag(w, self)?;
        let out = b.insert(root, u, v, r)?;
        Ok(b.finish(out))
    }

    /// From `w ⊢ x₁⋯xₙ` (with `factors = [x₁, …, xₙ]`), a witness of
    /// `x_{σ(1)}⋯x_{σ(n)}`.
    pub fn permute(&self, w: &WitnessDag, factors: &[Poly], sigma: &Permutation) -> Result<WitnessDag, TransformError> {
        if sigma.len() != factors.len() {
            return Err(TransformError::InvalidPermutation(format!(
                "permutation of {} elements applied to {} factors",
                sigma.len(),
                factors.len()
            )));
        }
        let product = Poly::product(factors);
        if &product != w.conclusion() {
            return Err(TransformError::FactorizationMismatch { conclusion: w.conclusion().clone(), product });
        }
        if sigma.is_identity() {
            return Ok(w.clone());
        }
        let (mut b, mut node) = Builder::from_dag(w, self)?;
        if let Some(k) = sigma.rotation_offset() {
            let u = Poly::product(&factors[..k]);
            let v = Poly::product(&factors[k..]);
            let out = b.rotate(node, &u, &v)?;
            return Ok(b.finish(out));
        }
        let mut order: Vec<usize> = (0..factors.len()).collect();
        for (k, &target) in sigma.image().iter().enumerate() {
            let mut j = order.iter().position(|&i| i == target - 1).expect("bijection");
            while j > k {
                let current: Vec<Poly> = order.iter().map(|&i| factors[i].clone()).collect();
                node = swap_adjacent(&mut b, node, &current, j - 1)?;
                order.swap(j - 1, j);
                j -= 1;
            }
        }
        Ok(b.finish(node))
    }
}

/// From `w ⊢ f₀⋯f_{n-1}`, a witness with `f_i` and `f_{i+1}` exchanged.
fn swap_adjacent(b: &mut Builder, w: NodeId, factors: &[Poly], i: usize) -> Result<NodeId, TransformError> {
    let n = factors.len();
    let p = Poly::product(&factors[..i]);
    let a = &factors[i];
    let bb = &factors[i + 1];
    let q = Poly::product(&factors[i + 2..]);
    if n == 2 {
        return b.rotate(w, a, bb);
    }
    let mut node = w;
    if i > 0 {
        node = b.rotate(node, &p, &Poly::product([a, bb, &q]))?;
    }
    let c = q.multiply(&p);
    // a·(b·c) → a·c·b·c → a·c·b·a·c
    let n1 = b.insert(node, a, &bb.multiply(&c), &c)?;
    let n2 = b.insert(n1, &Poly::product([a, &c, bb]), &c, a)?;
    // b·(a·c·b·a·c) = (b·a·c)²
    let n3 = b.mult(bb.clone(), n2, Poly::one())?;
    let bac = Poly::product([bb, a, &c]);
    let mut out = b.red(n3, bac)?;
    if i > 0 {
        out = b.rotate(out, &Poly::product([bb, a, &q]), &p)?;
    }
    Ok(out)
}
