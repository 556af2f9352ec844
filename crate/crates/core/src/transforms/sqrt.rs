//! Products and intersections in the semiprime setting.
//!
//! From `p ⊢ x ∈ √(U, a)` and `q ⊢ y ∈ √(U, b)`, build `x·m·y ∈ √(U, aAb)`
//! for a given middle element `m`. The middle element absorbs the outer
//! factors of `Mult` nodes, so no rearrangement lemma is needed:
//!
//! | case               | output                                                        |
//! |--------------------|---------------------------------------------------------------|
//! | `p = u ∈ U`        | `Mult(1, u, m·y)`                                             |
//! | `p = a`            | recurse on `q` for `a·m·y`                                    |
//! | `p = 0`            | `Zero`                                                        |
//! | `p = x₁ + x₂`      | `Add(x₁·m·y, x₂·m·y)`                                         |
//! | `p = z·x'·w`       | `Mult(z, x'·(w·m)·y, 1)`                                      |
//! | `p = sp_ζ(x)`      | fresh `t`; premise instantiated at `ζ ↦ m·y·t` gives          |
//! |                    | `x·m·y·t·x`, recurse for `(x·m·y)·t·(x·m·y)`, then `Semiprime` |
//! | `q = u ∈ U`        | `Mult(a·m, u, 1)`                                             |
//! | `q = b`            | `IntroFamily(aAb, m)`                                         |
//! | `q = 0`            | `Zero`                                                        |
//! | `q = y₁ + y₂`      | `Add(a·m·y₁, a·m·y₂)`                                         |
//! | `q = z·y'·w`       | `Mult(1, a·(m·z)·y', w)`                                      |
//! | `q = sp_β(y)`      | fresh `t`; premise at `β ↦ t·a·m` gives `y·t·a·m·y`,          |
//! |                    | recurse for `(a·m·y)·t·(a·m·y)`, then `Semiprime`             |
//!
//! Families of `U` behave like elements of `U`.

use std::collections::HashMap;

use super::builder::Builder;
use super::{merged_symbols, split_generators, TransformError, Transformer};
use crate::ring::{Poly, Symbol};
use crate::witness::{substitute_from, Family, GeneratorSet, NodeId, Setting, WitnessDag, WitnessNode};

type Memo = HashMap<(NodeId, Poly), NodeId>;

impl Transformer {
    /// From `p ⊢ x ∈ √(U ∪ {a})` and `q ⊢ y ∈ √(U ∪ {b})`, a witness of
    /// `x·m·y ∈ √(U ∪ aAb)`. The family `aAb` is appended to `U`'s families.
    pub fn sqrt_product(&self, p: &WitnessDag, q: &WitnessDag, m: &Poly) -> Result<WitnessDag, TransformError> {
        let (b, root) = self.sqrt_product_raw(p, q, m)?;
        Ok(b.finish(root))
    }

    /// From `p, q ⊢ c` over `U ∪ {a}` and `U ∪ {b}`, a witness of
    /// `c ∈ √(U ∪ aAb)`: `Semiprime` over the product `c·ζ·c` for fresh `ζ`.
    pub fn sqrt_intersect(&self, p: &WitnessDag, q: &WitnessDag) -> Result<WitnessDag, TransformError> {
        if p.conclusion() != q.conclusion() {
            return Err(TransformError::ConclusionMismatch {
                left: p.conclusion().clone(),
                right: q.conclusion().clone(),
            });
        }
        let zeta = Symbol::fresh("z");
        let (mut b, root) = self.sqrt_product_raw(p, q, &Poly::var(zeta.clone()))?;
        let out = b.semiprime(zeta, root, p.conclusion().clone())?;
        Ok(b.finish(out))
    }

    fn sqrt_product_raw(&self, p: &WitnessDag, q: &WitnessDag, m: &Poly) -> Result<(Builder, NodeId), TransformError> {
        for d in [p, q] {
            if d.setting() != Setting::Sqrt {
                return Err(TransformError::SettingMismatch { expected: Setting::Sqrt, found: d.setting() });
            }
        }
        let (u, a, bgen) = split_generators(p.generators(), q.generators())?;
        let mut families = u.families.clone();
        families.push(Family::new(a.clone(), bgen));
        let gens = GeneratorSet::with_families(u.elements.clone(), families);
        let mut prod = SqrtProduct {
            b: Builder::new(Setting::Sqrt, merged_symbols(p, q), gens, self),
            q,
            distinguished: u.elements.len(),
            new_family: u.families.len(),
            a,
            y: q.conclusion().clone(),
            memo_q: HashMap::new(),
        };
        let mut memo = Memo::new();
        let root = prod.left(p, p.root(), m, &mut memo)?;
        Ok((prod.b, root))
    }
}

struct SqrtProduct<'a> {
    b: Builder,
    q: &'a WitnessDag,
    distinguished: usize,
    new_family: usize,
    a: Poly,
    y: Poly,
    /// Memo for the right recursion over `q` itself.
    memo_q: Memo,
}

impl SqrtProduct<'_> {
    /// Witness of `conclusion(p[id])·m·y`.
    fn left(&mut self, p: &WitnessDag, id: NodeId, m: &Poly, memo: &mut Memo) -> Result<NodeId, TransformError> {
        let key = (id, m.clone());
        if let Some(&done) = memo.get(&key) {
            return Ok(done);
        }
        let my = m.multiply(&self.y);
        let out = match p.node(id)? {
            WitnessNode::Intro { gen } if *gen == self.distinguished => {
                let mut memo_q = std::mem::take(&mut self.memo_q);
                let r = self.right(self.q, self.q.root(), m, &mut memo_q);
                self.memo_q = memo_q;
                r?
            }
            WitnessNode::Intro { gen } => {
                let i = self.b.intro(*gen)?;
                self.b.mult(Poly::one(), i, my)?
            }
            WitnessNode::IntroFamily { family, instance } => {
                let i = self.b.intro_family(*family, instance.clone())?;
                self.b.mult(Poly::one(), i, my)?
            }
            WitnessNode::Zero => self.b.zero()?,
            WitnessNode::Add { left, right } => {
                let l = self.left(p, *left, m, memo)?;
                let r = self.left(p, *right, m, memo)?;
                self.b.add(l, r)?
            }
            WitnessNode::Mult { left: z, inner, right: w } => {
                let inner_out = self.left(p, *inner, &w.multiply(m), memo)?;
                self.b.mult(z.clone(), inner_out, Poly::one())?
            }
            WitnessNode::Semiprime { bound, premise, conclusion: x } => {
                let t = Symbol::fresh("t");
                let image = my.multiply(&Poly::var(t.clone()));
                let inst = substitute_from(p, *premise, HashMap::from([(bound.clone(), image)]));
                let mut inner_memo = Memo::new();
                let body = self.left(&inst, inst.root(), m, &mut inner_memo)?;
                self.b.semiprime(t, body, x.multiply(&my))?
            }
            other => return Err(TransformError::WrongNodeKind { setting: Setting::Sqrt, op: other.op() }),
        };
        memo.insert(key, out);
        Ok(out)
    }

    /// Witness of `a·m·conclusion(q[id])`.
    fn right(&mut self, q: &WitnessDag, id: NodeId, m: &Poly, memo: &mut Memo) -> Result<NodeId, TransformError> {
        let key = (id, m.clone());
        if let Some(&done) = memo.get(&key) {
            return Ok(done);
        }
        let am = self.a.multiply(m);
        let out = match q.node(id)? {
            WitnessNode::Intro { gen } if *gen == self.distinguished => self.b.intro_family(self.new_family, m.clone())?,
            WitnessNode::Intro { gen } => {
                let i = self.b.intro(*gen)?;
                self.b.mult(am, i, Poly::one())?
            }
            WitnessNode::IntroFamily { family, instance } => {
                let i = self.b.intro_family(*family, instance.clone())?;
                self.b.mult(am, i, Poly::one())?
            }
            WitnessNode::Zero => self.b.zero()?,
            WitnessNode::Add { left, right } => {
                let l = self.right(q, *left, m, memo)?;
                let r = self.right(q, *right, m, memo)?;
                self.b.add(l, r)?
            }
            WitnessNode::Mult { left: z, inner, right: w } => {
                let inner_out = self.right(q, *inner, &m.multiply(z), memo)?;
                self.b.mult(Poly::one(), inner_out, w.clone())?
            }
            WitnessNode::Semiprime { bound, premise, conclusion: y } => {
                let t = Symbol::fresh("t");
                let image = Poly::var(t.clone()).multiply(&am);
                let inst = substitute_from(q, *premise, HashMap::from([(bound.clone(), image)]));
                let mut inner_memo = Memo::new();
                let body = self.right(&inst, inst.root(), m, &mut inner_memo)?;
                self.b.semiprime(t, body, am.multiply(y))?
            }
            other => return Err(TransformError::WrongNodeKind { setting: Setting::Sqrt, op: other.op() }),
        };
        memo.insert(key, out);
        Ok(out)
    }
}
