//! Products and intersections in the reduced setting.
//!
//! Given `p ⊢ x ∈ Nil(U, a)` and `q ⊢ y ∈ Nil(U, b)`, the product witness
//! for `x·y ∈ Nil(U, ab)` is built by recursion on `p` with `y` fixed; when
//! `p` bottoms out at `a`, recursion continues on `q` with `a` fixed on
//! the left:
//!
//! | case            | output                                                 |
//! |-----------------|--------------------------------------------------------|
//! | `p = u ∈ U`     | `Mult(1, Intro(u), y)`                                 |
//! | `p = a`         | recurse on `q` for `a·y`                               |
//! | `p = 0`         | `Zero`                                                 |
//! | `p = x₁ + x₂`   | `Add(x₁·y, x₂·y)`                                      |
//! | `p = z·x'·w`    | insert `w` into `x'·y`, then `Mult(z, ·, 1)`           |
//! | `p = red(x)`    | insert `y` into `x·(x·y)` for `(x·y)²`, then `Red`     |
//! | `q = u ∈ U`     | `Mult(a, Intro(u), 1)`                                 |
//! | `q = b`         | `Intro(a·b)`                                           |
//! | `q = 0`         | `Zero`                                                 |
//! | `q = y₁ + y₂`   | `Add(a·y₁, a·y₂)`                                      |
//! | `q = z·y'·w`    | insert `z` into `a·y'`, then `Mult(1, ·, w)`           |
//! | `q = red(y)`    | insert `a` into `(a·y)·y` for `(a·y)²`, then `Red`     |
//!
//! Both recursions are memoized per node, so shared subterms are visited
//! once and the output stays linear in `|p| + |q|`.

use std::collections::HashMap;

use super::builder::Builder;
use super::{merged_symbols, split_generators, TransformError, Transformer};
use crate::ring::Poly;
use crate::witness::{GeneratorSet, NodeId, Setting, WitnessDag, WitnessNode};

impl Transformer {
    /// From `p ⊢ x ∈ Nil(U ∪ {a})` and `q ⊢ y ∈ Nil(U ∪ {b})`, a witness of
    /// `x·y ∈ Nil(U ∪ {a·b})`. The distinguished generator is the last one
    /// of each input.
    pub fn nil_product(&self, p: &WitnessDag, q: &WitnessDag) -> Result<WitnessDag, TransformError> {
        let (b, root) = self.nil_product_raw(p, q)?;
        Ok(b.finish(root))
    }

    /// From `p, q ⊢ c` over `U ∪ {a}` and `U ∪ {b}`, a witness of
    /// `c ∈ Nil(U ∪ {a·b})`: the product gives `c²`, then `Red`.
    pub fn nil_intersect(&self, p: &WitnessDag, q: &WitnessDag) -> Result<WitnessDag, TransformError> {
        if p.conclusion() != q.conclusion() {
            return Err(TransformError::ConclusionMismatch {
                left: p.conclusion().clone(),
                right: q.conclusion().clone(),
            });
        }
        let (mut b, root) = self.nil_product_raw(p, q)?;
        let out = b.red(root, p.conclusion().clone())?;
        Ok(b.finish(out))
    }

    fn nil_product_raw(&self, p: &WitnessDag, q: &WitnessDag) -> Result<(Builder, NodeId), TransformError> {
        for d in [p, q] {
            if d.setting() != Setting::Nil {
                return Err(TransformError::SettingMismatch { expected: Setting::Nil, found: d.setting() });
            }
        }
        let (u, a, bgen) = split_generators(p.generators(), q.generators())?;
        let ab = a.multiply(&bgen);
        let mut elements = u.elements.clone();
        elements.push(ab);
        let gens = GeneratorSet::new(elements);
        let mut prod = NilProduct {
            b: Builder::new(Setting::Nil, merged_symbols(p, q), gens, self),
            p,
            q,
            distinguished: u.elements.len(),
            a,
            y: q.conclusion().clone(),
            memo_p: HashMap::new(),
            memo_q: HashMap::new(),
        };
        let root = prod.left(p.root())?;
        Ok((prod.b, root))
    }
}

struct NilProduct<'a> {
    b: Builder,
    p: &'a WitnessDag,
    q: &'a WitnessDag,
    /// Index of `a` in `p`, of `b` in `q`, and of `a·b` in the output.
    distinguished: usize,
    a: Poly,
    y: Poly,
    memo_p: HashMap<NodeId, NodeId>,
    memo_q: HashMap<NodeId, NodeId>,
}

impl NilProduct<'_> {
    /// Witness of `conclusion(p[id])·y`.
    fn left(&mut self, id: NodeId) -> Result<NodeId, TransformError> {
        if let Some(&done) = self.memo_p.get(&id) {
            return Ok(done);
        }
        let out = match self.p.node(id)? {
            WitnessNode::Intro { gen } if *gen == self.distinguished => self.right(self.q.root())?,
            WitnessNode::Intro { gen } => {
                let i = self.b.intro(*gen)?;
                self.b.mult(Poly::one(), i, self.y.clone())?
            }
            WitnessNode::Zero => self.b.zero()?,
            WitnessNode::Add { left, right } => {
                let l = self.left(*left)?;
                let r = self.left(*right)?;
                self.b.add(l, r)?
            }
            WitnessNode::Mult { left: z, inner, right: w } => {
                let xy = self.left(*inner)?;
                let x = self.p.conclusions()[*inner].clone();
                let xwy = self.b.insert(xy, &x, &self.y, w)?;
                self.b.mult(z.clone(), xwy, Poly::one())?
            }
            WitnessNode::Red { premise, conclusion: x } => {
                let xxy = self.left(*premise)?;
                let xy = x.multiply(&self.y);
                let sq = self.b.insert(xxy, x, &xy, &self.y)?;
                self.b.red(sq, xy)?
            }
            other => return Err(TransformError::WrongNodeKind { setting: Setting::Nil, op: other.op() }),
        };
        self.memo_p.insert(id, out);
        Ok(out)
    }

    /// Witness of `a·conclusion(q[id])`.
    fn right(&mut self, id: NodeId) -> Result<NodeId, TransformError> {
        if let Some(&done) = self.memo_q.get(&id) {
            return Ok(done);
        }
        let out = match self.q.node(id)? {
            WitnessNode::Intro { gen } if *gen == self.distinguished => self.b.intro(self.distinguished)?,
            WitnessNode::Intro { gen } => {
                let i = self.b.intro(*gen)?;
                self.b.mult(self.a.clone(), i, Poly::one())?
            }
            WitnessNode::Zero => self.b.zero()?,
            WitnessNode::Add { left, right } => {
                let l = self.right(*left)?;
                let r = self.right(*right)?;
                self.b.add(l, r)?
            }
            WitnessNode::Mult { left: z, inner, right: w } => {
                let ay = self.right(*inner)?;
                let y = self.q.conclusions()[*inner].clone();
                let azy = self.b.insert(ay, &self.a, &y, z)?;
                self.b.mult(Poly::one(), azy, w.clone())?
            }
            WitnessNode::Red { premise, conclusion: y } => {
                let ayy = self.right(*premise)?;
                let ay = self.a.multiply(y);
                let sq = self.b.insert(ayy, &ay, y, &self.a)?;
                self.b.red(sq, ay)?
            }
            other => return Err(TransformError::WrongNodeKind { setting: Setting::Nil, op: other.op() }),
        };
        self.memo_q.insert(id, out);
        Ok(out)
    }
}
