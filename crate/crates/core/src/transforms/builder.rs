use std::collections::HashMap;

use super::{TransformError, Transformer};
use crate::ring::{Poly, Symbol};
use crate::witness::{GeneratorSet, NodeId, Setting, WitnessDag, WitnessNode};

/// An append-only, hash-consed node arena. Structurally equal nodes are
/// stored once, which keeps transform outputs polynomial in the size of
/// their inputs.
pub(crate) struct Builder {
    setting: Setting,
    symbols: Vec<String>,
    generators: GeneratorSet,
    nodes: Vec<WitnessNode>,
    conclusions: Vec<Poly>,
    index: HashMap<WitnessNode, NodeId>,
    max_nodes: usize,
    max_terms: usize,
}

impl Builder {
    pub fn new(setting: Setting, symbols: Vec<String>, generators: GeneratorSet, budget: &Transformer) -> Builder {
        Builder {
            setting,
            symbols,
            generators,
            nodes: Vec::new(),
            conclusions: Vec::new(),
            index: HashMap::new(),
            max_nodes: budget.max_nodes,
            max_terms: budget.max_terms,
        }
    }

    /// A builder over `dag`'s generators, pre-loaded with its nodes. Returns
    /// the id of `dag`'s root in the new arena.
    pub fn from_dag(dag: &WitnessDag, budget: &Transformer) -> Result<(Builder, NodeId), TransformError> {
        let mut b = Builder::new(dag.setting(), dag.symbols().to_vec(), dag.generators().clone(), budget);
        let mut map: HashMap<NodeId, NodeId> = HashMap::new();
        for id in dag.reachable() {
            let node = dag.nodes()[id].map_children(|c| map[&c]);
            let new = b.push(node, dag.conclusions()[id].clone())?;
            map.insert(id, new);
        }
        Ok((b, map[&dag.root()]))
    }

    fn push(&mut self, node: WitnessNode, conclusion: Poly) -> Result<NodeId, TransformError> {
        if let Some(&id) = self.index.get(&node) {
            return Ok(id);
        }
        if self.nodes.len() >= self.max_nodes {
            return Err(TransformError::BudgetExceeded(self.max_nodes));
        }
        let id = self.nodes.len();
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        self.conclusions.push(conclusion);
        Ok(id)
    }

    pub fn intro(&mut self, gen: usize) -> Result<NodeId, TransformError> {
        let c = self.generators.elements[gen].clone();
        self.push(WitnessNode::Intro { gen }, c)
    }

    pub fn intro_family(&mut self, family: usize, instance: Poly) -> Result<NodeId, TransformError> {
        let c = self.generators.families[family].instance(&instance);
        self.push(WitnessNode::IntroFamily { family, instance }, c)
    }

    pub fn zero(&mut self) -> Result<NodeId, TransformError> {
        self.push(WitnessNode::Zero, Poly::zero())
    }

    pub fn add(&mut self, left: NodeId, right: NodeId) -> Result<NodeId, TransformError> {
        let c = self.conclusions[left].add(&self.conclusions[right]);
        self.push(WitnessNode::Add { left, right }, c)
    }

    /// `left·inner·right`; multiplying by 1 on both sides is the identity.
    pub fn mult(&mut self, left: Poly, inner: NodeId, right: Poly) -> Result<NodeId, TransformError> {
        if left.is_one() && right.is_one() {
            return Ok(inner);
        }
        // bound the expansion before paying for it
        let estimate = [left.num_terms(), self.conclusions[inner].num_terms(), right.num_terms()]
            .iter()
            .fold(1usize, |acc, &n| acc.saturating_mul(n));
        if estimate > self.max_terms {
            return Err(TransformError::TermBudgetExceeded(self.max_terms));
        }
        let c = Poly::product([&left, &self.conclusions[inner], &right]);
        self.push(WitnessNode::Mult { left, inner, right }, c)
    }

    pub fn red(&mut self, premise: NodeId, conclusion: Poly) -> Result<NodeId, TransformError> {
        let c = conclusion.clone();
        self.push(WitnessNode::Red { premise, conclusion }, c)
    }

    pub fn semiprime(&mut self, bound: Symbol, premise: NodeId, conclusion: Poly) -> Result<NodeId, TransformError> {
        let c = conclusion.clone();
        self.push(WitnessNode::Semiprime { bound, premise, conclusion }, c)
    }

    fn expect_factorization(&self, w: NodeId, u: &Poly, v: &Poly) -> Result<(), TransformError> {
        let uv = u.multiply(v);
        if self.conclusions[w] != uv {
            return Err(TransformError::FactorizationMismatch {
                conclusion: self.conclusions[w].clone(),
                product: uv,
            });
        }
        Ok(())
    }

    /// From `w ⊢ u·v` derive `v·u`, as `Red(Mult(v, w, u))` since
    /// `v·(u·v)·u = (v·u)²`.
    pub fn rotate(&mut self, w: NodeId, u: &Poly, v: &Poly) -> Result<NodeId, TransformError> {
        self.require_nil()?;
        self.expect_factorization(w, u, v)?;
        let sq = self.mult(v.clone(), w, u.clone())?;
        self.red(sq, v.multiply(u))
    }

    /// From `w ⊢ u·v` derive `u·r·v`: rotate to `v·u`, then
    /// `(u·r)·(v·u)·(r·v) = (u·r·v)²` and take the root.
    pub fn insert(&mut self, w: NodeId, u: &Poly, v: &Poly, r: &Poly) -> Result<NodeId, TransformError> {
        let vu = self.rotate(w, u, v)?;
        let ur = u.multiply(r);
        let rv = r.multiply(v);
        let sq = self.mult(ur.clone(), vu, rv)?;
        self.red(sq, ur.multiply(v))
    }

    fn require_nil(&self) -> Result<(), TransformError> {
        if self.setting != Setting::Nil {
            return Err(TransformError::SettingMismatch { expected: Setting::Nil, found: self.setting });
        }
        Ok(())
    }

    pub fn finish(self, root: NodeId) -> WitnessDag {
        WitnessDag::from_parts(self.setting, self.symbols, self.generators, self.nodes, self.conclusions, root)
    }
}
