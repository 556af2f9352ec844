//! Membership witnesses for `Nil U` and `√U`, their certificate form, and
//! the trusted checker.
//!
//! A witness is a DAG of constructor applications. Each node kind is one
//! constructor of the inductively generated ideal:
//!
//! | node           | constructor                                   | setting |
//! |----------------|-----------------------------------------------|---------|
//! | `Intro`        | `x ∈ U ⟹ x ∈ I`                               | both    |
//! | `IntroFamily`  | `left·r·right ∈ I` for a family `left·A·right` | sqrt    |
//! | `Zero`         | `0 ∈ I`                                       | both    |
//! | `Add`          | `x, y ∈ I ⟹ x + y ∈ I`                        | both    |
//! | `Mult`         | `x ∈ I ⟹ z·x·w ∈ I`                           | both    |
//! | `Red`          | `x² ∈ I ⟹ x ∈ I`                              | nil     |
//! | `Semiprime`    | `(∀t. x·t·x ∈ I) ⟹ x ∈ I`                     | sqrt    |
//!
//! The universally quantified premise of `Semiprime` is a single witness
//! over a fresh schematic symbol `t`; it instantiates to any ring element by
//! [`substitute_schematic`].

mod certificate;
pub mod checker;
mod serial;
mod subst;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Poly, Symbol};

pub use certificate::Certificate;
pub use checker::{check_certificate, Reason, Verdict};
pub use serial::{deserialize, serialize, DeserializeError, CERTIFICATE_VERSION};
pub use subst::substitute_schematic;
pub(crate) use subst::substitute_from;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    /// The smallest reduced ideal `Nil U`.
    Nil,
    /// The smallest semiprime ideal `√U`.
    Sqrt,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Nil => "nil",
            Setting::Sqrt => "sqrt",
        })
    }
}

/// The schematic family `{left·r·right : r ∈ A}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub left: Poly,
    pub right: Poly,
}

impl Family {
    pub fn new(left: Poly, right: Poly) -> Family {
        Family { left, right }
    }

    pub fn instance(&self, r: &Poly) -> Poly {
        Poly::product([&self.left, r, &self.right])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    pub elements: Vec<Poly>,
    pub families: Vec<Family>,
}

impl GeneratorSet {
    pub fn new(elements: Vec<Poly>) -> GeneratorSet {
        GeneratorSet { elements, families: Vec::new() }
    }

    pub fn with_families(elements: Vec<Poly>, families: Vec<Family>) -> GeneratorSet {
        GeneratorSet { elements, families }
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.elements.iter().any(|p| p.contains_symbol(s))
            || self.families.iter().any(|f| f.left.contains_symbol(s) || f.right.contains_symbol(s))
    }

    pub fn has_schematic(&self) -> bool {
        self.elements.iter().any(Poly::has_schematic)
            || self.families.iter().any(|f| f.left.has_schematic() || f.right.has_schematic())
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for p in &self.elements {
            out.extend(p.symbols());
        }
        for f in &self.families {
            out.extend(f.left.symbols());
            out.extend(f.right.symbols());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WitnessNode {
    Intro { gen: usize },
    IntroFamily { family: usize, instance: Poly },
    Zero,
    Add { left: NodeId, right: NodeId },
    Mult { left: Poly, inner: NodeId, right: Poly },
    /// Concludes `conclusion` from a premise concluding `conclusion²`.
    Red { premise: NodeId, conclusion: Poly },
    /// Concludes `conclusion` from a premise concluding
    /// `conclusion·bound·conclusion`, where `bound` is fresh.
    Semiprime { bound: Symbol, premise: NodeId, conclusion: Poly },
}

impl WitnessNode {
    pub fn op(&self) -> &'static str {
        match self {
            WitnessNode::Intro { .. } => "intro",
            WitnessNode::IntroFamily { .. } => "intro_family",
            WitnessNode::Zero => "zero",
            WitnessNode::Add { .. } => "add",
            WitnessNode::Mult { .. } => "mult",
            WitnessNode::Red { .. } => "red",
            WitnessNode::Semiprime { .. } => "semiprime",
        }
    }

    pub fn children(&self) -> Vec<NodeId> {
        match self {
            WitnessNode::Intro { .. } | WitnessNode::IntroFamily { .. } | WitnessNode::Zero => vec![],
            WitnessNode::Add { left, right } => vec![*left, *right],
            WitnessNode::Mult { inner, .. } => vec![*inner],
            WitnessNode::Red { premise, .. } | WitnessNode::Semiprime { premise, .. } => vec![*premise],
        }
    }

    /// Which setting admits this node kind; `None` means both.
    pub fn setting(&self) -> Option<Setting> {
        match self {
            WitnessNode::Red { .. } => Some(Setting::Nil),
            WitnessNode::Semiprime { .. } | WitnessNode::IntroFamily { .. } => Some(Setting::Sqrt),
            _ => None,
        }
    }

    pub(crate) fn map_children(&self, mut f: impl FnMut(NodeId) -> NodeId) -> WitnessNode {
        let mut out = self.clone();
        match &mut out {
            WitnessNode::Add { left, right } => {
                *left = f(*left);
                *right = f(*right);
            }
            WitnessNode::Mult { inner, .. } => *inner = f(*inner),
            WitnessNode::Red { premise, .. } | WitnessNode::Semiprime { premise, .. } => {
                *premise = f(*premise)
            }
            _ => {}
        }
        out
    }

    /// Every polynomial stored directly in the node.
    pub fn polys(&self) -> Vec<&Poly> {
        match self {
            WitnessNode::IntroFamily { instance, .. } => vec![instance],
            WitnessNode::Mult { left, right, .. } => vec![left, right],
            WitnessNode::Red { conclusion, .. } => vec![conclusion],
            WitnessNode::Semiprime { conclusion, .. } => vec![conclusion],
            _ => vec![],
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("node {0} does not exist")]
    DanglingId(NodeId),
    #[error("node {node} references missing node {target}")]
    BadRef { node: NodeId, target: NodeId },
    #[error("node {0} lies on a reference cycle")]
    Cycle(NodeId),
    #[error("`{0}` is not a schematic symbol")]
    NotSchematic(String),
    #[error("node {node} uses generator or family index {index}, which does not exist")]
    GenIndex { node: NodeId, index: usize },
}

/// A structurally sound witness: references resolve, the graph is acyclic,
/// and every node's conclusion is cached.
///
/// Structural soundness says nothing about the `Red` and `Semiprime` side
/// conditions; only [`check_certificate`] decides validity.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessDag {
    setting: Setting,
    symbols: Vec<String>,
    generators: GeneratorSet,
    nodes: Vec<WitnessNode>,
    conclusions: Vec<Poly>,
    root: NodeId,
}

impl WitnessDag {
    /// Assembles a DAG whose nodes are already in dependency order (every
    /// child id is smaller than its parent's).
    pub fn from_topological(
        setting: Setting,
        symbols: Vec<String>,
        generators: GeneratorSet,
        nodes: Vec<WitnessNode>,
        root: NodeId,
    ) -> Result<WitnessDag, WitnessError> {
        let mut conclusions: Vec<Poly> = Vec::with_capacity(nodes.len());
        for (id, node) in nodes.iter().enumerate() {
            for c in node.children() {
                if c >= id {
                    return Err(if c >= nodes.len() {
                        WitnessError::BadRef { node: id, target: c }
                    } else {
                        WitnessError::Cycle(id)
                    });
                }
            }
            conclusions.push(node_conclusion(id, node, &generators, &conclusions)?);
        }
        if root >= nodes.len() {
            return Err(WitnessError::DanglingId(root));
        }
        let symbols = complete_symbols(symbols, &generators, &nodes);
        Ok(WitnessDag { setting, symbols, generators, nodes, conclusions, root })
    }

    /// Trusted assembly for the transform builder, which maintains the
    /// conclusion cache itself.
    pub(crate) fn from_parts(
        setting: Setting,
        symbols: Vec<String>,
        generators: GeneratorSet,
        nodes: Vec<WitnessNode>,
        conclusions: Vec<Poly>,
        root: NodeId,
    ) -> WitnessDag {
        debug_assert_eq!(nodes.len(), conclusions.len());
        debug_assert!(root < nodes.len());
        let symbols = complete_symbols(symbols, &generators, &nodes);
        WitnessDag { setting, symbols, generators, nodes, conclusions, root }
    }

    /// Computes conclusions for a DAG whose nodes are in no particular order.
    pub fn from_nodes(
        setting: Setting,
        symbols: Vec<String>,
        generators: GeneratorSet,
        nodes: Vec<WitnessNode>,
        root: NodeId,
    ) -> Result<WitnessDag, WitnessError> {
        let n = nodes.len();
        if root >= n {
            return Err(WitnessError::DanglingId(root));
        }
        let mut conclusions: Vec<Option<Poly>> = vec![None; n];
        let mut on_stack = vec![false; n];
        for start in 0..n {
            if conclusions[start].is_some() {
                continue;
            }
            let mut stack = vec![(start, false)];
            while let Some((id, expanded)) = stack.pop() {
                if conclusions[id].is_some() {
                    continue;
                }
                if expanded {
                    on_stack[id] = false;
                    let lookup = |c: NodeId| conclusions[c].clone().expect("child computed");
                    let concl = conclusion_with(id, &nodes[id], &generators, lookup)?;
                    conclusions[id] = Some(concl);
                    continue;
                }
                on_stack[id] = true;
                stack.push((id, true));
                for c in nodes[id].children() {
                    if c >= n {
                        return Err(WitnessError::BadRef { node: id, target: c });
                    }
                    if on_stack[c] {
                        return Err(WitnessError::Cycle(c));
                    }
                    if conclusions[c].is_none() {
                        stack.push((c, false));
                    }
                }
            }
        }
        let conclusions = conclusions.into_iter().map(|c| c.expect("all visited")).collect();
        let symbols = complete_symbols(symbols, &generators, &nodes);
        Ok(WitnessDag { setting, symbols, generators, nodes, conclusions, root })
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    /// Declared base symbols, in presentation order.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn nodes(&self) -> &[WitnessNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&WitnessNode, WitnessError> {
        self.nodes.get(id).ok_or(WitnessError::DanglingId(id))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// The root's conclusion.
    pub fn conclusion(&self) -> &Poly {
        &self.conclusions[self.root]
    }

    pub fn conclusions(&self) -> &[Poly] {
        &self.conclusions
    }

    /// Recomputes every conclusion from the node rules and compares it with
    /// the cache.
    pub fn conclusions_consistent(&self) -> bool {
        let fresh = WitnessDag::from_nodes(
            self.setting,
            self.symbols.clone(),
            self.generators.clone(),
            self.nodes.clone(),
            self.root,
        );
        fresh.is_ok_and(|d| d.conclusions == self.conclusions)
    }

    /// Nodes reachable from the root, children before parents.
    pub fn reachable(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
                continue;
            }
            if seen[id] {
                continue;
            }
            seen[id] = true;
            stack.push((id, true));
            for c in self.nodes[id].children().into_iter().rev() {
                if !seen[c] {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    pub fn with_root(&self, root: NodeId) -> Result<WitnessDag, WitnessError> {
        if root >= self.nodes.len() {
            return Err(WitnessError::DanglingId(root));
        }
        Ok(WitnessDag { root, ..self.clone() })
    }

    pub fn to_certificate(&self) -> Certificate {
        Certificate {
            version: CERTIFICATE_VERSION,
            setting: self.setting,
            symbols: self.symbols.clone(),
            generators: self.generators.clone(),
            claim: self.conclusion().clone(),
            nodes: self.nodes.clone(),
            root: self.root,
        }
    }

    /// Structural import of a certificate. The claim is not compared with
    /// the root conclusion here; that is the checker's job.
    pub fn from_certificate(cert: &Certificate) -> Result<WitnessDag, WitnessError> {
        WitnessDag::from_nodes(
            cert.setting,
            cert.symbols.clone(),
            cert.generators.clone(),
            cert.nodes.clone(),
            cert.root,
        )
    }
}

/// Conclusion of a node given its id in the DAG.
pub fn conclusion_of(dag: &WitnessDag, id: NodeId) -> Result<&Poly, WitnessError> {
    dag.conclusions.get(id).ok_or(WitnessError::DanglingId(id))
}

fn node_conclusion(
    id: NodeId,
    node: &WitnessNode,
    generators: &GeneratorSet,
    done: &[Poly],
) -> Result<Poly, WitnessError> {
    conclusion_with(id, node, generators, |c| done[c].clone())
}

fn conclusion_with(
    id: NodeId,
    node: &WitnessNode,
    generators: &GeneratorSet,
    child: impl Fn(NodeId) -> Poly,
) -> Result<Poly, WitnessError> {
    Ok(match node {
        WitnessNode::Intro { gen } => generators
            .elements
            .get(*gen)
            .cloned()
            .ok_or(WitnessError::GenIndex { node: id, index: *gen })?,
        WitnessNode::IntroFamily { family, instance } => generators
            .families
            .get(*family)
            .ok_or(WitnessError::GenIndex { node: id, index: *family })?
            .instance(instance),
        WitnessNode::Zero => Poly::zero(),
        WitnessNode::Add { left, right } => child(*left).add(&child(*right)),
        WitnessNode::Mult { left, inner, right } => Poly::product([left, &child(*inner), right]),
        WitnessNode::Red { conclusion, .. } | WitnessNode::Semiprime { conclusion, .. } => {
            conclusion.clone()
        }
    })
}

/// Extends the declared symbol list with any base symbol used but not
/// declared, in name order.
fn complete_symbols(mut symbols: Vec<String>, generators: &GeneratorSet, nodes: &[WitnessNode]) -> Vec<String> {
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut note = |p: &Poly| {
        for s in p.symbols() {
            if !s.is_schematic() {
                used.insert(s.name().to_string());
            }
        }
    };
    for p in &generators.elements {
        note(p);
    }
    for f in &generators.families {
        note(&f.left);
        note(&f.right);
    }
    for n in nodes {
        for p in n.polys() {
            note(p);
        }
    }
    for name in used {
        if !symbols.contains(&name) {
            symbols.push(name);
        }
    }
    symbols
}
