//! The trusted checker.
//!
//! Everything a transform produces is accepted or rejected here, so this
//! module deliberately depends on nothing but the ring arithmetic and the
//! certificate data types. It recomputes every conclusion itself.

use std::fmt;

use super::{Certificate, NodeId, Setting, WitnessNode};
use crate::ring::Poly;

/// Machine-readable rejection reasons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    BadRef,
    Cycle,
    RedSquareMismatch,
    SemiprimeShape,
    SemiprimeCapture,
    WrongSetting,
    ClaimMismatch,
    GenIndex,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::BadRef => "BAD_REF",
            Reason::Cycle => "CYCLE",
            Reason::RedSquareMismatch => "RED_SQUARE_MISMATCH",
            Reason::SemiprimeShape => "SEMIPRIME_SHAPE",
            Reason::SemiprimeCapture => "SEMIPRIME_CAPTURE",
            Reason::WrongSetting => "WRONG_SETTING",
            Reason::ClaimMismatch => "CLAIM_MISMATCH",
            Reason::GenIndex => "GEN_INDEX",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// `node` is `None` for defects of the certificate as a whole.
    Invalid { node: Option<NodeId>, reason: Reason },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn reason(&self) -> Option<Reason> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid { reason, .. } => Some(*reason),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid { node: Some(id), reason } => write!(f, "invalid: node {id}: {reason}"),
            Verdict::Invalid { node: None, reason } => write!(f, "invalid: {reason}"),
        }
    }
}

fn reject(node: NodeId, reason: Reason) -> Verdict {
    Verdict::Invalid { node: Some(node), reason }
}

/// Decides whether `cert` is a correct derivation of its claim.
///
/// Every node is checked, reachable from the root or not. Nodes are visited
/// in id order with children before parents, and the first violation found
/// is reported.
pub fn check_certificate(cert: &Certificate) -> Verdict {
    let n = cert.nodes.len();
    let gens = &cert.generators;
    if cert.setting == Setting::Nil && !gens.families.is_empty() {
        return Verdict::Invalid { node: None, reason: Reason::WrongSetting };
    }
    if cert.root >= n {
        return Verdict::Invalid { node: None, reason: Reason::BadRef };
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unseen,
        Open,
        Done,
    }
    let mut mark = vec![Mark::Unseen; n];
    let mut concl: Vec<Poly> = vec![Poly::zero(); n];

    for start in 0..n {
        if mark[start] == Mark::Done {
            continue;
        }
        let mut stack: Vec<(NodeId, bool)> = vec![(start, false)];
        while let Some((id, expanded)) = stack.pop() {
            if mark[id] == Mark::Done {
                continue;
            }
            if !expanded {
                if mark[id] == Mark::Open {
                    // reached again through a sibling while still open
                    continue;
                }
                mark[id] = Mark::Open;
                stack.push((id, true));
                let node = &cert.nodes[id];
                for child in node.children() {
                    if child >= n {
                        return reject(id, Reason::BadRef);
                    }
                    match mark[child] {
                        Mark::Open => return reject(id, Reason::Cycle),
                        Mark::Unseen => stack.push((child, false)),
                        Mark::Done => {}
                    }
                }
                continue;
            }
            match check_node(cert, id, &concl) {
                Ok(c) => {
                    concl[id] = c;
                    mark[id] = Mark::Done;
                }
                Err(reason) => return reject(id, reason),
            }
        }
    }

    if concl[cert.root] != cert.claim {
        return reject(cert.root, Reason::ClaimMismatch);
    }
    Verdict::Valid
}

fn check_node(cert: &Certificate, id: NodeId, concl: &[Poly]) -> Result<Poly, Reason> {
    let node = &cert.nodes[id];
    let gens = &cert.generators;
    let setting_ok = match node {
        WitnessNode::Red { .. } => cert.setting == Setting::Nil,
        WitnessNode::Semiprime { .. } | WitnessNode::IntroFamily { .. } => cert.setting == Setting::Sqrt,
        _ => true,
    };
    if !setting_ok {
        return Err(Reason::WrongSetting);
    }
    match node {
        WitnessNode::Intro { gen } => gens.elements.get(*gen).cloned().ok_or(Reason::GenIndex),
        WitnessNode::IntroFamily { family, instance } => {
            let f = gens.families.get(*family).ok_or(Reason::GenIndex)?;
            Ok(f.left.multiply(instance).multiply(&f.right))
        }
        WitnessNode::Zero => Ok(Poly::zero()),
        WitnessNode::Add { left, right } => Ok(concl[*left].add(&concl[*right])),
        WitnessNode::Mult { left, inner, right } => Ok(left.multiply(&concl[*inner]).multiply(right)),
        WitnessNode::Red { premise, conclusion } => {
            if concl[*premise] != conclusion.multiply(conclusion) {
                return Err(Reason::RedSquareMismatch);
            }
            Ok(conclusion.clone())
        }
        WitnessNode::Semiprime { bound, premise, conclusion } => {
            if !bound.is_schematic() || conclusion.contains_symbol(bound) || generators_mention(cert, bound) {
                return Err(Reason::SemiprimeCapture);
            }
            let expected = conclusion.multiply(&Poly::var(bound.clone())).multiply(conclusion);
            if concl[*premise] != expected {
                return Err(Reason::SemiprimeShape);
            }
            Ok(conclusion.clone())
        }
    }
}

fn generators_mention(cert: &Certificate, s: &crate::ring::Symbol) -> bool {
    let g = &cert.generators;
    g.elements.iter().any(|p| p.contains_symbol(s))
        || g.families.iter().any(|f| f.left.contains_symbol(s) || f.right.contains_symbol(s))
}
