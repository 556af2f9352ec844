//! Commutator certificates: `[x, y] ∈ Nil((x - c₁)⋯(x - cₙ))` for distinct
//! integers `cᵢ`, and the `x² = x` / `x³ = x` commutativity demos built on
//! them.

use std::collections::BTreeSet;
use std::fmt::Write;

use num_bigint::BigInt;
use thiserror::Error;

use crate::expr::print_poly_with;
use crate::ring::{Poly, Symbol, SymbolOrder};
use crate::transforms::{TransformError, Transformer};
use crate::witness::{
    check_certificate, Certificate, GeneratorSet, NodeId, Setting, Verdict, WitnessDag, WitnessNode,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CommutativityError {
    #[error("at least one constant is required")]
    NoConstants,
    #[error("constant {0} is repeated")]
    DuplicateConstant(BigInt),
    #[error("x^{0} - x does not split into integer linear factors; supported exponents are 2 and 3")]
    UnsupportedExponent(u32),
    #[error("certificate rejected: {0}")]
    InvalidCertificate(Verdict),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Distinct integers `c₁, …, cₙ`, `n ≥ 1`. Integers are exactly the
/// central elements of ℤ⟨X⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralConstants {
    constants: Vec<BigInt>,
}

impl CentralConstants {
    pub fn new<I, T>(constants: I) -> Result<CentralConstants, CommutativityError>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let constants: Vec<BigInt> = constants.into_iter().map(Into::into).collect();
        if constants.is_empty() {
            return Err(CommutativityError::NoConstants);
        }
        let mut seen = BTreeSet::new();
        for c in &constants {
            if !seen.insert(c.clone()) {
                return Err(CommutativityError::DuplicateConstant(c.clone()));
            }
        }
        Ok(CentralConstants { constants })
    }

    pub fn constants(&self) -> &[BigInt] {
        &self.constants
    }
}

fn xy() -> (Symbol, Symbol) {
    (Symbol::base("x").expect("identifier"), Symbol::base("y").expect("identifier"))
}

/// `[x, y] ∈ Nil(x - c)`, as `(x - c)·y - y·(x - c)`:
/// `Add(Mult(1, Intro(x - c), y), Mult(-y, Intro(x - c), 1))`.
pub fn commutator_factor_witness(c: impl Into<BigInt>, x: &Symbol, y: &Symbol) -> WitnessDag {
    let gen = Poly::var(x.clone()).sub(&Poly::constant(c));
    let yp = Poly::var(y.clone());
    let nodes = vec![
        WitnessNode::Intro { gen: 0 },
        WitnessNode::Mult { left: Poly::one(), inner: 0, right: yp.clone() },
        WitnessNode::Mult { left: yp.negate(), inner: 0, right: Poly::one() },
        WitnessNode::Add { left: 1, right: 2 },
    ];
    let symbols = vec![x.name().to_string(), y.name().to_string()];
    WitnessDag::from_topological(Setting::Nil, symbols, GeneratorSet::new(vec![gen]), nodes, 3)
        .expect("well-formed by construction")
}

/// One stage of the fold: the factor witness for `c`, and the running
/// intersection after it.
struct Stage {
    constant: BigInt,
    factor: WitnessDag,
    accumulated: WitnessDag,
}

fn fold_stages(transformer: &Transformer, cs: &CentralConstants) -> Result<Vec<Stage>, CommutativityError> {
    let (x, y) = xy();
    let mut stages: Vec<Stage> = Vec::new();
    for c in cs.constants() {
        let factor = commutator_factor_witness(c.clone(), &x, &y);
        let accumulated = match stages.last() {
            None => factor.clone(),
            Some(prev) => transformer.nil_intersect(&prev.accumulated, &factor)?,
        };
        stages.push(Stage { constant: c.clone(), factor, accumulated });
    }
    Ok(stages)
}

/// Certificate for `[x, y] ∈ Nil((x - c₁)⋯(x - cₙ))`, folding
/// `nil_intersect` left to right over the factor witnesses.
pub fn central_roots_witness(cs: &CentralConstants) -> Result<Certificate, CommutativityError> {
    central_roots_witness_with(&Transformer::default(), cs)
}

pub fn central_roots_witness_with(
    transformer: &Transformer,
    cs: &CentralConstants,
) -> Result<Certificate, CommutativityError> {
    let stages = fold_stages(transformer, cs)?;
    Ok(stages.last().expect("nonempty").accumulated.to_certificate())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// Backed by a certificate range that the checker accepts.
    Certified,
    /// An argument made in prose, outside any certificate.
    Narrative,
}

/// Points at the sub-DAG of `certificates[certificate]` rooted at `last`;
/// `first` is the smallest node id in that sub-DAG.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertRef {
    pub certificate: usize,
    pub first: NodeId,
    pub last: NodeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub statement: String,
    pub justification: String,
    pub kind: StepKind,
    pub cert_ref: Option<CertRef>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogStyle {
    Text,
    Markdown,
}

/// A readable account of a proof. Certified steps point into one of
/// `certificates`; narrative steps are flagged as such.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofLog {
    pub certificates: Vec<Certificate>,
    pub steps: Vec<Step>,
}

impl ProofLog {
    /// One certified step per node of `cert`, in id order.
    pub fn replay(cert: &Certificate) -> Result<ProofLog, CommutativityError> {
        let mut log = ProofLog { certificates: vec![cert.clone()], steps: Vec::new() };
        log.push_replay(0)?;
        Ok(log)
    }

    fn push_replay(&mut self, index: usize) -> Result<(), CommutativityError> {
        let cert = &self.certificates[index];
        let verdict = check_certificate(cert);
        if !verdict.is_valid() {
            return Err(CommutativityError::InvalidCertificate(verdict));
        }
        let dag = WitnessDag::from_certificate(cert).expect("checked certificates are well-formed");
        let order = SymbolOrder::new(cert.symbols.as_slice());
        let ideal = ideal_name(cert, &order);
        let show = |p: &Poly| print_poly_with(p, &order);
        let mut steps = Vec::with_capacity(cert.nodes.len());
        for (id, node) in cert.nodes.iter().enumerate() {
            let justification = match node {
                WitnessNode::Intro { gen } => format!("intro: generator {}", show(&cert.generators.elements[*gen])),
                WitnessNode::IntroFamily { family, instance } => {
                    let f = &cert.generators.families[*family];
                    format!("intro: family ({})·A·({}) at {}", show(&f.left), show(&f.right), show(instance))
                }
                WitnessNode::Zero => "zero".to_string(),
                WitnessNode::Add { left, right } => format!("add: #{left} + #{right}"),
                WitnessNode::Mult { left, inner, right } => {
                    format!("mult: ({})·#{inner}·({})", show(left), show(right))
                }
                WitnessNode::Red { premise, .. } => format!("red: #{premise} is its square"),
                WitnessNode::Semiprime { bound, premise, .. } => {
                    format!("semiprime: #{premise} gives x·{bound}·x for every {bound}")
                }
            };
            let sub = dag.with_root(id).expect("in range").reachable();
            let first = sub.iter().copied().min().unwrap_or(id);
            steps.push(Step {
                statement: format!("#{id}: {} ∈ {ideal}", show(&dag.conclusions()[id])),
                justification,
                kind: StepKind::Certified,
                cert_ref: Some(CertRef { certificate: index, first, last: id }),
            });
        }
        self.steps.extend(steps);
        Ok(())
    }

    /// True when every certified step's sub-certificate passes the checker.
    ///
    /// The checker validates every node of a certificate, so one check per
    /// referenced certificate covers all of its sub-derivations; each range
    /// is then checked to be exactly the sub-DAG it names.
    pub fn validate(&self) -> bool {
        let mut dags: Vec<Option<Option<WitnessDag>>> = vec![None; self.certificates.len()];
        self.steps.iter().all(|s| match (s.kind, s.cert_ref) {
            (StepKind::Narrative, _) => true,
            (StepKind::Certified, None) => false,
            (StepKind::Certified, Some(r)) => {
                let Some(slot) = dags.get_mut(r.certificate) else { return false };
                let dag = slot.get_or_insert_with(|| {
                    let cert = &self.certificates[r.certificate];
                    check_certificate(cert).is_valid().then(|| WitnessDag::from_certificate(cert).ok()).flatten()
                });
                let Some(dag) = dag else { return false };
                let Ok(sub) = dag.with_root(r.last) else { return false };
                sub.reachable().into_iter().min() == Some(r.first)
            }
        })
    }

    pub fn render(&self, style: LogStyle) -> String {
        let mut out = String::new();
        if style == LogStyle::Markdown {
            out.push_str("# Proof log\n\n");
        }
        for (i, step) in self.steps.iter().enumerate() {
            let tag = match step.kind {
                StepKind::Certified => "certified",
                StepKind::Narrative => "narrative",
            };
            let range = step
                .cert_ref
                .map(|r| format!(" [cert {}, nodes {}..={}]", r.certificate, r.first, r.last))
                .unwrap_or_default();
            match style {
                LogStyle::Markdown => {
                    let range = if range.is_empty() { range } else { format!(" `{}`", range.trim()) };
                    writeln!(out, "- **{tag}** `{}`: {}{range}", step.statement, step.justification).unwrap()
                }
                LogStyle::Text => {
                    writeln!(out, "{:>4}. [{tag}] {}: {}{range}", i + 1, step.statement, step.justification).unwrap()
                }
            }
        }
        out
    }
}

fn ideal_name(cert: &Certificate, order: &SymbolOrder) -> String {
    let show = |p: &Poly| print_poly_with(p, order);
    let mut parts: Vec<String> = cert.generators.elements.iter().map(&show).collect();
    parts.extend(cert.generators.families.iter().map(|f| format!("({})·A·({})", show(&f.left), show(&f.right))));
    match cert.setting {
        Setting::Nil => format!("Nil({})", parts.join(", ")),
        Setting::Sqrt => format!("√({})", parts.join(", ")),
    }
}

/// Renders the node-by-node replay of a valid certificate.
pub fn emit_proof_log(cert: &Certificate, style: LogStyle) -> Result<String, CommutativityError> {
    Ok(ProofLog::replay(cert)?.render(style))
}

pub const INTERSECTION_RULE: &str = "Corollary: Nil(U,a)∩Nil(U,b)⊆Nil(U,ab)";

/// The `xⁿ = x` commutativity theorem for `n ∈ {2, 3}`: the certificate for
/// `[x, y] ∈ Nil(xⁿ - x)` and a log that adds the two prose inferences.
pub fn xn_demo(n: u32) -> Result<(Certificate, ProofLog), CommutativityError> {
    xn_demo_with(&Transformer::default(), n)
}

pub fn xn_demo_with(transformer: &Transformer, n: u32) -> Result<(Certificate, ProofLog), CommutativityError> {
    let constants: Vec<i64> = match n {
        2 => vec![0, 1],
        3 => vec![0, 1, -1],
        _ => return Err(CommutativityError::UnsupportedExponent(n)),
    };
    let cs = CentralConstants::new(constants)?;
    let stages = fold_stages(transformer, &cs)?;
    let main = stages.last().expect("nonempty").accumulated.to_certificate();

    let order = SymbolOrder::new(&["x", "y"]);
    let show = |p: &Poly| print_poly_with(p, &order);
    let mut log = ProofLog { certificates: vec![main.clone()], steps: Vec::new() };
    let whole = |certificate: usize, cert: &Certificate| CertRef { certificate, first: 0, last: cert.root };

    for (k, stage) in stages.iter().enumerate() {
        let fc = stage.factor.to_certificate();
        let idx = log.certificates.len();
        log.steps.push(Step {
            statement: format!("{} ∈ Nil({})", show(&fc.claim), show(&fc.generators.elements[0])),
            justification: format!(
                "[x,y] = [{}, y] since {} is central; intro, mult and add",
                show(&fc.generators.elements[0]),
                stage.constant
            ),
            kind: StepKind::Certified,
            cert_ref: Some(whole(idx, &fc)),
        });
        log.certificates.push(fc);
        if k == 0 {
            continue;
        }
        let ac = stage.accumulated.to_certificate();
        let (idx, r) = if k + 1 == stages.len() {
            (0, whole(0, &main))
        } else {
            let idx = log.certificates.len();
            (idx, whole(idx, &ac))
        };
        log.steps.push(Step {
            statement: format!("{} ∈ Nil({})", show(&ac.claim), show(&ac.generators.elements[0])),
            justification: INTERSECTION_RULE.to_string(),
            kind: StepKind::Certified,
            cert_ref: Some(r),
        });
        if idx != 0 {
            log.certificates.push(ac);
        }
    }

    let reduced = match n {
        2 => "if z^2 = 0 then z = z^2 = 0",
        _ => "if z^2 = 0 then z = z^3 = z*z^2 = 0",
    };
    log.steps.push(Step {
        statement: format!("every ring A with x^{n} = x for all x is reduced"),
        justification: reduced.to_string(),
        kind: StepKind::Narrative,
        cert_ref: None,
    });
    log.steps.push(Step {
        statement: "every ring A with x^".to_string()
            + &n.to_string()
            + " = x for all x is commutative",
        justification: format!(
            "evaluate the certificate at any x, y in A: x^{n} - x is 0 in A, so [x,y] lies in Nil(0), which is 0 because A is reduced"
        ),
        kind: StepKind::Narrative,
        cert_ref: None,
    });
    log.push_replay(0)?;
    Ok((main, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn factor_witness() {
        let (x, y) = xy();
        for c in -5..=5 {
            let w = commutator_factor_witness(c, &x, &y);
            assert_eq!(w.conclusion(), &p("[x,y]"));
            assert!(check_certificate(&w.to_certificate()).is_valid());
        }
        let w0 = commutator_factor_witness(0, &x, &y);
        assert_eq!(w0.generators().elements, vec![p("x")]);
        let w1 = commutator_factor_witness(1, &x, &y);
        assert_eq!(w1.generators().elements, vec![p("x - 1")]);
    }

    #[test]
    fn constants_validation() {
        assert!(CentralConstants::new(Vec::<i64>::new()).is_err());
        assert!(CentralConstants::new([1, 2, 1]).is_err());
        assert!(CentralConstants::new([1, -1]).is_ok());
    }

    #[test]
    fn single_factor_is_not_folded() {
        let (x, y) = xy();
        let cert = central_roots_witness(&CentralConstants::new([0]).unwrap()).unwrap();
        assert_eq!(cert, commutator_factor_witness(0, &x, &y).to_certificate());
    }

    #[test]
    fn roots_zero_one() {
        let cert = central_roots_witness(&CentralConstants::new([0, 1]).unwrap()).unwrap();
        assert_eq!(cert.generators.elements, vec![p("x^2 - x")]);
        assert_eq!(cert.claim, p("x*y - y*x"));
        assert!(check_certificate(&cert).is_valid());
    }

    #[test]
    fn demo_logs() {
        let (cert, log) = xn_demo(3).unwrap();
        assert_eq!(cert.generators.elements, vec![p("x^3 - x")]);
        assert!(log.validate());
        let md = log.render(LogStyle::Markdown);
        assert!(md.lines().any(|l| l.contains("x*y - y*x ∈ Nil(x^3 - x)") && l.contains(INTERSECTION_RULE)), "{md}");
        assert!(md.contains("**narrative**"));
        assert_eq!(md, xn_demo(3).unwrap().1.render(LogStyle::Markdown));
        assert!(matches!(xn_demo(5), Err(CommutativityError::UnsupportedExponent(5))));
        assert!(matches!(xn_demo(1), Err(CommutativityError::UnsupportedExponent(1))));
    }

    #[test]
    fn zero_only_log() {
        let cert = Certificate {
            version: 1,
            setting: Setting::Nil,
            symbols: vec![],
            generators: GeneratorSet::default(),
            claim: Poly::zero(),
            nodes: vec![WitnessNode::Zero],
            root: 0,
        };
        let log = ProofLog::replay(&cert).unwrap();
        assert_eq!(log.steps.iter().filter(|s| s.kind == StepKind::Certified).count(), 1);
        let text = emit_proof_log(&cert, LogStyle::Text).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.contains("zero"));
        let mut bad = cert.clone();
        bad.claim = p("x");
        assert!(matches!(emit_proof_log(&bad, LogStyle::Text), Err(CommutativityError::InvalidCertificate(_))));
    }
}
