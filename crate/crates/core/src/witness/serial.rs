//! JSON certificate format.
//!
//! ```text
//! {
//!   "version": 1,
//!   "setting": "nil" | "sqrt",
//!   "symbols": ["x", "y"],
//!   "generators": [Poly, ...],
//!   "families": [{"left": Poly, "right": Poly}, ...],
//!   "claim": Poly,
//!   "nodes": [{"id": 0, "op": "intro", "gen": 0}, ...],
//!   "root": 0
//! }
//! ```
//!
//! A Poly is a list of `[coefficient, [symbol, ...]]` pairs, highest degree
//! first under the declared symbol order, with decimal-string coefficients
//! and no zero coefficients. Schematic symbols are written `name#uid`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::Deserialize;
use thiserror::Error;

use super::{Certificate, Family, GeneratorSet, Setting, WitnessNode};
use crate::ring::{Poly, Symbol, SymbolOrder, Word};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeserializeError {
    #[error("malformed certificate at byte {offset}: {message}")]
    Malformed { offset: usize, message: String },
    #[error("unsupported certificate version {0} (expected {CERTIFICATE_VERSION})")]
    Version(u64),
    #[error("malformed certificate: {0}")]
    Structure(String),
}

struct Coeff(BigInt);

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Coeff, D::Error> {
        let s = String::deserialize(d)?;
        let body = s.strip_prefix('-').unwrap_or(&s);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(de::Error::custom(format!("invalid coefficient `{s}`")));
        }
        let c: BigInt = s.parse().map_err(de::Error::custom)?;
        if c.is_zero() {
            return Err(de::Error::custom("zero coefficient"));
        }
        Ok(Coeff(c))
    }
}

struct Token(Symbol);

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Token, D::Error> {
        let s = String::deserialize(d)?;
        Symbol::from_token(&s).map(Token).map_err(de::Error::custom)
    }
}

#[derive(Deserialize)]
struct WirePoly(Vec<(Coeff, Vec<Token>)>);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireFamily {
    left: WirePoly,
    right: WirePoly,
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum WireOp {
    Intro { id: u64, gen: u64 },
    IntroFamily { id: u64, family: u64, instance: WirePoly },
    Zero { id: u64 },
    Add { id: u64, left: u64, right: u64 },
    Mult { id: u64, left: WirePoly, inner: u64, right: WirePoly },
    Red { id: u64, premise: u64, conclusion: WirePoly },
    Semiprime { id: u64, bound: Token, premise: u64, conclusion: WirePoly },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireCert {
    #[allow(dead_code)] // already validated by the probe
    version: u64,
    setting: Setting,
    symbols: Vec<String>,
    generators: Vec<WirePoly>,
    families: Vec<WireFamily>,
    claim: WirePoly,
    nodes: Vec<WireOp>,
    root: u64,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u64,
}

fn byte_offset(src: &[u8], e: &serde_json::Error) -> usize {
    if e.line() == 0 {
        return src.len();
    }
    let mut line = 1;
    let mut offset = 0;
    for (i, b) in src.iter().enumerate() {
        if line == e.line() {
            offset = i;
            break;
        }
        if *b == b'\n' {
            line += 1;
        }
    }
    (offset + e.column().saturating_sub(1)).min(src.len())
}

fn malformed(src: &[u8], e: serde_json::Error) -> DeserializeError {
    DeserializeError::Malformed { offset: byte_offset(src, &e), message: e.to_string() }
}

fn as_index(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

struct Resolver<'a> {
    declared: &'a HashSet<&'a str>,
}

impl Resolver<'_> {
    fn poly(&self, wp: WirePoly) -> Result<Poly, DeserializeError> {
        let mut seen = HashSet::new();
        let mut terms = Vec::with_capacity(wp.0.len());
        for (Coeff(c), toks) in wp.0 {
            let syms: Vec<Symbol> = toks.into_iter().map(|t| t.0).collect();
            for s in &syms {
                if !s.is_schematic() && !self.declared.contains(s.name()) {
                    return Err(DeserializeError::Structure(format!("undeclared symbol `{s}`")));
                }
            }
            let w = Word::new(&syms);
            if !seen.insert(w.clone()) {
                return Err(DeserializeError::Structure(format!("repeated monomial {w:?}")));
            }
            terms.push((c, w));
        }
        Ok(Poly::from_terms(terms))
    }
}

/// Parses and structurally validates a certificate. Semantic validity is
/// left to the checker.
pub fn deserialize(bytes: &[u8]) -> Result<Certificate, DeserializeError> {
    let probe: VersionProbe = serde_json::from_slice(bytes).map_err(|e| malformed(bytes, e))?;
    if probe.version != u64::from(CERTIFICATE_VERSION) {
        return Err(DeserializeError::Version(probe.version));
    }
    let wire: WireCert = serde_json::from_slice(bytes).map_err(|e| malformed(bytes, e))?;

    let mut declared = HashSet::new();
    for s in &wire.symbols {
        if Symbol::base(s).is_err() {
            return Err(DeserializeError::Structure(format!("invalid symbol name `{s}`")));
        }
        if !declared.insert(s.as_str()) {
            return Err(DeserializeError::Structure(format!("symbol `{s}` declared twice")));
        }
    }
    let r = Resolver { declared: &declared };

    let elements = wire.generators.into_iter().map(|g| r.poly(g)).collect::<Result<Vec<_>, _>>()?;
    let families = wire
        .families
        .into_iter()
        .map(|f| Ok(Family::new(r.poly(f.left)?, r.poly(f.right)?)))
        .collect::<Result<Vec<_>, DeserializeError>>()?;
    let claim = r.poly(wire.claim)?;

    let mut nodes = Vec::with_capacity(wire.nodes.len());
    for (i, op) in wire.nodes.into_iter().enumerate() {
        let (id, node) = match op {
            WireOp::Intro { id, gen } => (id, WitnessNode::Intro { gen: as_index(gen) }),
            WireOp::IntroFamily { id, family, instance } => {
                (id, WitnessNode::IntroFamily { family: as_index(family), instance: r.poly(instance)? })
            }
            WireOp::Zero { id } => (id, WitnessNode::Zero),
            WireOp::Add { id, left, right } => {
                (id, WitnessNode::Add { left: as_index(left), right: as_index(right) })
            }
            WireOp::Mult { id, left, inner, right } => (
                id,
                WitnessNode::Mult { left: r.poly(left)?, inner: as_index(inner), right: r.poly(right)? },
            ),
            WireOp::Red { id, premise, conclusion } => {
                (id, WitnessNode::Red { premise: as_index(premise), conclusion: r.poly(conclusion)? })
            }
            WireOp::Semiprime { id, bound, premise, conclusion } => (
                id,
                WitnessNode::Semiprime {
                    bound: bound.0,
                    premise: as_index(premise),
                    conclusion: r.poly(conclusion)?,
                },
            ),
        };
        if as_index(id) != i {
            return Err(DeserializeError::Structure(format!("node at position {i} has id {id}")));
        }
        nodes.push(node);
    }

    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        setting: wire.setting,
        symbols: wire.symbols,
        generators: GeneratorSet { elements, families },
        claim,
        nodes,
        root: as_index(wire.root),
    })
}

fn poly_json(p: &Poly, order: &SymbolOrder) -> String {
    let terms: Vec<(String, Vec<String>)> = p
        .sorted_terms(order)
        .into_iter()
        .map(|(w, c)| (c.to_string(), w.symbols().iter().map(|s| s.to_string()).collect()))
        .collect();
    serde_json::to_string(&terms).expect("plain data")
}

fn string_json(s: &str) -> String {
    serde_json::to_string(s).expect("plain data")
}

fn node_json(id: usize, node: &WitnessNode, order: &SymbolOrder) -> String {
    let head = format!("{{\"id\":{id},\"op\":\"{}\"", node.op());
    let rest = match node {
        WitnessNode::Intro { gen } => format!(",\"gen\":{gen}"),
        WitnessNode::IntroFamily { family, instance } => {
            format!(",\"family\":{family},\"instance\":{}", poly_json(instance, order))
        }
        WitnessNode::Zero => String::new(),
        WitnessNode::Add { left, right } => format!(",\"left\":{left},\"right\":{right}"),
        WitnessNode::Mult { left, inner, right } => format!(
            ",\"left\":{},\"inner\":{inner},\"right\":{}",
            poly_json(left, order),
            poly_json(right, order)
        ),
        WitnessNode::Red { premise, conclusion } => {
            format!(",\"premise\":{premise},\"conclusion\":{}", poly_json(conclusion, order))
        }
        WitnessNode::Semiprime { bound, premise, conclusion } => format!(
            ",\"bound\":{},\"premise\":{premise},\"conclusion\":{}",
            string_json(&bound.to_string()),
            poly_json(conclusion, order)
        ),
    };
    format!("{head}{rest}}}")
}

fn list(items: Vec<String>, indent: &str) -> String {
    if items.is_empty() {
        return "[]".to_string();
    }
    let inner = items.iter().map(|i| format!("{indent}  {i}")).collect::<Vec<_>>().join(",\n");
    format!("[\n{inner}\n{indent}]")
}

/// Canonical, deterministic encoding: one node per line.
pub fn serialize(cert: &Certificate) -> Vec<u8> {
    let order = SymbolOrder::new(&cert.symbols);
    let symbols = format!(
        "[{}]",
        cert.symbols.iter().map(|s| string_json(s)).collect::<Vec<_>>().join(",")
    );
    let generators = list(cert.generators.elements.iter().map(|g| poly_json(g, &order)).collect(), "  ");
    let families = list(
        cert.generators
            .families
            .iter()
            .map(|f| format!("{{\"left\":{},\"right\":{}}}", poly_json(&f.left, &order), poly_json(&f.right, &order)))
            .collect(),
        "  ",
    );
    let nodes = list(
        cert.nodes.iter().enumerate().map(|(i, n)| node_json(i, n, &order)).collect(),
        "  ",
    );
    let out = format!(
        "{{\n  \"version\": {},\n  \"setting\": \"{}\",\n  \"symbols\": {symbols},\n  \"generators\": {generators},\n  \"families\": {families},\n  \"claim\": {},\n  \"nodes\": {nodes},\n  \"root\": {}\n}}\n",
        cert.version,
        cert.setting,
        poly_json(&cert.claim, &order),
        cert.root
    );
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn sample() -> Certificate {
        let p = |s: &str| parse_poly(s, &["x", "y"]).unwrap();
        let t = Symbol::fresh("t");
        let tp = Poly::var(t.clone());
        Certificate {
            version: 1,
            setting: Setting::Sqrt,
            symbols: vec!["x".into(), "y".into()],
            generators: GeneratorSet::with_families(vec![p("x^3 - x"), p("-12345678901234567890123*y")], vec![Family::new(p("x"), p("x"))]),
            claim: p("x"),
            nodes: vec![
                WitnessNode::Zero,
                WitnessNode::Intro { gen: 0 },
                WitnessNode::Add { left: 0, right: 1 },
                WitnessNode::Mult { left: p("y"), inner: 2, right: p("1") },
                WitnessNode::IntroFamily { family: 0, instance: tp.clone() },
                WitnessNode::Semiprime { bound: t, premise: 4, conclusion: p("x") },
            ],
            root: 5,
        }
    }

    #[test]
    fn round_trip() {
        let c = sample();
        let bytes = serialize(&c);
        let back = deserialize(&bytes).unwrap();
        assert_eq!(back, c);
        assert_eq!(serialize(&back), bytes);
    }

    #[test]
    fn poly_wire_layout() {
        let c = sample();
        let text = String::from_utf8(serialize(&c)).unwrap();
        assert!(text.contains(r#"[["1",["x","x","x"]],["-1",["x"]]]"#), "{text}");
        assert!(text.contains(r#"[["1",[]]]"#));
    }

    #[test]
    fn truncated_input_is_malformed() {
        let bytes = serialize(&sample());
        let cut = &bytes[..bytes.len() / 2];
        match deserialize(cut) {
            Err(DeserializeError::Malformed { offset, .. }) => assert!(offset <= cut.len()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_version() {
        let text = String::from_utf8(serialize(&sample())).unwrap().replace("\"version\": 1", "\"version\": 7");
        assert_eq!(deserialize(text.as_bytes()), Err(DeserializeError::Version(7)));
    }

    #[test]
    fn structural_rejections() {
        let text = String::from_utf8(serialize(&sample())).unwrap();
        let cases = [
            text.replace(r#"["-1",["x"]]"#, r#"["0",["x"]]"#),
            text.replace(r#"["-1",["x"]]"#, r#"["-1.5",["x"]]"#),
            text.replace(r#""op":"zero""#, r#""op":"nope""#),
            text.replace(r#"{"id":0,"#, r#"{"id":3,"#),
            text.replace(r#""symbols": ["x","y"]"#, r#""symbols": ["x"]"#),
            text.replace(r#""symbols": ["x","y"]"#, r#""symbols": ["x","y","x"]"#),
            text.replace(r#""root": 5"#, r#""root": 5, "extra": 1"#),
            text.replace(r#"["-1",["x"]]"#, r#"["-1",["x"]],["2",["x"]]"#),
        ];
        for case in cases {
            assert_ne!(case, text);
            assert!(deserialize(case.as_bytes()).is_err(), "accepted:\n{case}");
        }
    }

    #[test]
    fn offsets_point_into_the_input() {
        let text = String::from_utf8(serialize(&sample())).unwrap();
        let broken = text.replace(r#"["-1",["x"]]"#, r#"["zz",["x"]]"#);
        let at = broken.find(r#""zz""#).unwrap();
        match deserialize(broken.as_bytes()) {
            Err(DeserializeError::Malformed { offset, .. }) => assert!(offset >= at && offset <= at + 8, "{offset} vs {at}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
