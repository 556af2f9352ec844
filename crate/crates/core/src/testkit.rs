//! Seeded generators and oracles for tests: random valid witnesses, a
//! brute-force soundness check over ℤ/30, a deep shared `Red` chain and a
//! corpus of single-field certificate mutations.
//!
//! Nothing here is used by the library itself.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{Poly, Symbol, Word};
use crate::witness::{Certificate, Family, GeneratorSet, NodeId, Reason, Setting, WitnessDag, WitnessNode};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const MODULUS: u64 = 30;

/// Conclusions above this many terms stop growing, to keep fuzz cases cheap.
const TERM_CAP: usize = 4;

/// Each nested `Semiprime` roughly squares the middle element inside
/// `sqrt_product`, so random witnesses carry at most this many.
const SEMIPRIME_CAP: usize = 2;

pub fn base(name: &str) -> Symbol {
    Symbol::base(name).expect("identifier")
}

/// A polynomial with at most `max_terms` terms of degree at most `max_deg`
/// and coefficients in `-3..=3`.
pub fn random_poly(rng: &mut TestRng, symbols: &[Symbol], max_terms: usize, max_deg: usize) -> Poly {
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut p = Poly::zero();
    for _ in 0..n {
        let deg = if symbols.is_empty() { 0 } else { rng.gen_range(0..=max_deg) };
        let word: Vec<Symbol> = (0..deg).map(|_| symbols.choose(rng).expect("nonempty").clone()).collect();
        let c: i64 = rng.gen_range(-3..=3);
        p = p.add(&Poly::monomial(c, Word::new(&word)));
    }
    p
}

/// A nonzero polynomial with at least one symbol.
fn random_nonconstant(rng: &mut TestRng, symbols: &[Symbol]) -> Poly {
    loop {
        let p = random_poly(rng, symbols, 2, 2);
        if p.degree().unwrap_or(0) > 0 {
            return p;
        }
    }
}

/// Evaluates `p` in the commutative ring ℤ/`modulus` under `values`.
/// Symbols missing from `values` evaluate to 0.
pub fn eval_mod(p: &Poly, values: &HashMap<Symbol, u64>, modulus: u64) -> u64 {
    compile(p, &index_of(values.keys()), modulus).eval(&lookup(values), modulus)
}

fn index_of<'a>(syms: impl Iterator<Item = &'a Symbol>) -> HashMap<Symbol, usize> {
    syms.cloned().collect::<BTreeSet<_>>().into_iter().enumerate().map(|(i, s)| (s, i)).collect()
}

fn lookup(values: &HashMap<Symbol, u64>) -> Vec<u64> {
    let idx = index_of(values.keys());
    let mut out = vec![0; idx.len()];
    for (s, i) in idx {
        out[i] = values[&s];
    }
    out
}

/// A polynomial reduced mod `m`, with symbols replaced by slot numbers.
struct Compiled(Vec<(u64, Vec<Option<usize>>)>);

impl Compiled {
    fn eval(&self, slots: &[u64], m: u64) -> u64 {
        let mut acc = 0;
        for (c, word) in &self.0 {
            let mut t = *c;
            for s in word {
                t = t * s.map_or(0, |i| slots[i]) % m;
            }
            acc = (acc + t) % m;
        }
        acc
    }
}

fn compile(p: &Poly, index: &HashMap<Symbol, usize>, m: u64) -> Compiled {
    let big_m = BigInt::from(m);
    Compiled(
        p.terms()
            .map(|(w, c)| {
                let c = ((c % &big_m) + &big_m) % &big_m;
                (c.to_u64().expect("reduced"), w.symbols().iter().map(|s| index.get(s).copied()).collect())
            })
            .collect(),
    )
}

/// Outcome of [`soundness_oracle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Oracle {
    /// Every annihilating assignment (there were `annihilating` of the
    /// `total`) also kills the claim.
    Sound { annihilating: usize, total: usize },
    /// An assignment killing the generators but not the claim.
    Counterexample(Vec<(Symbol, u64)>),
    /// Too many free symbols for brute force.
    Skipped(usize),
}

/// Brute-force soundness over the commutative, reduced ring ℤ/30.
///
/// ℤ/30 has no nonzero nilpotents, so its zero ideal is reduced and
/// semiprime. Any assignment sending every generator to 0 (and every family
/// `(l, r)` to `l·r = 0`, which is `l·A·r = 0` in a commutative ring) must
/// therefore send every member of `Nil U` or `√U` to 0 as well. This check
/// shares nothing with the checker beyond polynomial storage.
pub fn soundness_oracle(cert: &Certificate, max_vars: usize) -> Oracle {
    let g = &cert.generators;
    let mut syms: BTreeSet<Symbol> = cert.claim.symbols();
    for p in &g.elements {
        syms.extend(p.symbols());
    }
    for f in &g.families {
        syms.extend(f.left.symbols());
        syms.extend(f.right.symbols());
    }
    if syms.len() > max_vars {
        return Oracle::Skipped(syms.len());
    }
    let index: HashMap<Symbol, usize> = syms.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let m = MODULUS;
    let mut constraints: Vec<Compiled> = g.elements.iter().map(|p| compile(p, &index, m)).collect();
    constraints.extend(g.families.iter().map(|f| compile(&f.left.multiply(&f.right), &index, m)));
    let claim = compile(&cert.claim, &index, m);

    let k = syms.len();
    let total = (m as usize).pow(k as u32);
    let mut slots = vec![0u64; k];
    let mut annihilating = 0;
    for n in 0..total {
        let mut r = n;
        for s in slots.iter_mut() {
            *s = (r % m as usize) as u64;
            r /= m as usize;
        }
        if constraints.iter().any(|c| c.eval(&slots, m) != 0) {
            continue;
        }
        annihilating += 1;
        if claim.eval(&slots, m) != 0 {
            return Oracle::Counterexample(syms.iter().cloned().zip(slots.iter().copied()).collect());
        }
    }
    Oracle::Sound { annihilating, total }
}

/// Number of distinct base symbols mentioned anywhere in `cert`.
pub fn base_symbol_count(cert: &Certificate) -> usize {
    let mut names = BTreeSet::new();
    let mut note = |p: &Poly| {
        for s in p.symbols() {
            if !s.is_schematic() {
                names.insert(s.name().to_string());
            }
        }
    };
    note(&cert.claim);
    for p in &cert.generators.elements {
        note(p);
    }
    for f in &cert.generators.families {
        note(&f.left);
        note(&f.right);
    }
    for n in &cert.nodes {
        for p in n.polys() {
            note(p);
        }
    }
    names.len()
}

/// Builds a random valid witness node by node.
struct Grow<'a> {
    rng: &'a mut TestRng,
    setting: Setting,
    symbols: Vec<Symbol>,
    generators: GeneratorSet,
    nodes: Vec<WitnessNode>,
    conclusions: Vec<Poly>,
    semiprimes: usize,
}

impl Grow<'_> {
    fn push(&mut self, node: WitnessNode, conclusion: Poly) -> NodeId {
        self.nodes.push(node);
        self.conclusions.push(conclusion);
        self.nodes.len() - 1
    }

    fn leaf(&mut self) -> NodeId {
        let g = &self.generators;
        let roll = self.rng.gen_range(0..10);
        if roll == 0 {
            return self.push(WitnessNode::Zero, Poly::zero());
        }
        if !g.families.is_empty() && roll < 4 {
            let family = self.rng.gen_range(0..g.families.len());
            let instance = random_poly(self.rng, &self.symbols, 2, 1);
            let c = g.families[family].instance(&instance);
            return self.push(WitnessNode::IntroFamily { family, instance }, c);
        }
        if g.elements.is_empty() {
            return self.push(WitnessNode::Zero, Poly::zero());
        }
        // bias towards the distinguished (last) generator
        let n = g.elements.len();
        let gen = if self.rng.gen_bool(0.6) { n - 1 } else { self.rng.gen_range(0..n) };
        let c = g.elements[gen].clone();
        self.push(WitnessNode::Intro { gen }, c)
    }

    /// `x ↦ x·r` through `Red(Mult(1, x, r·x·r))`.
    fn red_step(&mut self, inner: NodeId) -> NodeId {
        let c = self.conclusions[inner].clone();
        let r = random_poly(self.rng, &self.symbols, 1, 1);
        let s = c.multiply(&r);
        let right = r.multiply(&c).multiply(&r);
        let prem = self.push(WitnessNode::Mult { left: Poly::one(), inner, right: right.clone() }, c.multiply(&right));
        self.push(WitnessNode::Red { premise: prem, conclusion: s.clone() }, s)
    }

    /// `x ↦ x` through `Semiprime_β(Mult(x·β, x, 1))` for fresh `β`.
    fn semiprime_step(&mut self, inner: NodeId) -> NodeId {
        self.semiprimes += 1;
        let c = self.conclusions[inner].clone();
        let beta = Symbol::fresh("b");
        let left = c.multiply(&Poly::var(beta.clone()));
        let prem = self.push(WitnessNode::Mult { left: left.clone(), inner, right: Poly::one() }, left.multiply(&c));
        self.push(WitnessNode::Semiprime { bound: beta, premise: prem, conclusion: c.clone() }, c)
    }

    fn grow(&mut self, depth: usize) -> NodeId {
        if depth == 0 {
            return self.leaf();
        }
        // occasional sharing of an existing node
        if !self.nodes.is_empty() && self.rng.gen_bool(0.15) {
            let id = self.rng.gen_range(0..self.nodes.len());
            if self.conclusions[id].num_terms() <= TERM_CAP {
                return id;
            }
        }
        match self.rng.gen_range(0..8) {
            0 => self.leaf(),
            1 | 2 => {
                let l = self.grow(depth - 1);
                let r = self.grow(depth - 1);
                let c = self.conclusions[l].add(&self.conclusions[r]);
                if c.num_terms() > TERM_CAP {
                    return l;
                }
                self.push(WitnessNode::Add { left: l, right: r }, c)
            }
            3 | 4 => {
                let inner = self.grow(depth - 1);
                let left = random_poly(self.rng, &self.symbols, 2, 1);
                let right = random_poly(self.rng, &self.symbols, 2, 1);
                let c = left.multiply(&self.conclusions[inner]).multiply(&right);
                if c.num_terms() > TERM_CAP {
                    return inner;
                }
                self.push(WitnessNode::Mult { left, inner, right }, c)
            }
            _ => {
                let inner = self.grow(depth - 1);
                if self.conclusions[inner].num_terms() > TERM_CAP / 2 {
                    return inner;
                }
                match self.setting {
                    Setting::Nil => self.red_step(inner),
                    Setting::Sqrt if self.semiprimes < SEMIPRIME_CAP => self.semiprime_step(inner),
                    Setting::Sqrt => inner,
                }
            }
        }
    }
}

/// A random valid witness over `generators` of depth at most `depth`.
pub fn random_witness(
    rng: &mut TestRng,
    setting: Setting,
    symbols: &[Symbol],
    generators: &GeneratorSet,
    depth: usize,
) -> WitnessDag {
    let mut g = Grow {
        rng,
        setting,
        symbols: symbols.to_vec(),
        generators: generators.clone(),
        nodes: Vec::new(),
        conclusions: Vec::new(),
        semiprimes: 0,
    };
    let mut root = g.grow(depth);
    if setting == Setting::Sqrt && !g.nodes.iter().any(|n| matches!(n, WitnessNode::Semiprime { .. })) {
        root = g.semiprime_step(root);
    }
    let names = symbols.iter().map(|s| s.name().to_string()).collect();
    WitnessDag::from_topological(setting, names, generators.clone(), g.nodes, root).expect("valid by construction")
}

/// Between 1 and 3 base symbols from `x, y, z`.
pub fn random_symbols(rng: &mut TestRng, max: usize) -> Vec<Symbol> {
    let k = rng.gen_range(1..=max.clamp(1, 3));
    ["x", "y", "z"][..k].iter().map(|s| base(s)).collect()
}

/// Inputs for a product: `p` over `U ∪ {a}`, `q` over `U ∪ {b}`.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub shared: GeneratorSet,
    pub a: Poly,
    pub b: Poly,
    pub p: WitnessDag,
    pub q: WitnessDag,
}

fn with_last(shared: &GeneratorSet, last: &Poly) -> GeneratorSet {
    let mut g = shared.clone();
    g.elements.push(last.clone());
    g
}

/// A random pair of valid witnesses for the product transforms, with
/// depth at most `depth` and at most `max_symbols` base symbols.
pub fn random_pair(rng: &mut TestRng, setting: Setting, depth: usize, max_symbols: usize) -> WitnessPair {
    let symbols = random_symbols(rng, max_symbols);
    let elements = (0..rng.gen_range(0..=1)).map(|_| random_nonconstant(rng, &symbols)).collect();
    let families = match setting {
        Setting::Nil => vec![],
        Setting::Sqrt => (0..rng.gen_range(0..=1))
            .map(|_| Family::new(random_nonconstant(rng, &symbols), random_nonconstant(rng, &symbols)))
            .collect(),
    };
    let shared = GeneratorSet::with_families(elements, families);
    let a = random_nonconstant(rng, &symbols);
    let b = random_nonconstant(rng, &symbols);
    let d1 = rng.gen_range(1..=depth);
    let d2 = rng.gen_range(1..=depth);
    let p = random_witness(rng, setting, &symbols, &with_last(&shared, &a), d1);
    let q = random_witness(rng, setting, &symbols, &with_last(&shared, &b), d2);
    WitnessPair { shared, a, b, p, q }
}

/// Turns `p ⊢ x`, `q ⊢ y` into two witnesses of `x·y`: `Mult(1, p, y)` and
/// `Mult(x, q, 1)`. Used to feed the intersection transforms.
pub fn common_conclusion(pair: &WitnessPair) -> (WitnessDag, WitnessDag) {
    let x = pair.p.conclusion().clone();
    let y = pair.q.conclusion().clone();
    let wrap = |d: &WitnessDag, left: Poly, right: Poly| {
        let mut nodes = d.nodes().to_vec();
        nodes.push(WitnessNode::Mult { left, inner: d.root(), right });
        let root = nodes.len() - 1;
        WitnessDag::from_topological(d.setting(), d.symbols().to_vec(), d.generators().clone(), nodes, root)
            .expect("valid by construction")
    };
    (wrap(&pair.p, Poly::one(), y), wrap(&pair.q, x, Poly::one()))
}

/// A nil witness over the single generator `s`, of depth `depth`, where
/// every level uses its predecessor twice:
/// `R₀ = Intro(s)`, `Rₖ = Red(Mult(1, Add(Rₖ₋₁, Rₖ₋₁), s·2cₖ₋₁·s)) ⊢ 2cₖ₋₁·s`.
/// Unfolded as a tree it has `2^depth` leaves; as a DAG, `3·depth + 1` nodes.
pub fn red_chain(symbol: &str, depth: usize) -> WitnessDag {
    let s = Poly::var(base(symbol));
    let mut nodes = vec![WitnessNode::Intro { gen: 0 }];
    let mut c = s.clone();
    let mut top = 0;
    for _ in 0..depth {
        nodes.push(WitnessNode::Add { left: top, right: top });
        let doubled = c.scale(&BigInt::from(2));
        let right = s.multiply(&doubled).multiply(&s);
        nodes.push(WitnessNode::Mult { left: Poly::one(), inner: nodes.len() - 1, right });
        c = doubled.multiply(&s);
        nodes.push(WitnessNode::Red { premise: nodes.len() - 1, conclusion: c.clone() });
        top = nodes.len() - 1;
    }
    WitnessDag::from_topological(Setting::Nil, vec![symbol.to_string()], GeneratorSet::new(vec![s]), nodes, top)
        .expect("valid by construction")
}

/// A single-field corruption of a valid certificate and the verdict the
/// checker must give.
#[derive(Clone, Debug)]
pub struct Mutant {
    pub description: String,
    pub certificate: Certificate,
    pub reason: Reason,
    /// `None` for whole-certificate defects.
    pub node: Option<NodeId>,
}

fn set_child(node: &mut WitnessNode, to: NodeId) {
    match node {
        WitnessNode::Add { left, .. } => *left = to,
        WitnessNode::Mult { inner, .. } => *inner = to,
        WitnessNode::Red { premise, .. } | WitnessNode::Semiprime { premise, .. } => *premise = to,
        _ => unreachable!("leaf"),
    }
}

/// Every mutation of `cert` the corpus knows how to make, each paired with
/// its expected verdict. `cert` must be valid and in dependency order.
pub fn mutations(cert: &Certificate) -> Vec<Mutant> {
    let mut out = Vec::new();
    let n = cert.nodes.len();
    let one = Poly::one();
    let mut push = |description: String, certificate: Certificate, reason: Reason, node: Option<NodeId>| {
        out.push(Mutant { description, certificate, reason, node });
    };

    let mut c = cert.clone();
    c.claim = c.claim.add(&one);
    push("claim + 1".into(), c, Reason::ClaimMismatch, Some(cert.root));

    let mut c = cert.clone();
    c.root = n;
    push("root out of range".into(), c, Reason::BadRef, None);

    match cert.setting {
        Setting::Sqrt if !cert.generators.families.is_empty() => {
            let mut c = cert.clone();
            c.setting = Setting::Nil;
            push("families under nil".into(), c, Reason::WrongSetting, None);
        }
        Setting::Nil => {
            if let Some(id) = cert.nodes.iter().position(|n| matches!(n, WitnessNode::Red { .. })) {
                let mut c = cert.clone();
                c.setting = Setting::Sqrt;
                push(format!("node {id}: red under sqrt"), c, Reason::WrongSetting, Some(id));
            }
        }
        _ => {}
    }

    for (id, node) in cert.nodes.iter().enumerate() {
        match node {
            WitnessNode::Intro { .. } => {
                let mut c = cert.clone();
                c.nodes[id] = WitnessNode::Intro { gen: cert.generators.elements.len() };
                push(format!("node {id}: generator index past the end"), c, Reason::GenIndex, Some(id));
            }
            WitnessNode::IntroFamily { instance, .. } => {
                let mut c = cert.clone();
                c.nodes[id] =
                    WitnessNode::IntroFamily { family: cert.generators.families.len(), instance: instance.clone() };
                push(format!("node {id}: family index past the end"), c, Reason::GenIndex, Some(id));
            }
            WitnessNode::Zero => {}
            _ => {
                let mut c = cert.clone();
                set_child(&mut c.nodes[id], n + 3);
                push(format!("node {id}: child out of range"), c, Reason::BadRef, Some(id));
                let mut c = cert.clone();
                set_child(&mut c.nodes[id], id);
                push(format!("node {id}: child is itself"), c, Reason::Cycle, Some(id));
            }
        }
        match node {
            WitnessNode::Red { premise, conclusion } => {
                let mut c = cert.clone();
                c.nodes[id] = WitnessNode::Red { premise: *premise, conclusion: conclusion.add(&one) };
                push(format!("node {id}: red conclusion + 1"), c, Reason::RedSquareMismatch, Some(id));
            }
            WitnessNode::Semiprime { bound, premise, conclusion } => {
                let mut c = cert.clone();
                c.nodes[id] =
                    WitnessNode::Semiprime { bound: bound.clone(), premise: *premise, conclusion: conclusion.add(&one) };
                push(format!("node {id}: semiprime conclusion + 1"), c, Reason::SemiprimeShape, Some(id));
                let mut c = cert.clone();
                c.nodes[id] = WitnessNode::Semiprime {
                    bound: base("x"),
                    premise: *premise,
                    conclusion: conclusion.clone(),
                };
                push(format!("node {id}: semiprime bound is a base symbol"), c, Reason::SemiprimeCapture, Some(id));
                let mut c = cert.clone();
                let captured = Symbol::fresh("k");
                let conclusion = conclusion.add(&Poly::var(captured.clone()));
                c.nodes[id] = WitnessNode::Semiprime { bound: captured, premise: *premise, conclusion };
                push(format!("node {id}: semiprime bound occurs in its conclusion"), c, Reason::SemiprimeCapture, Some(id));
            }
            _ => {}
        }
    }
    out
}

/// `count` mutants drawn with `seed` from the mutations of `bases`,
/// covering every reason code the bases allow before repeating any.
pub fn mutation_corpus(bases: &[Certificate], count: usize, seed: u64) -> Vec<Mutant> {
    let mut rng = rng(seed);
    let mut pool: Vec<Mutant> = bases.iter().flat_map(mutations).collect();
    pool.shuffle(&mut rng);
    let mut by_reason: Vec<Mutant> = Vec::new();
    let mut rest: Vec<Mutant> = Vec::new();
    for m in pool {
        if by_reason.iter().any(|k| k.reason == m.reason) {
            rest.push(m);
        } else {
            by_reason.push(m);
        }
    }
    by_reason.extend(rest);
    by_reason.truncate(count);
    by_reason
}
