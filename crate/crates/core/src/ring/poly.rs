use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Symbol, Word};

/// An element of the free ring ℤ⟨X⟩: a finite integer combination of words.
///
/// Zero coefficients are never stored, so structural equality of the term
/// maps is equality of ring elements.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Word, BigInt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Poly {
        Poly::monomial(c, Word::unit())
    }

    pub fn var(symbol: Symbol) -> Poly {
        Poly::monomial(1, Word::single(symbol))
    }

    pub fn monomial(c: impl Into<BigInt>, word: Word) -> Poly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from arbitrary terms, collecting repeated words.
    pub fn from_terms<I>(terms: I) -> Poly
    where
        I: IntoIterator<Item = (BigInt, Word)>,
    {
        let mut out = Poly::zero();
        for (c, w) in terms {
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, word: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(w, c)| w.is_unit() && c.is_one())
    }

    /// Terms in storage order (shortest words first).
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, word: &Word) -> BigInt {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|w| w.symbols().iter().cloned()).collect()
    }

    pub fn contains_symbol(&self, symbol: &Symbol) -> bool {
        self.terms.keys().any(|w| w.contains(symbol))
    }

    pub fn has_schematic(&self) -> bool {
        self.terms.keys().any(|w| w.symbols().iter().any(Symbol::is_schematic))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn negate(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect() }
    }

    pub fn multiply(&self, other: &Poly) -> Poly {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Product of a sequence of factors, left to right.
    pub fn product<'a, I>(factors: I) -> Poly
    where
        I: IntoIterator<Item = &'a Poly>,
    {
        factors.into_iter().fold(Poly::one(), |acc, f| acc.multiply(f))
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.multiply(self);
        }
        out
    }

    /// `p·q − q·p`.
    pub fn commutator(&self, other: &Poly) -> Poly {
        self.multiply(other).sub(&other.multiply(self))
    }

    /// Applies the ring endomorphism that sends each bound symbol to its
    /// image and fixes every other symbol.
    pub fn substitute(&self, bindings: &HashMap<Symbol, Poly>) -> Poly {
        if bindings.is_empty() || !self.symbols().iter().any(|s| bindings.contains_key(s)) {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut plain: Vec<Symbol> = Vec::new();
            for s in w.symbols() {
                match bindings.get(s) {
                    Some(image) => {
                        if !plain.is_empty() {
                            acc = acc.multiply(&Poly::monomial(1, Word::new(&plain)));
                            plain.clear();
                        }
                        acc = acc.multiply(image);
                    }
                    None => plain.push(s.clone()),
                }
            }
            if !plain.is_empty() {
                acc = acc.multiply(&Poly::monomial(1, Word::new(&plain)));
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn substitute_one(&self, symbol: &Symbol, value: &Poly) -> Poly {
        let mut bindings = HashMap::new();
        bindings.insert(symbol.clone(), value.clone());
        self.substitute(&bindings)
    }

    /// Terms sorted for presentation under `order` (graded, highest first).
    pub fn sorted_terms(&self, order: &SymbolOrder) -> Vec<(&Word, &BigInt)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.compare_words(a.0, b.0));
        terms
    }
}

/// A presentation order on symbols: declared base symbols first, in the
/// declared order, then undeclared base symbols by name, then schematic
/// symbols by uid.
#[derive(Clone, Debug, Default)]
pub struct SymbolOrder {
    declared: Vec<String>,
}

impl SymbolOrder {
    pub fn new<S: AsRef<str>>(declared: &[S]) -> SymbolOrder {
        SymbolOrder { declared: declared.iter().map(|s| s.as_ref().to_string()).collect() }
    }

    pub fn declared(&self) -> &[String] {
        &self.declared
    }

    fn rank<'a>(&self, s: &'a Symbol) -> (u8, usize, &'a str, u64) {
        match s.uid() {
            Some(uid) => (2, 0, "", uid),
            None => match self.declared.iter().position(|d| d == s.name()) {
                Some(i) => (0, i, "", 0),
                None => (1, 0, s.name(), 0),
            },
        }
    }

    pub fn compare_symbols(&self, a: &Symbol, b: &Symbol) -> Ordering {
        self.rank(a).cmp(&self.rank(b))
    }

    /// Higher degree first; equal degrees compare lexicographically with
    /// earlier-ranked symbols first.
    pub fn compare_words(&self, a: &Word, b: &Word) -> Ordering {
        b.len().cmp(&a.len()).then_with(|| {
            for (x, y) in a.symbols().iter().zip(b.symbols()) {
                match self.compare_symbols(x, y) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.multiply(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.negate()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_poly(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Poly {
        Poly::var(Symbol::base(n).unwrap())
    }

    /// Multiplies term by term without any shortcut: the expansion oracle.
    fn naive_expand(factors: &[Vec<(i64, Vec<&str>)>]) -> BTreeMap<Vec<String>, i64> {
        let mut acc: BTreeMap<Vec<String>, i64> = BTreeMap::new();
        acc.insert(vec![], 1);
        for f in factors {
            let mut next = BTreeMap::new();
            for (w1, c1) in &acc {
                for (c2, w2) in f {
                    let mut w = w1.clone();
                    w.extend(w2.iter().map(|s| s.to_string()));
                    *next.entry(w).or_insert(0) += c1 * c2;
                }
            }
            next.retain(|_, c| *c != 0);
            acc = next;
        }
        acc
    }

    fn to_map(p: &Poly) -> BTreeMap<Vec<String>, i64> {
        p.terms()
            .map(|(w, c)| {
                (
                    w.symbols().iter().map(|s| s.to_string()).collect(),
                    i64::try_from(c.clone()).unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn add_examples() {
        let x = var("x");
        let y = var("y");
        let one = Poly::one();
        assert!((&x + &x.negate()).is_zero());
        assert_eq!(&(&x + &one) + &(&x - &one), x.scale(&BigInt::from(2)));
        let s = &(&x * &y) + &(&y * &x);
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn multiply_examples() {
        let x = var("x");
        let y = var("y");
        let one = Poly::one();
        assert_ne!(&x * &y, &y * &x);
        let xp1 = &x + &one;
        let xm1 = &x - &one;
        let oracle = naive_expand(&[vec![(1, vec!["x"]), (1, vec![])], vec![(1, vec!["x"]), (-1, vec![])]]);
        assert_eq!(to_map(&(&xp1 * &xm1)), oracle);
        assert_eq!(&xp1 * &xm1, &x.pow(2) - &one);
        let cube = Poly::product([&xp1, &x, &xm1]);
        let oracle = naive_expand(&[
            vec![(1, vec!["x"]), (1, vec![])],
            vec![(1, vec!["x"])],
            vec![(1, vec!["x"]), (-1, vec![])],
        ]);
        assert_eq!(to_map(&cube), oracle);
        assert_eq!(cube, &x.pow(3) - &x);
    }

    #[test]
    fn negate_examples() {
        let x = var("x");
        let y = var("y");
        assert!(Poly::zero().negate().is_zero());
        let c = &(&x * &y) - &(&y * &x);
        assert_eq!(c.negate(), &(&y * &x) - &(&x * &y));
    }

    #[test]
    fn commutator_examples() {
        let x = var("x");
        let y = var("y");
        assert_eq!(x.commutator(&y), &(&x * &y) - &(&y * &x));
        assert!(x.commutator(&x).is_zero());
        for c in -3..=3 {
            let shifted = &x - &Poly::constant(c);
            // (x - c)y - y(x - c), expanded by hand.
            let oracle = naive_expand(&[vec![(1, vec!["x"]), (-c, vec![])], vec![(1, vec!["y"])]]);
            let mut oracle = oracle;
            for (w, k) in naive_expand(&[vec![(1, vec!["y"])], vec![(1, vec!["x"]), (-c, vec![])]]) {
                *oracle.entry(w).or_insert(0) -= k;
            }
            oracle.retain(|_, k| *k != 0);
            assert_eq!(to_map(&shifted.commutator(&y)), oracle);
            assert_eq!(shifted.commutator(&y), x.commutator(&y));
        }
    }

    #[test]
    fn substitute_examples() {
        let x = var("x");
        let y = var("y");
        let zeta = Symbol::fresh("z");
        let xzx = Poly::product([&x, &Poly::var(zeta.clone()), &x]);
        assert_eq!(xzx.substitute_one(&zeta, &y), Poly::product([&x, &y, &x]));
        let cubic = &x.pow(3) - &x;
        let xs = Symbol::base("x").unwrap();
        assert!(cubic.substitute_one(&xs, &Poly::one()).is_zero());
    }

    #[test]
    fn equals_examples() {
        let x = var("x");
        let y = var("y");
        let one = Poly::one();
        assert_ne!(&x * &y, &y * &x);
        assert_eq!(&(&x + &one) * &(&x - &one), &x.pow(2) - &one);
        let p = &(&x * &y) + &Poly::constant(3);
        assert_eq!(p, &p + &Poly::zero());
    }

    #[test]
    fn presentation_order() {
        let order = SymbolOrder::new(&["x", "y"]);
        let x = Word::single(Symbol::base("x").unwrap());
        let y = Word::single(Symbol::base("y").unwrap());
        assert_eq!(order.compare_words(&x.concat(&y), &y.concat(&x)), Ordering::Less);
        assert_eq!(order.compare_words(&x.concat(&x), &x), Ordering::Less);
        let rev = SymbolOrder::new(&["y", "x"]);
        assert_eq!(rev.compare_words(&x.concat(&y), &y.concat(&x)), Ordering::Greater);
    }
}
