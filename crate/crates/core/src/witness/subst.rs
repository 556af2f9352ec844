use std::collections::{BTreeSet, HashMap};

use super::{NodeId, WitnessDag, WitnessError, WitnessNode};
use crate::ring::{Poly, Symbol};

/// Instantiates the schematic symbol `sym` by `value` throughout the
/// witness, giving a witness of the instantiated conclusion.
///
/// `Semiprime` bound symbols that would clash with `sym` or with a symbol
/// of `value` are renamed to fresh uids inside their premise, so the
/// substitution never captures.
pub fn substitute_schematic(dag: &WitnessDag, sym: &Symbol, value: &Poly) -> Result<WitnessDag, WitnessError> {
    if !sym.is_schematic() {
        return Err(WitnessError::NotSchematic(sym.to_string()));
    }
    let occurs = dag.nodes().iter().any(|n| n.polys().iter().any(|p| p.contains_symbol(sym)));
    if !occurs {
        return Ok(dag.clone());
    }
    let mut bindings = HashMap::new();
    bindings.insert(sym.clone(), value.clone());
    Ok(substitute_from(dag, dag.root(), bindings))
}

/// Applies `bindings` to the sub-DAG reachable from `root`. The result
/// holds only those nodes, children before parents.
pub(crate) fn substitute_from(dag: &WitnessDag, root: NodeId, bindings: HashMap<Symbol, Poly>) -> WitnessDag {
    let mut s = Subst { dag, envs: Vec::new(), memo: HashMap::new(), out: Vec::new() };
    let env0 = s.push_env(bindings);
    let new_root = s.visit(root, env0);
    WitnessDag::from_topological(
        dag.setting(),
        dag.symbols().to_vec(),
        dag.generators().clone(),
        s.out,
        new_root,
    )
    .expect("substitution preserves structure")
}

struct Env {
    map: HashMap<Symbol, Poly>,
    /// Keys plus every symbol occurring in an image.
    touched: BTreeSet<Symbol>,
}

struct Subst<'a> {
    dag: &'a WitnessDag,
    envs: Vec<Env>,
    memo: HashMap<(NodeId, usize), NodeId>,
    out: Vec<WitnessNode>,
}

impl Subst<'_> {
    fn push_env(&mut self, map: HashMap<Symbol, Poly>) -> usize {
        let mut touched: BTreeSet<Symbol> = map.keys().cloned().collect();
        for v in map.values() {
            touched.extend(v.symbols());
        }
        self.envs.push(Env { map, touched });
        self.envs.len() - 1
    }

    fn apply(&self, env: usize, p: &Poly) -> Poly {
        p.substitute(&self.envs[env].map)
    }

    fn visit(&mut self, id: NodeId, env: usize) -> NodeId {
        if let Some(&done) = self.memo.get(&(id, env)) {
            return done;
        }
        let node = &self.dag.nodes()[id];
        let new = match node {
            WitnessNode::Intro { gen } => WitnessNode::Intro { gen: *gen },
            WitnessNode::Zero => WitnessNode::Zero,
            WitnessNode::IntroFamily { family, instance } => {
                WitnessNode::IntroFamily { family: *family, instance: self.apply(env, instance) }
            }
            WitnessNode::Add { left, right } => {
                let l = self.visit(*left, env);
                let r = self.visit(*right, env);
                WitnessNode::Add { left: l, right: r }
            }
            WitnessNode::Mult { left, inner, right } => {
                let i = self.visit(*inner, env);
                WitnessNode::Mult { left: self.apply(env, left), inner: i, right: self.apply(env, right) }
            }
            WitnessNode::Red { premise, conclusion } => {
                let pr = self.visit(*premise, env);
                WitnessNode::Red { premise: pr, conclusion: self.apply(env, conclusion) }
            }
            WitnessNode::Semiprime { bound, premise, conclusion } => {
                let (bound2, inner_env) = if self.envs[env].touched.contains(bound) {
                    let renamed = Symbol::fresh(bound.name());
                    let mut map = self.envs[env].map.clone();
                    map.insert(bound.clone(), Poly::var(renamed.clone()));
                    (renamed, self.push_env(map))
                } else {
                    (bound.clone(), env)
                };
                let pr = self.visit(*premise, inner_env);
                WitnessNode::Semiprime { bound: bound2, premise: pr, conclusion: self.apply(env, conclusion) }
            }
        };
        self.out.push(new);
        let nid = self.out.len() - 1;
        self.memo.insert((id, env), nid);
        nid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::witness::{check_certificate, Family, GeneratorSet, Setting};

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    /// Witness of x·ζ·x over the family x·A·x.
    fn xzx(zeta: &Symbol) -> WitnessDag {
        let gens = GeneratorSet::with_families(vec![], vec![Family::new(p("x"), p("x"))]);
        let nodes = vec![WitnessNode::IntroFamily { family: 0, instance: Poly::var(zeta.clone()) }];
        WitnessDag::from_topological(Setting::Sqrt, vec!["x".into(), "y".into()], gens, nodes, 0).unwrap()
    }

    #[test]
    fn single_slot() {
        let zeta = Symbol::fresh("z");
        let w = xzx(&zeta);
        let out = substitute_schematic(&w, &zeta, &p("y")).unwrap();
        assert_eq!(out.conclusion(), &p("x*y*x"));
        assert!(check_certificate(&out.to_certificate()).is_valid());
    }

    #[test]
    fn absent_symbol_is_identity() {
        let zeta = Symbol::fresh("z");
        let w = xzx(&zeta);
        let other = Symbol::fresh("z");
        assert_eq!(substitute_schematic(&w, &other, &p("y")).unwrap(), w);
        assert!(substitute_schematic(&w, &Symbol::base("x").unwrap(), &p("y")).is_err());
    }

    #[test]
    fn binders_are_renamed_instead_of_capturing() {
        // Semiprime(t) over x·t·x, with ζ free in a sibling: Add(Semiprime ⊢ x, IntroFamily ⊢ x·ζ·x)
        let t = Symbol::fresh("t");
        let zeta = Symbol::fresh("z");
        let gens = GeneratorSet::with_families(vec![], vec![Family::new(p("x"), p("x"))]);
        let nodes = vec![
            WitnessNode::IntroFamily { family: 0, instance: Poly::var(t.clone()) },
            WitnessNode::Semiprime { bound: t.clone(), premise: 0, conclusion: p("x") },
            WitnessNode::IntroFamily { family: 0, instance: Poly::var(zeta.clone()) },
            WitnessNode::Add { left: 1, right: 2 },
        ];
        let w = WitnessDag::from_topological(Setting::Sqrt, vec!["x".into()], gens, nodes, 3).unwrap();
        // value mentions the bound symbol t
        let value = Poly::product([&p("y"), &Poly::var(t.clone())]);
        let out = substitute_schematic(&w, &zeta, &value).unwrap();
        let expected = &p("x") + &Poly::product([&p("x"), &value, &p("x")]);
        assert_eq!(out.conclusion(), &expected);
        assert!(check_certificate(&out.to_certificate()).is_valid());
        // substituting the bound symbol itself leaves the binder alone
        let out = substitute_schematic(&w, &t, &p("y")).unwrap();
        assert_eq!(out.conclusion(), w.conclusion());
        assert!(check_certificate(&out.to_certificate()).is_valid());
    }
}
