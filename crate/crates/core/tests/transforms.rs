use nilcert::expr::parse_poly;
use nilcert::ring::{Poly, Symbol};
use nilcert::testkit::{self, Oracle};
use nilcert::transforms::{self, Permutation, TransformError, Transformer};
use nilcert::witness::{check_certificate, Family, GeneratorSet, Setting, WitnessDag, WitnessNode};
use rand::Rng;

const NAMES: [&str; 6] = ["x", "y", "z", "x1", "x2", "x3"];

fn p(s: &str) -> Poly {
    parse_poly(s, &NAMES).unwrap()
}

fn intro(setting: Setting, gens: &[&str]) -> WitnessDag {
    let elements: Vec<Poly> = gens.iter().map(|g| p(g)).collect();
    let last = elements.len() - 1;
    WitnessDag::from_topological(setting, vec![], GeneratorSet::new(elements), vec![WitnessNode::Intro { gen: last }], 0)
        .unwrap()
}

fn valid(d: &WitnessDag) -> bool {
    check_certificate(&d.to_certificate()).is_valid()
}

#[test]
fn nil_product_of_intros() {
    let out = transforms::nil_product(&intro(Setting::Nil, &["x"]), &intro(Setting::Nil, &["y"])).unwrap();
    assert_eq!(out.conclusion(), &p("x*y"));
    assert_eq!(out.generators().elements, vec![p("x*y")]);
    assert!(valid(&out));
}

#[test]
fn nil_product_keeps_shared_generators() {
    let out = transforms::nil_product(&intro(Setting::Nil, &["z", "x"]), &intro(Setting::Nil, &["z", "y"])).unwrap();
    assert_eq!(out.generators().elements, vec![p("z"), p("x*y")]);
    assert!(valid(&out));
    let err = transforms::nil_product(&intro(Setting::Nil, &["z", "x"]), &intro(Setting::Nil, &["y"])).unwrap_err();
    assert!(matches!(err, TransformError::GeneratorMismatch(_)));
}

#[test]
fn settings_must_match() {
    let err = transforms::nil_product(&intro(Setting::Nil, &["x"]), &intro(Setting::Sqrt, &["y"])).unwrap_err();
    assert!(matches!(err, TransformError::SettingMismatch { .. }));
    let err = transforms::sqrt_product(&intro(Setting::Nil, &["x"]), &intro(Setting::Nil, &["y"]), &Poly::one())
        .unwrap_err();
    assert!(matches!(err, TransformError::SettingMismatch { .. }));
}

#[test]
fn rotate_and_insert() {
    let w = intro(Setting::Nil, &["x*y*z"]);
    let r = transforms::rotate(&w, &p("x"), &p("y*z")).unwrap();
    assert_eq!(r.conclusion(), &p("y*z*x"));
    assert_eq!(r.len(), w.len() + 2);
    assert!(valid(&r));
    let i = transforms::insert(&w, &p("x*y"), &p("z"), &p("x + 3")).unwrap();
    assert_eq!(i.conclusion(), &p("x*y*(x + 3)*z"));
    assert!(valid(&i));
    assert!(matches!(
        transforms::rotate(&w, &p("y"), &p("x*z")),
        Err(TransformError::FactorizationMismatch { .. })
    ));
}

#[test]
fn lemmas_need_nil() {
    let w = intro(Setting::Sqrt, &["x*y"]);
    assert!(matches!(transforms::rotate(&w, &p("x"), &p("y")), Err(TransformError::SettingMismatch { .. })));
}

fn factors(n: usize) -> Vec<Poly> {
    (1..=n).map(|i| Poly::var(Symbol::base(&format!("x{i}")).unwrap())).collect()
}

#[test]
fn permutations_exhaustive_up_to_four() {
    for n in 1..=4 {
        let fs = factors(n);
        let word = Poly::product(fs.iter());
        let w = WitnessDag::from_topological(
            Setting::Nil,
            vec![],
            GeneratorSet::new(vec![word]),
            vec![WitnessNode::Intro { gen: 0 }],
            0,
        )
        .unwrap();
        for sigma in Permutation::all(n) {
            let out = transforms::permute(&w, &fs, &sigma).unwrap();
            assert_eq!(out.conclusion(), &Poly::product(sigma.apply(&fs).iter()), "σ = {sigma}");
            assert!(valid(&out), "σ = {sigma}");
        }
    }
}

#[test]
fn permutation_edge_cases() {
    let fs = vec![p("x"), p("y")];
    let w = intro(Setting::Nil, &["x*y"]);
    assert_eq!(transforms::permute(&w, &fs, &Permutation::identity(2)).unwrap(), w);
    let swapped = transforms::permute(&w, &fs, &Permutation::parse("2,1").unwrap()).unwrap();
    assert_eq!(swapped.conclusion(), &p("y*x"));
    assert!(Permutation::parse("1,1").is_err());
    assert!(Permutation::parse("0,1").is_err());
    assert!(matches!(
        transforms::permute(&w, &[p("y"), p("x")], &Permutation::identity(2)),
        Err(TransformError::FactorizationMismatch { .. })
    ));
    assert!(matches!(
        transforms::permute(&w, &fs, &Permutation::identity(3)),
        Err(TransformError::InvalidPermutation(_))
    ));
}

#[test]
fn permutations_of_polynomial_factors() {
    let mut rng = testkit::rng(11);
    let syms = [testkit::base("x"), testkit::base("y")];
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let fs: Vec<Poly> = (0..n).map(|_| testkit::random_poly(&mut rng, &syms, 2, 1)).collect();
        let product = Poly::product(fs.iter());
        let w = WitnessDag::from_topological(
            Setting::Nil,
            vec![],
            GeneratorSet::new(vec![product]),
            vec![WitnessNode::Intro { gen: 0 }],
            0,
        )
        .unwrap();
        let mut image: Vec<usize> = (1..=n).collect();
        use rand::seq::SliceRandom;
        image.shuffle(&mut rng);
        let sigma = Permutation::new(image).unwrap();
        let out = transforms::permute(&w, &fs, &sigma).unwrap();
        assert_eq!(out.conclusion(), &Poly::product(sigma.apply(&fs).iter()));
        let cert = out.to_certificate();
        assert!(check_certificate(&cert).is_valid());
        assert!(matches!(testkit::soundness_oracle(&cert, 2), Oracle::Sound { .. }));
    }
}

#[test]
fn intersections() {
    let x = testkit::base("x");
    let y = testkit::base("y");
    let f0 = nilcert::commutativity::commutator_factor_witness(0, &x, &y);
    let f1 = nilcert::commutativity::commutator_factor_witness(1, &x, &y);
    let out = transforms::nil_intersect(&f0, &f1).unwrap();
    assert_eq!(out.conclusion(), &p("[x,y]"));
    assert_eq!(out.generators().elements, vec![p("x^2 - x")]);
    assert!(valid(&out));
    let other = intro(Setting::Nil, &["x - 1"]);
    assert!(matches!(transforms::nil_intersect(&f0, &other), Err(TransformError::ConclusionMismatch { .. })));
}

#[test]
fn sqrt_product_with_schematic_middle() {
    let a = intro(Setting::Sqrt, &["x"]);
    let b = intro(Setting::Sqrt, &["y"]);
    let zeta = Symbol::fresh("z");
    let m = Poly::var(zeta);
    let out = transforms::sqrt_product(&a, &b, &m).unwrap();
    assert_eq!(out.conclusion(), &p("x").multiply(&m).multiply(&p("y")));
    assert!(out.generators().elements.is_empty());
    assert_eq!(out.generators().families, vec![Family::new(p("x"), p("y"))]);
    assert!(valid(&out));
}

#[test]
fn sqrt_intersect_ends_in_semiprime() {
    let mut rng = testkit::rng(5);
    for _ in 0..10 {
        let pair = testkit::random_pair(&mut rng, Setting::Sqrt, 4, 2);
        let (l, r) = testkit::common_conclusion(&pair);
        let out = transforms::sqrt_intersect(&l, &r).unwrap();
        assert!(matches!(out.nodes()[out.root()], WitnessNode::Semiprime { .. }));
        assert_eq!(out.conclusion(), l.conclusion());
        assert!(valid(&out));
    }
}

#[test]
fn random_nil_products() {
    let mut rng = testkit::rng(3);
    for _ in 0..60 {
        let pair = testkit::random_pair(&mut rng, Setting::Nil, 6, 3);
        let out = transforms::nil_product(&pair.p, &pair.q).unwrap();
        assert_eq!(out.conclusion(), &pair.p.conclusion().multiply(pair.q.conclusion()));
        let mut gens = pair.shared.elements.clone();
        gens.push(pair.a.multiply(&pair.b));
        assert_eq!(out.generators().elements, gens);
        assert!(out.len() <= 8 * (pair.p.len() + 1) * (pair.q.len() + 1));
        assert!(valid(&out));
        let (l, r) = testkit::common_conclusion(&pair);
        let meet = transforms::nil_intersect(&l, &r).unwrap();
        assert!(valid(&meet));
    }
}

#[test]
fn random_sqrt_products() {
    let mut rng = testkit::rng(4);
    for i in 0..40 {
        let pair = testkit::random_pair(&mut rng, Setting::Sqrt, 6, 3);
        let m = if i % 2 == 0 {
            Poly::var(Symbol::fresh("m"))
        } else {
            testkit::random_poly(&mut rng, &[testkit::base("x")], 2, 1)
        };
        let out = transforms::sqrt_product(&pair.p, &pair.q, &m).unwrap();
        assert_eq!(out.conclusion(), &pair.p.conclusion().multiply(&m).multiply(pair.q.conclusion()));
        let verdict = check_certificate(&out.to_certificate());
        assert!(verdict.is_valid(), "{verdict}");
    }
}

#[test]
fn shared_chains_stay_small() {
    let p = testkit::red_chain("x", 20);
    let q = testkit::red_chain("y", 20);
    let out = Transformer::new(1_000_000).nil_product(&p, &q).unwrap();
    assert!(out.len() < 10_000, "{} nodes", out.len());
    assert!(valid(&out));
}

#[test]
fn budget_is_enforced() {
    let p = testkit::red_chain("x", 5);
    let q = testkit::red_chain("y", 5);
    assert_eq!(Transformer::new(10).nil_product(&p, &q).unwrap_err(), TransformError::BudgetExceeded(10));
}
