use std::collections::BTreeMap;

use mqnli::corpus::{premise_is_satisfiable, sample_pair, sample_pair_relation_balanced};
use mqnli::folsem::{build_signature, translate, Formula, PredId, Role, Var, X, Y};
use mqnli::oracle::{eval, find_model, formula_relation, is_satisfiable, satisfies_all, Assignment, FiniteModel};
use mqnli::{rng, Label, Lexicon, NliPair, Oracle, SemRelation};
use proptest::prelude::*;

fn pair(lexicon: &Lexicon, p: &str, h: &str) -> NliPair {
    NliPair::new(lexicon.parse_str(p).unwrap(), lexicon.parse_str(h).unwrap())
}

fn synthetic() -> Lexicon {
    Lexicon::synthetic(100)
}

/// Premise and hypothesis formulas with the full background of a pair.
fn parts(pair: &NliPair) -> (Formula, Formula, Vec<Formula>) {
    let enc = Oracle::default().encode(pair);
    (enc.premise, enc.hypothesis, enc.background)
}

#[test]
fn aux_premises_are_satisfiable_at_two() {
    let lex = synthetic();
    let p = pair(
        &lex,
        "every <empty> noun01 <empty> <empty> verb01 some <empty> noun02",
        "some <empty> noun01 <empty> <empty> verb01 some <empty> noun02",
    );
    let (_, _, background) = parts(&p);
    let model = find_model(&background, 2).expect("aux satisfiable");
    assert!(satisfies_all(&background, &model).unwrap());
    assert!(find_model(&background, 1).is_none());
}

#[test]
fn formula_relation_examples() {
    let lex = synthetic();
    let every = "every <empty> noun01 <empty> <empty> verb01 some <empty> noun02";
    let some = "some <empty> noun01 <empty> <empty> verb01 some <empty> noun02";
    let no = "no <empty> noun01 <empty> <empty> verb01 some <empty> noun02";
    let (phi, psi, aux) = parts(&pair(&lex, every, some));
    assert_eq!(formula_relation(&phi, &psi, &aux, 2), Ok(SemRelation::Equivalence));
    assert_eq!(formula_relation(&phi, &psi, &aux, 3), Ok(SemRelation::Forward));
    let (phi, psi, aux) = parts(&pair(&lex, some, no));
    assert_eq!(formula_relation(&phi, &psi, &aux, 2), Ok(SemRelation::Negation));
    assert_eq!(formula_relation(&phi, &phi, &aux, 2), Ok(SemRelation::Equivalence));
}

#[test]
fn existential_import_comes_from_the_aux_premises() {
    let lex = synthetic();
    let p = pair(
        &lex,
        "every <empty> noun01 <empty> <empty> verb01 some <empty> noun02",
        "some <empty> noun01 <empty> <empty> verb01 some <empty> noun02",
    );
    let oracle = Oracle::default();
    assert_eq!(oracle.label(&p).unwrap(), Label::Entailment);
    let sig = build_signature(&p);
    let (phi, psi) = (
        translate(&p.premise, Role::Premise, &sig),
        translate(&p.hypothesis, Role::Hypothesis, &sig),
    );
    assert_eq!(oracle.label_formulas(&phi, &psi, &sig.constraints).unwrap(), Label::Neutral);
}

#[test]
fn decide_label_examples() {
    let lex = Lexicon::bundled();
    let oracle = Oracle::default();
    let s = "every Swiss baker <empty> madly rubs some <empty> rock";
    let v = oracle.decide_label(&pair(&lex, s, s)).unwrap();
    assert_eq!(v.label, Label::Entailment);
    assert!(v.against_entailment.is_none());

    let c = pair(
        &lex,
        "no <empty> baker <empty> <empty> sells some <empty> rock",
        "every <empty> baker <empty> <empty> sells some <empty> rock",
    );
    assert_eq!(Oracle::new(2).unwrap().decide_label(&c).unwrap().label, Label::Contradiction);
    assert_eq!(c.negation_count(), 1);

    let n = pair(&lex, "every Swiss baker madly rubs some rock", "every wild baker sells some rock");
    let v = oracle.decide_label(&n).unwrap();
    assert_eq!(v.label, Label::Neutral);
    let (phi, psi, background) = parts(&n);
    let refute = v.against_entailment.expect("countermodel to entailment");
    let mut f = background.clone();
    f.extend([phi.clone(), Formula::not(psi.clone())]);
    assert!(satisfies_all(&f, &refute).unwrap());
    let refute = v.against_contradiction.expect("countermodel to contradiction");
    let mut f = background;
    f.extend([phi, psi]);
    assert!(satisfies_all(&f, &refute).unwrap());
    assert_eq!(v.bound_used, 3);
}

#[test]
fn witnesses_satisfy_their_formulas() {
    let lex = synthetic();
    let oracle = Oracle::default();
    let mut rng = rng::stream(1, "test-witnesses");
    for _ in 0..300 {
        let p = sample_pair_relation_balanced(&mut rng, &lex);
        let v = oracle.decide_label(&p).unwrap();
        let (phi, psi, background) = parts(&p);
        if let Some(m) = &v.against_entailment {
            let mut f = background.clone();
            f.extend([phi.clone(), Formula::not(psi.clone())]);
            assert!(satisfies_all(&f, m).unwrap());
            assert!(m.size() <= 3);
        }
        if let Some(m) = &v.against_contradiction {
            let mut f = background.clone();
            f.extend([phi.clone(), psi.clone()]);
            assert!(satisfies_all(&f, m).unwrap());
        }
        assert_eq!(v.label, oracle.label(&p).unwrap());
    }
}

#[test]
fn verdicts_never_leave_neutral_as_the_bound_grows() {
    let lex = synthetic();
    let (two, three) = (Oracle::new(2).unwrap(), Oracle::new(3).unwrap());
    let mut rng = rng::stream(2, "test-monotone");
    let mut changed = 0;
    for i in 0..1000 {
        let p = if i % 2 == 0 {
            sample_pair_relation_balanced(&mut rng, &lex)
        } else {
            sample_pair(&mut rng, &lex)
        };
        let (a, b) = (two.label(&p).unwrap(), three.label(&p).unwrap());
        if a == Label::Neutral {
            assert_eq!(
                b,
                Label::Neutral,
                "{} / {}",
                lex.render_string(&p.premise),
                lex.render_string(&p.hypothesis)
            );
        }
        changed += usize::from(a != b);
    }
    assert!(changed < 1000);
}

#[test]
fn bounds_three_and_four_agree() {
    let lex = synthetic();
    let (three, four) = (Oracle::new(3).unwrap(), Oracle::new(4).unwrap());
    let mut rng = rng::stream(3, "test-bound-four");
    for _ in 0..300 {
        let p = sample_pair_relation_balanced(&mut rng, &lex);
        assert_eq!(three.label(&p).unwrap(), four.label(&p).unwrap());
    }
}

#[test]
fn generated_premises_are_satisfiable() {
    let lex = synthetic();
    let oracle = Oracle::default();
    let mut rng = rng::stream(4, "test-premise-sat");
    for _ in 0..500 {
        assert!(premise_is_satisfiable(&sample_pair_relation_balanced(&mut rng, &lex), &oracle));
    }
}

#[test]
fn find_model_pigeonhole_and_contradiction() {
    let p = PredId(0);
    let f = [
        Formula::exists(X, Formula::Unary(p, X)),
        Formula::exists(X, Formula::not(Formula::Unary(p, X))),
    ];
    assert!(find_model(&f, 1).is_none());
    assert_eq!(find_model(&f, 2).unwrap().size(), 2);
    let phi = Formula::forall(X, Formula::exists(Y, Formula::Binary(PredId(1), X, Y)));
    for bound in 1..=3 {
        assert!(!is_satisfiable(&[phi.clone(), Formula::not(phi.clone())], bound));
    }
}

const UNARY: [PredId; 2] = [PredId(0), PredId(1)];
const BINARY: PredId = PredId(2);

fn formula(depth: u32) -> BoxedStrategy<Formula> {
    let var = prop_oneof![Just(X), Just(Y)];
    let leaf = prop_oneof![
        (0..2usize, var.clone()).prop_map(|(p, v)| Formula::Unary(UNARY[p], v)),
        (var.clone(), var.clone()).prop_map(|(a, b)| Formula::Binary(BINARY, a, b)),
    ];
    leaf.prop_recursive(depth, 24, 3, move |inner| {
        let var = prop_oneof![Just(X), Just(Y)];
        prop_oneof![
            (var.clone(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            (var, inner.clone()).prop_map(|(v, b)| Formula::exists(v, b)),
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Formula::or),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
    .boxed()
}

fn close(f: Formula) -> Formula {
    Formula::forall(X, Formula::exists(Y, f))
}

/// Interpretation as explicit truth tables: unary bits per predicate and
/// element, binary bits per ordered pair.
#[derive(Clone, Debug)]
struct Table {
    n: usize,
    unary: [Vec<bool>; 2],
    binary: Vec<bool>,
}

impl Table {
    fn all(n: usize) -> impl Iterator<Item = Table> {
        let bits = 2 * n + n * n;
        (0u32..1 << bits).map(move |m| {
            let bit = |i: usize| m >> i & 1 == 1;
            Table {
                n,
                unary: [(0..n).map(bit).collect(), (0..n).map(|e| bit(n + e)).collect()],
                binary: (0..n * n).map(|i| bit(2 * n + i)).collect(),
            }
        })
    }

    fn model(&self) -> FiniteModel {
        let mut m = FiniteModel::new(self.n);
        for (p, bits) in UNARY.iter().zip(&self.unary) {
            m.set_unary(*p, (0..self.n).filter(|&e| bits[e]));
        }
        m.set_binary(
            BINARY,
            (0..self.n * self.n).filter(|&i| self.binary[i]).map(|i| (i / self.n, i % self.n)),
        );
        m
    }
}

/// Evaluation by substituting domain elements for variables.
fn substitute_eval(f: &Formula, t: &Table, env: &BTreeMap<Var, usize>) -> bool {
    match f {
        Formula::Forall(v, b) => (0..t.n).all(|e| {
            let mut env = env.clone();
            env.insert(*v, e);
            substitute_eval(b, t, &env)
        }),
        Formula::Exists(v, b) => (0..t.n).any(|e| {
            let mut env = env.clone();
            env.insert(*v, e);
            substitute_eval(b, t, &env)
        }),
        Formula::Not(b) => !substitute_eval(b, t, env),
        Formula::And(ps) => ps.iter().all(|p| substitute_eval(p, t, env)),
        Formula::Or(ps) => ps.iter().any(|p| substitute_eval(p, t, env)),
        Formula::Implies(a, b) => !substitute_eval(a, t, env) || substitute_eval(b, t, env),
        Formula::Unary(p, v) => t.unary[p.0 as usize][env[v]],
        Formula::Binary(_, a, b) => t.binary[env[a] * t.n + env[b]],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn eval_matches_truth_table_expansion(f in formula(4), n in 1usize..=2, pick in any::<u32>()) {
        let tables: Vec<Table> = Table::all(n).collect();
        let t = &tables[pick as usize % tables.len()];
        let closed = close(f);
        prop_assert_eq!(eval(&closed, &t.model(), &Assignment::new()).unwrap(), substitute_eval(&closed, t, &BTreeMap::new()));
    }

    #[test]
    fn find_model_is_exhaustive_up_to_the_bound(fs in prop::collection::vec(formula(3), 1..4), bound in 1usize..=2) {
        let closed: Vec<Formula> = fs.into_iter().map(close).collect();
        let brute = (1..=bound).any(|n| Table::all(n).any(|t| closed.iter().all(|f| substitute_eval(f, &t, &BTreeMap::new()))));
        let found = find_model(&closed, bound);
        prop_assert_eq!(found.is_some(), brute);
        prop_assert_eq!(is_satisfiable(&closed, bound), brute);
        if let Some(m) = found {
            prop_assert!(m.size() <= bound);
            prop_assert!(satisfies_all(&closed, &m).unwrap());
        }
    }
}
