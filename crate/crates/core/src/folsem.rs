//! First-order translation of fragment sentences.
//!
//! Each pair gets a composite signature: one unary predicate per subject and
//! object noun phrase and one binary predicate per verb phrase, on each side
//! of the pair. Linking constraints between the premise and hypothesis
//! predicates carry the lexical relation of each aligned phrase.

use std::collections::BTreeSet;
use std::fmt;

use crate::fragment::{Category, Lexicon, NliPair, Quantifier, Sentence, Word};
use crate::natlog::{slot_relations, SlotRelations};
use crate::relations::{region, SemRelation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u8);

pub const X: Var = Var(0);
pub const Y: Var = Var(1);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("x"),
            1 => f.write_str("y"),
            n => write!(f, "v{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredId(pub u16);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Unary(PredId, Var),
    Binary(PredId, Var, Var),
}

impl Formula {
    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Formula {
        Formula::Not(Box::new(body))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b, a)])
    }

    pub fn and(parts: Vec<Formula>) -> Formula {
        Formula::And(parts)
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        Formula::Or(parts)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
            match f {
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    bound.push(*v);
                    walk(body, bound, out);
                    bound.pop();
                }
                Formula::Not(body) => walk(body, bound, out),
                Formula::And(parts) | Formula::Or(parts) => parts.iter().for_each(|p| walk(p, bound, out)),
                Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Unary(_, v) => {
                    if !bound.contains(v) {
                        out.insert(*v);
                    }
                }
                Formula::Binary(_, a, b) => {
                    for v in [a, b] {
                        if !bound.contains(v) {
                            out.insert(*v);
                        }
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable mentioned, bound or free.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Forall(v, _) | Formula::Exists(v, _) | Formula::Unary(_, v) => {
                out.insert(*v);
            }
            Formula::Binary(_, a, b) => {
                out.insert(*a);
                out.insert(*b);
            }
            _ => {}
        });
        out
    }

    /// Maximum nesting of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.quantifier_depth(),
            Formula::Not(body) => body.quantifier_depth(),
            Formula::And(parts) | Formula::Or(parts) => parts.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Unary(..) | Formula::Binary(..) => 0,
        }
    }

    /// Predicates used, with their arity.
    pub fn predicates(&self) -> BTreeSet<(PredId, u8)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Unary(p, _) => {
                out.insert((*p, 1));
            }
            Formula::Binary(p, _, _) => {
                out.insert((*p, 2));
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Forall(_, body) | Formula::Exists(_, body) | Formula::Not(body) => body.visit(f),
            Formula::And(parts) | Formula::Or(parts) => parts.iter().for_each(|p| p.visit(f)),
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Unary(..) | Formula::Binary(..) => {}
        }
    }

    /// Stable prefix rendering, e.g. `(forall x (implies (P_S x) (H_S x)))`.
    pub fn display<'a>(&'a self, names: &'a dyn PredicateNames) -> impl fmt::Display + 'a {
        PrefixDisplay { formula: self, names }
    }
}

/// Resolves predicate ids to printable names.
pub trait PredicateNames {
    fn predicate_name(&self, id: PredId) -> String;
}

struct PrefixDisplay<'a> {
    formula: &'a Formula,
    names: &'a dyn PredicateNames,
}

impl fmt::Display for PrefixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |formula| PrefixDisplay {
            formula,
            names: self.names,
        };
        match self.formula {
            Formula::Forall(v, body) => write!(f, "(forall {} {})", v, sub(body)),
            Formula::Exists(v, body) => write!(f, "(exists {} {})", v, sub(body)),
            Formula::Not(body) => write!(f, "(not {})", sub(body)),
            Formula::And(parts) | Formula::Or(parts) => {
                let op = if matches!(self.formula, Formula::And(_)) { "and" } else { "or" };
                write!(f, "({op}")?;
                for p in parts {
                    write!(f, " {}", sub(p))?;
                }
                write!(f, ")")
            }
            Formula::Implies(a, b) => write!(f, "(implies {} {})", sub(a), sub(b)),
            Formula::Unary(p, v) => write!(f, "({} {})", self.names.predicate_name(*p), v),
            Formula::Binary(p, a, b) => write!(f, "({} {} {})", self.names.predicate_name(*p), a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub name: String,
    pub arity: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Premise,
    Hypothesis,
}

/// How the linking constraints of `⊏`/`⊐` phrases are encoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InclusionLinking {
    /// Inclusion only.
    #[default]
    Inclusion,
    /// Inclusion plus a witness that the inclusion is strict.
    StrictWitness,
}

pub const PREMISE_SUBJECT: PredId = PredId(0);
pub const HYPOTHESIS_SUBJECT: PredId = PredId(1);
pub const PREMISE_OBJECT: PredId = PredId(2);
pub const HYPOTHESIS_OBJECT: PredId = PredId(3);
pub const PREMISE_VERB: PredId = PredId(4);
pub const HYPOTHESIS_VERB: PredId = PredId(5);

const COMPOSITE_NAMES: [&str; 6] = ["P_S", "H_S", "P_O", "H_O", "P_V", "H_V"];

/// The six composite predicates of a pair together with their linking
/// constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub relations: SlotRelations,
    pub constraints: Vec<Formula>,
}

impl Signature {
    pub fn predicates(&self) -> Vec<Predicate> {
        COMPOSITE_NAMES
            .iter()
            .enumerate()
            .map(|(i, name)| Predicate {
                name: name.to_string(),
                arity: if i < 4 { 1 } else { 2 },
            })
            .collect()
    }

    pub fn unary(&self) -> [PredId; 4] {
        [PREMISE_SUBJECT, HYPOTHESIS_SUBJECT, PREMISE_OBJECT, HYPOTHESIS_OBJECT]
    }

    pub fn binary(&self) -> [PredId; 2] {
        [PREMISE_VERB, HYPOTHESIS_VERB]
    }

    fn subject(role: Role) -> PredId {
        match role {
            Role::Premise => PREMISE_SUBJECT,
            Role::Hypothesis => HYPOTHESIS_SUBJECT,
        }
    }

    fn object(role: Role) -> PredId {
        match role {
            Role::Premise => PREMISE_OBJECT,
            Role::Hypothesis => HYPOTHESIS_OBJECT,
        }
    }

    fn verb(role: Role) -> PredId {
        match role {
            Role::Premise => PREMISE_VERB,
            Role::Hypothesis => HYPOTHESIS_VERB,
        }
    }
}

impl PredicateNames for Signature {
    fn predicate_name(&self, id: PredId) -> String {
        COMPOSITE_NAMES
            .get(id.0 as usize)
            .map_or_else(|| format!("p{}", id.0), |s| s.to_string())
    }
}

/// Generalized quantifier `q v [restrictor] body`.
pub fn quantify(q: Quantifier, v: Var, restrictor: Formula, body: Formula) -> Formula {
    match q {
        Quantifier::Every => Formula::forall(v, Formula::implies(restrictor, body)),
        Quantifier::Some => Formula::exists(v, Formula::and(vec![restrictor, body])),
        Quantifier::No => Formula::not(Formula::exists(v, Formula::and(vec![restrictor, body]))),
        Quantifier::NotEvery => Formula::not(Formula::forall(v, Formula::implies(restrictor, body))),
    }
}

/// Scope-ordered translation with caller-supplied phrase denotations.
pub fn translate_with(
    sentence: &Sentence,
    subject: impl Fn(Var) -> Formula,
    object: impl Fn(Var) -> Formula,
    verb_phrase: impl Fn(Var, Var) -> Formula,
) -> Formula {
    let inner = quantify(sentence.object_quantifier, Y, object(Y), verb_phrase(X, Y));
    let body = if sentence.negated { Formula::not(inner) } else { inner };
    quantify(sentence.subject_quantifier, X, subject(X), body)
}

/// Translates one side of a pair over its composite signature.
pub fn translate(sentence: &Sentence, role: Role, _signature: &Signature) -> Formula {
    let (s, o, v) = (Signature::subject(role), Signature::object(role), Signature::verb(role));
    translate_with(
        sentence,
        |x| Formula::Unary(s, x),
        |y| Formula::Unary(o, y),
        |x, y| Formula::Binary(v, x, y),
    )
}

/// Linking constraints for one aligned phrase pair.
fn link(relation: SemRelation, premise: PredId, hypothesis: PredId, arity: u8, linking: InclusionLinking) -> Vec<Formula> {
    let atom = |p: PredId| {
        if arity == 1 {
            Formula::Unary(p, X)
        } else {
            Formula::Binary(p, X, Y)
        }
    };
    let close = |f: Formula, universal: bool| {
        let quant = |v, f| if universal { Formula::forall(v, f) } else { Formula::exists(v, f) };
        if arity == 1 {
            quant(X, f)
        } else {
            quant(X, quant(Y, f))
        }
    };
    let inclusion = |narrow: PredId, wide: PredId| {
        let mut out = vec![close(Formula::implies(atom(narrow), atom(wide)), true)];
        if linking == InclusionLinking::StrictWitness {
            out.push(close(Formula::and(vec![atom(wide), Formula::not(atom(narrow))]), false));
        }
        out
    };
    match relation {
        SemRelation::Equivalence => vec![close(Formula::iff(atom(premise), atom(hypothesis)), true)],
        SemRelation::Forward => inclusion(premise, hypothesis),
        SemRelation::Reverse => inclusion(hypothesis, premise),
        SemRelation::Independence => Vec::new(),
        other => panic!("phrase relation {other} cannot arise from word identity"),
    }
}

pub fn build_signature(pair: &NliPair) -> Signature {
    build_signature_with(pair, InclusionLinking::default())
}

pub fn build_signature_with(pair: &NliPair, linking: InclusionLinking) -> Signature {
    let relations = slot_relations(pair);
    let mut constraints = Vec::new();
    constraints.extend(link(relations.subject, PREMISE_SUBJECT, HYPOTHESIS_SUBJECT, 1, linking));
    constraints.extend(link(relations.verb_phrase, PREMISE_VERB, HYPOTHESIS_VERB, 2, linking));
    constraints.extend(link(relations.object, PREMISE_OBJECT, HYPOTHESIS_OBJECT, 1, linking));
    Signature { relations, constraints }
}

/// Non-emptiness and non-universality of a one- or two-place formula.
pub fn contingency_premises(atom: &dyn Fn(Var, Var) -> Formula, arity: u8) -> [Formula; 2] {
    let close = |f: Formula| {
        if arity == 1 {
            Formula::exists(X, f)
        } else {
            Formula::exists(X, Formula::exists(Y, f))
        }
    };
    [close(atom(X, Y)), close(Formula::not(atom(X, Y)))]
}

/// No composite phrase is empty or universal: two premises per predicate.
pub fn aux_premises(signature: &Signature) -> Vec<Formula> {
    let mut out = Vec::with_capacity(12);
    for p in signature.unary() {
        out.extend(contingency_premises(&|x, _| Formula::Unary(p, x), 1));
    }
    for p in signature.binary() {
        out.extend(contingency_premises(&|x, y| Formula::Binary(p, x, y), 2));
    }
    out
}

/// The regions of `(left, right)` as formulas over the given atoms.
pub fn region_formula(bit: u8, left: Formula, right: Formula) -> Formula {
    let (l, r) = match bit {
        region::BOTH => (left, right),
        region::LEFT_ONLY => (left, Formula::not(right)),
        region::RIGHT_ONLY => (Formula::not(left), right),
        region::NEITHER => (Formula::not(left), Formula::not(right)),
        _ => panic!("not a single region bit: {bit:#06b}"),
    };
    Formula::and(vec![l, r])
}

/// Constraints making exactly the regions in `inhabited` non-empty for a
/// pair of unary predicates.
pub fn exact_regions(left: PredId, right: PredId, inhabited: u8) -> Vec<Formula> {
    let mut out = Vec::new();
    for bit in [region::BOTH, region::LEFT_ONLY, region::RIGHT_ONLY, region::NEITHER] {
        let f = region_formula(bit, Formula::Unary(left, X), Formula::Unary(right, X));
        if inhabited & bit != 0 {
            out.push(Formula::exists(X, f));
        } else {
            out.push(Formula::forall(X, Formula::not(f)));
        }
    }
    out
}

/// Constraints leaving at most the regions in `allowed` inhabited.
pub fn allowed_regions(left: PredId, right: PredId, allowed: u8) -> Vec<Formula> {
    [region::BOTH, region::LEFT_ONLY, region::RIGHT_ONLY, region::NEITHER]
        .into_iter()
        .filter(|bit| allowed & bit == 0)
        .map(|bit| {
            Formula::forall(
                X,
                Formula::not(region_formula(bit, Formula::Unary(left, X), Formula::Unary(right, X))),
            )
        })
        .collect()
}

/// One predicate per open-class word, used to cross-check the composite
/// encoding on small lexicons. Noun phrases are conjunctions of adjective
/// and noun atoms; verb phrases conjoin adverb and verb atoms.
#[derive(Clone, Debug)]
pub struct AtomicEncoding {
    words: Vec<(Category, Word)>,
    names: Vec<String>,
    pub premise: Formula,
    pub hypothesis: Formula,
    pub aux: Vec<Formula>,
}

impl AtomicEncoding {
    pub fn build(pair: &NliPair, lexicon: &Lexicon) -> AtomicEncoding {
        let mut enc = AtomicEncoding {
            words: Vec::new(),
            names: Vec::new(),
            premise: Formula::And(vec![]),
            hypothesis: Formula::And(vec![]),
            aux: Vec::new(),
        };
        let premise = enc.translate(&pair.premise, lexicon);
        let hypothesis = enc.translate(&pair.hypothesis, lexicon);
        let mut seen: Vec<Formula> = Vec::new();
        for s in [&pair.premise, &pair.hypothesis] {
            let (subject, object) = (
                enc.noun_phrase(s.subject_adjective, s.subject_noun, X),
                enc.noun_phrase(s.object_adjective, s.object_noun, X),
            );
            let vp = enc.verb_phrase(s.adverb, s.verb, X, Y);
            for (phrase, arity) in [(subject, 1), (object, 1), (vp, 2)] {
                if seen.contains(&phrase) {
                    continue;
                }
                seen.push(phrase.clone());
                let close = |f: Formula| {
                    if arity == 1 {
                        Formula::exists(X, f)
                    } else {
                        Formula::exists(X, Formula::exists(Y, f))
                    }
                };
                enc.aux.push(close(phrase.clone()));
                enc.aux.push(close(Formula::not(phrase)));
            }
        }
        enc.premise = premise;
        enc.hypothesis = hypothesis;
        enc
    }

    fn pred(&self, category: Category, word: Word) -> PredId {
        PredId(self.words.iter().position(|w| *w == (category, word)).expect("registered") as u16)
    }

    fn register(&mut self, category: Category, word: Word, lexicon: &Lexicon) {
        if !self.words.contains(&(category, word)) {
            self.words.push((category, word));
            self.names.push(lexicon.token(category, word).to_string());
        }
    }

    fn noun_phrase(&self, adjective: Option<Word>, noun: Word, v: Var) -> Formula {
        let head = Formula::Unary(self.pred(Category::Noun, noun), v);
        match adjective {
            Some(a) => Formula::and(vec![Formula::Unary(self.pred(Category::Adjective, a), v), head]),
            None => head,
        }
    }

    fn verb_phrase(&self, adverb: Option<Word>, verb: Word, x: Var, y: Var) -> Formula {
        let head = Formula::Binary(self.pred(Category::Verb, verb), x, y);
        match adverb {
            Some(a) => Formula::and(vec![Formula::Binary(self.pred(Category::Adverb, a), x, y), head]),
            None => head,
        }
    }

    fn translate(&mut self, s: &Sentence, lexicon: &Lexicon) -> Formula {
        for (c, w) in [
            (Category::Adjective, s.subject_adjective),
            (Category::Adverb, s.adverb),
            (Category::Adjective, s.object_adjective),
        ] {
            if let Some(w) = w {
                self.register(c, w, lexicon);
            }
        }
        self.register(Category::Noun, s.subject_noun, lexicon);
        self.register(Category::Noun, s.object_noun, lexicon);
        self.register(Category::Verb, s.verb, lexicon);
        translate_with(
            s,
            |x| self.noun_phrase(s.subject_adjective, s.subject_noun, x),
            |y| self.noun_phrase(s.object_adjective, s.object_noun, y),
            |x, y| self.verb_phrase(s.adverb, s.verb, x, y),
        )
    }
}

impl PredicateNames for AtomicEncoding {
    fn predicate_name(&self, id: PredId) -> String {
        self.names.get(id.0 as usize).cloned().unwrap_or_else(|| format!("p{}", id.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragment::CATEGORY_SIZE;

    fn lex() -> Lexicon {
        Lexicon::synthetic(CATEGORY_SIZE)
    }

    fn pair(p: &str, h: &str) -> NliPair {
        let lex = lex();
        NliPair::new(lex.parse_str(p).unwrap(), lex.parse_str(h).unwrap())
    }

    fn ps(v: Var) -> Formula {
        Formula::Unary(PREMISE_SUBJECT, v)
    }
    fn po(v: Var) -> Formula {
        Formula::Unary(PREMISE_OBJECT, v)
    }
    fn pv(a: Var, b: Var) -> Formula {
        Formula::Binary(PREMISE_VERB, a, b)
    }

    #[test]
    fn translation_examples() {
        let p = pair("every noun01 does not verb01 some noun02", "every noun01 verb01 some noun02");
        let sig = build_signature(&p);
        let expected = Formula::forall(
            X,
            Formula::implies(ps(X), Formula::not(Formula::exists(Y, Formula::and(vec![po(Y), pv(X, Y)])))),
        );
        assert_eq!(translate(&p.premise, Role::Premise, &sig), expected);

        let s = lex().parse_str("some noun01 verb01 no noun02").unwrap();
        let expected = Formula::exists(
            X,
            Formula::and(vec![ps(X), Formula::not(Formula::exists(Y, Formula::and(vec![po(Y), pv(X, Y)])))]),
        );
        assert_eq!(translate(&s, Role::Premise, &sig), expected);

        let s = lex().parse_str("not every noun01 verb01 every noun02").unwrap();
        let expected = Formula::not(Formula::forall(
            X,
            Formula::implies(ps(X), Formula::forall(Y, Formula::implies(po(Y), pv(X, Y)))),
        ));
        assert_eq!(translate(&s, Role::Premise, &sig), expected);
    }

    #[test]
    fn translation_shape_invariants() {
        let lex = Lexicon::synthetic(2);
        let sig = build_signature(&pair("every noun01 verb01 some noun02", "every noun01 verb01 some noun02"));
        for s in lex.enumerate_sentences().step_by(7) {
            let f = translate(&s, Role::Hypothesis, &sig);
            assert!(f.is_closed());
            assert_eq!(f.variables().len(), 2);
            assert_eq!(f.quantifier_depth(), 2);
            assert_eq!(f, translate(&s, Role::Hypothesis, &sig));
        }
    }

    #[test]
    fn signature_linking_examples() {
        let same = build_signature(&pair(
            "every adj03 noun01 verb01 some noun02",
            "some adj03 noun01 verb01 some noun02",
        ));
        assert_eq!(
            same.constraints[0],
            Formula::forall(X, Formula::iff(ps(X), Formula::Unary(HYPOTHESIS_SUBJECT, X)))
        );

        let p = pair("every adj03 noun01 verb01 some noun02", "every noun01 verb01 some noun02");
        let strict = build_signature_with(&p, InclusionLinking::StrictWitness);
        let hs = |v| Formula::Unary(HYPOTHESIS_SUBJECT, v);
        assert_eq!(strict.constraints[0], Formula::forall(X, Formula::implies(ps(X), hs(X))));
        assert_eq!(
            strict.constraints[1],
            Formula::exists(X, Formula::and(vec![hs(X), Formula::not(ps(X))]))
        );
        let plain = build_signature(&p);
        assert_eq!(plain.constraints[0], Formula::forall(X, Formula::implies(ps(X), hs(X))));
        assert_eq!(plain.relations.subject, SemRelation::Forward);

        let independent = build_signature(&pair(
            "every adj03 noun01 verb01 some noun02",
            "every adj04 noun01 verb01 some noun02",
        ));
        assert_eq!(independent.relations.subject, SemRelation::Independence);
        // Verb phrase and object are identical; the subject contributes nothing.
        assert_eq!(independent.constraints.len(), 2);
    }

    #[test]
    fn aux_premise_count() {
        let sig = build_signature(&pair("every noun01 verb01 some noun02", "some noun01 verb01 some noun02"));
        let aux = aux_premises(&sig);
        assert_eq!(aux.len(), 12);
        assert!(aux.iter().all(Formula::is_closed));
    }

    #[test]
    fn prefix_printer_is_stable() {
        let p = pair("every noun01 does not verb01 some noun02", "every noun01 verb01 some noun02");
        let sig = build_signature(&p);
        let f = translate(&p.premise, Role::Premise, &sig);
        assert_eq!(
            f.display(&sig).to_string(),
            "(forall x (implies (P_S x) (not (exists y (and (P_O y) (P_V x y))))))"
        );
    }

    #[test]
    fn atomic_encoding_shares_word_predicates() {
        let lex = Lexicon::synthetic(2);
        let p = NliPair::new(
            lex.parse_str("every adj0 noun0 verb0 some noun0").unwrap(),
            lex.parse_str("every noun0 adv1 verb0 some adj1 noun1").unwrap(),
        );
        let enc = AtomicEncoding::build(&p, &lex);
        assert_eq!(
            enc.premise.display(&enc).to_string(),
            "(forall x (implies (and (adj0 x) (noun0 x)) (exists y (and (noun0 y) (verb0 x y)))))"
        );
        // adj0 noun0, noun0, verb0, adv1 verb0, adj1 noun1: five distinct phrases.
        assert_eq!(enc.aux.len(), 10);
    }
}
