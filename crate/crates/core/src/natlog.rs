//! Compositional labeling over the aligned tree of a pair.
//!
//! Aligned slots combine bottom-up: modifiers with heads into phrase
//! relations, the object quantifier pair with the object noun phrase and the
//! verb phrase, negation on the result, and finally the subject quantifier
//! pair with the subject noun phrase and the body.
//!
//! A relation set is read disjunctively: each member is the exact relation
//! holding throughout one class of models. A set whose members all carry the
//! same label therefore has that label, and a set mixing labels is neutral,
//! because the classes jointly supply both a model where the hypothesis holds
//! and one where it fails.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::folsem::{allowed_regions, exact_regions, quantify, Formula, PredId, X};
use crate::fragment::{Category, Lexicon, NliPair, Quantifier, Word, EMPTY_TOKEN};
use crate::oracle::{formula_relation, Oracle, OracleError};
use crate::relations::{negation_conjugate, NegatedSide, RelationSet, SemRelation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Entailment,
    Contradiction,
    Neutral,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailment, Label::Contradiction, Label::Neutral];

    pub fn name(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Contradiction => "contradiction",
            Label::Neutral => "neutral",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = NatLogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| NatLogError::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlignmentError {
    #[error("token {token:?} is not a {expected:?}")]
    CategoryMismatch { token: String, expected: Category },
    #[error("{0:?} slots cannot be empty")]
    EmptyHead(Category),
    #[error("modifier relation {modifier} with head relation {head} is outside the fragment")]
    OutOfDomain { modifier: SemRelation, head: SemRelation },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NatLogError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("empty relation set has no label")]
    EmptySet,
    #[error("quantifier table differs between bounds {smaller} and {larger} at ({premise}, {hypothesis}, {restrictor}, {scope})")]
    TableUnstable {
        smaller: usize,
        larger: usize,
        premise: Quantifier,
        hypothesis: Quantifier,
        restrictor: SemRelation,
        scope: SemRelation,
    },
    #[error("quantifier table line {line}: {message}")]
    TableFormat { line: usize, message: String },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
}

/// Relation between two aligned words of one category. `None` is an empty
/// modifier, which denotes the universe.
pub fn word_relation(premise: Option<Word>, hypothesis: Option<Word>) -> SemRelation {
    match (premise, hypothesis) {
        (a, b) if a == b => SemRelation::Equivalence,
        (None, Some(_)) => SemRelation::Reverse,
        (Some(_), None) => SemRelation::Forward,
        _ => SemRelation::Independence,
    }
}

/// Token-level form of [`word_relation`], checking categories.
pub fn lexical_relation(lexicon: &Lexicon, premise: &str, hypothesis: &str, category: Category) -> Result<SemRelation, AlignmentError> {
    let resolve = |token: &str| -> Result<Option<Word>, AlignmentError> {
        if token == EMPTY_TOKEN {
            return match category {
                Category::Adjective | Category::Adverb => Ok(None),
                _ => Err(AlignmentError::EmptyHead(category)),
            };
        }
        match lexicon.lookup(token) {
            Some((c, w)) if c == category => Ok(Some(w)),
            _ => Err(AlignmentError::CategoryMismatch {
                token: token.to_string(),
                expected: category,
            }),
        }
    };
    Ok(word_relation(resolve(premise)?, resolve(hypothesis)?))
}

/// Relation between two modified phrases from the relations of their
/// modifiers and heads.
pub fn modifier_head_relation(modifier: SemRelation, head: SemRelation) -> Result<SemRelation, AlignmentError> {
    use SemRelation::*;
    match (modifier, head) {
        (Equivalence | Forward | Reverse | Independence, Equivalence) => Ok(modifier),
        (Equivalence | Forward | Reverse | Independence, Independence) => Ok(Independence),
        _ => Err(AlignmentError::OutOfDomain { modifier, head }),
    }
}

/// The nine aligned slot pairs, premise first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignedPair {
    pub subject_quantifiers: (Quantifier, Quantifier),
    pub subject_adjectives: (Option<Word>, Option<Word>),
    pub subject_nouns: (Word, Word),
    pub negations: (bool, bool),
    pub object_quantifiers: (Quantifier, Quantifier),
    pub adverbs: (Option<Word>, Option<Word>),
    pub verbs: (Word, Word),
    pub object_adjectives: (Option<Word>, Option<Word>),
    pub object_nouns: (Word, Word),
}

impl AlignedPair {
    pub fn new(pair: &NliPair) -> AlignedPair {
        let (p, h) = (&pair.premise, &pair.hypothesis);
        AlignedPair {
            subject_quantifiers: (p.subject_quantifier, h.subject_quantifier),
            subject_adjectives: (p.subject_adjective, h.subject_adjective),
            subject_nouns: (p.subject_noun, h.subject_noun),
            negations: (p.negated, h.negated),
            object_quantifiers: (p.object_quantifier, h.object_quantifier),
            adverbs: (p.adverb, h.adverb),
            verbs: (p.verb, h.verb),
            object_adjectives: (p.object_adjective, h.object_adjective),
            object_nouns: (p.object_noun, h.object_noun),
        }
    }

    fn phrase(modifiers: (Option<Word>, Option<Word>), heads: (Word, Word)) -> SemRelation {
        let head = word_relation(Some(heads.0), Some(heads.1));
        modifier_head_relation(word_relation(modifiers.0, modifiers.1), head).expect("word relations stay in the fragment")
    }

    pub fn slot_relations(&self) -> SlotRelations {
        SlotRelations {
            subject: Self::phrase(self.subject_adjectives, self.subject_nouns),
            verb_phrase: Self::phrase(self.adverbs, self.verbs),
            object: Self::phrase(self.object_adjectives, self.object_nouns),
        }
    }
}

/// Relations of the three aligned composite phrases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlotRelations {
    pub subject: SemRelation,
    pub verb_phrase: SemRelation,
    pub object: SemRelation,
}

pub fn slot_relations(pair: &NliPair) -> SlotRelations {
    AlignedPair::new(pair).slot_relations()
}

const RESTRICTOR_P: PredId = PredId(0);
const SCOPE_P: PredId = PredId(1);
const RESTRICTOR_H: PredId = PredId(2);
const SCOPE_H: PredId = PredId(3);

/// `(q_p, q_h, restrictor, scope) ↦ RelationSet`.
///
/// For a restrictor relation other than `#` the two restrictors realize
/// exactly that relation; `#` stands for "unconstrained" and takes the union
/// over all seven. The scope relation only forbids the regions it excludes,
/// since scopes (verb phrases, sentence bodies) may be empty or universal.
#[derive(Clone, PartialEq, Eq)]
pub struct QuantifierTable {
    entries: Vec<RelationSet>,
}

/// Domain bound used to derive the shipped quantifier table.
pub const QUANTIFIER_TABLE_BOUND: usize = 4;

const SHIPPED_TABLE: &str = include_str!("../data/quantifier.tsv");

fn table_index(p: Quantifier, h: Quantifier, restrictor: SemRelation, scope: SemRelation) -> usize {
    ((p.index() * 4 + h.index()) * 7 + restrictor.index()) * 7 + scope.index()
}

impl QuantifierTable {
    pub const ROWS: usize = 4 * 4 * 7 * 7;

    pub fn get(&self, p: Quantifier, h: Quantifier, restrictor: SemRelation, scope: SemRelation) -> RelationSet {
        self.entries[table_index(p, h, restrictor, scope)]
    }

    /// The table shipped with the crate.
    pub fn standard() -> &'static QuantifierTable {
        static TABLE: OnceLock<QuantifierTable> = OnceLock::new();
        TABLE.get_or_init(|| QuantifierTable::from_tsv(SHIPPED_TABLE).expect("shipped quantifier table parses"))
    }

    /// One entry derived by the oracle at `bound`.
    pub fn derive_entry(
        p: Quantifier,
        h: Quantifier,
        restrictor: SemRelation,
        scope: SemRelation,
        bound: usize,
    ) -> Result<RelationSet, OracleError> {
        let phi = quantify(p, X, Formula::Unary(RESTRICTOR_P, X), Formula::Unary(SCOPE_P, X));
        let psi = quantify(h, X, Formula::Unary(RESTRICTOR_H, X), Formula::Unary(SCOPE_H, X));
        let patterns: Vec<SemRelation> = if restrictor == SemRelation::Independence {
            SemRelation::ALL.to_vec()
        } else {
            vec![restrictor]
        };
        let mut out = RelationSet::EMPTY;
        for r in patterns {
            let mut aux = exact_regions(RESTRICTOR_P, RESTRICTOR_H, r.regions());
            aux.extend(allowed_regions(SCOPE_P, SCOPE_H, scope.regions()));
            out.insert(formula_relation(&phi, &psi, &aux, bound)?);
        }
        Ok(out)
    }

    /// Derives every entry at `bound`.
    pub fn derive_at(bound: usize) -> Result<QuantifierTable, OracleError> {
        let mut entries = vec![RelationSet::EMPTY; Self::ROWS];
        for p in Quantifier::ALL {
            for h in Quantifier::ALL {
                for restrictor in SemRelation::ALL {
                    for scope in SemRelation::ALL {
                        entries[table_index(p, h, restrictor, scope)] = Self::derive_entry(p, h, restrictor, scope, bound)?;
                    }
                }
            }
        }
        Ok(QuantifierTable { entries })
    }

    /// Derives at `bound` and fails unless `bound + 1` gives the same table.
    pub fn derive(bound: usize) -> Result<QuantifierTable, NatLogError> {
        let table = Self::derive_at(bound)?;
        let larger = Self::derive_at(bound + 1)?;
        if let Some((p, h, restrictor, scope)) = table.first_difference(&larger) {
            return Err(NatLogError::TableUnstable {
                smaller: bound,
                larger: bound + 1,
                premise: p,
                hypothesis: h,
                restrictor,
                scope,
            });
        }
        Ok(table)
    }

    pub fn first_difference(&self, other: &QuantifierTable) -> Option<(Quantifier, Quantifier, SemRelation, SemRelation)> {
        Self::keys().find(|&(p, h, r, s)| self.get(p, h, r, s) != other.get(p, h, r, s))
    }

    fn keys() -> impl Iterator<Item = (Quantifier, Quantifier, SemRelation, SemRelation)> {
        Quantifier::ALL.into_iter().flat_map(|p| {
            Quantifier::ALL.into_iter().flat_map(move |h| {
                SemRelation::ALL
                    .into_iter()
                    .flat_map(move |r| SemRelation::ALL.into_iter().map(move |s| (p, h, r, s)))
            })
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("q_p\tq_h\tr_restrictor\tr_scope\tresult\n");
        for (p, h, r, s) in Self::keys() {
            out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", p.name(), h.name(), r, s, self.get(p, h, r, s)));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<QuantifierTable, NatLogError> {
        let bad = |line: usize, message: String| NatLogError::TableFormat { line, message };
        let mut entries = vec![None; Self::ROWS];
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(bad(i + 1, format!("expected 5 fields, found {}", fields.len())));
            }
            let quantifier = |s: &str| Quantifier::from_name(s).ok_or_else(|| bad(i + 1, format!("unknown quantifier {s:?}")));
            let relation = |s: &str| SemRelation::from_str(s).map_err(|e| bad(i + 1, e.to_string()));
            let (p, h) = (quantifier(fields[0])?, quantifier(fields[1])?);
            let (r, s) = (relation(fields[2])?, relation(fields[3])?);
            let set = RelationSet::from_str(fields[4]).map_err(|e| bad(i + 1, e.to_string()))?;
            if set.is_empty() {
                return Err(bad(i + 1, "empty result set".to_string()));
            }
            let slot = &mut entries[table_index(p, h, r, s)];
            if slot.is_some() {
                return Err(bad(i + 1, "duplicate row".to_string()));
            }
            *slot = Some(set);
        }
        let entries: Option<Vec<RelationSet>> = entries.into_iter().collect();
        let entries = entries.ok_or_else(|| bad(0, format!("table must have {} rows", Self::ROWS)))?;
        Ok(QuantifierTable { entries })
    }
}

impl fmt::Debug for QuantifierTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tsv())
    }
}

/// Relation sets at every internal node of the aligned tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeRelations {
    pub slots: SlotRelations,
    /// Object quantifier pair applied to the object noun phrases and verb phrases.
    pub inner: RelationSet,
    /// After negation.
    pub body: RelationSet,
    /// The sentence pair.
    pub root: RelationSet,
}

pub fn node_relations(pair: &NliPair, table: &QuantifierTable) -> NodeRelations {
    let aligned = AlignedPair::new(pair);
    let slots = aligned.slot_relations();
    let (qo_p, qo_h) = aligned.object_quantifiers;
    let inner = table.get(qo_p, qo_h, slots.object, slots.verb_phrase);
    let side = match aligned.negations {
        (false, false) => None,
        (true, false) => Some(NegatedSide::Premise),
        (false, true) => Some(NegatedSide::Hypothesis),
        (true, true) => Some(NegatedSide::Both),
    };
    let body = match side {
        None => inner,
        Some(side) => inner
            .iter()
            .fold(RelationSet::EMPTY, |acc, r| acc.union(negation_conjugate(r, side))),
    };
    let (qs_p, qs_h) = aligned.subject_quantifiers;
    let root = body
        .iter()
        .fold(RelationSet::EMPTY, |acc, k| acc.union(table.get(qs_p, qs_h, slots.subject, k)));
    NodeRelations { slots, inner, body, root }
}

pub fn sentence_relation(pair: &NliPair, table: &QuantifierTable) -> RelationSet {
    node_relations(pair, table).root
}

fn relation_label(r: SemRelation) -> Label {
    match r {
        SemRelation::Equivalence | SemRelation::Forward => Label::Entailment,
        SemRelation::Negation | SemRelation::Alternation => Label::Contradiction,
        SemRelation::Reverse | SemRelation::Cover | SemRelation::Independence => Label::Neutral,
    }
}

/// How a relation set whose members carry different labels is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LabelRule {
    /// Mixed sets are neutral.
    #[default]
    Disjunctive,
    /// Mixed sets are ambiguous and deferred to the oracle.
    Unanimous,
}

/// Outcome of reading a label off a relation set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetLabel {
    Determinate(Label),
    Ambiguous,
}

pub fn relation_set_to_label(set: RelationSet, rule: LabelRule) -> Result<SetLabel, NatLogError> {
    let mut labels = set.iter().map(relation_label);
    let first = labels.next().ok_or(NatLogError::EmptySet)?;
    if labels.all(|l| l == first) {
        return Ok(SetLabel::Determinate(first));
    }
    Ok(match rule {
        LabelRule::Disjunctive => SetLabel::Determinate(Label::Neutral),
        LabelRule::Unanimous => SetLabel::Ambiguous,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Natlog,
    OracleFallback,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Natlog => "natlog",
            Provenance::OracleFallback => "oracle-fallback",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NatLogLabel {
    pub label: Label,
    pub provenance: Provenance,
    pub relations: RelationSet,
}

/// The compositional labeler.
#[derive(Clone, Copy, Debug)]
pub struct NatLog {
    table: &'static QuantifierTable,
    rule: LabelRule,
    fallback: Option<Oracle>,
}

impl Default for NatLog {
    fn default() -> Self {
        NatLog::new()
    }
}

impl NatLog {
    /// Shipped tables, disjunctive rule, oracle fallback at the default bound.
    pub fn new() -> NatLog {
        NatLog {
            table: QuantifierTable::standard(),
            rule: LabelRule::default(),
            fallback: Some(Oracle::default()),
        }
    }

    pub fn with_table(self, table: &'static QuantifierTable) -> NatLog {
        NatLog { table, ..self }
    }

    pub fn with_rule(self, rule: LabelRule) -> NatLog {
        NatLog { rule, ..self }
    }

    /// `None` disables the fallback; ambiguous sets then fail to label.
    pub fn with_fallback(self, fallback: Option<Oracle>) -> NatLog {
        NatLog { fallback, ..self }
    }

    pub fn table(&self) -> &'static QuantifierTable {
        self.table
    }

    pub fn relations(&self, pair: &NliPair) -> NodeRelations {
        node_relations(pair, self.table)
    }

    /// `None` when the set is ambiguous under the rule.
    pub fn label_without_fallback(&self, pair: &NliPair) -> Option<Label> {
        match relation_set_to_label(sentence_relation(pair, self.table), self.rule).expect("composition yields non-empty sets") {
            SetLabel::Determinate(l) => Some(l),
            SetLabel::Ambiguous => None,
        }
    }

    pub fn label(&self, pair: &NliPair) -> Result<NatLogLabel, NatLogError> {
        let relations = sentence_relation(pair, self.table);
        match relation_set_to_label(relations, self.rule)? {
            SetLabel::Determinate(label) => Ok(NatLogLabel {
                label,
                provenance: Provenance::Natlog,
                relations,
            }),
            SetLabel::Ambiguous => {
                let oracle = self.fallback.ok_or(NatLogError::EmptySet)?;
                let label = oracle.label(pair)?;
                Ok(NatLogLabel {
                    label,
                    provenance: Provenance::OracleFallback,
                    relations,
                })
            }
        }
    }
}
