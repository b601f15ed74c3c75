//! Bounded finite-model search over the composite signature.
//!
//! Formulas are grounded over a fixed domain size and handed to a CDCL
//! solver. The fragment has no equality, so any model can be grown by
//! duplicating an element; satisfiability within a bound therefore only
//! needs a search at the bound itself, and smaller sizes are tried first
//! only to keep witnesses small.

mod ground;
mod model;
pub mod sat;

use thiserror::Error;

use crate::folsem::{aux_premises, build_signature_with, translate, AtomicEncoding, Formula, InclusionLinking, Role, Signature, Var};
use crate::fragment::{Lexicon, NliPair};
use crate::natlog::Label;
use crate::relations::{region, SemRelation};

pub use model::{eval, satisfies_all, Assignment, Extension, FiniteModel};

/// Default domain-size bound.
pub const DEFAULT_BOUND: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("free variable {0} has no assignment")]
    Unassigned(Var),
    #[error("{which} is not contingent given the background premises within bound {bound}")]
    DegenerateProposition { which: &'static str, bound: usize },
    #[error("satisfiability pattern {pattern:#06b} matches no relation")]
    ImpossiblePattern { pattern: u8 },
    #[error("countermodel does not satisfy the formulas it was found for")]
    InvalidWitness,
    #[error("bound {bound} is below the minimum {minimum}")]
    BoundTooSmall { bound: usize, minimum: usize },
}

/// Searches domain sizes `1..=bound` for a model of the conjunction.
pub fn find_model(formulas: &[Formula], bound: usize) -> Option<FiniteModel> {
    assert!(bound >= 1, "bound must be at least 1");
    if !is_satisfiable_at(formulas, bound) {
        return None;
    }
    (1..=bound).find_map(|n| ground::Grounding::new(formulas, n).solve())
}

/// Satisfiability within `bound`, checked at the bound alone.
pub fn is_satisfiable(formulas: &[Formula], bound: usize) -> bool {
    assert!(bound >= 1, "bound must be at least 1");
    is_satisfiable_at(formulas, bound)
}

fn is_satisfiable_at(formulas: &[Formula], size: usize) -> bool {
    ground::Grounding::new(formulas, size).solve().is_some()
}

fn with(base: &[Formula], extra: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut out = base.to_vec();
    out.extend(extra);
    out
}

/// Satisfiability of the four region conjunctions of `phi` and `psi`, as a
/// region bit pattern.
pub fn region_satisfiability(phi: &Formula, psi: &Formula, aux: &[Formula], bound: usize) -> u8 {
    let mut pattern = 0;
    for (bit, p, q) in [
        (region::BOTH, true, true),
        (region::LEFT_ONLY, true, false),
        (region::RIGHT_ONLY, false, true),
        (region::NEITHER, false, false),
    ] {
        let lit = |f: &Formula, pos: bool| if pos { f.clone() } else { Formula::not(f.clone()) };
        if is_satisfiable(&with(aux, [lit(phi, p), lit(psi, q)]), bound) {
            pattern |= bit;
        }
    }
    pattern
}

/// The relation between two contingent propositions given `aux`.
pub fn formula_relation(phi: &Formula, psi: &Formula, aux: &[Formula], bound: usize) -> Result<SemRelation, OracleError> {
    let pattern = region_satisfiability(phi, psi, aux, bound);
    let left = pattern & (region::BOTH | region::LEFT_ONLY) != 0 && pattern & (region::RIGHT_ONLY | region::NEITHER) != 0;
    if !left {
        return Err(OracleError::DegenerateProposition {
            which: "first proposition",
            bound,
        });
    }
    let right = pattern & (region::BOTH | region::RIGHT_ONLY) != 0 && pattern & (region::LEFT_ONLY | region::NEITHER) != 0;
    if !right {
        return Err(OracleError::DegenerateProposition {
            which: "second proposition",
            bound,
        });
    }
    SemRelation::from_regions(pattern).ok_or(OracleError::ImpossiblePattern { pattern })
}

/// First-order encoding of one pair.
#[derive(Clone, Debug)]
pub struct PairEncoding {
    pub signature: Signature,
    pub premise: Formula,
    pub hypothesis: Formula,
    /// Linking constraints followed by the aux premises.
    pub background: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub label: Label,
    /// A model of the background, the premise and the negated hypothesis.
    pub against_entailment: Option<FiniteModel>,
    /// A model of the background, the premise and the hypothesis.
    pub against_contradiction: Option<FiniteModel>,
    pub bound_used: usize,
}

impl OracleVerdict {
    /// Builds a verdict, re-checking every witness against its formulas.
    pub fn new(
        premise: &Formula,
        hypothesis: &Formula,
        background: &[Formula],
        against_entailment: Option<FiniteModel>,
        against_contradiction: Option<FiniteModel>,
        bound_used: usize,
    ) -> Result<OracleVerdict, OracleError> {
        let check = |model: &Option<FiniteModel>, hyp: Formula| -> Result<(), OracleError> {
            if let Some(m) = model {
                if m.size() > bound_used || !satisfies_all(&with(background, [premise.clone(), hyp]), m)? {
                    return Err(OracleError::InvalidWitness);
                }
            }
            Ok(())
        };
        check(&against_entailment, Formula::not(hypothesis.clone()))?;
        check(&against_contradiction, hypothesis.clone())?;
        let label = match (&against_entailment, &against_contradiction) {
            (None, _) => Label::Entailment,
            (Some(_), None) => Label::Contradiction,
            (Some(_), Some(_)) => Label::Neutral,
        };
        Ok(OracleVerdict {
            label,
            against_entailment,
            against_contradiction,
            bound_used,
        })
    }
}

/// Label oracle: bounded-complete model search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    bound: usize,
    linking: InclusionLinking,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            bound: DEFAULT_BOUND,
            linking: InclusionLinking::default(),
        }
    }
}

impl Oracle {
    pub const MIN_BOUND: usize = 2;

    pub fn new(bound: usize) -> Result<Oracle, OracleError> {
        if bound < Self::MIN_BOUND {
            return Err(OracleError::BoundTooSmall {
                bound,
                minimum: Self::MIN_BOUND,
            });
        }
        Ok(Oracle {
            bound,
            linking: InclusionLinking::default(),
        })
    }

    pub fn with_linking(self, linking: InclusionLinking) -> Oracle {
        Oracle { linking, ..self }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn linking(&self) -> InclusionLinking {
        self.linking
    }

    pub fn encode(&self, pair: &NliPair) -> PairEncoding {
        let signature = build_signature_with(pair, self.linking);
        let premise = translate(&pair.premise, Role::Premise, &signature);
        let hypothesis = translate(&pair.hypothesis, Role::Hypothesis, &signature);
        let mut background = signature.constraints.clone();
        background.extend(aux_premises(&signature));
        PairEncoding {
            signature,
            premise,
            hypothesis,
            background,
        }
    }

    pub fn decide_label(&self, pair: &NliPair) -> Result<OracleVerdict, OracleError> {
        let enc = self.encode(pair);
        self.decide_formulas(&enc.premise, &enc.hypothesis, &enc.background)
    }

    /// Labels an arbitrary premise/hypothesis pair of closed formulas.
    pub fn decide_formulas(&self, premise: &Formula, hypothesis: &Formula, background: &[Formula]) -> Result<OracleVerdict, OracleError> {
        let against_entailment = find_model(&with(background, [premise.clone(), Formula::not(hypothesis.clone())]), self.bound);
        let against_contradiction = find_model(&with(background, [premise.clone(), hypothesis.clone()]), self.bound);
        if against_entailment.is_none() && against_contradiction.is_none() {
            return Err(OracleError::DegenerateProposition {
                which: "premise",
                bound: self.bound,
            });
        }
        OracleVerdict::new(
            premise,
            hypothesis,
            background,
            against_entailment,
            against_contradiction,
            self.bound,
        )
    }

    /// Label only, skipping witness construction.
    pub fn label(&self, pair: &NliPair) -> Result<Label, OracleError> {
        let enc = self.encode(pair);
        self.label_formulas(&enc.premise, &enc.hypothesis, &enc.background)
    }

    /// Label under the one-predicate-per-word encoding.
    pub fn label_atomic(&self, pair: &NliPair, lexicon: &Lexicon) -> Result<Label, OracleError> {
        let enc = AtomicEncoding::build(pair, lexicon);
        self.label_formulas(&enc.premise, &enc.hypothesis, &enc.aux)
    }

    pub fn label_formulas(&self, premise: &Formula, hypothesis: &Formula, background: &[Formula]) -> Result<Label, OracleError> {
        let sat = |hyp: Formula| is_satisfiable(&with(background, [premise.clone(), hyp]), self.bound);
        match (sat(Formula::not(hypothesis.clone())), sat(hypothesis.clone())) {
            (false, false) => Err(OracleError::DegenerateProposition {
                which: "premise",
                bound: self.bound,
            }),
            (false, true) => Ok(Label::Entailment),
            (true, false) => Ok(Label::Contradiction),
            (true, true) => Ok(Label::Neutral),
        }
    }
}
