use mqnli::natlog::{QuantifierTable, QUANTIFIER_TABLE_BOUND};
use mqnli::relations::{classify_pair, converse, derive_join_table, derive_negation_table, negation_conjugate, NegatedSide, RelationError};
use mqnli::{Quantifier, RelationSet, SemRelation};
use std::collections::BTreeSet;

use SemRelation::*;

/// Relation of two bitmask sets over a universe of `n` elements, from the
/// textbook definitions rather than region patterns.
fn relation(x: u32, y: u32, n: u32) -> SemRelation {
    let all = (1 << n) - 1;
    let subset = x & !y == 0;
    let superset = y & !x == 0;
    let disjoint = x & y == 0;
    let exhaustive = x | y == all;
    match (subset, superset, disjoint, exhaustive) {
        (true, true, _, _) => Equivalence,
        (true, false, _, _) => Forward,
        (false, true, _, _) => Reverse,
        (false, false, true, true) => Negation,
        (false, false, true, false) => Alternation,
        (false, false, false, true) => Cover,
        (false, false, false, false) => Independence,
    }
}

fn brute_join(max: u32) -> Vec<RelationSet> {
    let mut out = vec![RelationSet::EMPTY; 49];
    for n in 1..=max {
        let all = (1u32 << n) - 1;
        let sets: Vec<u32> = (1..all).collect();
        for &x in &sets {
            for &y in &sets {
                for &z in &sets {
                    out[relation(x, y, n).index() * 7 + relation(y, z, n).index()].insert(relation(x, z, n));
                }
            }
        }
    }
    out
}

fn set(items: &[SemRelation]) -> RelationSet {
    let mut s = RelationSet::EMPTY;
    for r in items {
        s.insert(*r);
    }
    s
}

#[test]
fn join_table_matches_independent_enumeration() {
    let join = derive_join_table().unwrap();
    let brute = brute_join(6);
    for a in SemRelation::ALL {
        for b in SemRelation::ALL {
            assert_eq!(join.get(a, b), brute[a.index() * 7 + b.index()], "({a}, {b})");
        }
    }
}

#[test]
fn join_spot_values() {
    let join = derive_join_table().unwrap();
    assert!(join.get(Negation, Negation).contains(Equivalence));
    assert_eq!(join.get(Negation, Negation), set(&[Equivalence]));
    assert!(join.get(Forward, Forward).contains(Forward));
    assert!(!join.get(Forward, Forward).contains(Negation));
    assert_eq!(join.get(Forward, Forward), set(&[Forward]));
    assert_eq!(join.get(Forward, Independence), set(&[Forward, Alternation, Independence]));
    for r in SemRelation::ALL {
        assert_eq!(join.get(Equivalence, r), RelationSet::single(r));
        assert_eq!(join.get(r, Equivalence), RelationSet::single(r));
    }
}

#[test]
fn join_changes_from_four_to_five_and_then_settles() {
    let four = brute_join(4);
    let five = brute_join(5);
    assert_ne!(four, five);
    assert_eq!(five, brute_join(6));
    assert_eq!(five, brute_join(7));
}

#[test]
fn converse_agrees_with_swapped_sets() {
    for n in 1..=4u32 {
        let all = (1u32 << n) - 1;
        for x in 1..all {
            for y in 1..all {
                assert_eq!(relation(y, x, n), converse(relation(x, y, n)));
            }
        }
    }
}

#[test]
fn classify_pair_matches_the_definitions() {
    for n in 1..=4u32 {
        let universe: BTreeSet<u32> = (0..n).collect();
        let members = |m: u32| -> BTreeSet<u32> { (0..n).filter(|i| m >> i & 1 == 1).collect() };
        let all = (1u32 << n) - 1;
        for x in 1..all {
            for y in 1..all {
                assert_eq!(classify_pair(&members(x), &members(y), &universe).unwrap(), relation(x, y, n));
            }
        }
    }
}

#[test]
fn negation_table_examples_and_saturation() {
    let table = derive_negation_table().unwrap();
    assert_eq!(table.get(Equivalence, NegatedSide::Premise), set(&[Negation]));
    assert_eq!(table.get(Equivalence, NegatedSide::Both), set(&[Equivalence]));
    assert_eq!(table.get(Forward, NegatedSide::Both), set(&[Reverse]));
    assert_eq!(table.get(Alternation, NegatedSide::Premise), set(&[Reverse]));
    assert_eq!(table.get(Cover, NegatedSide::Premise), set(&[Forward]));
    for r in SemRelation::ALL {
        for side in NegatedSide::ALL {
            assert_eq!(negation_conjugate(r, side), table.get(r, side));
            assert!(!table.get(r, side).is_empty());
        }
    }
}

#[test]
fn negation_table_matches_independent_enumeration() {
    let table = derive_negation_table().unwrap();
    for r in SemRelation::ALL {
        for side in NegatedSide::ALL {
            let mut expected = RelationSet::EMPTY;
            for n in 1..=5u32 {
                let all = (1u32 << n) - 1;
                for x in 1..all {
                    for y in 1..all {
                        if relation(x, y, n) != r {
                            continue;
                        }
                        let (nx, ny) = (all & !x, all & !y);
                        expected.insert(match side {
                            NegatedSide::Premise => relation(nx, y, n),
                            NegatedSide::Hypothesis => relation(x, ny, n),
                            NegatedSide::Both => relation(nx, ny, n),
                        });
                    }
                }
            }
            assert_eq!(table.get(r, side), expected, "({r}, {})", side.name());
        }
    }
}

#[test]
fn unstable_tables_are_reported() {
    let err = RelationError::TableUnstable {
        smaller: 4,
        larger: 5,
        left: Forward,
        right: Independence,
    };
    assert!(err.to_string().contains("4") && err.to_string().contains("5"));
}

#[test]
fn shipped_quantifier_table_equals_a_fresh_derivation() {
    let fresh = QuantifierTable::derive(QUANTIFIER_TABLE_BOUND).unwrap();
    assert_eq!(fresh.first_difference(QuantifierTable::standard()), None);
    assert_eq!(fresh.to_tsv(), QuantifierTable::standard().to_tsv());
}

#[test]
fn quantifier_table_invariants() {
    let table = QuantifierTable::standard();
    for p in Quantifier::ALL {
        for h in Quantifier::ALL {
            for r in SemRelation::ALL {
                for s in SemRelation::ALL {
                    assert!(!table.get(p, h, r, s).is_empty());
                }
            }
        }
        assert_eq!(table.get(p, p, Equivalence, Equivalence), set(&[Equivalence]));
    }
    use Quantifier::*;
    for (p, h, r) in [
        (Every, Some, Forward),
        (Some, NotEvery, Cover),
        (Every, No, Alternation),
        (Some, No, Negation),
        (Every, NotEvery, Negation),
    ] {
        assert_eq!(table.get(p, h, Equivalence, Equivalence), RelationSet::single(r), "{p:?} {h:?}");
        assert_eq!(
            table.get(h, p, Equivalence, Equivalence),
            RelationSet::single(converse(r)),
            "{h:?} {p:?}"
        );
    }
}
