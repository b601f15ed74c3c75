use std::collections::HashSet;

use mqnli::corpus::{
    corpus_stats, equalize, equalize_reverse, generate_corpus, is_informative, parity_holds, sample_pair, sample_pair_relation_balanced,
    CorpusConfig, Split,
};
use mqnli::natlog::{node_relations, sentence_relation, LabelRule, QuantifierTable};
use mqnli::{rng, Label, Lexicon, NatLog, NliPair, Oracle, RelationSet, SemRelation, Sentence};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sentence(lex: &Lexicon, seed: u64) -> Sentence {
    lex.sample_sentence(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn balanced(lex: &Lexicon, seed: u64) -> NliPair {
    sample_pair_relation_balanced(&mut ChaCha8Rng::seed_from_u64(seed), lex)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parse_inverts_render(seed: u64) {
        for lex in [Lexicon::synthetic(100), Lexicon::bundled()] {
            let s = sentence(&lex, seed);
            prop_assert_eq!(lex.parse_str(&lex.render_string(&s)).unwrap(), s);
        }
    }

    #[test]
    fn every_sentence_entails_itself(seed: u64) {
        let lex = Lexicon::synthetic(100);
        let s = sentence(&lex, seed);
        let pair = NliPair::new(s, s);
        prop_assert_eq!(sentence_relation(&pair, QuantifierTable::standard()), RelationSet::single(SemRelation::Equivalence));
        prop_assert_eq!(NatLog::new().label(&pair).unwrap().label, Label::Entailment);
    }

    #[test]
    fn swapping_the_pair_conversely_relates(seed: u64) {
        let lex = Lexicon::synthetic(100);
        let pair = balanced(&lex, seed);
        let table = QuantifierTable::standard();
        let forward = sentence_relation(&pair, table);
        let backward = sentence_relation(&pair.swapped(), table);
        let mut converse = RelationSet::EMPTY;
        for r in forward.iter() {
            converse.insert(mqnli::relations::converse(r));
        }
        prop_assert_eq!(backward, converse);
    }

    #[test]
    fn slot_relations_stay_in_the_join_free_fragment(seed: u64) {
        use SemRelation::*;
        let lex = Lexicon::synthetic(100);
        let slots = node_relations(&balanced(&lex, seed), QuantifierTable::standard()).slots;
        for r in [slots.subject, slots.verb_phrase, slots.object] {
            prop_assert!(matches!(r, Independence | Forward | Reverse | Equivalence));
        }
    }

    #[test]
    fn equalizing_removes_independence(seed: u64) {
        let lex = Lexicon::synthetic(100);
        let pair = balanced(&lex, seed);
        let slots = node_relations(&equalize(&pair), QuantifierTable::standard()).slots;
        for r in [slots.subject, slots.verb_phrase, slots.object] {
            prop_assert_ne!(r, SemRelation::Independence);
        }
    }
}

#[test]
fn fragment_size() {
    let lex = Lexicon::synthetic(100);
    assert_eq!(lex.count_sentences(), 32_969_632_000_000);
    assert_eq!(Lexicon::bundled().count_sentences(), 32_969_632_000_000);
}

#[test]
fn rendering_is_injective_on_a_large_sample() {
    let lex = Lexicon::bundled();
    let mut rng = rng::stream(11, "test-injective");
    let mut seen = std::collections::HashMap::new();
    for _ in 0..100_000 {
        let s = lex.sample_sentence(&mut rng);
        let text = lex.render_string(&s);
        if let Some(previous) = seen.insert(text.clone(), s) {
            assert_eq!(previous, s, "{text}");
        }
    }
}

#[test]
fn contradiction_is_symmetric() {
    let lex = Lexicon::synthetic(100);
    let natlog = NatLog::new();
    let mut rng = rng::stream(12, "test-contradiction");
    let mut contradictions = 0;
    for i in 0..100_000 {
        let pair = if i % 2 == 0 {
            sample_pair_relation_balanced(&mut rng, &lex)
        } else {
            sample_pair(&mut rng, &lex)
        };
        let forward = natlog.label(&pair).unwrap().label;
        let backward = natlog.label(&pair.swapped()).unwrap().label;
        assert_eq!(forward == Label::Contradiction, backward == Label::Contradiction);
        contradictions += usize::from(forward == Label::Contradiction);
    }
    assert!(contradictions > 0);
}

#[test]
fn sentence_relation_examples() {
    use SemRelation::*;
    let lex = Lexicon::bundled();
    let table = QuantifierTable::standard();
    let rel = |p: &str, h: &str| sentence_relation(&NliPair::new(lex.parse_str(p).unwrap(), lex.parse_str(h).unwrap()), table);
    assert_eq!(
        rel("every Swiss baker sells some rock", "some baker sells some rock"),
        RelationSet::single(Forward)
    );
    assert_eq!(
        rel("some baker sells some rock", "no baker sells some rock"),
        RelationSet::single(Negation)
    );
    assert_eq!(
        rel("every baker sells some rock", "every baker does not sells some rock"),
        RelationSet::single(Alternation)
    );
    assert_eq!(
        rel("some baker sells some rock", "some baker does not sells some rock"),
        RelationSet::single(Cover)
    );
    let mixed = rel("every Swiss baker madly rubs some rock", "every wild baker sells some rock");
    assert!(mixed.contains(Independence));
}

#[test]
fn unanimous_rule_falls_back_on_few_pairs() {
    let lex = Lexicon::synthetic(100);
    let natlog = NatLog::new().with_rule(LabelRule::Unanimous).with_fallback(None);
    let disjunctive = NatLog::new().with_fallback(None);
    let oracle = Oracle::default();
    let mut rng = rng::stream(13, "test-unanimous");
    let (mut ambiguous, total) = (0, 4000);
    for _ in 0..total {
        let pair = sample_pair_relation_balanced(&mut rng, &lex);
        match natlog.label_without_fallback(&pair) {
            Some(label) => assert_eq!(Some(label), disjunctive.label_without_fallback(&pair)),
            None => {
                ambiguous += 1;
                assert_eq!(disjunctive.label_without_fallback(&pair), Some(Label::Neutral));
                assert_eq!(oracle.label(&pair).unwrap(), Label::Neutral);
            }
        }
    }
    let rate = ambiguous as f64 / total as f64;
    eprintln!("unanimous-rule fallback rate {rate:.4}");
    assert!(rate < 0.5);
}

#[test]
fn both_equalization_directions_agree_on_informativeness() {
    let lex = Lexicon::synthetic(100);
    let natlog = NatLog::new();
    let mut rng = rng::stream(14, "test-equalize");
    let mut disagreements = 0;
    for _ in 0..1000 {
        let pair = sample_pair_relation_balanced(&mut rng, &lex);
        let label = natlog.label(&pair).unwrap().label;
        let forward = is_informative(&pair, label, &natlog).unwrap();
        let backward = label == Label::Neutral && natlog.label(&equalize_reverse(&pair)).unwrap().label != Label::Neutral;
        disagreements += usize::from(forward != backward);
    }
    eprintln!("equalization direction disagreements {disagreements}/1000");
    assert!(disagreements < 50);
}

fn small_config(seed: u64) -> CorpusConfig {
    CorpusConfig {
        seed,
        train: 4000,
        dev: 500,
        test: 500,
        ..CorpusConfig::default()
    }
}

#[test]
fn informative_fraction_is_stable_across_seeds() {
    let lex = Lexicon::synthetic(100);
    let (natlog, oracle) = (NatLog::new(), Oracle::default());
    let fractions: Vec<f64> = (0..3)
        .map(|seed| {
            generate_corpus(&small_config(seed), &lex, &natlog, &oracle)
                .unwrap()
                .stats
                .informative_fraction_of_neutral
        })
        .collect();
    let (lo, hi) = fractions.iter().fold((1.0f64, 0.0f64), |(lo, hi), f| (lo.min(*f), hi.max(*f)));
    assert!(hi - lo <= 0.04, "{fractions:?}");
}

#[test]
fn stats_are_consistent_with_the_records() {
    let lex = Lexicon::synthetic(100);
    let corpus = generate_corpus(&small_config(7), &lex, &NatLog::new(), &Oracle::default()).unwrap();
    let records: Vec<_> = corpus.records().cloned().collect();
    let stats = corpus_stats(&records);
    assert_eq!(stats.records, 5000);
    assert_eq!(stats.labels.values().sum::<usize>(), 5000);
    for (slot, counts) in &stats.slot_relations {
        assert_eq!(counts.values().sum::<usize>(), 5000, "{slot}");
    }
    for (label, cell) in &stats.parity {
        match label {
            Label::Entailment => assert_eq!(cell.odd, 0),
            Label::Contradiction => assert_eq!(cell.even, 0),
            Label::Neutral => {}
        }
    }
    for r in &records {
        assert!(parity_holds(r.label, r.meta.negation_count));
    }
    let keys: HashSet<String> = records.iter().map(|r| r.key()).collect();
    assert_eq!(keys.len(), records.len());
    assert_eq!(
        corpus.splits.iter().map(|(s, r)| (*s, r.len())).collect::<Vec<_>>(),
        vec![(Split::Train, 4000), (Split::Dev, 500), (Split::Test, 500)]
    );
}
