//! Corpus generation: relation-controlled sampling, label quotas, splits,
//! informativeness, statistics and serialization.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::folsem::aux_premises;
use crate::fragment::{Category, Lexicon, LexiconSource, NliPair, ParseError, Sentence, Word};
use crate::natlog::{slot_relations, word_relation, Label, NatLog, NatLogError, Provenance, SlotRelations};
use crate::oracle::{Oracle, OracleError};
use crate::relations::SemRelation;
use crate::rng;

/// Relations a composite slot can take.
pub const SLOT_RELATIONS: [SemRelation; 4] = [
    SemRelation::Equivalence,
    SemRelation::Forward,
    SemRelation::Reverse,
    SemRelation::Independence,
];

/// Candidates drawn per sampling batch; each batch has its own rng stream.
const BATCH: u64 = 4096;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("quota for {label} not reached after {attempts} candidates")]
    QuotaExhausted { label: Label, attempts: u64 },
    #[error("parity violated: {label} with negation count {count} in {premise:?} / {hypothesis:?}")]
    ParityViolation {
        label: Label,
        count: u32,
        premise: String,
        hypothesis: String,
    },
    #[error("audit mismatch: natlog says {natlog}, oracle says {oracle} for {premise:?} / {hypothesis:?}")]
    AuditMismatch {
        natlog: Label,
        oracle: Label,
        premise: String,
        hypothesis: String,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    NatLog(#[from] NatLogError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Jsonl,
    Tsv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Jsonl => "jsonl",
            Format::Tsv => "tsv",
        }
    }
}

impl FromStr for Format {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "tsv" => Ok(Format::Tsv),
            other => Err(CorpusError::Config(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Dev, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

/// Flat generation settings; unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
    pub seed: u64,
    pub balance_labels: bool,
    pub relation_balanced: bool,
    pub oracle_bound: usize,
    pub format: Format,
    pub out: String,
    /// Path to a sectioned wordlist, or `"synthetic"` for generated tokens.
    /// The bundled English list is used when absent.
    pub wordlist: Option<String>,
    pub witnesses: bool,
    /// Candidate ceiling as a multiple of the requested corpus size.
    pub max_attempts_factor: u64,
    /// Fraction of emitted records re-labeled by the oracle.
    pub audit_rate: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            train: 30_000,
            dev: 1_000,
            test: 1_000,
            seed: 0,
            balance_labels: true,
            relation_balanced: true,
            oracle_bound: crate::oracle::DEFAULT_BOUND,
            format: Format::Jsonl,
            out: "corpus".to_string(),
            wordlist: None,
            witnesses: false,
            max_attempts_factor: 200,
            audit_rate: 0.01,
        }
    }
}

impl CorpusConfig {
    pub fn size(&self, split: Split) -> usize {
        match split {
            Split::Train => self.train,
            Split::Dev => self.dev,
            Split::Test => self.test,
        }
    }

    pub fn lexicon_source(&self) -> LexiconSource {
        match self.wordlist.as_deref() {
            None => LexiconSource::Bundled,
            Some("synthetic") => LexiconSource::Synthetic,
            Some(path) => LexiconSource::Wordlist(path.into()),
        }
    }

    pub fn total(&self) -> usize {
        self.train + self.dev + self.test
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.oracle_bound < Oracle::MIN_BOUND {
            return Err(CorpusError::Config(format!("oracle_bound must be at least {}", Oracle::MIN_BOUND)));
        }
        if !(0.0..=1.0).contains(&self.audit_rate) {
            return Err(CorpusError::Config("audit_rate must lie in [0, 1]".to_string()));
        }
        if self.max_attempts_factor == 0 {
            return Err(CorpusError::Config("max_attempts_factor must be positive".to_string()));
        }
        Ok(())
    }
}

/// Per-slot relations as stored in records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotRelationMeta {
    pub subject_np: SemRelation,
    pub vp: SemRelation,
    pub object_np: SemRelation,
}

impl From<SlotRelations> for SlotRelationMeta {
    fn from(s: SlotRelations) -> Self {
        SlotRelationMeta {
            subject_np: s.subject,
            vp: s.verb_phrase,
            object_np: s.object,
        }
    }
}

/// Printed countermodels, present only when requested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub against_entailment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub against_contradiction: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub slot_relations: SlotRelationMeta,
    pub negation_count: u32,
    pub labeler: String,
    pub informative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<WitnessMeta>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRecord {
    pub premise: Vec<String>,
    pub hypothesis: Vec<String>,
    pub label: Label,
    pub meta: RecordMeta,
}

impl ExampleRecord {
    pub fn new(pair: &NliPair, lexicon: &Lexicon, label: Label, labeler: Provenance) -> ExampleRecord {
        let tokens = |s: &Sentence| lexicon.render(s).into_iter().map(str::to_string).collect();
        ExampleRecord {
            premise: tokens(&pair.premise),
            hypothesis: tokens(&pair.hypothesis),
            label,
            meta: RecordMeta {
                slot_relations: slot_relations(pair).into(),
                negation_count: pair.negation_count(),
                labeler: labeler.name().to_string(),
                informative: false,
                witnesses: None,
            },
        }
    }

    pub fn pair(&self, lexicon: &Lexicon) -> Result<NliPair, ParseError> {
        Ok(NliPair::new(lexicon.parse(&self.premise)?, lexicon.parse(&self.hypothesis)?))
    }

    pub fn premise_string(&self) -> String {
        self.premise.join(" ")
    }

    pub fn hypothesis_string(&self) -> String {
        self.hypothesis.join(" ")
    }

    /// The pair-level identity used for deduplication and disjointness.
    pub fn key(&self) -> String {
        format!("{}\t{}", self.premise_string(), self.hypothesis_string())
    }
}

/// Whether the label is compatible with the parity of the negation count.
pub fn parity_holds(label: Label, negation_count: u32) -> bool {
    match label {
        Label::Contradiction => negation_count % 2 == 1,
        Label::Entailment => negation_count % 2 == 0,
        Label::Neutral => true,
    }
}

fn distinct_word<R: Rng + ?Sized>(rng: &mut R, lexicon: &Lexicon, category: Category, other: Word) -> Word {
    let n = lexicon.size(category) as u16;
    assert!(n >= 2, "independence between distinct words needs two words per category");
    Word((other.0 + 1 + rng.gen_range(0..n - 1)) % n)
}

type Phrase = (Option<Word>, Word);

/// Modifier/head words for both sides realizing `relation`.
fn realize<R: Rng + ?Sized>(rng: &mut R, lexicon: &Lexicon, relation: SemRelation, modifier: Category, head: Category) -> (Phrase, Phrase) {
    let h = lexicon.sample_word(rng, head);
    match relation {
        SemRelation::Equivalence => {
            let m = lexicon.sample_modifier(rng, modifier);
            ((m, h), (m, h))
        }
        SemRelation::Forward => ((Some(lexicon.sample_word(rng, modifier)), h), (None, h)),
        SemRelation::Reverse => ((None, h), (Some(lexicon.sample_word(rng, modifier)), h)),
        SemRelation::Independence => {
            if rng.gen_bool(0.5) {
                let other = distinct_word(rng, lexicon, head, h);
                (
                    (lexicon.sample_modifier(rng, modifier), h),
                    (lexicon.sample_modifier(rng, modifier), other),
                )
            } else {
                let m = lexicon.sample_word(rng, modifier);
                let other = distinct_word(rng, lexicon, modifier, m);
                ((Some(m), h), (Some(other), h))
            }
        }
        other => panic!("slot relation {other} is not realizable from words"),
    }
}

/// Two independently sampled sentences.
pub fn sample_pair<R: Rng + ?Sized>(rng: &mut R, lexicon: &Lexicon) -> NliPair {
    NliPair::new(lexicon.sample_sentence(rng), lexicon.sample_sentence(rng))
}

/// Function words sampled as in the fragment; each composite slot draws its
/// relation uniformly from [`SLOT_RELATIONS`] and realizes it with words.
pub fn sample_pair_relation_balanced<R: Rng + ?Sized>(rng: &mut R, lexicon: &Lexicon) -> NliPair {
    let mut pair = sample_pair(rng, lexicon);
    let draw = |rng: &mut R, modifier, head| {
        let relation = SLOT_RELATIONS[rng.gen_range(0..SLOT_RELATIONS.len())];
        realize(rng, lexicon, relation, modifier, head)
    };
    let ((pm, pn), (hm, hn)) = draw(rng, Category::Adjective, Category::Noun);
    (pair.premise.subject_adjective, pair.premise.subject_noun) = (pm, pn);
    (pair.hypothesis.subject_adjective, pair.hypothesis.subject_noun) = (hm, hn);
    let ((pm, pv), (hm, hv)) = draw(rng, Category::Adverb, Category::Verb);
    (pair.premise.adverb, pair.premise.verb) = (pm, pv);
    (pair.hypothesis.adverb, pair.hypothesis.verb) = (hm, hv);
    let ((pm, pn), (hm, hn)) = draw(rng, Category::Adjective, Category::Noun);
    (pair.premise.object_adjective, pair.premise.object_noun) = (pm, pn);
    (pair.hypothesis.object_adjective, pair.hypothesis.object_noun) = (hm, hn);
    pair
}

/// Replaces every hypothesis word independent of its aligned premise word
/// (both non-empty, distinct) by the premise word.
pub fn equalize(pair: &NliPair) -> NliPair {
    fn fix(p: Option<Word>, h: &mut Option<Word>) {
        if word_relation(p, *h) == SemRelation::Independence {
            *h = p;
        }
    }
    fn fix_head(p: Word, h: &mut Word) {
        *h = p;
    }
    let p = pair.premise;
    let mut h = pair.hypothesis;
    fix(p.subject_adjective, &mut h.subject_adjective);
    fix_head(p.subject_noun, &mut h.subject_noun);
    fix(p.adverb, &mut h.adverb);
    fix_head(p.verb, &mut h.verb);
    fix(p.object_adjective, &mut h.object_adjective);
    fix_head(p.object_noun, &mut h.object_noun);
    NliPair::new(p, h)
}

/// Equalization in the other direction: premise words replaced.
pub fn equalize_reverse(pair: &NliPair) -> NliPair {
    equalize(&pair.swapped()).swapped()
}

/// A neutral pair is informative when equalizing its independent words
/// makes it non-neutral.
pub fn is_informative(pair: &NliPair, label: Label, natlog: &NatLog) -> Result<bool, NatLogError> {
    if label != Label::Neutral {
        return Ok(false);
    }
    Ok(natlog.label(&equalize(pair))?.label != Label::Neutral)
}

/// Flags informative records in place and returns their indices.
pub fn informative_subset(records: &mut [ExampleRecord], lexicon: &Lexicon, natlog: &NatLog) -> Result<Vec<usize>, CorpusError> {
    let mut out = Vec::new();
    for (i, r) in records.iter_mut().enumerate() {
        let pair = r.pair(lexicon).map_err(|e| CorpusError::Format {
            line: i + 1,
            message: e.to_string(),
        })?;
        r.meta.informative = is_informative(&pair, r.label, natlog)?;
        if r.meta.informative {
            out.push(i);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ParityCell {
    pub even: usize,
    pub odd: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub sampled: usize,
    pub mismatches: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CorpusStats {
    pub records: usize,
    pub labels: BTreeMap<Label, usize>,
    pub split_labels: BTreeMap<String, BTreeMap<Label, usize>>,
    pub slot_relations: BTreeMap<String, BTreeMap<SemRelation, usize>>,
    pub parity: BTreeMap<Label, ParityCell>,
    pub fallbacks: usize,
    pub fallback_rate: f64,
    pub informative: usize,
    pub informative_fraction_of_neutral: f64,
    pub duplicates_rejected: usize,
    pub candidates: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<CorpusConfig>,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Distributional summary of a record list.
pub fn corpus_stats(records: &[ExampleRecord]) -> CorpusStats {
    let mut stats = CorpusStats {
        records: records.len(),
        ..Default::default()
    };
    for label in Label::ALL {
        stats.labels.insert(label, 0);
        stats.parity.insert(label, ParityCell::default());
    }
    for slot in ["subject_np", "vp", "object_np"] {
        stats
            .slot_relations
            .insert(slot.to_string(), SLOT_RELATIONS.iter().map(|r| (*r, 0)).collect());
    }
    for r in records {
        *stats.labels.entry(r.label).or_default() += 1;
        let cell = stats.parity.entry(r.label).or_default();
        if r.meta.negation_count % 2 == 0 {
            cell.even += 1;
        } else {
            cell.odd += 1;
        }
        let s = &r.meta.slot_relations;
        for (slot, rel) in [("subject_np", s.subject_np), ("vp", s.vp), ("object_np", s.object_np)] {
            *stats.slot_relations.get_mut(slot).expect("slot present").entry(rel).or_default() += 1;
        }
        if r.meta.labeler == Provenance::OracleFallback.name() {
            stats.fallbacks += 1;
        }
        if r.meta.informative {
            stats.informative += 1;
        }
    }
    stats.fallback_rate = ratio(stats.fallbacks, records.len());
    stats.informative_fraction_of_neutral = ratio(stats.informative, stats.labels[&Label::Neutral]);
    stats
}

/// A generated corpus: records per split plus statistics.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub splits: Vec<(Split, Vec<ExampleRecord>)>,
    pub stats: CorpusStats,
}

impl Corpus {
    pub fn records(&self) -> impl Iterator<Item = &ExampleRecord> {
        self.splits.iter().flat_map(|(_, r)| r.iter())
    }
}

/// Labeled candidate stream in deterministic order.
pub struct CandidateStream<'a> {
    lexicon: &'a Lexicon,
    seed: u64,
    relation_balanced: bool,
    batch: u64,
    drawn: u64,
    rng: rand_chacha::ChaCha8Rng,
}

impl<'a> CandidateStream<'a> {
    pub fn new(lexicon: &'a Lexicon, seed: u64, relation_balanced: bool) -> Self {
        CandidateStream {
            lexicon,
            seed,
            relation_balanced,
            batch: 0,
            drawn: 0,
            rng: rng::batch_stream(seed, "sampling", 0),
        }
    }
}

impl Iterator for CandidateStream<'_> {
    type Item = NliPair;

    fn next(&mut self) -> Option<NliPair> {
        if self.drawn == BATCH {
            self.batch += 1;
            self.drawn = 0;
            self.rng = rng::batch_stream(self.seed, "sampling", self.batch);
        }
        self.drawn += 1;
        Some(if self.relation_balanced {
            sample_pair_relation_balanced(&mut self.rng, self.lexicon)
        } else {
            sample_pair(&mut self.rng, self.lexicon)
        })
    }
}

fn quotas(size: usize, balance: bool) -> Option<[usize; 3]> {
    balance.then(|| {
        let third = size / 3;
        [third, third, size - 2 * third]
    })
}

/// Samples, labels, balances, splits, flags and audits a corpus.
pub fn generate_corpus(config: &CorpusConfig, lexicon: &Lexicon, natlog: &NatLog, oracle: &Oracle) -> Result<Corpus, CorpusError> {
    config.validate()?;
    let total = config.total();
    let ceiling = (total as u64).max(1).saturating_mul(config.max_attempts_factor);
    let mut remaining: Vec<(Split, usize, Option<[usize; 3]>)> = Split::ALL
        .iter()
        .map(|&s| (s, config.size(s), quotas(config.size(s), config.balance_labels)))
        .collect();
    let mut splits: Vec<(Split, Vec<ExampleRecord>)> = Split::ALL.iter().map(|&s| (s, Vec::with_capacity(config.size(s)))).collect();
    let mut seen: HashSet<String> = HashSet::with_capacity(total);
    let mut duplicates = 0usize;
    let mut candidates = 0u64;
    let mut filled = 0usize;
    let mut stream = CandidateStream::new(lexicon, config.seed, config.relation_balanced);
    while filled < total {
        if candidates >= ceiling {
            let label = remaining
                .iter()
                .find_map(|(_, _, q)| q.and_then(|q| Label::ALL.into_iter().find(|l| q[l.index()] > 0)))
                .unwrap_or(Label::Neutral);
            return Err(CorpusError::QuotaExhausted {
                label,
                attempts: candidates,
            });
        }
        candidates += 1;
        let pair = stream.next().expect("endless stream");
        let labeled = natlog.label(&pair)?;
        let slot = remaining
            .iter()
            .position(|(_, left, q)| *left > 0 && q.map_or(true, |q| q[labeled.label.index()] > 0));
        let Some(slot) = slot else { continue };
        let record = ExampleRecord::new(&pair, lexicon, labeled.label, labeled.provenance);
        if !seen.insert(record.key()) {
            duplicates += 1;
            continue;
        }
        if !parity_holds(record.label, record.meta.negation_count) {
            return Err(CorpusError::ParityViolation {
                label: record.label,
                count: record.meta.negation_count,
                premise: record.premise_string(),
                hypothesis: record.hypothesis_string(),
            });
        }
        let mut record = record;
        record.meta.informative = is_informative(&pair, record.label, natlog)?;
        if config.witnesses {
            record.meta.witnesses = Some(witnesses(&pair, oracle)?);
        }
        let (_, left, quota) = &mut remaining[slot];
        *left -= 1;
        if let Some(q) = quota {
            q[labeled.label.index()] -= 1;
        }
        splits[slot].1.push(record);
        filled += 1;
    }

    let all: Vec<ExampleRecord> = splits.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    let audit = audit_records(&all, lexicon, config.audit_rate, config.seed, oracle)?;
    let mut stats = corpus_stats(&all);
    for (split, records) in &splits {
        stats.split_labels.insert(split.name().to_string(), corpus_stats(records).labels);
    }
    stats.duplicates_rejected = duplicates;
    stats.candidates = candidates;
    stats.audit = Some(audit);
    stats.config = Some(config.clone());
    Ok(Corpus { splits, stats })
}

fn witnesses(pair: &NliPair, oracle: &Oracle) -> Result<WitnessMeta, CorpusError> {
    let verdict = oracle.decide_label(pair)?;
    let enc = oracle.encode(pair);
    let show = |m: &Option<crate::oracle::FiniteModel>| m.as_ref().map(|m| m.display(&enc.signature).to_string());
    Ok(WitnessMeta {
        against_entailment: show(&verdict.against_entailment),
        against_contradiction: show(&verdict.against_contradiction),
    })
}

/// Re-labels a deterministic sample of records with the oracle; any
/// disagreement is an error.
pub fn audit_records(
    records: &[ExampleRecord],
    lexicon: &Lexicon,
    rate: f64,
    seed: u64,
    oracle: &Oracle,
) -> Result<AuditReport, CorpusError> {
    let amount = ((records.len() as f64) * rate).ceil() as usize;
    let amount = amount.min(records.len());
    let mut rng = rng::stream(seed, "audit");
    let mut picked = index::sample(&mut rng, records.len(), amount).into_vec();
    picked.sort_unstable();
    for &i in &picked {
        let r = &records[i];
        let pair = r.pair(lexicon).map_err(|e| CorpusError::Format {
            line: i + 1,
            message: e.to_string(),
        })?;
        let label = oracle.label(&pair)?;
        if label != r.label {
            return Err(CorpusError::AuditMismatch {
                natlog: r.label,
                oracle: label,
                premise: r.premise_string(),
                hypothesis: r.hypothesis_string(),
            });
        }
    }
    Ok(AuditReport {
        sampled: picked.len(),
        mismatches: 0,
        bound: oracle.bound(),
    })
}

/// Header line carried by TSV files.
pub fn tsv_header(seed: u64, config_json: &str) -> String {
    format!("# seed={seed} config={config_json}")
}

pub fn write_records<W: Write>(mut out: W, records: &[ExampleRecord], format: Format, header: Option<&str>) -> Result<(), CorpusError> {
    match format {
        Format::Jsonl => {
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Tsv => {
            if let Some(h) = header {
                writeln!(out, "{h}")?;
            }
            for r in records {
                writeln!(out, "{}\t{}\t{}", r.premise_string(), r.hypothesis_string(), r.label)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// A record read back from disk with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedRecord {
    pub line: usize,
    pub record: ExampleRecord,
    /// False for TSV rows, whose metadata is recomputed.
    pub has_meta: bool,
}

/// Reads JSONL or TSV records. TSV metadata is recomputed from the tokens.
pub fn read_records<R: BufRead>(input: R, format: Format, lexicon: &Lexicon) -> Result<Vec<LoadedRecord>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() || (format == Format::Tsv && line.starts_with('#')) {
            continue;
        }
        let bad = |message: String| CorpusError::Format { line: line_no, message };
        let (record, has_meta) = match format {
            Format::Jsonl => (serde_json::from_str::<ExampleRecord>(&line).map_err(|e| bad(e.to_string()))?, true),
            Format::Tsv => {
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() != 3 {
                    return Err(bad(format!("expected 3 tab-separated fields, found {}", fields.len())));
                }
                let label: Label = fields[2].parse().map_err(|e: NatLogError| bad(e.to_string()))?;
                let premise = lexicon.parse_str(fields[0]).map_err(|e| bad(format!("premise: {e}")))?;
                let hypothesis = lexicon.parse_str(fields[1]).map_err(|e| bad(format!("hypothesis: {e}")))?;
                (
                    ExampleRecord::new(&NliPair::new(premise, hypothesis), lexicon, label, Provenance::Natlog),
                    false,
                )
            }
        };
        out.push(LoadedRecord {
            line: line_no,
            record,
            has_meta,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    pub line: usize,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub records: usize,
    pub relabeled: usize,
    pub bound: usize,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks parity and stored metadata on every record, and re-labels a
/// sampled fraction with both labelers.
pub fn validate_records(
    records: &[LoadedRecord],
    lexicon: &Lexicon,
    natlog: &NatLog,
    oracle: &Oracle,
    sample_rate: f64,
    seed: u64,
) -> Result<ValidationReport, CorpusError> {
    let mut report = ValidationReport {
        records: records.len(),
        bound: oracle.bound(),
        ..Default::default()
    };
    let mut fail = |line: usize, kind: &str, message: String| {
        report.failures.push(ValidationFailure {
            line,
            kind: kind.to_string(),
            message,
        })
    };
    let mut rng = rng::stream(seed, "validate");
    let mut relabeled = 0;
    let mut keys = HashSet::new();
    for loaded in records {
        let (line, r) = (loaded.line, &loaded.record);
        let pair = match r.pair(lexicon) {
            Ok(p) => p,
            Err(e) => {
                fail(line, "parse", e.to_string());
                continue;
            }
        };
        if !keys.insert(r.key()) {
            fail(line, "duplicate", "pair occurs earlier in the file".to_string());
        }
        if r.meta.negation_count != pair.negation_count() {
            fail(
                line,
                "meta",
                format!("negation_count {} but tokens give {}", r.meta.negation_count, pair.negation_count()),
            );
        }
        let slots: SlotRelationMeta = slot_relations(&pair).into();
        if loaded.has_meta && r.meta.slot_relations != slots {
            fail(line, "meta", "slot_relations do not match the tokens".to_string());
        }
        if !parity_holds(r.label, pair.negation_count()) {
            fail(line, "parity", format!("{} with negation count {}", r.label, pair.negation_count()));
        }
        if sample_rate >= 1.0 || rng.gen_bool(sample_rate.max(0.0)) {
            relabeled += 1;
            let nl = natlog.label(&pair)?.label;
            let or = oracle.label(&pair)?;
            if nl != r.label || or != r.label {
                fail(line, "label", format!("stored {}, natlog {}, oracle {}", r.label, nl, or));
            }
            if loaded.has_meta && r.meta.informative != is_informative(&pair, nl, natlog)? {
                fail(line, "meta", "informative flag does not match".to_string());
            }
        }
    }
    report.relabeled = relabeled;
    Ok(report)
}

/// Satisfiability of aux and the premise, the non-vacuity check.
pub fn premise_is_satisfiable(pair: &NliPair, oracle: &Oracle) -> bool {
    let enc = oracle.encode(pair);
    let mut formulas = aux_premises(&enc.signature);
    formulas.push(enc.premise);
    crate::oracle::is_satisfiable(&formulas, oracle.bound())
}
