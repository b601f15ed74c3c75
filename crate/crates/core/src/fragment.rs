//! The sentence fragment: lexicon, the fixed ten-slot template, sampling,
//! rendering and parsing.
//!
//! Every sentence has the shape
//! `Q_S Adj_S N_S Neg Adv V Q_O Adj_O N_O`, with scope fixed by surface
//! order: the subject quantifier outscopes negation, which outscopes the
//! object quantifier.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EMPTY_TOKEN: &str = "<empty>";
/// Words per open-class category in a standard lexicon.
pub const CATEGORY_SIZE: usize = 100;

const BUNDLED_WORDLIST: &str = include_str!("../data/wordlist.txt");

const RESERVED: [&str; 6] = ["every", "some", "no", "not", "does", EMPTY_TOKEN];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("category {category} has {found} distinct tokens, need at least {needed}")]
    Insufficient { category: Category, found: usize, needed: usize },
    #[error("category {category}: duplicated token {token:?}")]
    Duplicate { category: Category, token: String },
    #[error("token {token:?} appears in both {first} and {second}")]
    Overlap { token: String, first: Category, second: Category },
    #[error("line {line}: token {token:?} is reserved or malformed")]
    BadToken { line: usize, token: String },
    #[error("line {line}: token outside any [section]")]
    NoSection { line: usize },
    #[error("line {line}: unknown section {name:?}")]
    UnknownSection { line: usize, name: String },
    #[error("reading wordlist: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse {slot}: found {}", found.as_deref().unwrap_or("end of input"))]
pub struct ParseError {
    pub slot: Slot,
    pub found: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Noun, Category::Verb, Category::Adjective, Category::Adverb];

    /// Plural section name used by wordlist files.
    pub fn section(self) -> &'static str {
        match self {
            Category::Noun => "nouns",
            Category::Verb => "verbs",
            Category::Adjective => "adjectives",
            Category::Adverb => "adverbs",
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Category::Noun => "noun",
            Category::Verb => "verb",
            Category::Adjective => "adj",
            Category::Adverb => "adv",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.section())
    }
}

/// The ten surface slots, used for error reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    SubjectQuantifier,
    SubjectAdjective,
    SubjectNoun,
    Negation,
    Adverb,
    Verb,
    ObjectQuantifier,
    ObjectAdjective,
    ObjectNoun,
    End,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Slot::SubjectQuantifier => "subject quantifier",
            Slot::SubjectAdjective => "subject adjective",
            Slot::SubjectNoun => "subject noun",
            Slot::Negation => "negation",
            Slot::Adverb => "adverb",
            Slot::Verb => "verb",
            Slot::ObjectQuantifier => "object quantifier",
            Slot::ObjectAdjective => "object adjective",
            Slot::ObjectNoun => "object noun",
            Slot::End => "end of sentence",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    Every,
    Some,
    No,
    NotEvery,
}

impl Quantifier {
    pub const ALL: [Quantifier; 4] = [Quantifier::Every, Quantifier::Some, Quantifier::No, Quantifier::NotEvery];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn tokens(self) -> &'static [&'static str] {
        match self {
            Quantifier::Every => &["every"],
            Quantifier::Some => &["some"],
            Quantifier::No => &["no"],
            Quantifier::NotEvery => &["not", "every"],
        }
    }

    /// Identifier used in table files.
    pub fn name(self) -> &'static str {
        match self {
            Quantifier::Every => "every",
            Quantifier::Some => "some",
            Quantifier::No => "no",
            Quantifier::NotEvery => "not_every",
        }
    }

    pub fn from_name(name: &str) -> Option<Quantifier> {
        Quantifier::ALL.into_iter().find(|q| q.name() == name)
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Quantifier::No | Quantifier::NotEvery)
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Index of a word within its category list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sentence {
    pub subject_quantifier: Quantifier,
    pub subject_adjective: Option<Word>,
    pub subject_noun: Word,
    pub negated: bool,
    pub adverb: Option<Word>,
    pub verb: Word,
    pub object_quantifier: Quantifier,
    pub object_adjective: Option<Word>,
    pub object_noun: Word,
}

impl Sentence {
    /// Occurrences of "does not", "no" and "not every".
    pub fn negative_count(&self) -> u32 {
        self.negated as u32 + self.subject_quantifier.is_negative() as u32 + self.object_quantifier.is_negative() as u32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NliPair {
    pub premise: Sentence,
    pub hypothesis: Sentence,
}

impl NliPair {
    pub fn new(premise: Sentence, hypothesis: Sentence) -> Self {
        NliPair { premise, hypothesis }
    }

    pub fn swapped(&self) -> NliPair {
        NliPair {
            premise: self.hypothesis,
            hypothesis: self.premise,
        }
    }

    /// The count `C` of negative function words across both sentences.
    pub fn negation_count(&self) -> u32 {
        self.premise.negative_count() + self.hypothesis.negative_count()
    }
}

/// Where a lexicon comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexiconSource {
    /// Category-prefixed synthetic tokens such as `noun07`.
    Synthetic,
    /// The English wordlist shipped with the crate.
    Bundled,
    /// A sectioned wordlist file.
    Wordlist(std::path::PathBuf),
}

/// Open-class vocabulary. Immutable once built.
#[derive(Clone, Debug)]
pub struct Lexicon {
    words: [Vec<String>; 4],
    index: HashMap<String, (Category, Word)>,
}

impl Lexicon {
    pub fn build(source: &LexiconSource) -> Result<Lexicon, LexiconError> {
        match source {
            LexiconSource::Synthetic => Ok(Lexicon::synthetic(CATEGORY_SIZE)),
            LexiconSource::Bundled => Ok(Lexicon::bundled()),
            LexiconSource::Wordlist(path) => Lexicon::from_wordlist_file(path),
        }
    }

    /// Synthetic lexicon with `size` words per category. Sizes other than
    /// [`CATEGORY_SIZE`] are only meant for exhaustive checks.
    pub fn synthetic(size: usize) -> Lexicon {
        assert!(size >= 1 && size <= u16::MAX as usize);
        let width = (size - 1).to_string().len();
        let words = Category::ALL.map(|c| (0..size).map(|i| format!("{}{:0width$}", c.prefix(), i, width = width)).collect());
        Lexicon::from_lists(words).expect("synthetic tokens are distinct and disjoint")
    }

    /// The shipped English wordlist.
    pub fn bundled() -> Lexicon {
        Lexicon::from_wordlist(BUNDLED_WORDLIST).expect("bundled wordlist is valid")
    }

    pub fn from_wordlist_file(path: &Path) -> Result<Lexicon, LexiconError> {
        Lexicon::from_wordlist(&std::fs::read_to_string(path)?)
    }

    /// Parses a wordlist: `[nouns]`, `[verbs]`, `[adjectives]`, `[adverbs]`
    /// headers followed by one token per line. Blank lines and lines
    /// starting with `#` are skipped. The first 100 tokens of each section
    /// are used.
    pub fn from_wordlist(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lists: [Vec<String>; 4] = Default::default();
        let mut current: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let position = Category::ALL.iter().position(|c| c.section() == name);
                current = Some(position.ok_or_else(|| LexiconError::UnknownSection {
                    line: i + 1,
                    name: name.to_string(),
                })?);
                continue;
            }
            let slot = current.ok_or(LexiconError::NoSection { line: i + 1 })?;
            if RESERVED.contains(&line) || line.split_whitespace().count() != 1 {
                return Err(LexiconError::BadToken {
                    line: i + 1,
                    token: line.to_string(),
                });
            }
            lists[slot].push(line.to_string());
        }
        for (category, list) in Category::ALL.iter().zip(lists.iter_mut()) {
            let mut seen = HashSet::new();
            for token in list.iter() {
                if !seen.insert(token.as_str()) {
                    return Err(LexiconError::Duplicate {
                        category: *category,
                        token: token.clone(),
                    });
                }
            }
            if list.len() < CATEGORY_SIZE {
                return Err(LexiconError::Insufficient {
                    category: *category,
                    found: list.len(),
                    needed: CATEGORY_SIZE,
                });
            }
            list.truncate(CATEGORY_SIZE);
        }
        Lexicon::from_lists(lists)
    }

    fn from_lists(words: [Vec<String>; 4]) -> Result<Lexicon, LexiconError> {
        let mut index: HashMap<String, (Category, Word)> = HashMap::new();
        for (category, list) in Category::ALL.iter().zip(words.iter()) {
            for (i, token) in list.iter().enumerate() {
                if let Some((first, _)) = index.insert(token.clone(), (*category, Word(i as u16))) {
                    if first == *category {
                        return Err(LexiconError::Duplicate {
                            category: first,
                            token: token.clone(),
                        });
                    }
                    return Err(LexiconError::Overlap {
                        token: token.clone(),
                        first,
                        second: *category,
                    });
                }
            }
        }
        Ok(Lexicon { words, index })
    }

    pub fn words(&self, category: Category) -> &[String] {
        &self.words[category as usize]
    }

    pub fn size(&self, category: Category) -> usize {
        self.words(category).len()
    }

    pub fn token(&self, category: Category, word: Word) -> &str {
        &self.words(category)[word.0 as usize]
    }

    pub fn lookup(&self, token: &str) -> Option<(Category, Word)> {
        self.index.get(token).copied()
    }

    pub fn quantifiers(&self) -> [Quantifier; 4] {
        Quantifier::ALL
    }

    pub fn shape(&self) -> FragmentShape {
        FragmentShape {
            nouns: self.size(Category::Noun) as u64,
            verbs: self.size(Category::Verb) as u64,
            adjectives: self.size(Category::Adjective) as u64,
            adverbs: self.size(Category::Adverb) as u64,
            empty_modifiers: true,
        }
    }

    /// Number of sentences in the fragment over this lexicon.
    pub fn count_sentences(&self) -> u64 {
        self.shape().count()
    }

    pub fn sample_sentence<R: Rng + ?Sized>(&self, rng: &mut R) -> Sentence {
        Sentence {
            subject_quantifier: sample_quantifier(rng),
            subject_adjective: self.sample_modifier(rng, Category::Adjective),
            subject_noun: self.sample_word(rng, Category::Noun),
            negated: rng.gen_bool(0.5),
            adverb: self.sample_modifier(rng, Category::Adverb),
            verb: self.sample_word(rng, Category::Verb),
            object_quantifier: sample_quantifier(rng),
            object_adjective: self.sample_modifier(rng, Category::Adjective),
            object_noun: self.sample_word(rng, Category::Noun),
        }
    }

    pub fn sample_word<R: Rng + ?Sized>(&self, rng: &mut R, category: Category) -> Word {
        Word(rng.gen_range(0..self.size(category)) as u16)
    }

    /// Empty with probability 1/2, otherwise uniform over the category.
    pub fn sample_modifier<R: Rng + ?Sized>(&self, rng: &mut R, category: Category) -> Option<Word> {
        if rng.gen_bool(0.5) {
            None
        } else {
            Some(self.sample_word(rng, category))
        }
    }

    /// Surface tokens in slot order; empty slots become [`EMPTY_TOKEN`].
    pub fn render<'a>(&'a self, s: &Sentence) -> Vec<&'a str> {
        let mut out: Vec<&'a str> = Vec::with_capacity(12);
        let modifier = |out: &mut Vec<&'a str>, category, word: Option<Word>| match word {
            Some(w) => out.push(self.token(category, w)),
            None => out.push(EMPTY_TOKEN),
        };
        out.extend_from_slice(s.subject_quantifier.tokens());
        modifier(&mut out, Category::Adjective, s.subject_adjective);
        out.push(self.token(Category::Noun, s.subject_noun));
        if s.negated {
            out.extend_from_slice(&["does", "not"]);
        } else {
            out.push(EMPTY_TOKEN);
        }
        modifier(&mut out, Category::Adverb, s.adverb);
        out.push(self.token(Category::Verb, s.verb));
        out.extend_from_slice(s.object_quantifier.tokens());
        modifier(&mut out, Category::Adjective, s.object_adjective);
        out.push(self.token(Category::Noun, s.object_noun));
        out
    }

    pub fn render_string(&self, s: &Sentence) -> String {
        self.render(s).join(" ")
    }

    /// Inverse of [`Lexicon::render`]. Empty slots may either carry the
    /// empty token or be omitted entirely.
    pub fn parse<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Sentence, ParseError> {
        let mut reader = TokenReader {
            tokens,
            pos: 0,
            lexicon: self,
        };
        let subject_quantifier = reader.quantifier(Slot::SubjectQuantifier)?;
        let subject_adjective = reader.modifier(Category::Adjective);
        let subject_noun = reader.word(Category::Noun, Slot::SubjectNoun)?;
        let negated = reader.negation()?;
        let adverb = reader.modifier(Category::Adverb);
        let verb = reader.word(Category::Verb, Slot::Verb)?;
        let object_quantifier = reader.quantifier(Slot::ObjectQuantifier)?;
        let object_adjective = reader.modifier(Category::Adjective);
        let object_noun = reader.word(Category::Noun, Slot::ObjectNoun)?;
        if let Some(extra) = reader.peek() {
            return Err(ParseError {
                slot: Slot::End,
                found: Some(extra.to_string()),
            });
        }
        Ok(Sentence {
            subject_quantifier,
            subject_adjective,
            subject_noun,
            negated,
            adverb,
            verb,
            object_quantifier,
            object_adjective,
            object_noun,
        })
    }

    pub fn parse_str(&self, text: &str) -> Result<Sentence, ParseError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        self.parse(&tokens)
    }

    /// Every sentence of the fragment, in a fixed order. Only sensible for
    /// mini-lexicons.
    pub fn enumerate_sentences(&self) -> impl Iterator<Item = Sentence> + '_ {
        let modifiers = |c: Category| {
            std::iter::once(None)
                .chain((0..self.size(c)).map(|i| Some(Word(i as u16))))
                .collect::<Vec<_>>()
        };
        let words = |c: Category| (0..self.size(c)).map(|i| Word(i as u16)).collect::<Vec<_>>();
        let adjectives = modifiers(Category::Adjective);
        let adverbs = modifiers(Category::Adverb);
        let nouns = words(Category::Noun);
        let verbs = words(Category::Verb);
        let mut out = Vec::new();
        for qs in Quantifier::ALL {
            for &adj_s in &adjectives {
                for &n_s in &nouns {
                    for negated in [false, true] {
                        for &adv in &adverbs {
                            for &v in &verbs {
                                for qo in Quantifier::ALL {
                                    for &adj_o in &adjectives {
                                        for &n_o in &nouns {
                                            out.push(Sentence {
                                                subject_quantifier: qs,
                                                subject_adjective: adj_s,
                                                subject_noun: n_s,
                                                negated,
                                                adverb: adv,
                                                verb: v,
                                                object_quantifier: qo,
                                                object_adjective: adj_o,
                                                object_noun: n_o,
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out.into_iter()
    }
}

fn sample_quantifier<R: Rng + ?Sized>(rng: &mut R) -> Quantifier {
    Quantifier::ALL[rng.gen_range(0..4)]
}

/// Slot cardinalities of a fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FragmentShape {
    pub nouns: u64,
    pub verbs: u64,
    pub adjectives: u64,
    pub adverbs: u64,
    /// Whether adjective and adverb slots may be empty.
    pub empty_modifiers: bool,
}

impl FragmentShape {
    pub fn count(&self) -> u64 {
        let optional = |n: u64| if self.empty_modifiers { n + 1 } else { n };
        let subject = 4 * optional(self.adjectives) * self.nouns;
        let predicate = 2 * optional(self.adverbs) * self.verbs;
        let object = 4 * optional(self.adjectives) * self.nouns;
        subject * predicate * object
    }
}

struct TokenReader<'a, S> {
    tokens: &'a [S],
    pos: usize,
    lexicon: &'a Lexicon,
}

impl<S: AsRef<str>> TokenReader<'_, S> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(AsRef::as_ref)
    }

    fn peek_at(&self, offset: usize) -> Option<&str> {
        self.tokens.get(self.pos + offset).map(AsRef::as_ref)
    }

    fn error(&self, slot: Slot) -> ParseError {
        ParseError {
            slot,
            found: self.peek().map(str::to_string),
        }
    }

    fn quantifier(&mut self, slot: Slot) -> Result<Quantifier, ParseError> {
        let q = match self.peek() {
            Some("every") => Quantifier::Every,
            Some("some") => Quantifier::Some,
            Some("no") => Quantifier::No,
            Some("not") if self.peek_at(1) == Some("every") => {
                self.pos += 1;
                Quantifier::NotEvery
            }
            _ => return Err(self.error(slot)),
        };
        self.pos += 1;
        Ok(q)
    }

    fn modifier(&mut self, category: Category) -> Option<Word> {
        match self.peek() {
            Some(EMPTY_TOKEN) => {
                self.pos += 1;
                None
            }
            Some(token) => match self.lexicon.lookup(token) {
                Some((c, w)) if c == category => {
                    self.pos += 1;
                    Some(w)
                }
                _ => None,
            },
            None => None,
        }
    }

    fn word(&mut self, category: Category, slot: Slot) -> Result<Word, ParseError> {
        match self.peek().and_then(|t| self.lexicon.lookup(t)) {
            Some((c, w)) if c == category => {
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error(slot)),
        }
    }

    fn negation(&mut self) -> Result<bool, ParseError> {
        match self.peek() {
            Some("does") if self.peek_at(1) == Some("not") => {
                self.pos += 2;
                Ok(true)
            }
            Some("does") => {
                self.pos += 1;
                Err(self.error(Slot::Negation))
            }
            Some(EMPTY_TOKEN) => {
                self.pos += 1;
                Ok(false)
            }
            _ => Ok(false),
        }
    }
}
