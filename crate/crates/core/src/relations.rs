//! The seven basic semantic relations and their algebra.
//!
//! A relation between two sets `X` and `Y` in a universe `U` is fully
//! described by which of the four Venn regions `X∩Y`, `X∖Y`, `Y∖X` and
//! `U∖(X∪Y)` are inhabited. Every table in this module is derived by
//! enumerating concrete subsets of small universes, never written by hand.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelationError {
    #[error("degenerate set: arguments must be non-empty and non-universal")]
    DegenerateSet,
    #[error("table not saturated: universe sizes up to {smaller} and up to {larger} disagree at ({left}, {right})")]
    TableUnstable {
        smaller: usize,
        larger: usize,
        left: SemRelation,
        right: SemRelation,
    },
    #[error("unknown relation code {0:?}")]
    UnknownCode(String),
}

/// Region bits of a pair `(X, Y)`.
pub mod region {
    /// `X ∩ Y`
    pub const BOTH: u8 = 0b0001;
    /// `X ∖ Y`
    pub const LEFT_ONLY: u8 = 0b0010;
    /// `Y ∖ X`
    pub const RIGHT_ONLY: u8 = 0b0100;
    /// `U ∖ (X ∪ Y)`
    pub const NEITHER: u8 = 0b1000;
    pub const ALL: u8 = 0b1111;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemRelation {
    Equivalence,
    Forward,
    Reverse,
    Negation,
    Alternation,
    Cover,
    Independence,
}

impl SemRelation {
    pub const ALL: [SemRelation; 7] = [
        SemRelation::Equivalence,
        SemRelation::Forward,
        SemRelation::Reverse,
        SemRelation::Negation,
        SemRelation::Alternation,
        SemRelation::Cover,
        SemRelation::Independence,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The inhabited regions characterising this relation.
    pub fn regions(self) -> u8 {
        use region::*;
        match self {
            SemRelation::Equivalence => BOTH | NEITHER,
            SemRelation::Forward => BOTH | RIGHT_ONLY | NEITHER,
            SemRelation::Reverse => BOTH | LEFT_ONLY | NEITHER,
            SemRelation::Negation => LEFT_ONLY | RIGHT_ONLY,
            SemRelation::Alternation => LEFT_ONLY | RIGHT_ONLY | NEITHER,
            SemRelation::Cover => BOTH | LEFT_ONLY | RIGHT_ONLY,
            SemRelation::Independence => ALL,
        }
    }

    /// Inverse of [`SemRelation::regions`]. Patterns in which one side is
    /// empty or universal have no relation.
    pub fn from_regions(bits: u8) -> Option<SemRelation> {
        SemRelation::ALL.into_iter().find(|r| r.regions() == bits & region::ALL)
    }

    pub fn code(self) -> char {
        match self {
            SemRelation::Equivalence => '=',
            SemRelation::Forward => '<',
            SemRelation::Reverse => '>',
            SemRelation::Negation => '^',
            SemRelation::Alternation => '|',
            SemRelation::Cover => 'v',
            SemRelation::Independence => '#',
        }
    }

    pub fn from_code(c: char) -> Option<SemRelation> {
        SemRelation::ALL.into_iter().find(|r| r.code() == c)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SemRelation::Equivalence => "≡",
            SemRelation::Forward => "⊏",
            SemRelation::Reverse => "⊐",
            SemRelation::Negation => "^",
            SemRelation::Alternation => "|",
            SemRelation::Cover => "⌣",
            SemRelation::Independence => "#",
        }
    }
}

impl fmt::Display for SemRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl serde::Serialize for SemRelation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for SemRelation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for SemRelation {
    type Err = RelationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => SemRelation::from_code(c),
            _ => None,
        }
        .ok_or_else(|| RelationError::UnknownCode(s.to_string()))
    }
}

/// A subset of the seven relations, stored as a bitset.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationSet(u8);

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);
    pub const FULL: RelationSet = RelationSet(0b111_1111);

    pub fn single(r: SemRelation) -> Self {
        RelationSet(1 << r.index())
    }

    pub fn from_bits(bits: u8) -> Self {
        RelationSet(bits & Self::FULL.0)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn insert(&mut self, r: SemRelation) {
        self.0 |= 1 << r.index();
    }

    pub fn contains(self, r: SemRelation) -> bool {
        self.0 & (1 << r.index()) != 0
    }

    pub fn union(self, other: RelationSet) -> RelationSet {
        RelationSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: RelationSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = SemRelation> {
        SemRelation::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    pub fn map(self, f: impl Fn(SemRelation) -> SemRelation) -> RelationSet {
        self.iter().map(f).collect()
    }

    pub fn converse(self) -> RelationSet {
        self.map(converse)
    }

    /// Codes in canonical order, e.g. `"=<"`. The empty set is `"-"`.
    pub fn codes(self) -> String {
        if self.is_empty() {
            return "-".to_string();
        }
        self.iter().map(SemRelation::code).collect()
    }
}

impl FromIterator<SemRelation> for RelationSet {
    fn from_iter<I: IntoIterator<Item = SemRelation>>(iter: I) -> Self {
        let mut set = RelationSet::EMPTY;
        for r in iter {
            set.insert(r);
        }
        set
    }
}

impl From<SemRelation> for RelationSet {
    fn from(r: SemRelation) -> Self {
        RelationSet::single(r)
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.codes())
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.codes())
    }
}

impl FromStr for RelationSet {
    type Err = RelationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(RelationSet::EMPTY);
        }
        s.chars()
            .map(|c| SemRelation::from_code(c).ok_or_else(|| RelationError::UnknownCode(c.to_string())))
            .collect()
    }
}

/// Region pattern of two subsets of `{0..n}` given as bitmasks.
pub(crate) fn region_pattern(x: u32, y: u32, universe: u32) -> u8 {
    let mut bits = 0;
    if x & y != 0 {
        bits |= region::BOTH;
    }
    if x & !y & universe != 0 {
        bits |= region::LEFT_ONLY;
    }
    if !x & y & universe != 0 {
        bits |= region::RIGHT_ONLY;
    }
    if !x & !y & universe != 0 {
        bits |= region::NEITHER;
    }
    bits
}

fn classify_masks(x: u32, y: u32, universe: u32) -> Result<SemRelation, RelationError> {
    let admissible = |s: u32| s != 0 && s & universe == s && s != universe;
    if !admissible(x) || !admissible(y) {
        return Err(RelationError::DegenerateSet);
    }
    Ok(SemRelation::from_regions(region_pattern(x, y, universe))
        .expect("non-empty, non-universal sets always fall in one of the seven patterns"))
}

/// The relation holding between `x` and `y` inside `universe`.
pub fn classify_pair<T: Ord>(x: &BTreeSet<T>, y: &BTreeSet<T>, universe: &BTreeSet<T>) -> Result<SemRelation, RelationError> {
    if !x.is_subset(universe) || !y.is_subset(universe) {
        return Err(RelationError::DegenerateSet);
    }
    if x.is_empty() || y.is_empty() || x.len() == universe.len() || y.len() == universe.len() {
        return Err(RelationError::DegenerateSet);
    }
    let mut bits = 0;
    if x.intersection(y).next().is_some() {
        bits |= region::BOTH;
    }
    if x.difference(y).next().is_some() {
        bits |= region::LEFT_ONLY;
    }
    if y.difference(x).next().is_some() {
        bits |= region::RIGHT_ONLY;
    }
    if universe.iter().any(|e| !x.contains(e) && !y.contains(e)) {
        bits |= region::NEITHER;
    }
    Ok(SemRelation::from_regions(bits).expect("admissible sets fall in one of the seven patterns"))
}

pub fn converse(r: SemRelation) -> SemRelation {
    match r {
        SemRelation::Forward => SemRelation::Reverse,
        SemRelation::Reverse => SemRelation::Forward,
        other => other,
    }
}

/// Non-empty, non-universal subsets of `{0..n}`.
fn admissible_subsets(n: usize) -> impl Iterator<Item = u32> {
    let universe = (1u32 << n) - 1;
    (1..universe).filter(move |s| *s != universe)
}

/// `(r1, r2) ↦ { R(x, z) : R(x, y) = r1, R(y, z) = r2 }`.
#[derive(Clone, PartialEq, Eq)]
pub struct JoinTable {
    entries: [RelationSet; 49],
}

impl JoinTable {
    pub fn get(&self, left: SemRelation, right: SemRelation) -> RelationSet {
        self.entries[left.index() * 7 + right.index()]
    }

    /// Exhaustive enumeration over universes of size `1..=max_universe`.
    pub fn enumerate(max_universe: usize) -> JoinTable {
        let mut entries = [RelationSet::EMPTY; 49];
        for n in 1..=max_universe {
            let universe = (1u32 << n) - 1;
            let subsets: Vec<u32> = admissible_subsets(n).collect();
            for &x in &subsets {
                for &y in &subsets {
                    let r1 = classify_masks(x, y, universe).expect("admissible");
                    for &z in &subsets {
                        let r2 = classify_masks(y, z, universe).expect("admissible");
                        let r3 = classify_masks(x, z, universe).expect("admissible");
                        entries[r1.index() * 7 + r2.index()].insert(r3);
                    }
                }
            }
        }
        JoinTable { entries }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("r1\tr2\tjoin\n");
        for r1 in SemRelation::ALL {
            for r2 in SemRelation::ALL {
                out.push_str(&format!("{}\t{}\t{}\n", r1, r2, self.get(r1, r2)));
            }
        }
        out
    }
}

impl fmt::Debug for JoinTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tsv())
    }
}

/// Largest universe enumerated by [`derive_join_table`]. Some entries, such
/// as `(⊏, #)`, first appear at size 5, so the table is stable from 5 on.
pub const JOIN_UNIVERSE: usize = 6;

/// Derives the join table by exhaustive enumeration over universes of size
/// `1..=6`, failing unless sizes 5 and 6 produce the same table.
pub fn derive_join_table() -> Result<JoinTable, RelationError> {
    let smaller = JoinTable::enumerate(JOIN_UNIVERSE - 1);
    let larger = JoinTable::enumerate(JOIN_UNIVERSE);
    for left in SemRelation::ALL {
        for right in SemRelation::ALL {
            if smaller.get(left, right) != larger.get(left, right) {
                return Err(RelationError::TableUnstable {
                    smaller: JOIN_UNIVERSE - 1,
                    larger: JOIN_UNIVERSE,
                    left,
                    right,
                });
            }
        }
    }
    Ok(larger)
}

/// Which side of a pair is negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NegatedSide {
    Premise,
    Hypothesis,
    Both,
}

impl NegatedSide {
    pub const ALL: [NegatedSide; 3] = [NegatedSide::Premise, NegatedSide::Hypothesis, NegatedSide::Both];

    pub fn name(self) -> &'static str {
        match self {
            NegatedSide::Premise => "premise",
            NegatedSide::Hypothesis => "hypothesis",
            NegatedSide::Both => "both",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NegationTable {
    entries: [[RelationSet; 3]; 7],
}

impl NegationTable {
    pub fn get(&self, r: SemRelation, side: NegatedSide) -> RelationSet {
        let column = match side {
            NegatedSide::Premise => 0,
            NegatedSide::Hypothesis => 1,
            NegatedSide::Both => 2,
        };
        self.entries[r.index()][column]
    }

    /// Exhaustive enumeration over universes of size `1..=max_universe`.
    pub fn enumerate(max_universe: usize) -> NegationTable {
        let mut entries = [[RelationSet::EMPTY; 3]; 7];
        for n in 1..=max_universe {
            let universe = (1u32 << n) - 1;
            let subsets: Vec<u32> = admissible_subsets(n).collect();
            for &x in &subsets {
                for &y in &subsets {
                    let r = classify_masks(x, y, universe).expect("admissible");
                    let (nx, ny) = (!x & universe, !y & universe);
                    let row = &mut entries[r.index()];
                    row[0].insert(classify_masks(nx, y, universe).expect("admissible"));
                    row[1].insert(classify_masks(x, ny, universe).expect("admissible"));
                    row[2].insert(classify_masks(nx, ny, universe).expect("admissible"));
                }
            }
        }
        NegationTable { entries }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("r\tside\tresult\n");
        for r in SemRelation::ALL {
            for side in NegatedSide::ALL {
                out.push_str(&format!("{}\t{}\t{}\n", r, side.name(), self.get(r, side)));
            }
        }
        out
    }
}

/// Largest universe enumerated by [`derive_negation_table`].
pub const NEGATION_UNIVERSE: usize = 5;

/// Derives the relation of `(¬X, Y)`, `(X, ¬Y)` and `(¬X, ¬Y)` from the
/// relation of `(X, Y)`, failing unless universes up to 4 and up to 5 agree.
pub fn derive_negation_table() -> Result<NegationTable, RelationError> {
    let smaller = NegationTable::enumerate(NEGATION_UNIVERSE - 1);
    let larger = NegationTable::enumerate(NEGATION_UNIVERSE);
    for r in SemRelation::ALL {
        for side in NegatedSide::ALL {
            if smaller.get(r, side) != larger.get(r, side) {
                return Err(RelationError::TableUnstable {
                    smaller: NEGATION_UNIVERSE - 1,
                    larger: NEGATION_UNIVERSE,
                    left: r,
                    right: r,
                });
            }
        }
    }
    Ok(larger)
}

fn negation_table() -> &'static NegationTable {
    static TABLE: OnceLock<NegationTable> = OnceLock::new();
    TABLE.get_or_init(|| derive_negation_table().expect("negation table saturates"))
}

/// Relations achievable between the pair once the given side is complemented.
pub fn negation_conjugate(r: SemRelation, side: NegatedSide) -> RelationSet {
    negation_table().get(r, side)
}
