//! Multiply-quantified NLI corpora: a fixed sentence fragment, two
//! independent labelers (relation composition over an aligned tree, and
//! bounded first-order model search), and a relation-controlled corpus
//! generator.

pub mod corpus;
pub mod folsem;
pub mod fragment;
pub mod natlog;
pub mod oracle;
pub mod relations;
pub mod rng;

pub use fragment::{Lexicon, LexiconSource, NliPair, Quantifier, Sentence};
pub use natlog::{Label, NatLog};
pub use oracle::Oracle;
pub use relations::{RelationSet, SemRelation};
