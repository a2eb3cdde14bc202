//! Colexification graphs over synset-lemma lexicons, phonological profiles of
//! the colexifying lemmas, rating distances between colexified concepts, and the
//! grouped correlation statistics run over all of it.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing of the on-disk formats,
//! the batch pipeline and the command line live in the `colex` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod colexgraph;
pub mod dot;
pub mod lexicon;
pub mod phonology;
pub mod ratings;
pub mod stats;
pub mod summary;
pub mod synset;

pub use colexgraph::{
    brute_force_colex, construct_graph, derive_concept_graph, ColexEdge, ColexGraph, ColexTuple,
    ConceptPairRecord,
};
pub use lexicon::{
    FeatureTable, LanguageInfo, LexEntry, PronEntry, RatingRange, RatingRecord, SegmentFeatures, Witness,
    FEATURE_NAMES,
};
pub use synset::{Pos, SynsetId};

/// How unresolvable input is treated: fail on first problem, or record it and
/// carry on with a documented fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Strict,
    Lenient,
}
