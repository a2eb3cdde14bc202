//! Dataset-level counts.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::colexgraph::{ColexGraph, ConceptPairRecord};
use crate::lexicon::LexEntry;
use crate::phonology::PhonemeSeq;
use crate::ratings::RatingsMap;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SummaryTable {
    /// Lexicon entries after deduplication.
    pub entries: usize,
    /// (synset pair, witness) facts, i.e. individual colexifications.
    pub colex_patterns: usize,
    /// Colexified synset pairs.
    pub synset_pairs: usize,
    pub synsets: usize,
    /// Distinct (language, lemma) pairs.
    pub lexicalizations: usize,
    /// Distinct (language, lemma) pairs with phonemes.
    pub phone_lemma_pairs: usize,
    pub concept_pairs: usize,
    pub concepts: usize,
    pub concepts_with_affect: usize,
    pub concepts_with_concreteness: usize,
}

impl SummaryTable {
    /// (name, value) rows in export order.
    pub fn rows(&self) -> [(&'static str, usize); 10] {
        [
            ("entries", self.entries),
            ("colex_patterns", self.colex_patterns),
            ("synsets", self.synsets),
            ("lexicalizations", self.lexicalizations),
            ("phone_lemma_pairs", self.phone_lemma_pairs),
            ("concepts", self.concepts),
            ("concepts_with_affect", self.concepts_with_affect),
            ("concepts_with_concreteness", self.concepts_with_concreteness),
            ("synset_pairs", self.synset_pairs),
            ("concept_pairs", self.concept_pairs),
        ]
    }
}

pub fn summary_stats(
    entries: &[LexEntry],
    graph: &ColexGraph,
    records: &[ConceptPairRecord],
    pron_joined: &[(LexEntry, Option<PhonemeSeq>)],
    ratings: &RatingsMap,
) -> SummaryTable {
    let lexicalizations = entries.iter().map(|e| (&e.language, &e.lemma)).collect::<BTreeSet<_>>().len();
    let phone_lemma_pairs = pron_joined
        .iter()
        .filter(|(_, p)| p.is_some())
        .map(|(e, _)| (&e.language, &e.lemma))
        .collect::<BTreeSet<_>>()
        .len();
    let concepts: BTreeSet<_> = records.iter().flat_map(|r| [&r.synset1, &r.synset2]).collect();
    let rated = |pred: fn(&crate::ratings::ConceptRatings) -> bool| {
        concepts.iter().filter(|c| ratings.get(**c).is_some_and(pred)).count()
    };
    SummaryTable {
        entries: entries.len(),
        colex_patterns: graph.witness_total(),
        synset_pairs: graph.edge_count(),
        synsets: graph.nodes().len(),
        lexicalizations,
        phone_lemma_pairs,
        concept_pairs: records.len(),
        concepts: concepts.len(),
        concepts_with_affect: rated(|r| r.has_affect()),
        concepts_with_concreteness: rated(|r| r.get(crate::ratings::RatingDim::Concreteness).is_some()),
    }
}

/// All-zero table of an empty run.
pub fn empty() -> SummaryTable {
    summary_stats(&[], &ColexGraph::default(), &[], &Vec::new(), &RatingsMap::new())
}
