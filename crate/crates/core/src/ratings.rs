//! Concreteness and affect ratings on concepts, distances between colexified
//! concepts, and phoneme-level rating means.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::colexgraph::ConceptPairRecord;
use crate::lexicon::RatingRecord;
use crate::phonology::{PhonemeSeq, Position, PronunciationIndex};
use crate::synset::SynsetId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RatingDim {
    Concreteness,
    Valence,
    Arousal,
    Dominance,
}

impl RatingDim {
    pub const ALL: [RatingDim; 4] =
        [RatingDim::Concreteness, RatingDim::Valence, RatingDim::Arousal, RatingDim::Dominance];

    pub fn name(self) -> &'static str {
        match self {
            RatingDim::Concreteness => "concreteness",
            RatingDim::Valence => "valence",
            RatingDim::Arousal => "arousal",
            RatingDim::Dominance => "dominance",
        }
    }

    /// Column name of the distance in this dimension.
    pub fn distance_name(self) -> &'static str {
        match self {
            RatingDim::Concreteness => "conc_dist",
            RatingDim::Valence => "v_dist",
            RatingDim::Arousal => "a_dist",
            RatingDim::Dominance => "d_dist",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        RatingDim::ALL.into_iter().find(|d| d.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Ratings of one concept; each dimension is present or not independently.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConceptRatings {
    pub concept: String,
    pub values: [Option<f64>; 4],
}

impl ConceptRatings {
    pub fn new(concept: impl Into<String>, values: [Option<f64>; 4]) -> Self {
        ConceptRatings { concept: concept.into(), values }
    }

    pub fn get(&self, dim: RatingDim) -> Option<f64> {
        self.values[dim.index()]
    }

    pub fn has_any(&self) -> bool {
        self.values.iter().any(Option::is_some)
    }

    pub fn has_affect(&self) -> bool {
        self.values[1..].iter().any(Option::is_some)
    }
}

/// Ratings keyed by first-sense synset (the concept key).
pub type RatingsMap = BTreeMap<SynsetId, ConceptRatings>;

/// Joins rating records to every concept of the concept graph by sense word.
/// Part of speech is ignored: `dad#n#1` and `dad#v#1` get the same ratings.
/// When several records rate the same word, the first present value per
/// dimension wins.
pub fn attach_ratings(records: &[ConceptPairRecord], ratings: &[RatingRecord]) -> RatingsMap {
    let mut by_word: BTreeMap<&str, [Option<f64>; 4]> = BTreeMap::new();
    for r in ratings {
        let slot = by_word.entry(r.concept.as_str()).or_default();
        for (dst, src) in slot.iter_mut().zip([r.concreteness, r.valence, r.arousal, r.dominance]) {
            if dst.is_none() {
                *dst = src;
            }
        }
    }
    let mut out = RatingsMap::new();
    for r in records {
        for (synset, name) in [(&r.synset1, &r.concept1), (&r.synset2, &r.concept2)] {
            out.entry(synset.clone()).or_insert_with(|| {
                ConceptRatings::new(name.clone(), by_word.get(name.as_str()).copied().unwrap_or_default())
            });
        }
    }
    out
}

/// Absolute rating differences per dimension; absent unless both sides are rated.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairDistances {
    pub values: [Option<f64>; 4],
}

impl PairDistances {
    pub fn get(&self, dim: RatingDim) -> Option<f64> {
        self.values[dim.index()]
    }
}

pub fn pair_distances(first: &ConceptRatings, second: &ConceptRatings) -> PairDistances {
    let mut values = [None; 4];
    for (i, v) in values.iter_mut().enumerate() {
        *v = match (first.values[i], second.values[i]) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
    }
    PairDistances { values }
}

fn lookup<'a>(ratings: &'a RatingsMap, synset: &SynsetId) -> Option<&'a ConceptRatings> {
    ratings.get(synset)
}

/// Distances of one concept pair under a ratings map.
pub fn record_distances(record: &ConceptPairRecord, ratings: &RatingsMap) -> PairDistances {
    match (lookup(ratings, &record.synset1), lookup(ratings, &record.synset2)) {
        (Some(a), Some(b)) => pair_distances(a, b),
        _ => PairDistances::default(),
    }
}

/// One dataset row: a single colexification of a concept pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ColexRecord {
    pub lemma: String,
    pub language: String,
    pub phonemes: Option<PhonemeSeq>,
    pub synset1: SynsetId,
    pub synset2: SynsetId,
    pub concept1: String,
    pub concept2: String,
    pub distances: PairDistances,
}

/// Expands concept pairs into one row per witness, sorted by
/// (concept1, concept2, language, lemma).
pub fn build_dataset(
    records: &[ConceptPairRecord],
    ratings: &RatingsMap,
    phonemes: &PronunciationIndex,
) -> Vec<ColexRecord> {
    let mut rows: Vec<ColexRecord> = records
        .iter()
        .flat_map(|r| {
            let distances = record_distances(r, ratings);
            r.witnesses.iter().map(move |w| ColexRecord {
                lemma: w.lemma.clone(),
                language: w.language.clone(),
                phonemes: phonemes.get(&w.language, &w.lemma).cloned(),
                synset1: r.synset1.clone(),
                synset2: r.synset2.clone(),
                concept1: r.concept1.clone(),
                concept2: r.concept2.clone(),
                distances,
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        (&a.concept1, &a.concept2, &a.language, &a.lemma, &a.synset1, &a.synset2).cmp(&(
            &b.concept1,
            &b.concept2,
            &b.language,
            &b.lemma,
            &b.synset1,
            &b.synset2,
        ))
    });
    rows
}

/// Mean ratings of the concepts expressed by lemmas sharing a phoneme at a
/// position, within one language.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonemeRating {
    pub phoneme: String,
    pub language: String,
    pub position: Position,
    pub means: [Option<f64>; 4],
    /// Distinct rated concepts in the group.
    pub n: usize,
}

impl PhonemeRating {
    pub fn mean(&self, dim: RatingDim) -> Option<f64> {
        self.means[dim.index()]
    }
}

/// Groups rated concepts by (phoneme at `position`, language). Each concept
/// counts once per group however many rows carry it; means are over the
/// concepts with that dimension present.
pub fn phoneme_level_ratings(dataset: &[ColexRecord], ratings: &RatingsMap, position: Position) -> Vec<PhonemeRating> {
    let mut groups: BTreeMap<(&str, &str), BTreeSet<&SynsetId>> = BTreeMap::new();
    for row in dataset {
        let Some(seq) = &row.phonemes else { continue };
        let members = groups.entry((seq.at(position), row.language.as_str())).or_default();
        for synset in [&row.synset1, &row.synset2] {
            if lookup(ratings, synset).is_some_and(ConceptRatings::has_any) {
                members.insert(synset);
            }
        }
    }
    groups
        .into_iter()
        .filter(|(_, members)| !members.is_empty())
        .map(|((phoneme, language), members)| {
            let mut means = [None; 4];
            for (i, mean) in means.iter_mut().enumerate() {
                let present: Vec<f64> = members.iter().filter_map(|s| ratings[*s].values[i]).collect();
                if !present.is_empty() {
                    *mean = Some(present.iter().sum::<f64>() / present.len() as f64);
                }
            }
            PhonemeRating {
                phoneme: phoneme.into(),
                language: language.into(),
                position,
                means,
                n: members.len(),
            }
        })
        .collect()
}
