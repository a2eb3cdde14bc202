//! Phoneme sequences of lemmas and the measures derived from them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::lexicon::{normalize_lemma, FeatureTable, LexEntry, PronEntry, SegmentFeatures, FEATURE_COUNT};
use crate::Mode;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PhonologyError {
    #[error("empty phoneme sequence")]
    EmptySequence,
    #[error("segment {0:?} not in feature table")]
    UnknownSegment(String),
    #[error("no segment of the inventory matches at byte offset {offset}")]
    Segmentation { offset: usize },
}

/// Ordered, non-empty list of IPA segments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhonemeSeq(Vec<String>);

impl PhonemeSeq {
    pub fn new(segments: Vec<String>) -> Result<Self, PhonologyError> {
        if segments.is_empty() {
            return Err(PhonologyError::EmptySequence);
        }
        Ok(PhonemeSeq(segments))
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn initial(&self) -> &str {
        &self.0[0]
    }

    pub fn last(&self) -> &str {
        &self.0[self.0.len() - 1]
    }

    pub fn at(&self, position: Position) -> &str {
        match position {
            Position::Initial => self.initial(),
            Position::Last => self.last(),
        }
    }

    /// Segments joined with single spaces.
    pub fn spaced(&self) -> String {
        self.0.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Initial,
    Last,
}

impl Position {
    pub fn name(self) -> &'static str {
        match self {
            Position::Initial => "initial",
            Position::Last => "last",
        }
    }
}

/// A word that appeared with more than one pronunciation; the first one won.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronConflict {
    pub language: String,
    pub word: String,
    pub kept: PhonemeSeq,
    pub ignored: PhonemeSeq,
}

/// Pronunciations keyed by (language, NFC-normalized word).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PronunciationIndex {
    map: BTreeMap<(String, String), PhonemeSeq>,
}

impl PronunciationIndex {
    /// Later pronunciations of an already indexed word are reported, not used.
    pub fn build(prons: &[PronEntry]) -> (Self, Vec<PronConflict>) {
        let mut map: BTreeMap<(String, String), PhonemeSeq> = BTreeMap::new();
        let mut conflicts = Vec::new();
        for p in prons {
            let key = (p.language.clone(), normalize_lemma(&p.word, false));
            let seq = PhonemeSeq(p.segments.clone());
            match map.get(&key) {
                Some(kept) if *kept != seq => conflicts.push(PronConflict {
                    language: key.0,
                    word: key.1,
                    kept: kept.clone(),
                    ignored: seq,
                }),
                Some(_) => {}
                None => {
                    map.insert(key, seq);
                }
            }
        }
        (PronunciationIndex { map }, conflicts)
    }

    pub fn insert(&mut self, language: &str, lemma: &str, seq: PhonemeSeq) {
        self.map.insert((language.to_string(), normalize_lemma(lemma, false)), seq);
    }

    pub fn get(&self, language: &str, lemma: &str) -> Option<&PhonemeSeq> {
        self.map.get(&(language.to_string(), normalize_lemma(lemma, false)))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &PhonemeSeq)> {
        self.map.iter().map(|((l, w), s)| (l.as_str(), w.as_str(), s))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhonemeJoin {
    pub joined: Vec<(LexEntry, Option<PhonemeSeq>)>,
    pub conflicts: Vec<PronConflict>,
}

/// Attaches pronunciations to lexicon entries by (language, lemma). Entries
/// without a pronunciation are kept with `None`.
pub fn attach_phonemes(entries: &[LexEntry], prons: &[PronEntry]) -> PhonemeJoin {
    let (index, conflicts) = PronunciationIndex::build(prons);
    let joined = entries
        .iter()
        .map(|e| (e.clone(), index.get(&e.language, &e.lemma).cloned()))
        .collect();
    PhonemeJoin { joined, conflicts }
}

/// Result of a feature lookup; `fallback` marks the lenient all-zero vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lookup {
    pub features: SegmentFeatures,
    pub fallback: bool,
}

pub fn features_of(segment: &str, table: &FeatureTable, mode: Mode) -> Result<Lookup, PhonologyError> {
    match (table.get(segment), mode) {
        (Some(f), _) => Ok(Lookup { features: *f, fallback: false }),
        (None, Mode::Lenient) => Ok(Lookup { features: SegmentFeatures::ZERO, fallback: true }),
        (None, Mode::Strict) => Err(PhonologyError::UnknownSegment(segment.to_string())),
    }
}

/// Per feature, the number of segments carrying the value +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LemmaFeatureProfile {
    pub counts: [u32; FEATURE_COUNT],
}

impl Default for LemmaFeatureProfile {
    fn default() -> Self {
        LemmaFeatureProfile { counts: [0; FEATURE_COUNT] }
    }
}

impl LemmaFeatureProfile {
    pub fn add(&self, other: &LemmaFeatureProfile) -> LemmaFeatureProfile {
        let mut counts = self.counts;
        for (c, o) in counts.iter_mut().zip(other.counts) {
            *c += o;
        }
        LemmaFeatureProfile { counts }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profiled {
    pub profile: LemmaFeatureProfile,
    /// Segments that fell back to the zero vector (lenient mode only).
    pub unknown_segments: Vec<String>,
}

pub fn lemma_profile(seq: &PhonemeSeq, table: &FeatureTable, mode: Mode) -> Result<Profiled, PhonologyError> {
    let mut profile = LemmaFeatureProfile::default();
    let mut unknown_segments = Vec::new();
    for segment in seq.segments() {
        let lookup = features_of(segment, table, mode)?;
        if lookup.fallback {
            unknown_segments.push(segment.clone());
        }
        for (count, value) in profile.counts.iter_mut().zip(lookup.features.values()) {
            if *value == 1 {
                *count += 1;
            }
        }
    }
    Ok(Profiled { profile, unknown_segments })
}

/// Type-token ratio and length of a segment sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhonoMetrics {
    pub ttr: f64,
    pub seg_len: usize,
    pub distinct: usize,
}

pub fn metrics_of(seq: &PhonemeSeq) -> PhonoMetrics {
    let distinct = seq.segments().iter().collect::<BTreeSet<_>>().len();
    let seg_len = seq.len();
    PhonoMetrics { ttr: distinct as f64 / seg_len as f64, seg_len, distinct }
}

/// Splits unsegmented IPA by greedy longest match against the table's
/// segment inventory, left to right.
pub fn segment_fallback(raw: &str, table: &FeatureTable) -> Result<PhonemeSeq, PhonologyError> {
    if raw.is_empty() {
        return Err(PhonologyError::EmptySequence);
    }
    let mut segments = Vec::new();
    let mut offset = 0;
    while offset < raw.len() {
        let rest = &raw[offset..];
        let longest = table.longest_segment().min(rest.len());
        let matched = (1..=longest)
            .rev()
            .filter(|&n| rest.is_char_boundary(n))
            .find(|&n| table.contains(&rest[..n]))
            .ok_or(PhonologyError::Segmentation { offset })?;
        segments.push(rest[..matched].to_string());
        offset += matched;
    }
    Ok(PhonemeSeq(segments))
}
