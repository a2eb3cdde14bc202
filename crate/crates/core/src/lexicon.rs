//! Validated in-memory records: lexicon entries, pronunciations, rating norms,
//! language metadata and the articulatory feature table.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use unicode_normalization::UnicodeNormalization;

use crate::synset::SynsetId;

/// Number of articulatory features per segment.
pub const FEATURE_COUNT: usize = 24;

/// Feature columns in table order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "syl", "son", "cons", "cont", "delrel", "lat", "nas", "strid", "voi", "sg", "cg", "ant", "cor",
    "distr", "lab", "hi", "lo", "back", "round", "velaric", "tense", "long", "hitone", "hireg",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecordError {
    #[error("empty lemma")]
    EmptyLemma,
    #[error("empty language code")]
    EmptyLanguage,
    #[error("language code {0:?} contains whitespace")]
    LanguageWhitespace(String),
    #[error("empty pronunciation")]
    EmptyPronunciation,
    #[error("segment {0:?} contains whitespace or is empty")]
    BadSegment(String),
    #[error("empty concept")]
    EmptyConcept,
    #[error("record carries no rating")]
    NoRating,
    #[error("{dimension} rating {value} outside [{min}, {max}]")]
    OutOfRange { dimension: &'static str, value: f64, min: f64, max: f64 },
    #[error("duplicate segment {0:?} in feature table")]
    DuplicateSegment(String),
}

/// Trims and NFC-normalizes a lemma or pronunciation headword. With
/// `underscores_as_spaces`, `Santa_Claus` and `Santa Claus` compare equal.
pub fn normalize_lemma(text: &str, underscores_as_spaces: bool) -> String {
    let nfc: String = text.trim().nfc().collect();
    if underscores_as_spaces {
        nfc.replace('_', " ")
    } else {
        nfc
    }
}

fn check_language(code: &str) -> Result<(), RecordError> {
    if code.is_empty() {
        return Err(RecordError::EmptyLanguage);
    }
    if code.chars().any(char::is_whitespace) {
        return Err(RecordError::LanguageWhitespace(code.to_string()));
    }
    Ok(())
}

/// A (lemma, language) witness of a colexification.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub lemma: String,
    pub language: String,
}

impl Witness {
    pub fn new(lemma: impl Into<String>, language: impl Into<String>) -> Self {
        Witness { lemma: lemma.into(), language: language.into() }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lemma, self.language)
    }
}

/// One sense lemma of one language attached to one synset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexEntry {
    pub language: String,
    pub lemma: String,
    pub synset: SynsetId,
}

impl LexEntry {
    /// Trims both strings; the lemma must be non-empty afterwards.
    pub fn new(language: &str, lemma: &str, synset: SynsetId) -> Result<Self, RecordError> {
        let language = language.trim();
        check_language(language)?;
        let lemma = lemma.trim();
        if lemma.is_empty() {
            return Err(RecordError::EmptyLemma);
        }
        Ok(LexEntry { language: language.to_string(), lemma: lemma.to_string(), synset })
    }

    pub fn witness(&self) -> Witness {
        Witness::new(self.lemma.clone(), self.language.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LanguageInfo {
    pub code: String,
    pub family: String,
    pub macroarea: Option<String>,
}

/// Pre-segmented pronunciation of one word in one language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PronEntry {
    pub language: String,
    pub word: String,
    pub segments: Vec<String>,
}

impl PronEntry {
    pub fn new(language: &str, word: &str, segments: Vec<String>) -> Result<Self, RecordError> {
        check_language(language)?;
        let word = word.trim();
        if word.is_empty() {
            return Err(RecordError::EmptyLemma);
        }
        if segments.is_empty() {
            return Err(RecordError::EmptyPronunciation);
        }
        if let Some(bad) = segments.iter().find(|s| s.is_empty() || s.chars().any(char::is_whitespace)) {
            return Err(RecordError::BadSegment(bad.clone()));
        }
        Ok(PronEntry { language: language.to_string(), word: word.to_string(), segments })
    }

    /// Splits a space-separated pronunciation; runs of spaces do not create
    /// empty segments.
    pub fn from_spaced(language: &str, word: &str, pronunciation: &str) -> Result<Self, RecordError> {
        let segments: Vec<String> = pronunciation.split(' ').filter(|s| !s.is_empty()).map(String::from).collect();
        PronEntry::new(language, word, segments)
    }
}

/// Closed interval a rating dimension must fall into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingRange {
    pub min: f64,
    pub max: f64,
}

impl RatingRange {
    pub const CONCRETENESS: RatingRange = RatingRange { min: 1.0, max: 5.0 };
    pub const DEFAULT_AFFECT: RatingRange = RatingRange { min: 1.0, max: 9.0 };

    pub fn contains(&self, value: f64) -> bool {
        value.is_finite() && value >= self.min && value <= self.max
    }

    fn check(&self, dimension: &'static str, value: Option<f64>) -> Result<(), RecordError> {
        match value {
            Some(v) if !self.contains(v) => {
                Err(RecordError::OutOfRange { dimension, value: v, min: self.min, max: self.max })
            }
            _ => Ok(()),
        }
    }
}

/// Norm ratings of one (lowercased) concept word.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingRecord {
    pub concept: String,
    pub concreteness: Option<f64>,
    pub valence: Option<f64>,
    pub arousal: Option<f64>,
    pub dominance: Option<f64>,
}

impl RatingRecord {
    pub fn new(
        concept: &str,
        concreteness: Option<f64>,
        affect: [Option<f64>; 3],
        affect_range: RatingRange,
    ) -> Result<Self, RecordError> {
        let concept: String = concept.trim().chars().flat_map(char::to_lowercase).collect();
        if concept.is_empty() {
            return Err(RecordError::EmptyConcept);
        }
        if concreteness.is_none() && affect.iter().all(Option::is_none) {
            return Err(RecordError::NoRating);
        }
        RatingRange::CONCRETENESS.check("concreteness", concreteness)?;
        let [valence, arousal, dominance] = affect;
        affect_range.check("valence", valence)?;
        affect_range.check("arousal", arousal)?;
        affect_range.check("dominance", dominance)?;
        Ok(RatingRecord { concept, concreteness, valence, arousal, dominance })
    }
}

/// 24 ternary feature values of one segment, aligned to [`FEATURE_NAMES`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SegmentFeatures([i8; FEATURE_COUNT]);

impl SegmentFeatures {
    pub const ZERO: SegmentFeatures = SegmentFeatures([0; FEATURE_COUNT]);

    /// `None` if any value is outside {+1, -1, 0}.
    pub fn new(values: [i8; FEATURE_COUNT]) -> Option<Self> {
        values.iter().all(|v| (-1..=1).contains(v)).then_some(SegmentFeatures(values))
    }

    pub fn values(&self) -> &[i8; FEATURE_COUNT] {
        &self.0
    }

    pub fn get(&self, feature: usize) -> i8 {
        self.0[feature]
    }

    pub fn by_name(&self, name: &str) -> Option<i8> {
        FEATURE_NAMES.iter().position(|n| *n == name).map(|i| self.0[i])
    }
}

/// Mapping from IPA segment to its feature vector.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureTable {
    rows: BTreeMap<String, SegmentFeatures>,
    longest_key: usize,
}

impl FeatureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, segment: &str, features: SegmentFeatures) -> Result<(), RecordError> {
        if segment.is_empty() || segment.chars().any(char::is_whitespace) {
            return Err(RecordError::BadSegment(segment.to_string()));
        }
        if self.rows.contains_key(segment) {
            return Err(RecordError::DuplicateSegment(segment.to_string()));
        }
        self.longest_key = self.longest_key.max(segment.len());
        self.rows.insert(segment.to_string(), features);
        Ok(())
    }

    pub fn get(&self, segment: &str) -> Option<&SegmentFeatures> {
        self.rows.get(segment)
    }

    pub fn contains(&self, segment: &str) -> bool {
        self.rows.contains_key(segment)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in segment order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &SegmentFeatures)> {
        self.rows.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Byte length of the longest segment key.
    pub fn longest_segment(&self) -> usize {
        self.longest_key
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dad() -> SynsetId {
        SynsetId::parse("dad#n#1").unwrap()
    }

    #[test]
    fn lex_entry_trims_and_rejects_empty_lemma() {
        let e = LexEntry::new("fa", "  pāp ", dad()).unwrap();
        assert_eq!(e.lemma, "pāp");
        assert_eq!(LexEntry::new("fa", "   ", dad()), Err(RecordError::EmptyLemma));
        assert!(LexEntry::new("", "x", dad()).is_err());
    }

    #[test]
    fn nfc_normalization_merges_composed_and_decomposed() {
        // a + combining macron vs precomposed ā
        assert_eq!(normalize_lemma("pa\u{0304}p", false), "pāp");
        assert_eq!(normalize_lemma(" Santa_Claus ", true), "Santa Claus");
        assert_eq!(normalize_lemma("Santa_Claus", false), "Santa_Claus");
    }

    #[test]
    fn rating_ranges() {
        let ok = RatingRecord::new("Dog", Some(4.85), [None; 3], RatingRange::DEFAULT_AFFECT).unwrap();
        assert_eq!(ok.concept, "dog");
        assert_eq!(ok.concreteness, Some(4.85));
        assert!(matches!(
            RatingRecord::new("dog", Some(0.5), [None; 3], RatingRange::DEFAULT_AFFECT),
            Err(RecordError::OutOfRange { dimension: "concreteness", .. })
        ));
        assert_eq!(
            RatingRecord::new("dog", None, [None; 3], RatingRange::DEFAULT_AFFECT),
            Err(RecordError::NoRating)
        );
        let narrow = RatingRange { min: 1.0, max: 7.0 };
        assert!(RatingRecord::new("dog", None, [Some(8.0), None, None], narrow).is_err());
        assert!(RatingRecord::new("dog", None, [Some(8.0), None, None], RatingRange::DEFAULT_AFFECT).is_ok());
    }

    #[test]
    fn pron_entry_validation() {
        let p = PronEntry::from_spaced("fa", "pāp", " p Aː  p ").unwrap();
        assert_eq!(p.segments, ["p", "Aː", "p"]);
        assert_eq!(PronEntry::from_spaced("fa", "x", "  "), Err(RecordError::EmptyPronunciation));
    }

    #[test]
    fn feature_table_rejects_duplicates_and_bad_values() {
        assert!(SegmentFeatures::new([2; FEATURE_COUNT]).is_none());
        let mut t = FeatureTable::new();
        t.insert("a", SegmentFeatures::ZERO).unwrap();
        t.insert("tʃ", SegmentFeatures::ZERO).unwrap();
        assert_eq!(t.insert("a", SegmentFeatures::ZERO), Err(RecordError::DuplicateSegment("a".into())));
        assert_eq!(t.longest_segment(), "tʃ".len());
    }
}
