//! WordNet-style synset identifiers of the form `word#pos#sense`.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

/// Part-of-speech tag of a synset. Variant order follows the tag characters so
/// the derived ordering agrees with the textual one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Adjective,
    Noun,
    Adverb,
    Satellite,
    Verb,
}

impl Pos {
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "a" => Some(Pos::Adjective),
            "n" => Some(Pos::Noun),
            "r" => Some(Pos::Adverb),
            "s" => Some(Pos::Satellite),
            "v" => Some(Pos::Verb),
            _ => None,
        }
    }

    pub fn tag(self) -> char {
        match self {
            Pos::Adjective => 'a',
            Pos::Noun => 'n',
            Pos::Adverb => 'r',
            Pos::Satellite => 's',
            Pos::Verb => 'v',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynsetIdProblem {
    SeparatorCount(usize),
    EmptyWord,
    InvalidWordChar,
    UnknownPos,
    BadSenseNumber,
}

impl fmt::Display for SynsetIdProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynsetIdProblem::SeparatorCount(n) => write!(f, "expected 2 '#' separators, found {n}"),
            SynsetIdProblem::EmptyWord => f.write_str("empty sense word"),
            SynsetIdProblem::InvalidWordChar => f.write_str("sense word contains whitespace"),
            SynsetIdProblem::UnknownPos => f.write_str("unknown part-of-speech tag"),
            SynsetIdProblem::BadSenseNumber => {
                f.write_str("sense number must be a canonical integer >= 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed synset id {text:?}: {problem}")]
pub struct MalformedSynsetId {
    pub text: String,
    pub problem: SynsetIdProblem,
}

/// Parsed `word#pos#sense` identifier.
///
/// Ordering is by sense word (bytewise), then tag, then numeric sense; this is
/// the canonical order used for graph edges. Case of the sense word is kept as
/// given (`Santa_Claus#n#1`) so the textual form round-trips exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId {
    word: String,
    pos: Pos,
    sense: u32,
}

impl SynsetId {
    pub fn new(word: &str, pos: Pos, sense: u32) -> Result<Self, MalformedSynsetId> {
        let fail = |problem| MalformedSynsetId {
            text: alloc::format!("{word}#{}#{sense}", pos.tag()),
            problem,
        };
        if word.is_empty() {
            return Err(fail(SynsetIdProblem::EmptyWord));
        }
        if word.chars().any(char::is_whitespace) || word.contains('#') {
            return Err(fail(SynsetIdProblem::InvalidWordChar));
        }
        if sense == 0 {
            return Err(fail(SynsetIdProblem::BadSenseNumber));
        }
        Ok(SynsetId { word: word.to_string(), pos, sense })
    }

    pub fn parse(text: &str) -> Result<Self, MalformedSynsetId> {
        let fail = |problem| MalformedSynsetId { text: text.to_string(), problem };
        let separators = text.matches('#').count();
        if separators != 2 {
            return Err(fail(SynsetIdProblem::SeparatorCount(separators)));
        }
        let mut parts = text.splitn(3, '#');
        let (word, tag, sense) = match (parts.next(), parts.next(), parts.next()) {
            (Some(w), Some(t), Some(s)) => (w, t, s),
            _ => return Err(fail(SynsetIdProblem::SeparatorCount(separators))),
        };
        let pos = Pos::from_tag(tag).ok_or_else(|| fail(SynsetIdProblem::UnknownPos))?;
        // Only canonical decimals: "01" or "+1" would not print back identically.
        let canonical = !sense.is_empty()
            && sense.bytes().all(|b| b.is_ascii_digit())
            && !sense.starts_with('0');
        let sense: u32 = if canonical { sense.parse().ok() } else { None }
            .ok_or_else(|| fail(SynsetIdProblem::BadSenseNumber))?;
        SynsetId::new(word, pos, sense).map_err(|e| fail(e.problem))
    }

    pub fn sense_word(&self) -> &str {
        &self.word
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }

    pub fn sense_number(&self) -> u32 {
        self.sense
    }

    pub fn is_first_sense(&self) -> bool {
        self.sense == 1
    }

    /// Display name of the concept behind this synset: the sense word
    /// lowercased, with WordNet's underscores read as spaces.
    pub fn concept_name(&self) -> String {
        self.word
            .chars()
            .flat_map(char::to_lowercase)
            .map(|c| if c == '_' { ' ' } else { c })
            .collect()
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}#{}", self.word, self.pos.tag(), self.sense)
    }
}

impl FromStr for SynsetId {
    type Err = MalformedSynsetId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SynsetId::parse(s)
    }
}
