use std::io;
use std::path::PathBuf;

use colex_core::lexicon::RecordError;
use colex_core::phonology::PhonologyError;
use colex_core::synset::MalformedSynsetId;

/// A problem in one input file. Every variant except `Io` carries the 1-based
/// line it was found on.
#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line {line}: not valid UTF-8")]
    Encoding { line: usize },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Arity { line: usize, expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Synset { line: usize, source: MalformedSynsetId },
    #[error("line {line}: {source}")]
    Record { line: usize, source: RecordError },
    #[error("line {line}: empty pronunciation")]
    EmptyPronunciation { line: usize },
    #[error("line {line}, column {column}: not a number: {text:?}")]
    Number { line: usize, column: usize, text: String },
    #[error("line {line}, column {column}: {value} outside [{min}, {max}]")]
    Range { line: usize, column: usize, value: f64, min: f64, max: f64 },
    #[error("line {line}: duplicate concept {word:?}")]
    DuplicateConcept { line: usize, word: String },
    #[error("line {line}: expected {expected} feature columns, found {found}")]
    WrongColumnCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: unknown or repeated feature column {name:?}")]
    UnknownFeature { line: usize, name: String },
    #[error("line {line}: invalid value {value:?} for feature {feature} of segment {segment:?}")]
    InvalidFeatureValue { line: usize, segment: String, feature: String, value: String },
    #[error("line {line}: duplicate segment {segment:?}")]
    DuplicateSegment { line: usize, segment: String },
    #[error("line {line}: duplicate language code {code:?}")]
    DuplicateLanguageCode { line: usize, code: String },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
}

impl IngestError {
    pub fn line(&self) -> Option<usize> {
        match self {
            IngestError::Io(_) => None,
            IngestError::Encoding { line }
            | IngestError::Arity { line, .. }
            | IngestError::Synset { line, .. }
            | IngestError::Record { line, .. }
            | IngestError::EmptyPronunciation { line }
            | IngestError::Number { line, .. }
            | IngestError::Range { line, .. }
            | IngestError::DuplicateConcept { line, .. }
            | IngestError::WrongColumnCount { line, .. }
            | IngestError::UnknownFeature { line, .. }
            | IngestError::InvalidFeatureValue { line, .. }
            | IngestError::DuplicateSegment { line, .. }
            | IngestError::DuplicateLanguageCode { line, .. }
            | IngestError::Csv { line, .. } => Some(*line),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            IngestError::Io(_) => "E_IO",
            IngestError::Encoding { .. } | IngestError::Arity { .. } | IngestError::Csv { .. } => "E_PARSE",
            IngestError::Synset { .. } => "E_MALFORMED_SYNSET_ID",
            IngestError::Record { .. } => "E_INVALID_RECORD",
            IngestError::EmptyPronunciation { .. } => "E_EMPTY_PRONUNCIATION",
            IngestError::Number { .. } => "E_PARSE",
            IngestError::Range { .. } => "E_RANGE",
            IngestError::DuplicateConcept { .. } => "E_DUPLICATE_CONCEPT",
            IngestError::WrongColumnCount { .. } | IngestError::UnknownFeature { .. } => "E_WRONG_COLUMN_COUNT",
            IngestError::InvalidFeatureValue { .. } => "E_INVALID_FEATURE_VALUE",
            IngestError::DuplicateSegment { .. } => "E_DUPLICATE_SEGMENT",
            IngestError::DuplicateLanguageCode { .. } => "E_DUPLICATE_LANGUAGE_CODE",
        }
    }
}

/// Everything the command line can fail with.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("input not found: {0}")]
    MissingInput(PathBuf),
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: IngestError },
    #[error("{context}: {source}")]
    Phonology { context: String, source: PhonologyError },
    #[error("missing artifact {} (run `colex build` first)", .0.display())]
    MissingArtifact(PathBuf),
    #[error("{}: malformed artifact: {message}", path.display())]
    BadArtifact { path: PathBuf, message: String },
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::MissingInput(_) => "E_MISSING_INPUT",
            CliError::Input { source, .. } => source.code(),
            CliError::Phonology { source: PhonologyError::UnknownSegment(_), .. } => "E_UNKNOWN_SEGMENT",
            CliError::Phonology { .. } => "E_PHONOLOGY",
            CliError::MissingArtifact(_) => "E_MISSING_ARTIFACT",
            CliError::BadArtifact { .. } => "E_BAD_ARTIFACT",
            CliError::UnknownConcept(_) => "E_UNKNOWN_CONCEPT",
            CliError::Write { .. } => "E_IO",
        }
    }

    /// 0 success, 1 data error, 2 usage or configuration error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::MissingInput(_) => 2,
            _ => 1,
        }
    }
}
