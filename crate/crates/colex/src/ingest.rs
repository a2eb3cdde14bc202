//! Readers and writers for the external file formats.
//!
//! All inputs are UTF-8. A `#` at the start of a line makes it a comment and
//! blank lines are skipped. TSV files are unquoted; CSV files follow the usual
//! double-quote convention, so words containing commas survive a round trip.
//!
//! | file            | columns                                             |
//! |-----------------|-----------------------------------------------------|
//! | lexicon TSV     | language, lemma, synset_id                          |
//! | pronunciations  | word, pronunciation (per `<lang>.tsv`), or language, word, pronunciation |
//! | concreteness    | word, conc_mean                                     |
//! | affect          | word, valence_mean, arousal_mean, dominance_mean    |
//! | feature table   | ipa, then the 24 feature names; cells `+`, `-`, `0` |
//! | languages       | code, family, macroarea (may be empty)              |
//!
//! Parsing functions work on bytes; the `load_*` functions add file handling,
//! path context and warnings for problems skipped in lenient mode.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use colex_core::lexicon::{normalize_lemma, RatingRange, FEATURE_COUNT, FEATURE_NAMES};
use colex_core::{FeatureTable, LanguageInfo, LexEntry, Mode, PronEntry, RatingRecord, SegmentFeatures, SynsetId};

use crate::error::{CliError, IngestError};

/// Records parsed from one source, with bookkeeping.
#[derive(Debug)]
pub struct Ingested<T> {
    pub records: Vec<T>,
    /// Data lines read (comments and blank lines excluded).
    pub lines: usize,
    /// Lines dropped as exact duplicates of an earlier record.
    pub duplicates: usize,
    /// Problems skipped in lenient mode. Always empty in strict mode.
    pub issues: Vec<IngestError>,
}

impl<T> Default for Ingested<T> {
    fn default() -> Self {
        Ingested { records: Vec::new(), lines: 0, duplicates: 0, issues: Vec::new() }
    }
}

impl<T> Ingested<T> {
    fn absorb(&mut self, other: Ingested<T>) {
        self.records.extend(other.records);
        self.lines += other.lines;
        self.duplicates += other.duplicates;
        self.issues.extend(other.issues);
    }
}

enum Row<T> {
    Record(T),
    Duplicate,
    Header,
    /// A structural problem that fails the file in either mode.
    Abort(IngestError),
}

/// Splits one CSV line, honoring double quotes; fields are trimmed.
fn split_csv(line: &[u8]) -> Option<Vec<Vec<u8>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(line);
    let mut record = csv::ByteRecord::new();
    match rdr.read_byte_record(&mut record) {
        Ok(true) => Some(record.iter().map(<[u8]>::to_vec).collect()),
        Ok(false) => Some(Vec::new()),
        Err(_) => None,
    }
}

/// Runs `row` over every data line. In strict mode the first error aborts, in
/// lenient mode it is recorded and the line skipped.
fn drive<T>(
    bytes: &[u8],
    delimiter: u8,
    mode: Mode,
    mut row: impl FnMut(usize, usize, &[&str]) -> Result<Row<T>, IngestError>,
) -> Result<Ingested<T>, IngestError> {
    let mut out = Ingested::default();
    let mut index = 0;
    for (i, raw) in bytes.split(|b| *b == b'\n').enumerate() {
        let line = i + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        if raw.first() == Some(&b'#') || raw.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        out.lines += 1;
        let outcome = match std::str::from_utf8(raw) {
            Err(_) => Err(IngestError::Encoding { line }),
            Ok(text) if delimiter == b',' => match split_csv(text.as_bytes()) {
                None => Err(IngestError::Csv { line, message: "unbalanced quotes".into() }),
                Some(cells) => {
                    // Cells are substrings of valid UTF-8 split at ASCII bytes.
                    let cells: Vec<String> = cells.into_iter().map(|c| String::from_utf8(c).expect("utf-8")).collect();
                    let fields: Vec<&str> = cells.iter().map(String::as_str).collect();
                    index += 1;
                    row(line, index, &fields)
                }
            },
            Ok(text) => {
                let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
                index += 1;
                row(line, index, &fields)
            }
        };
        match outcome {
            Ok(Row::Record(r)) => out.records.push(r),
            Ok(Row::Duplicate) => out.duplicates += 1,
            Ok(Row::Header) => out.lines -= 1,
            Ok(Row::Abort(e)) => return Err(e),
            Err(e) if mode == Mode::Lenient => out.issues.push(e),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn arity(line: usize, fields: &[&str], expected: usize) -> Result<(), IngestError> {
    if fields.len() == expected {
        Ok(())
    } else {
        Err(IngestError::Arity { line, expected, found: fields.len() })
    }
}

fn is_header(index: usize, first: &str, name: &str) -> bool {
    index == 1 && first.eq_ignore_ascii_case(name)
}

/// Lexicon TSV: language, lemma, synset_id. Lemmas are NFC-normalized;
/// repeated (language, lemma, synset) triples are kept once.
pub fn parse_lexicon(bytes: &[u8], mode: Mode, underscores_as_spaces: bool) -> Result<Ingested<LexEntry>, IngestError> {
    let mut seen = HashSet::new();
    drive(bytes, b'\t', mode, |line, _, fields| {
        arity(line, fields, 3)?;
        let synset = SynsetId::parse(fields[2]).map_err(|source| IngestError::Synset { line, source })?;
        let lemma = normalize_lemma(fields[1], underscores_as_spaces);
        let entry = LexEntry::new(fields[0], &lemma, synset).map_err(|source| IngestError::Record { line, source })?;
        Ok(if seen.insert(entry.clone()) { Row::Record(entry) } else { Row::Duplicate })
    })
}

/// Pronunciation TSV. With `language` set the file has two columns (word,
/// pronunciation); without, a leading language column. Pronunciations are
/// space-separated segments.
pub fn parse_pronunciations(
    bytes: &[u8],
    language: Option<&str>,
    mode: Mode,
    underscores_as_spaces: bool,
) -> Result<Ingested<PronEntry>, IngestError> {
    let mut seen = HashSet::new();
    drive(bytes, b'\t', mode, |line, _, fields| {
        let (lang, word, pron) = match language {
            Some(lang) => {
                arity(line, fields, 2)?;
                (lang, fields[0], fields[1])
            }
            None => {
                arity(line, fields, 3)?;
                (fields[0], fields[1], fields[2])
            }
        };
        if pron.is_empty() {
            return Err(IngestError::EmptyPronunciation { line });
        }
        let word = normalize_lemma(word, underscores_as_spaces);
        let entry = PronEntry::from_spaced(lang, &word, pron).map_err(|source| IngestError::Record { line, source })?;
        Ok(if seen.insert(entry.clone()) { Row::Record(entry) } else { Row::Duplicate })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatingKind {
    Concreteness,
    Affect,
}

impl RatingKind {
    fn columns(self) -> &'static [&'static str] {
        match self {
            RatingKind::Concreteness => &["word", "conc_mean"],
            RatingKind::Affect => &["word", "valence_mean", "arousal_mean", "dominance_mean"],
        }
    }
}

fn rating_cell(line: usize, column: usize, text: &str, range: RatingRange) -> Result<Option<f64>, IngestError> {
    if text.is_empty() {
        return Ok(None);
    }
    let value: f64 = text
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| IngestError::Number { line, column, text: text.to_string() })?;
    if !range.contains(value) {
        return Err(IngestError::Range { line, column, value, min: range.min, max: range.max });
    }
    Ok(Some(value))
}

/// Ratings CSV of one kind, with an optional `word,...` header. Words are
/// lowercased; a word rated twice in one file is an error.
pub fn parse_ratings(
    bytes: &[u8],
    kind: RatingKind,
    affect_range: RatingRange,
    mode: Mode,
) -> Result<Ingested<RatingRecord>, IngestError> {
    let columns = kind.columns();
    let mut seen = HashSet::new();
    drive(bytes, b',', mode, |line, index, fields| {
        if is_header(index, fields[0], "word") {
            return Ok(Row::Header);
        }
        arity(line, fields, columns.len())?;
        let record = match kind {
            RatingKind::Concreteness => {
                let conc = rating_cell(line, 2, fields[1], RatingRange::CONCRETENESS)?;
                RatingRecord::new(fields[0], conc, [None; 3], affect_range)
            }
            RatingKind::Affect => {
                let mut affect = [None; 3];
                for (i, slot) in affect.iter_mut().enumerate() {
                    *slot = rating_cell(line, i + 2, fields[i + 1], affect_range)?;
                }
                RatingRecord::new(fields[0], None, affect, affect_range)
            }
        }
        .map_err(|source| IngestError::Record { line, source })?;
        if !seen.insert(record.concept.clone()) {
            return Err(IngestError::DuplicateConcept { line, word: record.concept });
        }
        Ok(Row::Record(record))
    })
}

/// Feature table CSV. The header names the segment column followed by the 24
/// features in any order; rows are mapped back to canonical feature order.
pub fn parse_feature_table(bytes: &[u8], mode: Mode) -> Result<Ingested<(String, SegmentFeatures)>, IngestError> {
    let mut order: Option<[usize; FEATURE_COUNT]> = None;
    let mut seen = HashSet::new();
    drive(bytes, b',', mode, |line, index, fields| {
        if index == 1 {
            let found = fields.len().saturating_sub(1);
            if found != FEATURE_COUNT {
                return Ok(Row::Abort(IngestError::WrongColumnCount { line, expected: FEATURE_COUNT, found }));
            }
            let mut map = [usize::MAX; FEATURE_COUNT];
            for (col, name) in fields[1..].iter().enumerate() {
                match FEATURE_NAMES.iter().position(|f| f == name) {
                    Some(f) if map[f] == usize::MAX => map[f] = col,
                    _ => return Ok(Row::Abort(IngestError::UnknownFeature { line, name: name.to_string() })),
                }
            }
            order = Some(map);
            return Ok(Row::Header);
        }
        let Some(map) = order else {
            return Err(IngestError::Csv { line, message: "feature table has no valid header".into() });
        };
        if fields.len() != FEATURE_COUNT + 1 {
            return Err(IngestError::WrongColumnCount { line, expected: FEATURE_COUNT, found: fields.len() - 1 });
        }
        let segment = fields[0];
        if segment.is_empty() || segment.chars().any(char::is_whitespace) {
            let source = colex_core::lexicon::RecordError::BadSegment(segment.to_string());
            return Err(IngestError::Record { line, source });
        }
        let mut values = [0i8; FEATURE_COUNT];
        for (f, value) in values.iter_mut().enumerate() {
            let cell = fields[1 + map[f]];
            *value = match cell {
                "+" => 1,
                "-" => -1,
                "0" => 0,
                _ => {
                    return Err(IngestError::InvalidFeatureValue {
                        line,
                        segment: segment.to_string(),
                        feature: FEATURE_NAMES[f].to_string(),
                        value: cell.to_string(),
                    })
                }
            };
        }
        if !seen.insert(segment.to_string()) {
            return Err(IngestError::DuplicateSegment { line, segment: segment.to_string() });
        }
        let features = SegmentFeatures::new(values).expect("ternary values");
        Ok(Row::Record((segment.to_string(), features)))
    })
}

/// Builds the lookup table from parsed rows.
pub fn feature_table(rows: &[(String, SegmentFeatures)]) -> FeatureTable {
    let mut table = FeatureTable::new();
    for (segment, features) in rows {
        // Rows were deduplicated while parsing.
        let _ = table.insert(segment, *features);
    }
    table
}

/// Language metadata CSV with an optional `code,...` header.
pub fn parse_languages(bytes: &[u8], mode: Mode) -> Result<Ingested<LanguageInfo>, IngestError> {
    let mut seen = HashSet::new();
    drive(bytes, b',', mode, |line, index, fields| {
        if is_header(index, fields[0], "code") {
            return Ok(Row::Header);
        }
        if !(2..=3).contains(&fields.len()) {
            return Err(IngestError::Arity { line, expected: 3, found: fields.len() });
        }
        let (code, family) = (fields[0], fields[1]);
        if code.is_empty() || code.chars().any(char::is_whitespace) {
            return Err(IngestError::Csv { line, message: format!("invalid language code {code:?}") });
        }
        if family.is_empty() {
            return Err(IngestError::Csv { line, message: "empty family".into() });
        }
        if !seen.insert(code.to_string()) {
            return Err(IngestError::DuplicateLanguageCode { line, code: code.to_string() });
        }
        let macroarea = fields.get(2).filter(|m| !m.is_empty()).map(|m| m.to_string());
        Ok(Row::Record(LanguageInfo { code: code.into(), family: family.into(), macroarea }))
    })
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    if !path.exists() {
        return Err(CliError::MissingInput(path.to_path_buf()));
    }
    fs::read(path).map_err(|e| CliError::Input { path: path.to_path_buf(), source: e.into() })
}

fn with_path<T>(path: &Path, parsed: Result<Ingested<T>, IngestError>) -> Result<Ingested<T>, CliError> {
    let parsed = parsed.map_err(|source| CliError::Input { path: path.to_path_buf(), source })?;
    for issue in &parsed.issues {
        log::warn!("{}: skipped: {issue}", path.display());
    }
    Ok(parsed)
}

pub fn load_lexicon(path: &Path, mode: Mode, underscores_as_spaces: bool) -> Result<Ingested<LexEntry>, CliError> {
    with_path(path, parse_lexicon(&read(path)?, mode, underscores_as_spaces))
}

/// Loads a directory of `<language>.tsv` files (two columns each) or a single
/// three-column file.
pub fn load_pronunciations(path: &Path, mode: Mode, underscores_as_spaces: bool) -> Result<Ingested<PronEntry>, CliError> {
    if !path.is_dir() {
        return with_path(path, parse_pronunciations(&read(path)?, None, mode, underscores_as_spaces));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| CliError::Input { path: path.to_path_buf(), source: e.into() })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "tsv"))
        .collect();
    files.sort();
    let mut all = Ingested::default();
    for file in files {
        let Some(language) = file.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else { continue };
        let parsed = parse_pronunciations(&read(&file)?, Some(&language), mode, underscores_as_spaces);
        all.absorb(with_path(&file, parsed)?);
    }
    Ok(all)
}

pub fn load_ratings(path: &Path, kind: RatingKind, affect_range: RatingRange, mode: Mode) -> Result<Ingested<RatingRecord>, CliError> {
    with_path(path, parse_ratings(&read(path)?, kind, affect_range, mode))
}

pub fn load_feature_table(path: &Path, mode: Mode) -> Result<Ingested<(String, SegmentFeatures)>, CliError> {
    with_path(path, parse_feature_table(&read(path)?, mode))
}

pub fn load_languages(path: &Path, mode: Mode) -> Result<Ingested<LanguageInfo>, CliError> {
    with_path(path, parse_languages(&read(path)?, mode))
}

/// Content digest of an input: a file, or every file of a directory in name
/// order with its name mixed in.
pub fn digest(path: &Path) -> Result<String, CliError> {
    use sha2::{Digest, Sha256};
    let io_err = |e: std::io::Error| CliError::Input { path: path.to_path_buf(), source: e.into() };
    let mut hasher = Sha256::new();
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(io_err)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for file in files {
            hasher.update(file.file_name().map(|n| n.as_encoded_bytes()).unwrap_or_default());
            hasher.update([0]);
            hasher.update(fs::read(&file).map_err(io_err)?);
        }
    } else {
        hasher.update(fs::read(path).map_err(io_err)?);
    }
    Ok(hex::encode(hasher.finalize()))
}

// Writers. Each emits the format its parser reads, so parse(write(x)) == x.

pub fn write_lexicon(entries: &[LexEntry]) -> String {
    let mut out = String::from("# language\tlemma\tsynset_id\n");
    for e in entries {
        out.push_str(&format!("{}\t{}\t{}\n", e.language, e.lemma, e.synset));
    }
    out
}

/// Three-column pronunciation file.
pub fn write_pronunciations(entries: &[PronEntry]) -> String {
    let mut out = String::from("# language\tword\tpronunciation\n");
    for e in entries {
        out.push_str(&format!("{}\t{}\t{}\n", e.language, e.word, e.segments.join(" ")));
    }
    out
}

/// Two-column pronunciation file of one language.
pub fn write_language_pronunciations(entries: &[PronEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!("{}\t{}\n", e.word, e.segments.join(" ")));
    }
    out
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_ratings(records: &[RatingRecord], kind: RatingKind) -> String {
    let header = kind.columns().iter().map(|c| c.to_string()).collect();
    let rows = records.iter().map(|r| match kind {
        RatingKind::Concreteness => vec![r.concept.clone(), cell(r.concreteness)],
        RatingKind::Affect => vec![r.concept.clone(), cell(r.valence), cell(r.arousal), cell(r.dominance)],
    });
    csv_string(std::iter::once(header).chain(rows))
}

pub fn write_feature_table(table: &FeatureTable) -> String {
    let header = std::iter::once("ipa".to_string()).chain(FEATURE_NAMES.iter().map(|f| f.to_string())).collect();
    let rows = table.iter().map(|(segment, features)| {
        std::iter::once(segment.to_string())
            .chain(features.values().iter().map(|v| match v {
                1 => "+".to_string(),
                -1 => "-".to_string(),
                _ => "0".to_string(),
            }))
            .collect()
    });
    csv_string(std::iter::once(header).chain(rows))
}

pub fn write_languages(languages: &[LanguageInfo]) -> String {
    let header = vec!["code".into(), "family".into(), "macroarea".into()];
    let rows = languages
        .iter()
        .map(|l| vec![l.code.clone(), l.family.clone(), l.macroarea.clone().unwrap_or_default()]);
    csv_string(std::iter::once(header).chain(rows))
}
