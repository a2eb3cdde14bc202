//! Build artifacts in the output directory and their readers.
//!
//! | file              | content                                                  |
//! |-------------------|----------------------------------------------------------|
//! | `graph.tsv`       | synset-level colexification graph, one row per edge      |
//! | `concepts.tsv`    | first-sense concept pairs with counts and witnesses      |
//! | `dataset.tsv`     | one row per (concept pair, witness), Table-1 columns     |
//! | `ratings.tsv`     | ratings attached to every concept                        |
//! | `phonology.tsv`   | per-lemma segments, length, TTR and feature counts       |
//! | `languages.tsv`   | per-language counts with family and macroarea            |
//! | `summary.tsv`     | dataset statistics                                       |
//! | `manifest.json`   | config, input digests, per-stage counts and timings      |
//!
//! Absent values are written as `-`. Dataset distances have 4 decimals
//! (round half to even on the binary value); `ratings.tsv` keeps full
//! precision so analyses see the values that were ingested.

use std::collections::BTreeMap;

use colex_core::colexgraph::{ColexGraph, ConceptPairRecord};
use colex_core::lexicon::{FEATURE_COUNT, FEATURE_NAMES};
use colex_core::phonology::{metrics_of, LemmaFeatureProfile, PhonemeSeq};
use colex_core::ratings::{ColexRecord, ConceptRatings, PairDistances, RatingDim, RatingsMap};
use colex_core::summary::SummaryTable;
use colex_core::{SynsetId, Witness};

pub const GRAPH: &str = "graph.tsv";
pub const CONCEPTS: &str = "concepts.tsv";
pub const DATASET: &str = "dataset.tsv";
pub const RATINGS: &str = "ratings.tsv";
pub const PHONOLOGY: &str = "phonology.tsv";
pub const LANGUAGES: &str = "languages.tsv";
pub const SUMMARY: &str = "summary.tsv";
pub const MANIFEST: &str = "manifest.json";

pub const ABSENT: &str = "-";

pub const DATASET_HEADER: [&str; 11] = [
    "sense_lemma",
    "language",
    "phonemes",
    "synset_1",
    "synset_2",
    "concept_1",
    "concept_2",
    "conc_dist",
    "v_dist",
    "a_dist",
    "d_dist",
];

pub fn fixed4(value: Option<f64>) -> String {
    value.map_or_else(|| ABSENT.to_string(), |v| format!("{v:.4}"))
}

fn full(value: Option<f64>) -> String {
    value.map_or_else(|| ABSENT.to_string(), |v| v.to_string())
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if matches!(c, '\\' | ';' | ':') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// `lemma:language` pairs joined by `;`, with `\`, `;` and `:` escaped.
pub fn format_witnesses<'a>(witnesses: impl IntoIterator<Item = &'a Witness>) -> String {
    witnesses
        .into_iter()
        .map(|w| format!("{}:{}", escape(&w.lemma), escape(&w.language)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_witnesses(text: &str) -> Result<Vec<Witness>, String> {
    let mut out = Vec::new();
    let mut fields = vec![String::new()];
    let mut chars = text.chars();
    let mut finish = |fields: &mut Vec<String>| -> Result<(), String> {
        match std::mem::replace(fields, vec![String::new()]).as_slice() {
            [lemma, language] if !lemma.is_empty() && !language.is_empty() => {
                out.push(Witness::new(lemma.clone(), language.clone()));
                Ok(())
            }
            _ => Err(format!("malformed witness list {text:?}")),
        }
    };
    while let Some(c) = chars.next() {
        match c {
            '\\' => fields.last_mut().unwrap().push(chars.next().ok_or("dangling escape")?),
            ':' => fields.push(String::new()),
            ';' => finish(&mut fields)?,
            c => fields.last_mut().unwrap().push(c),
        }
    }
    if !text.is_empty() {
        finish(&mut fields)?;
    }
    Ok(out)
}

fn tsv_line(out: &mut String, cells: &[&str]) {
    out.push_str(&cells.join("\t"));
    out.push('\n');
}

pub fn graph_tsv(graph: &ColexGraph) -> String {
    let mut out = String::new();
    tsv_line(&mut out, &["synset_1", "synset_2", "n_witnesses", "witnesses"]);
    for e in graph.edges() {
        let (a, b) = (e.first.to_string(), e.second.to_string());
        tsv_line(&mut out, &[&a, &b, &e.witness_count().to_string(), &format_witnesses(e.witnesses())]);
    }
    out
}

const CONCEPTS_HEADER: [&str; 8] =
    ["concept_1", "concept_2", "n_colex", "n_lemmas", "n_languages", "witnesses", "synset_1", "synset_2"];

pub fn concepts_tsv(records: &[ConceptPairRecord]) -> String {
    let mut out = String::new();
    tsv_line(&mut out, &CONCEPTS_HEADER);
    for r in records {
        tsv_line(
            &mut out,
            &[
                &r.concept1,
                &r.concept2,
                &r.n_colex.to_string(),
                &r.n_lemmas.to_string(),
                &r.n_languages.to_string(),
                &format_witnesses(&r.witnesses),
                &r.synset1.to_string(),
                &r.synset2.to_string(),
            ],
        );
    }
    out
}

/// Data rows of a TSV artifact, checked against the expected header.
fn rows<'a>(text: &'a str, header: &[&str]) -> Result<Vec<Vec<&'a str>>, String> {
    let mut lines = text.lines();
    let found: Vec<&str> = lines.next().unwrap_or_default().split('\t').collect();
    if found != header {
        return Err(format!("unexpected header {found:?}"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cells: Vec<&str> = line.split('\t').collect();
            if cells.len() == header.len() {
                Ok(cells)
            } else {
                Err(format!("line {}: expected {} columns, found {}", i + 2, header.len(), cells.len()))
            }
        })
        .collect()
}

fn synset(text: &str) -> Result<SynsetId, String> {
    SynsetId::parse(text).map_err(|e| e.to_string())
}

pub fn read_concepts(text: &str) -> Result<Vec<ConceptPairRecord>, String> {
    rows(text, &CONCEPTS_HEADER)?
        .into_iter()
        .map(|c| {
            let record = ConceptPairRecord::new(synset(c[6])?, synset(c[7])?, parse_witnesses(c[5])?);
            if record.concept1 != c[0] || record.concept2 != c[1] || record.n_colex.to_string() != c[2] {
                return Err(format!("inconsistent concept row {:?}", c[..3].join(" ")));
            }
            Ok(record)
        })
        .collect()
}

pub fn dataset_tsv(rows: &[ColexRecord]) -> String {
    let mut out = String::new();
    tsv_line(&mut out, &DATASET_HEADER);
    for r in rows {
        let phonemes = r.phonemes.as_ref().map_or_else(|| ABSENT.to_string(), PhonemeSeq::spaced);
        let mut cells = vec![
            r.lemma.clone(),
            r.language.clone(),
            phonemes,
            r.synset1.to_string(),
            r.synset2.to_string(),
            r.concept1.clone(),
            r.concept2.clone(),
        ];
        cells.extend(RatingDim::ALL.map(|d| fixed4(r.distances.get(d))));
        tsv_line(&mut out, &cells.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

/// Dataset rows with distances recomputed from `ratings` when given.
pub fn read_dataset(text: &str, ratings: Option<&RatingsMap>) -> Result<Vec<ColexRecord>, String> {
    rows(text, &DATASET_HEADER)?
        .into_iter()
        .map(|c| {
            let phonemes = if c[2] == ABSENT {
                None
            } else {
                Some(PhonemeSeq::new(c[2].split(' ').map(String::from).collect()).map_err(|e| e.to_string())?)
            };
            let (synset1, synset2) = (synset(c[3])?, synset(c[4])?);
            let distances = match ratings.map(|m| (m.get(&synset1), m.get(&synset2))) {
                Some((Some(a), Some(b))) => colex_core::ratings::pair_distances(a, b),
                _ => PairDistances::default(),
            };
            Ok(ColexRecord {
                lemma: c[0].to_string(),
                language: c[1].to_string(),
                phonemes,
                synset1,
                synset2,
                concept1: c[5].to_string(),
                concept2: c[6].to_string(),
                distances,
            })
        })
        .collect()
}

const RATINGS_HEADER: [&str; 6] = ["synset", "concept", "concreteness", "valence", "arousal", "dominance"];

pub fn ratings_tsv(ratings: &RatingsMap) -> String {
    let mut out = String::new();
    tsv_line(&mut out, &RATINGS_HEADER);
    for (synset, r) in ratings {
        let mut cells = vec![synset.to_string(), r.concept.clone()];
        cells.extend(RatingDim::ALL.map(|d| full(r.get(d))));
        tsv_line(&mut out, &cells.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

pub fn read_ratings(text: &str) -> Result<RatingsMap, String> {
    let mut map = RatingsMap::new();
    for c in rows(text, &RATINGS_HEADER)? {
        let mut values = [None; 4];
        for (v, cell) in values.iter_mut().zip(&c[2..]) {
            if *cell != ABSENT {
                *v = Some(cell.parse::<f64>().map_err(|_| format!("bad rating {cell:?}"))?);
            }
        }
        map.insert(synset(c[0])?, ConceptRatings::new(c[1], values));
    }
    Ok(map)
}

/// One lemma with phonemes, as dumped to `phonology.tsv`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonologyRow {
    pub language: String,
    pub lemma: String,
    pub phonemes: PhonemeSeq,
    /// Absent when the build had no feature table.
    pub profile: Option<LemmaFeatureProfile>,
}

fn phonology_header() -> Vec<&'static str> {
    let mut h = vec!["language", "lemma", "segments", "seg_len", "ttr", "initial", "last"];
    h.extend(FEATURE_NAMES);
    h
}

pub fn phonology_tsv(rows: &[PhonologyRow]) -> String {
    let mut out = String::new();
    tsv_line(&mut out, &phonology_header());
    for r in rows {
        let m = metrics_of(&r.phonemes);
        let mut cells = vec![
            r.language.clone(),
            r.lemma.clone(),
            r.phonemes.spaced(),
            m.seg_len.to_string(),
            format!("{:.6}", m.ttr),
            r.phonemes.initial().to_string(),
            r.phonemes.last().to_string(),
        ];
        match &r.profile {
            Some(p) => cells.extend(p.counts.iter().map(u32::to_string)),
            None => cells.extend(std::iter::repeat_n(ABSENT.to_string(), FEATURE_COUNT)),
        }
        tsv_line(&mut out, &cells.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

pub fn read_phonology(text: &str) -> Result<Vec<PhonologyRow>, String> {
    rows(text, &phonology_header())?
        .into_iter()
        .map(|c| {
            let phonemes = PhonemeSeq::new(c[2].split(' ').map(String::from).collect()).map_err(|e| e.to_string())?;
            let profile = if c[7] == ABSENT {
                None
            } else {
                let mut counts = [0u32; FEATURE_COUNT];
                for (count, cell) in counts.iter_mut().zip(&c[7..]) {
                    *count = cell.parse().map_err(|_| format!("bad feature count {cell:?}"))?;
                }
                Some(LemmaFeatureProfile { counts })
            };
            Ok(PhonologyRow { language: c[0].into(), lemma: c[1].into(), phonemes, profile })
        })
        .collect()
}

/// Per-language counts; the data behind a language map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageRow {
    pub code: String,
    pub family: Option<String>,
    pub macroarea: Option<String>,
    pub entries: usize,
    pub lemmas: usize,
    pub colexifications: usize,
    pub phone_lemma_pairs: usize,
}

const LANGUAGES_HEADER: [&str; 7] =
    ["language", "family", "macroarea", "entries", "lemmas", "colexifications", "phone_lemma_pairs"];

pub fn languages_tsv(rows: &[LanguageRow]) -> String {
    let mut out = String::new();
    tsv_line(&mut out, &LANGUAGES_HEADER);
    for r in rows {
        tsv_line(
            &mut out,
            &[
                &r.code,
                r.family.as_deref().unwrap_or(ABSENT),
                r.macroarea.as_deref().unwrap_or(ABSENT),
                &r.entries.to_string(),
                &r.lemmas.to_string(),
                &r.colexifications.to_string(),
                &r.phone_lemma_pairs.to_string(),
            ],
        );
    }
    out
}

/// Language → family for languages with metadata.
pub fn read_families(text: &str) -> Result<BTreeMap<String, String>, String> {
    Ok(rows(text, &LANGUAGES_HEADER)?
        .into_iter()
        .filter(|c| c[1] != ABSENT)
        .map(|c| (c[0].to_string(), c[1].to_string()))
        .collect())
}

pub fn summary_tsv(summary: &SummaryTable) -> String {
    let mut out = String::from("statistic\tvalue\n");
    for (name, value) in summary.rows() {
        out.push_str(&format!("{name}\t{value}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_round_trip() {
        let ws = vec![Witness::new("a;b", "x"), Witness::new("c:d\\", "y:z"), Witness::new("pāp", "fa")];
        let text = format_witnesses(&ws);
        assert_eq!(parse_witnesses(&text).unwrap(), ws);
        assert_eq!(format_witnesses(&[Witness::new("pāp", "fa"), Witness::new("bābā", "ar")]), "pāp:fa;bābā:ar");
        assert!(parse_witnesses("x").is_err());
        assert!(parse_witnesses("").unwrap().is_empty());
    }

    #[test]
    fn four_decimals_half_even() {
        assert_eq!(fixed4(Some(0.41999999999999993)), "0.4200");
        assert_eq!(fixed4(Some(0.00005)), "0.0001"); // binary value is just above the tie
        assert_eq!(fixed4(Some(0.125)), "0.1250");
        assert_eq!(format!("{:.2}", 0.125), "0.12");
        assert_eq!(fixed4(None), "-");
    }

    #[test]
    fn concepts_round_trip() {
        let s = |t: &str| SynsetId::parse(t).unwrap();
        let records = vec![ConceptPairRecord::new(
            s("Santa_Claus#n#1"),
            s("dad#n#1"),
            vec![Witness::new("pare", "es"), Witness::new("papá", "es")],
        )];
        assert_eq!(read_concepts(&concepts_tsv(&records)).unwrap(), records);
    }
}
