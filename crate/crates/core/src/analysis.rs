//! Grouped correlation analyses over the curated dataset.
//!
//! Every analysis sorts its input first, so results do not depend on input
//! order. Cells that cannot be computed (too few samples, zero variance, a
//! phoneme present in every sample) are collected as [`SkippedCell`]s instead
//! of failing the run.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;

use crate::colexgraph::ConceptPairRecord;
use crate::lexicon::{LanguageInfo, FEATURE_NAMES};
use crate::phonology::{metrics_of, LemmaFeatureProfile, PhonemeSeq, Position};
use crate::ratings::{record_distances, ColexRecord, RatingDim, RatingsMap};
use crate::stats::{apply_report_threshold, bonferroni, pearson_r, point_biserial, CorrelationReport, CorrelationResult, StatsError};
use crate::synset::SynsetId;

/// Group name of analyses that pool every sample.
pub const ALL_GROUP: &str = "ALL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisSettings {
    pub alpha: f64,
    pub report_threshold: f64,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings { alpha: 0.05, report_threshold: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCell {
    pub group: String,
    pub variable_x: String,
    pub variable_y: String,
    pub n: usize,
    pub reason: StatsError,
}

/// Per-group sample description (languages, samples, phoneme inventory).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSummary {
    pub group: String,
    pub languages: usize,
    pub samples: usize,
    pub phonemes: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalysisReport {
    pub reports: Vec<CorrelationReport>,
    pub skipped: Vec<SkippedCell>,
    pub groups: Vec<GroupSummary>,
    /// Sample languages missing from the language metadata.
    pub unknown_languages: Vec<String>,
}

/// One rated lemma: a lemma with phonemes expressing a concept.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSample {
    pub language: String,
    pub lemma: String,
    pub concept: SynsetId,
    pub phonemes: PhonemeSeq,
    pub profile: Option<LemmaFeatureProfile>,
    pub ratings: [Option<f64>; 4],
}

impl LemmaSample {
    pub fn rating(&self, dim: RatingDim) -> Option<f64> {
        self.ratings[dim as usize]
    }
}

/// Feature profiles keyed by (language, lemma).
pub type ProfileIndex = BTreeMap<(String, String), LemmaFeatureProfile>;

/// Language code → family.
pub type FamilyIndex = BTreeMap<String, String>;

pub fn family_index(languages: &[LanguageInfo]) -> FamilyIndex {
    languages.iter().map(|l| (l.code.clone(), l.family.clone())).collect()
}

/// Distinct (language, lemma, concept) samples from dataset rows that carry
/// phonemes and whose concept has at least one rating. A lemma colexifying two
/// concepts contributes one sample per concept.
pub fn lemma_samples(dataset: &[ColexRecord], ratings: &RatingsMap, profiles: &ProfileIndex) -> Vec<LemmaSample> {
    let mut seen: BTreeMap<(&str, &str, &SynsetId), LemmaSample> = BTreeMap::new();
    for row in dataset {
        let Some(seq) = &row.phonemes else { continue };
        for synset in [&row.synset1, &row.synset2] {
            let Some(r) = ratings.get(synset).filter(|r| r.has_any()) else { continue };
            seen.entry((&row.language, &row.lemma, synset)).or_insert_with(|| LemmaSample {
                language: row.language.clone(),
                lemma: row.lemma.clone(),
                concept: synset.clone(),
                phonemes: seq.clone(),
                profile: profiles.get(&(row.language.clone(), row.lemma.clone())).copied(),
                ratings: r.values,
            });
        }
    }
    seen.into_values().collect()
}

fn sorted_samples(samples: &[LemmaSample]) -> Vec<&LemmaSample> {
    let mut out: Vec<&LemmaSample> = samples.iter().collect();
    out.sort_by(|a, b| (&a.language, &a.lemma, &a.concept).cmp(&(&b.language, &b.lemma, &b.concept)));
    out
}

struct FamilySamples<'a> {
    family: &'a str,
    samples: Vec<&'a LemmaSample>,
    languages: usize,
}

/// Splits rated samples by family. Languages without metadata are returned
/// separately and left out.
fn by_family<'a>(
    samples: &'a [LemmaSample],
    families: &'a FamilyIndex,
    keep: impl Fn(&LemmaSample) -> bool,
) -> (Vec<FamilySamples<'a>>, Vec<String>) {
    let mut grouped: BTreeMap<&str, Vec<&LemmaSample>> = BTreeMap::new();
    let mut unknown = BTreeSet::new();
    for s in sorted_samples(samples) {
        if !keep(s) {
            continue;
        }
        match families.get(&s.language) {
            Some(family) => grouped.entry(family.as_str()).or_default().push(s),
            None => {
                unknown.insert(s.language.clone());
            }
        }
    }
    let groups = grouped
        .into_iter()
        .map(|(family, samples)| {
            let languages = samples.iter().map(|s| &s.language).collect::<BTreeSet<_>>().len();
            FamilySamples { family, samples, languages }
        })
        .collect();
    (groups, unknown.into_iter().collect())
}

/// Accumulates cells of one group and applies its correction when done.
struct GroupCells<'a> {
    group: &'a str,
    reports: Vec<CorrelationReport>,
    skipped: Vec<SkippedCell>,
}

impl<'a> GroupCells<'a> {
    fn new(group: &'a str) -> Self {
        GroupCells { group, reports: Vec::new(), skipped: Vec::new() }
    }

    fn push(&mut self, x: &str, y: &str, n: usize, outcome: Result<CorrelationResult, StatsError>) {
        match outcome {
            Ok(result) => self.reports.push(CorrelationReport::new(self.group, x, y, result)),
            Err(reason) => self.skipped.push(SkippedCell {
                group: self.group.to_string(),
                variable_x: x.to_string(),
                variable_y: y.to_string(),
                n,
                reason,
            }),
        }
    }

    fn finish(self, divisor: usize, settings: &AnalysisSettings, into: &mut AnalysisReport) {
        let divisor = u32::try_from(divisor.max(1)).unwrap_or(u32::MAX);
        let mut reports = bonferroni(self.reports, settings.alpha, divisor);
        apply_report_threshold(&mut reports, settings.report_threshold);
        into.reports.extend(reports);
        into.skipped.extend(self.skipped);
    }
}

/// The three per-pair counts correlated against rating distances.
pub const COUNT_VARIABLES: [&str; 3] = ["n_colex", "n_lemmas", "n_languages"];

fn count_of(record: &ConceptPairRecord, variable: &str) -> usize {
    match variable {
        "n_colex" => record.n_colex,
        "n_lemmas" => record.n_lemmas,
        _ => record.n_languages,
    }
}

fn sorted_records(records: &[ConceptPairRecord]) -> Vec<&ConceptPairRecord> {
    let mut out: Vec<&ConceptPairRecord> = records.iter().collect();
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

/// Correlates each colexification count with each rating distance over the
/// concept pairs where that distance exists: 12 cells, one pooled group, no
/// correction (divisor 1).
pub fn analyze_colex_distance(records: &[ConceptPairRecord], ratings: &RatingsMap, settings: &AnalysisSettings) -> AnalysisReport {
    let records = sorted_records(records);
    let distances: Vec<_> = records.iter().map(|r| record_distances(r, ratings)).collect();
    let mut cells = GroupCells::new(ALL_GROUP);
    for variable in COUNT_VARIABLES {
        for dim in RatingDim::ALL {
            let (xs, ys): (Vec<f64>, Vec<f64>) = records
                .iter()
                .zip(&distances)
                .filter_map(|(r, d)| d.get(dim).map(|dist| (count_of(r, variable) as f64, dist)))
                .unzip();
            cells.push(variable, dim.distance_name(), xs.len(), pearson_r(&xs, &ys));
        }
    }
    let mut out = AnalysisReport::default();
    cells.finish(1, settings, &mut out);
    out.groups.push(GroupSummary { group: ALL_GROUP.into(), languages: 0, samples: records.len(), phonemes: 0 });
    out
}

/// 4×4 correlation matrix of the rating distances, indexed by [`RatingDim`].
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub cells: [[Option<CorrelationResult>; 4]; 4],
    pub report: AnalysisReport,
}

/// Correlations among the four distances over pairwise-present samples. The
/// diagonal is r = 1, p = 0 by definition.
pub fn analyze_distance_matrix(records: &[ConceptPairRecord], ratings: &RatingsMap, settings: &AnalysisSettings) -> DistanceMatrix {
    let records = sorted_records(records);
    let distances: Vec<_> = records.iter().map(|r| record_distances(r, ratings)).collect();
    let mut cells_out = [[None; 4]; 4];
    let mut cells = GroupCells::new(ALL_GROUP);
    for (i, di) in RatingDim::ALL.into_iter().enumerate() {
        for (j, dj) in RatingDim::ALL.into_iter().enumerate() {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                distances.iter().filter_map(|d| Some((d.get(di)?, d.get(dj)?))).unzip();
            let outcome = if i == j {
                if xs.len() < 3 {
                    Err(StatsError::TooFewSamples(xs.len()))
                } else {
                    Ok(CorrelationResult::identity(xs.len()))
                }
            } else {
                pearson_r(&xs, &ys)
            };
            cells_out[i][j] = outcome.ok();
            cells.push(di.distance_name(), dj.distance_name(), xs.len(), outcome);
        }
    }
    let mut report = AnalysisReport::default();
    cells.finish(1, settings, &mut report);
    DistanceMatrix { cells: cells_out, report }
}

fn family_summary(family: &FamilySamples<'_>) -> GroupSummary {
    let inventory: BTreeSet<&str> =
        family.samples.iter().flat_map(|s| s.phonemes.segments().iter().map(String::as_str)).collect();
    GroupSummary {
        group: family.family.to_string(),
        languages: family.languages,
        samples: family.samples.len(),
        phonemes: inventory.len(),
    }
}

/// Per family and per phoneme seen at `position`: point-biserial correlation
/// between "lemma has this phoneme there" and the lemma's rating. Bonferroni
/// divisor is the number of languages in the family.
pub fn analyze_phoneme_position(
    samples: &[LemmaSample],
    families: &FamilyIndex,
    dim: RatingDim,
    position: Position,
    settings: &AnalysisSettings,
) -> AnalysisReport {
    let (groups, unknown) = by_family(samples, families, |s| s.rating(dim).is_some());
    let mut out = AnalysisReport { unknown_languages: unknown, ..Default::default() };
    for family in &groups {
        out.groups.push(family_summary(family));
        let ys: Vec<f64> = family.samples.iter().filter_map(|s| s.rating(dim)).collect();
        let phonemes: BTreeSet<&str> = family.samples.iter().map(|s| s.phonemes.at(position)).collect();
        let mut cells = GroupCells::new(family.family);
        for phoneme in phonemes {
            let indicator: Vec<bool> = family.samples.iter().map(|s| s.phonemes.at(position) == phoneme).collect();
            let name = format!("{}:{}", position.name(), phoneme);
            cells.push(&name, dim.name(), ys.len(), point_biserial(&indicator, &ys));
        }
        cells.finish(family.languages, settings, &mut out);
    }
    out
}

/// Per family and per articulatory feature: Pearson correlation between the
/// lemma's count of +1 values for the feature and its rating.
pub fn analyze_features(
    samples: &[LemmaSample],
    families: &FamilyIndex,
    dim: RatingDim,
    settings: &AnalysisSettings,
) -> AnalysisReport {
    let (groups, unknown) = by_family(samples, families, |s| s.rating(dim).is_some() && s.profile.is_some());
    let mut out = AnalysisReport { unknown_languages: unknown, ..Default::default() };
    for family in &groups {
        out.groups.push(family_summary(family));
        let ys: Vec<f64> = family.samples.iter().filter_map(|s| s.rating(dim)).collect();
        let mut cells = GroupCells::new(family.family);
        for (feature, name) in FEATURE_NAMES.iter().enumerate() {
            let xs: Vec<f64> = family
                .samples
                .iter()
                .filter_map(|s| s.profile.map(|p| p.counts[feature] as f64))
                .collect();
            cells.push(name, dim.name(), xs.len(), pearson_r(&xs, &ys));
        }
        cells.finish(family.languages, settings, &mut out);
    }
    out
}

/// Per family: correlations of type-token ratio and of segment length with
/// the rating.
pub fn analyze_ttr_len(
    samples: &[LemmaSample],
    families: &FamilyIndex,
    dim: RatingDim,
    settings: &AnalysisSettings,
) -> AnalysisReport {
    let (groups, unknown) = by_family(samples, families, |s| s.rating(dim).is_some());
    let mut out = AnalysisReport { unknown_languages: unknown, ..Default::default() };
    for family in &groups {
        out.groups.push(family_summary(family));
        let ys: Vec<f64> = family.samples.iter().filter_map(|s| s.rating(dim)).collect();
        let metrics: Vec<_> = family.samples.iter().map(|s| metrics_of(&s.phonemes)).collect();
        let ttr: Vec<f64> = metrics.iter().map(|m| m.ttr).collect();
        let len: Vec<f64> = metrics.iter().map(|m| m.seg_len as f64).collect();
        let mut cells = GroupCells::new(family.family);
        for (name, xs) in [("ttr", ttr), ("seg_len", len)] {
            cells.push(name, dim.name(), ys.len(), pearson_r(&xs, &ys));
        }
        cells.finish(family.languages, settings, &mut out);
    }
    out
}

/// Cells computed by an analysis, in emission order, for tests and exports.
pub fn cell_names(report: &AnalysisReport) -> Vec<(String, String, String)> {
    let mut names: Vec<_> = report
        .reports
        .iter()
        .map(|r| (r.group.clone(), r.variable_x.clone(), r.variable_y.clone()))
        .chain(report.skipped.iter().map(|s| (s.group.clone(), s.variable_x.clone(), s.variable_y.clone())))
        .collect();
    names.sort();
    names
}
