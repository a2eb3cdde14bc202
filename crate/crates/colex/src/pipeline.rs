//! The build → analyze pipeline over an output directory.
//!
//! `build` ingests every configured input, runs the graph, concept, phoneme,
//! rating and dataset stages, and writes all artifacts at the end: files are
//! staged under temporary names and renamed into place only once every one of
//! them has been written, so a failed run leaves no partial output behind.
//! `analyze` and `subgraph` reload those artifacts instead of re-ingesting.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use colex_core::analysis::{
    analyze_colex_distance, analyze_distance_matrix, analyze_features, analyze_phoneme_position, analyze_ttr_len,
    lemma_samples, AnalysisReport, AnalysisSettings, ProfileIndex,
};
use colex_core::colexgraph::{construct_graph, derive_concept_graph, ConceptPairRecord};
use colex_core::dot::{export_dot, DotError};
use colex_core::phonology::{lemma_profile, PhonemeSeq, Position, PronunciationIndex};
use colex_core::ratings::{attach_ratings, build_dataset, RatingDim, RatingsMap};
use colex_core::summary::{summary_stats, SummaryTable};
use colex_core::{LexEntry, Mode, RatingRecord};
use serde_json::{json, Map, Value};

use crate::artifacts::{self, LanguageRow, PhonologyRow};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::ingest::{self, RatingKind};
use crate::report;

/// Per-stage counts and wall clock, in execution order.
#[derive(Debug, Default)]
struct Stages {
    counts: Vec<(&'static str, Vec<(&'static str, usize)>)>,
    millis: Vec<(&'static str, f64)>,
}

impl Stages {
    fn record(&mut self, stage: &'static str, started: Instant, counts: Vec<(&'static str, usize)>) {
        self.millis.push((stage, started.elapsed().as_secs_f64() * 1e3));
        self.counts.push((stage, counts));
    }

    fn counts_json(&self) -> Value {
        let mut map = Map::new();
        for (stage, counts) in &self.counts {
            let inner: Map<String, Value> = counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            map.insert(stage.to_string(), Value::Object(inner));
        }
        Value::Object(map)
    }

    fn millis_json(&self) -> Value {
        Value::Object(self.millis.iter().map(|(k, v)| (k.to_string(), json!((v * 1e3).round() / 1e3))).collect())
    }
}

#[derive(Debug)]
pub struct BuildOutput {
    pub files: Vec<PathBuf>,
    pub summary: SummaryTable,
    /// Problems tolerated in lenient mode plus pronunciation conflicts.
    pub warnings: usize,
}

fn optional<T>(path: &Option<PathBuf>, load: impl FnOnce(&Path) -> Result<ingest::Ingested<T>, CliError>) -> Result<ingest::Ingested<T>, CliError> {
    match path {
        Some(p) => load(p),
        None => Ok(ingest::Ingested::default()),
    }
}

/// Writes every file under a temporary name first, then renames them all.
/// On any failure the temporaries are removed and nothing is replaced.
fn commit(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Write { path, source }
    };
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (name, content) in files {
        let target = dir.join(name);
        let tmp = dir.join(format!(".{name}.partial"));
        if let Some(parent) = target.parent() {
            if let Err(e) = fs::create_dir_all(parent) {
                cleanup(&staged);
                return Err(io(parent)(e));
            }
        }
        if let Err(e) = fs::write(&tmp, content) {
            let _ = fs::remove_file(&tmp);
            cleanup(&staged);
            return Err(io(&tmp)(e));
        }
        staged.push((tmp, target));
    }
    let mut written = Vec::new();
    for (tmp, target) in &staged {
        if let Err(e) = fs::rename(tmp, target) {
            cleanup(&staged);
            for done in &written {
                let _ = fs::remove_file(done);
            }
            return Err(io(target)(e));
        }
        written.push(target.clone());
    }
    Ok(written)
}

pub fn build(config: &RunConfig) -> Result<BuildOutput, CliError> {
    let Some(lexicon_path) = &config.lexicon else {
        return Err(CliError::Usage("no lexicon given (--lexicon or `lexicon =` in the config file)".into()));
    };
    for (_, path) in config.inputs() {
        if !path.exists() {
            return Err(CliError::MissingInput(path.to_path_buf()));
        }
    }
    let (mode, underscores) = (config.mode, config.normalize_underscores);
    let mut stages = Stages::default();

    let t = Instant::now();
    let lexicon = ingest::load_lexicon(lexicon_path, mode, underscores)?;
    let prons = optional(&config.pronunciations, |p| ingest::load_pronunciations(p, mode, underscores))?;
    let conc = optional(&config.concreteness, |p| {
        ingest::load_ratings(p, RatingKind::Concreteness, config.affect_range, mode)
    })?;
    let affect = optional(&config.affect, |p| ingest::load_ratings(p, RatingKind::Affect, config.affect_range, mode))?;
    let features = optional(&config.features, |p| ingest::load_feature_table(p, mode))?;
    let languages = optional(&config.languages, |p| ingest::load_languages(p, mode))?;
    let issues = lexicon.issues.len()
        + prons.issues.len()
        + conc.issues.len()
        + affect.issues.len()
        + features.issues.len()
        + languages.issues.len();
    stages.record(
        "ingest",
        t,
        vec![
            ("lexicon_lines", lexicon.lines),
            ("lexicon_entries", lexicon.records.len()),
            ("lexicon_duplicates", lexicon.duplicates),
            ("pronunciations", prons.records.len()),
            ("concreteness_ratings", conc.records.len()),
            ("affect_ratings", affect.records.len()),
            ("feature_segments", features.records.len()),
            ("languages", languages.records.len()),
            ("skipped_lines", issues),
        ],
    );
    let entries: &[LexEntry] = &lexicon.records;

    let t = Instant::now();
    let graph = construct_graph(entries);
    stages.record(
        "graph",
        t,
        vec![("synsets", graph.nodes().len()), ("edges", graph.edge_count()), ("witnesses", graph.witness_total())],
    );

    let t = Instant::now();
    let records = derive_concept_graph(&graph);
    let concept_witnesses: usize = records.iter().map(|r| r.n_colex).sum();
    stages.record("concepts", t, vec![("concept_pairs", records.len()), ("witnesses", concept_witnesses)]);

    let t = Instant::now();
    let (index, conflicts) = PronunciationIndex::build(&prons.records);
    for c in &conflicts {
        log::warn!(
            "{} {:?}: several pronunciations, kept [{}], ignored [{}]",
            c.language,
            c.word,
            c.kept.spaced(),
            c.ignored.spaced()
        );
    }
    let joined: Vec<(LexEntry, Option<PhonemeSeq>)> =
        entries.iter().map(|e| (e.clone(), index.get(&e.language, &e.lemma).cloned())).collect();
    let table = (!features.records.is_empty()).then(|| ingest::feature_table(&features.records));
    let mut phonology = Vec::new();
    let mut fallbacks = 0;
    let lemmas: BTreeSet<(&str, &str)> = entries.iter().map(|e| (e.language.as_str(), e.lemma.as_str())).collect();
    for (language, lemma) in lemmas {
        let Some(seq) = index.get(language, lemma) else { continue };
        let profile = match &table {
            Some(table) => {
                let profiled = lemma_profile(seq, table, mode).map_err(|source| CliError::Phonology {
                    context: format!("{language} {lemma:?}"),
                    source,
                })?;
                for segment in &profiled.unknown_segments {
                    log::warn!("{language} {lemma:?}: segment {segment:?} not in feature table, using zeros");
                }
                fallbacks += profiled.unknown_segments.len();
                Some(profiled.profile)
            }
            None => None,
        };
        phonology.push(PhonologyRow { language: language.into(), lemma: lemma.into(), phonemes: seq.clone(), profile });
    }
    stages.record(
        "phonology",
        t,
        vec![
            ("indexed_words", index.len()),
            ("lemmas_with_phonemes", phonology.len()),
            ("conflicts", conflicts.len()),
            ("unknown_segments", fallbacks),
        ],
    );

    let t = Instant::now();
    let norms: Vec<RatingRecord> = conc.records.iter().chain(&affect.records).cloned().collect();
    let ratings = attach_ratings(&records, &norms);
    stages.record(
        "ratings",
        t,
        vec![("concepts", ratings.len()), ("rated_concepts", ratings.values().filter(|r| r.has_any()).count())],
    );

    let t = Instant::now();
    let dataset = build_dataset(&records, &ratings, &index);
    stages.record("dataset", t, vec![("rows", dataset.len())]);

    let summary = summary_stats(entries, &graph, &records, &joined, &ratings);

    let metadata: BTreeMap<&str, &colex_core::LanguageInfo> =
        languages.records.iter().map(|l| (l.code.as_str(), l)).collect();
    let mut per_language: BTreeMap<&str, LanguageRow> = BTreeMap::new();
    let row_for = |code: &str| -> LanguageRow {
        LanguageRow {
            code: code.to_string(),
            family: metadata.get(code).map(|l| l.family.clone()),
            macroarea: metadata.get(code).and_then(|l| l.macroarea.clone()),
            entries: 0,
            lemmas: 0,
            colexifications: 0,
            phone_lemma_pairs: 0,
        }
    };
    for e in entries {
        per_language.entry(&e.language).or_insert_with(|| row_for(&e.language)).entries += 1;
    }
    let lemma_set: BTreeSet<(&str, &str)> = entries.iter().map(|e| (e.language.as_str(), e.lemma.as_str())).collect();
    for (language, _) in &lemma_set {
        if let Some(row) = per_language.get_mut(language) {
            row.lemmas += 1;
        }
    }
    for row in &dataset {
        if let Some(r) = per_language.get_mut(row.language.as_str()) {
            r.colexifications += 1;
        }
    }
    for p in &phonology {
        if let Some(r) = per_language.get_mut(p.language.as_str()) {
            r.phone_lemma_pairs += 1;
        }
    }
    let language_rows: Vec<LanguageRow> = per_language.into_values().collect();

    let mut files = vec![
        (artifacts::GRAPH.to_string(), artifacts::graph_tsv(&graph)),
        (artifacts::CONCEPTS.to_string(), artifacts::concepts_tsv(&records)),
        (artifacts::DATASET.to_string(), artifacts::dataset_tsv(&dataset)),
        (artifacts::RATINGS.to_string(), artifacts::ratings_tsv(&ratings)),
        (artifacts::PHONOLOGY.to_string(), artifacts::phonology_tsv(&phonology)),
        (artifacts::LANGUAGES.to_string(), artifacts::languages_tsv(&language_rows)),
        (artifacts::SUMMARY.to_string(), artifacts::summary_tsv(&summary)),
    ];

    let mut inputs = Map::new();
    for (name, path) in config.inputs() {
        inputs.insert(name.into(), json!({ "path": path.display().to_string(), "sha256": ingest::digest(path)? }));
    }
    let manifest = json!({
        "tool": "colex",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config.to_json(),
        "inputs": inputs,
        "counts": stages.counts_json(),
        "summary": summary.rows().iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<Map<_, _>>(),
        "reconciliation": {
            "dataset_rows": dataset.len(),
            "first_sense_witnesses": concept_witnesses,
            "consistent": dataset.len() == concept_witnesses,
        },
        "wall_clock_ms": stages.millis_json(),
    });
    files.push((artifacts::MANIFEST.to_string(), report::to_json_text(&manifest)));

    let out_dir = &config.out_dir;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Write { path: out_dir.clone(), source })?;
    let written = commit(out_dir, &files)?;
    Ok(BuildOutput { files: written, summary, warnings: issues + conflicts.len() + fallbacks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisKind {
    ColexDistance,
    DistanceMatrix,
    PhonemePosition,
    Features,
    TtrLen,
}

impl AnalysisKind {
    pub const ALL: [AnalysisKind; 5] = [
        AnalysisKind::ColexDistance,
        AnalysisKind::DistanceMatrix,
        AnalysisKind::PhonemePosition,
        AnalysisKind::Features,
        AnalysisKind::TtrLen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::ColexDistance => "colex-distance",
            AnalysisKind::DistanceMatrix => "distance-matrix",
            AnalysisKind::PhonemePosition => "phoneme-position",
            AnalysisKind::Features => "features",
            AnalysisKind::TtrLen => "ttr-len",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeRequest {
    pub kind: AnalysisKind,
    pub position: Position,
    pub rating: RatingDim,
}

impl AnalyzeRequest {
    /// Report file stem, e.g. `phoneme-position-initial-valence`.
    pub fn stem(&self) -> String {
        match self.kind {
            AnalysisKind::ColexDistance | AnalysisKind::DistanceMatrix => self.kind.name().to_string(),
            AnalysisKind::PhonemePosition => {
                format!("{}-{}-{}", self.kind.name(), self.position.name(), self.rating.name())
            }
            AnalysisKind::Features | AnalysisKind::TtrLen => format!("{}-{}", self.kind.name(), self.rating.name()),
        }
    }
}

fn read_artifact(out_dir: &Path, name: &str) -> Result<(PathBuf, String), CliError> {
    let path = out_dir.join(name);
    match fs::read_to_string(&path) {
        Ok(text) => Ok((path, text)),
        Err(_) => Err(CliError::MissingArtifact(path)),
    }
}

fn load<T>(out_dir: &Path, name: &str, parse: impl FnOnce(&str) -> Result<T, String>) -> Result<T, CliError> {
    let (path, text) = read_artifact(out_dir, name)?;
    parse(&text).map_err(|message| CliError::BadArtifact { path, message })
}

fn load_concepts(out_dir: &Path) -> Result<Vec<ConceptPairRecord>, CliError> {
    load(out_dir, artifacts::CONCEPTS, artifacts::read_concepts)
}

fn load_ratings(out_dir: &Path) -> Result<RatingsMap, CliError> {
    load(out_dir, artifacts::RATINGS, artifacts::read_ratings)
}

/// Runs one analysis over the build artifacts and writes its report files
/// under `<out-dir>/reports`.
pub fn analyze(config: &RunConfig, request: AnalyzeRequest) -> Result<Vec<PathBuf>, CliError> {
    let out_dir = &config.out_dir;
    let settings = AnalysisSettings { alpha: config.alpha, report_threshold: config.report_threshold };
    let stem = request.stem();
    let options = json!({
        "alpha": config.alpha,
        "report_threshold": config.report_threshold,
        "position": matches!(request.kind, AnalysisKind::PhonemePosition).then(|| request.position.name()),
        "rating": matches!(request.kind, AnalysisKind::PhonemePosition | AnalysisKind::Features | AnalysisKind::TtrLen)
            .then(|| request.rating.name()),
    });
    let mut files: Vec<(String, String)> = Vec::new();
    let report: AnalysisReport = match request.kind {
        AnalysisKind::ColexDistance => {
            let (records, ratings) = (load_concepts(out_dir)?, load_ratings(out_dir)?);
            analyze_colex_distance(&records, &ratings, &settings)
        }
        AnalysisKind::DistanceMatrix => {
            let (records, ratings) = (load_concepts(out_dir)?, load_ratings(out_dir)?);
            let matrix = analyze_distance_matrix(&records, &ratings, &settings);
            files.push((format!("reports/{stem}.matrix.tsv"), report::matrix_tsv(&matrix)));
            matrix.report
        }
        AnalysisKind::PhonemePosition | AnalysisKind::Features | AnalysisKind::TtrLen => {
            let ratings = load_ratings(out_dir)?;
            let dataset = load(out_dir, artifacts::DATASET, |t| artifacts::read_dataset(t, Some(&ratings)))?;
            let phonology = load(out_dir, artifacts::PHONOLOGY, artifacts::read_phonology)?;
            let families = load(out_dir, artifacts::LANGUAGES, artifacts::read_families)?;
            let profiles: ProfileIndex = phonology
                .into_iter()
                .filter_map(|p| p.profile.map(|profile| ((p.language, p.lemma), profile)))
                .collect();
            let samples = lemma_samples(&dataset, &ratings, &profiles);
            match request.kind {
                AnalysisKind::PhonemePosition => {
                    analyze_phoneme_position(&samples, &families, request.rating, request.position, &settings)
                }
                AnalysisKind::Features => analyze_features(&samples, &families, request.rating, &settings),
                _ => analyze_ttr_len(&samples, &families, request.rating, &settings),
            }
        }
    };
    for s in &report.skipped {
        log::info!("{stem}: skipped {} {} vs {} (n={}): {}", s.group, s.variable_x, s.variable_y, s.n, s.reason);
    }
    for language in &report.unknown_languages {
        log::warn!("{stem}: language {language} has no family metadata and was left out");
    }
    files.push((format!("reports/{stem}.tsv"), report::report_tsv(&report)));
    files.push((
        format!("reports/{stem}.json"),
        report::to_json_text(&report::report_json_value(request.kind.name(), options, &report)),
    ));
    files.push((format!("reports/{stem}.diagnostics.tsv"), report::diagnostics_tsv(&report)));
    if !report.groups.is_empty() {
        files.push((format!("reports/{stem}.groups.tsv"), report::groups_tsv(&report)));
    }
    // Staged names must not contain '/', so stage inside the reports directory.
    let reports_dir = out_dir.join("reports");
    fs::create_dir_all(&reports_dir).map_err(|source| CliError::Write { path: reports_dir.clone(), source })?;
    let files: Vec<(String, String)> =
        files.into_iter().map(|(name, content)| (name.trim_start_matches("reports/").to_string(), content)).collect();
    commit(&reports_dir, &files)
}

/// Writes the DOT neighborhood of `concept`; returns the file written.
pub fn subgraph(config: &RunConfig, concept: &str, depth: usize, output: Option<&Path>) -> Result<PathBuf, CliError> {
    let records = load_concepts(&config.out_dir)?;
    let dot = export_dot(&records, concept, depth).map_err(|e| match e {
        DotError::UnknownConcept(c) => CliError::UnknownConcept(c),
        DotError::ZeroDepth => CliError::Usage("depth must be at least 1".into()),
    })?;
    let path = match output {
        Some(p) => p.to_path_buf(),
        None => {
            let safe: String = concept.chars().map(|c| if c.is_alphanumeric() { c } else { '_' }).collect();
            config.out_dir.join(format!("subgraph-{safe}-{depth}.dot"))
        }
    };
    fs::write(&path, dot).map_err(|source| CliError::Write { path: path.clone(), source })?;
    Ok(path)
}

/// The dataset statistics of the last build, as a two-row table.
pub fn summary(config: &RunConfig) -> Result<String, CliError> {
    let (path, text) = read_artifact(&config.out_dir, artifacts::SUMMARY)?;
    let mut names = Vec::new();
    let mut values = Vec::new();
    for line in text.lines().skip(1) {
        let Some((name, value)) = line.split_once('\t') else {
            return Err(CliError::BadArtifact { path, message: format!("bad summary line {line:?}") });
        };
        names.push(name);
        values.push(value);
    }
    Ok(format!("{}\n{}\n", names.join("\t"), values.join("\t")))
}

/// Resolves `--rating` names, accepting the dimension names and their
/// distance names.
pub fn parse_rating(name: &str) -> Result<RatingDim, CliError> {
    RatingDim::parse(name)
        .or_else(|| RatingDim::ALL.into_iter().find(|d| d.distance_name() == name))
        .ok_or_else(|| CliError::Usage(format!("unknown rating {name:?} (concreteness, valence, arousal, dominance)")))
}

pub fn parse_position(name: &str) -> Result<Position, CliError> {
    match name {
        "initial" => Ok(Position::Initial),
        "last" => Ok(Position::Last),
        _ => Err(CliError::Usage(format!("unknown position {name:?} (initial, last)"))),
    }
}

/// Mode name used in logs.
pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Strict => "strict",
        Mode::Lenient => "lenient",
    }
}
