use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use colex::config::{Overrides, RunConfig};
use colex::error::CliError;
use colex::pipeline::{self, AnalysisKind, AnalyzeRequest};
use colex::synth;
use colex_core::Mode;

/// Build colexification datasets and run the correlation analyses.
///
/// Exit status: 0 success, 1 data error, 2 usage or configuration error.
/// Failures print `error<TAB>CODE<TAB>message` as the first line on stderr.
/// Set RUST_LOG=info for progress and skipped-cell logs.
#[derive(Parser)]
#[command(name = "colex", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Flat `key = value` file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Abort on the first malformed record (default).
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Skip malformed records with a warning.
    #[arg(long, global = true)]
    lenient: bool,
    /// Family-wise significance level.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Minimum |r| for a significant correlation to be reported.
    #[arg(long, global = true)]
    report_threshold: Option<f64>,
    /// Artifact directory [default: colex-out].
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Treat '_' in lemmas as a space.
    #[arg(long, global = true)]
    normalize_underscores: bool,
    /// Lexicon TSV: language, lemma, synset id.
    #[arg(long, global = true, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Directory of <language>.tsv files, or one language/word/pronunciation TSV.
    #[arg(long, global = true, value_name = "PATH")]
    pronunciations: Option<PathBuf>,
    /// Concreteness norms CSV: word, rating.
    #[arg(long, global = true, value_name = "PATH")]
    concreteness: Option<PathBuf>,
    /// Affect norms CSV: word, valence, arousal, dominance.
    #[arg(long, global = true, value_name = "PATH")]
    affect: Option<PathBuf>,
    /// Articulatory feature table CSV.
    #[arg(long, global = true, value_name = "PATH")]
    features: Option<PathBuf>,
    /// Language metadata CSV: code, family, macroarea.
    #[arg(long, global = true, value_name = "PATH")]
    languages: Option<PathBuf>,
    /// Lower bound of the affect rating scale [default: 1].
    #[arg(long, global = true)]
    affect_min: Option<f64>,
    /// Upper bound of the affect rating scale [default: 9].
    #[arg(long, global = true)]
    affect_max: Option<f64>,
}

impl Global {
    fn overrides(&self) -> Overrides {
        Overrides {
            lexicon: self.lexicon.clone(),
            pronunciations: self.pronunciations.clone(),
            concreteness: self.concreteness.clone(),
            affect: self.affect.clone(),
            features: self.features.clone(),
            languages: self.languages.clone(),
            mode: match (self.strict, self.lenient) {
                (true, _) => Some(Mode::Strict),
                (_, true) => Some(Mode::Lenient),
                _ => None,
            },
            alpha: self.alpha,
            report_threshold: self.report_threshold,
            out_dir: self.out_dir.clone(),
            normalize_underscores: self.normalize_underscores.then_some(true),
            affect_min: self.affect_min,
            affect_max: self.affect_max,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Ingest the inputs and write graph, dataset, phonology, summary and manifest artifacts.
    Build,
    /// Run one analysis over the build artifacts.
    Analyze {
        /// colex-distance, distance-matrix, phoneme-position, features or ttr-len
        analysis: String,
        /// Phoneme position for phoneme-position: initial or last.
        #[arg(long, default_value = "initial")]
        position: String,
        /// Rating for the per-lemma analyses: concreteness, valence, arousal or dominance.
        #[arg(long, default_value = "concreteness")]
        rating: String,
    },
    /// Write the DOT neighborhood of a concept.
    Subgraph {
        concept: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Output file [default: <out-dir>/subgraph-<concept>-<depth>.dot].
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the dataset statistics of the last build.
    Summary,
    /// Write a seeded synthetic input corpus.
    Synth {
        #[arg(value_enum)]
        kind: SynthKind,
        /// Destination directory.
        #[arg(long)]
        dest: PathBuf,
        #[arg(long, default_value_t = synth::MINI_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    /// The mini corpus used by the tests.
    Mini,
    /// The mini corpus with malformed lines mixed in.
    Dirty,
    /// A corpus where concreteness-close concepts colexify more often.
    Sign,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = || RunConfig::resolve(cli.global.config.as_deref(), cli.global.overrides());
    match &cli.command {
        Command::Build => {
            let config = config()?;
            let out = pipeline::build(&config)?;
            log::info!("mode {}: wrote {} files to {}", pipeline::mode_name(config.mode), out.files.len(), config.out_dir.display());
            if out.warnings > 0 {
                log::warn!("{} warnings (see above)", out.warnings);
            }
            for path in &out.files {
                println!("{}", path.display());
            }
        }
        Command::Analyze { analysis, position, rating } => {
            let kind = AnalysisKind::parse(analysis).ok_or_else(|| {
                let names: Vec<&str> = AnalysisKind::ALL.iter().map(|k| k.name()).collect();
                CliError::Usage(format!("unknown analysis {analysis:?} (expected one of: {})", names.join(", ")))
            })?;
            let request = AnalyzeRequest {
                kind,
                position: pipeline::parse_position(position)?,
                rating: pipeline::parse_rating(rating)?,
            };
            let config = config()?;
            for path in pipeline::analyze(&config, request)? {
                println!("{}", path.display());
            }
        }
        Command::Subgraph { concept, depth, output } => {
            let path = pipeline::subgraph(&config()?, concept, *depth, output.as_deref())?;
            println!("{}", path.display());
        }
        Command::Summary => print!("{}", pipeline::summary(&config()?)?),
        Command::Synth { kind, dest, seed } => {
            let write_err = |source| CliError::Write { path: dest.clone(), source };
            let paths = match kind {
                SynthKind::Mini => synth::mini_corpus(*seed).write(dest).map_err(write_err)?,
                SynthKind::Dirty => synth::write_dirty_corpus(dest, *seed).map_err(write_err)?,
                SynthKind::Sign => synth::sign_recovery_corpus(*seed, 60, 20).write(dest).map_err(write_err)?,
            };
            println!("{}", paths.lexicon.display());
        }
    }
    Ok(())
}

fn fail(code: &str, message: &str, detail: Option<&str>, status: u8) -> ExitCode {
    let first = message.lines().next().unwrap_or_default();
    eprintln!("error\t{code}\t{first}");
    if let Some(detail) = detail {
        eprintln!("{}", detail.trim_end());
    }
    ExitCode::from(status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let message = rendered.trim_start_matches("error: ").to_string();
            return fail("E_USAGE", &message, Some(&rendered), 2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.code(), &e.to_string(), None, e.exit_code() as u8),
    }
}
