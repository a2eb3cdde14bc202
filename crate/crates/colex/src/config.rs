//! Run configuration: a flat `key = value` file whose keys mirror the command
//! line flags. Flags override the file; relative paths in the file are taken
//! relative to the file's directory.
//!
//! ```text
//! # colex.conf
//! lexicon = data/lexicon.tsv
//! pronunciations = data/pron
//! concreteness = data/concreteness.csv
//! affect = data/affect.csv
//! features = data/features.csv
//! languages = data/languages.csv
//! out_dir = out
//! mode = strict
//! alpha = 0.05
//! report_threshold = 0.1
//! normalize_underscores = false
//! affect_min = 1
//! affect_max = 9
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use colex_core::lexicon::RatingRange;
use colex_core::Mode;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    /// A directory of `<language>.tsv` files or one three-column file.
    pub pronunciations: Option<PathBuf>,
    pub concreteness: Option<PathBuf>,
    pub affect: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub languages: Option<PathBuf>,
    pub mode: Mode,
    pub alpha: f64,
    pub report_threshold: f64,
    pub out_dir: PathBuf,
    pub normalize_underscores: bool,
    pub affect_range: RatingRange,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lexicon: None,
            pronunciations: None,
            concreteness: None,
            affect: None,
            features: None,
            languages: None,
            mode: Mode::Strict,
            alpha: 0.05,
            report_threshold: 0.1,
            out_dir: PathBuf::from("colex-out"),
            normalize_underscores: false,
            affect_range: RatingRange::DEFAULT_AFFECT,
        }
    }
}

/// Values given on the command line; `None` leaves the file or default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lexicon: Option<PathBuf>,
    pub pronunciations: Option<PathBuf>,
    pub concreteness: Option<PathBuf>,
    pub affect: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub languages: Option<PathBuf>,
    pub mode: Option<Mode>,
    pub alpha: Option<f64>,
    pub report_threshold: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub normalize_underscores: Option<bool>,
    pub affect_min: Option<f64>,
    pub affect_max: Option<f64>,
}

fn usage(message: String) -> CliError {
    CliError::Usage(message)
}

pub fn parse_mode(text: &str) -> Result<Mode, CliError> {
    match text {
        "strict" => Ok(Mode::Strict),
        "lenient" => Ok(Mode::Lenient),
        _ => Err(usage(format!("mode must be strict or lenient, got {text:?}"))),
    }
}

fn parse_number(key: &str, text: &str) -> Result<f64, CliError> {
    text.parse().map_err(|_| usage(format!("{key}: not a number: {text:?}")))
}

fn parse_bool(key: &str, text: &str) -> Result<bool, CliError> {
    match text {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(usage(format!("{key}: expected true or false, got {text:?}"))),
    }
}

/// Reads a config file into overrides.
pub fn parse_config_file(text: &str, base: &Path) -> Result<Overrides, CliError> {
    let mut o = Overrides::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!("config line {}: expected key = value", i + 1)));
        };
        let (key, value) = (key.trim().replace('-', "_"), value.trim());
        let path = || Some(base.join(value));
        match key.as_str() {
            "lexicon" => o.lexicon = path(),
            "pronunciations" => o.pronunciations = path(),
            "concreteness" => o.concreteness = path(),
            "affect" => o.affect = path(),
            "features" => o.features = path(),
            "languages" => o.languages = path(),
            "out_dir" => o.out_dir = path(),
            "mode" => o.mode = Some(parse_mode(value)?),
            "strict" => o.mode = parse_bool(&key, value)?.then_some(Mode::Strict).or(o.mode),
            "lenient" => o.mode = parse_bool(&key, value)?.then_some(Mode::Lenient).or(o.mode),
            "alpha" => o.alpha = Some(parse_number(&key, value)?),
            "report_threshold" => o.report_threshold = Some(parse_number(&key, value)?),
            "normalize_underscores" => o.normalize_underscores = Some(parse_bool(&key, value)?),
            "affect_min" => o.affect_min = Some(parse_number(&key, value)?),
            "affect_max" => o.affect_max = Some(parse_number(&key, value)?),
            _ => return Err(usage(format!("config line {}: unknown key {key:?}", i + 1))),
        }
    }
    Ok(o)
}

impl RunConfig {
    /// Defaults, then the config file, then command line values.
    pub fn resolve(config_file: Option<&Path>, cli: Overrides) -> Result<RunConfig, CliError> {
        let mut config = RunConfig::default();
        if let Some(path) = config_file {
            let text = fs::read_to_string(path).map_err(|_| CliError::MissingInput(path.to_path_buf()))?;
            let base = path.parent().unwrap_or(Path::new("."));
            config.apply(parse_config_file(&text, base)?);
        }
        config.apply(cli);
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, o: Overrides) {
        let paths = [
            (&mut self.lexicon, o.lexicon),
            (&mut self.pronunciations, o.pronunciations),
            (&mut self.concreteness, o.concreteness),
            (&mut self.affect, o.affect),
            (&mut self.features, o.features),
            (&mut self.languages, o.languages),
        ];
        for (slot, value) in paths {
            if value.is_some() {
                *slot = value;
            }
        }
        self.mode = o.mode.unwrap_or(self.mode);
        self.alpha = o.alpha.unwrap_or(self.alpha);
        self.report_threshold = o.report_threshold.unwrap_or(self.report_threshold);
        self.out_dir = o.out_dir.unwrap_or(std::mem::take(&mut self.out_dir));
        self.normalize_underscores = o.normalize_underscores.unwrap_or(self.normalize_underscores);
        self.affect_range.min = o.affect_min.unwrap_or(self.affect_range.min);
        self.affect_range.max = o.affect_max.unwrap_or(self.affect_range.max);
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(usage(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.report_threshold.is_nan() || self.report_threshold < 0.0 {
            return Err(usage(format!("report threshold must be >= 0, got {}", self.report_threshold)));
        }
        let r = self.affect_range;
        if !(r.min.is_finite() && r.max.is_finite() && r.min < r.max) {
            return Err(usage(format!("affect range [{}, {}] is empty", r.min, r.max)));
        }
        Ok(())
    }

    /// Named input paths that are set, in a fixed order.
    pub fn inputs(&self) -> Vec<(&'static str, &Path)> {
        [
            ("lexicon", &self.lexicon),
            ("pronunciations", &self.pronunciations),
            ("concreteness", &self.concreteness),
            ("affect", &self.affect),
            ("features", &self.features),
            ("languages", &self.languages),
        ]
        .into_iter()
        .filter_map(|(name, p)| p.as_deref().map(|p| (name, p)))
        .collect()
    }

    /// Snapshot for the manifest.
    pub fn to_json(&self) -> Value {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        json!({
            "lexicon": path(&self.lexicon),
            "pronunciations": path(&self.pronunciations),
            "concreteness": path(&self.concreteness),
            "affect": path(&self.affect),
            "features": path(&self.features),
            "languages": path(&self.languages),
            "mode": match self.mode { Mode::Strict => "strict", Mode::Lenient => "lenient" },
            "alpha": self.alpha,
            "report_threshold": self.report_threshold,
            "out_dir": self.out_dir.display().to_string(),
            "normalize_underscores": self.normalize_underscores,
            "affect_min": self.affect_range.min,
            "affect_max": self.affect_range.max,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let text = "# run\nlexicon = lex.tsv\nalpha=0.01\nmode = lenient\nreport-threshold = 0.2\n";
        let file = parse_config_file(text, Path::new("/data")).unwrap();
        let mut config = RunConfig::default();
        config.apply(file);
        assert_eq!(config.lexicon.as_deref(), Some(Path::new("/data/lex.tsv")));
        assert_eq!((config.alpha, config.report_threshold, config.mode), (0.01, 0.2, Mode::Lenient));
        config.apply(Overrides { alpha: Some(0.05), mode: Some(Mode::Strict), ..Default::default() });
        assert_eq!((config.alpha, config.mode), (0.05, Mode::Strict));
        assert!(config.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse_config_file("colour = red\n", Path::new(".")).is_err());
        assert!(parse_config_file("alpha\n", Path::new(".")).is_err());
        let bad = RunConfig { alpha: 1.0, ..Default::default() };
        assert_eq!(bad.validate().unwrap_err().exit_code(), 2);
        let bad = RunConfig { report_threshold: -0.1, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
