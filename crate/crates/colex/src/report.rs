//! Correlation reports as TSV and JSON.
//!
//! Report rows: family, variable_x, variable_y, n, r (6 decimals), p
//! (scientific, 6 significant digits), divisor, significant, reported.
//! Skipped cells go to a diagnostics table with a stable reason code; group
//! descriptions (languages, samples, phoneme inventory) to a third table.

use colex_core::analysis::{AnalysisReport, DistanceMatrix};
use colex_core::ratings::RatingDim;
use colex_core::stats::CorrelationReport;
use serde_json::{json, Value};

pub const REPORT_HEADER: [&str; 9] =
    ["family", "variable_x", "variable_y", "n", "r", "p", "divisor", "significant", "reported"];

pub fn format_r(r: f64) -> String {
    format!("{r:.6}")
}

pub fn format_p(p: f64) -> String {
    format!("{p:.5e}")
}

fn row(r: &CorrelationReport) -> String {
    [
        r.group.clone(),
        r.variable_x.clone(),
        r.variable_y.clone(),
        r.result.n.to_string(),
        format_r(r.result.r),
        format_p(r.result.p),
        r.divisor.to_string(),
        r.significant.to_string(),
        r.reported.to_string(),
    ]
    .join("\t")
}

pub fn report_tsv(report: &AnalysisReport) -> String {
    let mut out = REPORT_HEADER.join("\t");
    out.push('\n');
    for r in &report.reports {
        out.push_str(&row(r));
        out.push('\n');
    }
    out
}

pub fn diagnostics_tsv(report: &AnalysisReport) -> String {
    let mut out = String::from("family\tvariable_x\tvariable_y\tn\treason\tdetail\n");
    for s in &report.skipped {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            s.group,
            s.variable_x,
            s.variable_y,
            s.n,
            s.reason.code(),
            s.reason
        ));
    }
    for language in &report.unknown_languages {
        out.push_str(&format!("-\t-\t-\t0\tUnknownLanguage\tno family metadata for {language}\n"));
    }
    out
}

pub fn groups_tsv(report: &AnalysisReport) -> String {
    let mut out = String::from("family\tlanguages\tsamples\tphonemes\n");
    for g in &report.groups {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", g.group, g.languages, g.samples, g.phonemes));
    }
    out
}

/// r values of the 4×4 distance matrix; `-` where a cell was skipped.
pub fn matrix_tsv(matrix: &DistanceMatrix) -> String {
    let names = RatingDim::ALL.map(RatingDim::distance_name);
    let mut out = format!("distance\t{}\n", names.join("\t"));
    for (i, name) in names.iter().enumerate() {
        let cells: Vec<String> = matrix.cells[i]
            .iter()
            .map(|c| c.map_or_else(|| "-".to_string(), |c| format_r(c.r)))
            .collect();
        out.push_str(&format!("{name}\t{}\n", cells.join("\t")));
    }
    out
}

fn report_json(r: &CorrelationReport) -> Value {
    json!({
        "family": r.group,
        "variable_x": r.variable_x,
        "variable_y": r.variable_y,
        "n": r.result.n,
        "r": r.result.r,
        "p": r.result.p,
        "alpha": r.alpha,
        "divisor": r.divisor,
        "significant": r.significant,
        "reported": r.reported,
    })
}

pub fn report_json_value(analysis: &str, options: Value, report: &AnalysisReport) -> Value {
    json!({
        "analysis": analysis,
        "options": options,
        "reports": report.reports.iter().map(report_json).collect::<Vec<_>>(),
        "skipped": report.skipped.iter().map(|s| json!({
            "family": s.group,
            "variable_x": s.variable_x,
            "variable_y": s.variable_y,
            "n": s.n,
            "reason": s.reason.code(),
            "detail": s.reason.to_string(),
        })).collect::<Vec<_>>(),
        "groups": report.groups.iter().map(|g| json!({
            "family": g.group,
            "languages": g.languages,
            "samples": g.samples,
            "phonemes": g.phonemes,
        })).collect::<Vec<_>>(),
        "unknown_languages": report.unknown_languages,
    })
}

pub fn to_json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    text
}
