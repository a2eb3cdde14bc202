//! Pearson correlation with two-sided Student-t p-values, point-biserial
//! correlation, and Bonferroni-corrected significance.

pub mod special;

use alloc::string::String;
use alloc::vec::Vec;

pub use special::NoConvergence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("sample vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("zero variance")]
    ZeroVariance,
    #[error("non-finite sample value")]
    NonFinite,
    #[error("indicator takes a single value")]
    DegenerateIndicator,
    #[error(transparent)]
    NoConvergence(#[from] NoConvergence),
}

impl StatsError {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            StatsError::LengthMismatch(..) => "LengthMismatch",
            StatsError::TooFewSamples(_) => "TooFewSamples",
            StatsError::ZeroVariance => "ZeroVariance",
            StatsError::NonFinite => "NonFinite",
            StatsError::DegenerateIndicator => "DegenerateIndicator",
            StatsError::NoConvergence(_) => "NoConvergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub r: f64,
    pub p: f64,
    pub n: usize,
    pub dof: usize,
}

impl CorrelationResult {
    /// A variable against itself.
    pub fn identity(n: usize) -> Self {
        CorrelationResult { r: 1.0, p: 0.0, n, dof: n.saturating_sub(2) }
    }
}

/// Compensated (Neumaier) sum.
fn sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut total = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = total + v;
        if total.abs() >= v.abs() {
            carry += (total - t) + v;
        } else {
            carry += (v - t) + total;
        }
        total = t;
    }
    total + carry
}

/// Two-sided p-value of a sample correlation `r` over `n` samples:
/// P(|T| ≥ |t|) for Student's t with n − 2 degrees of freedom, evaluated as
/// I_{1−r²}((n−2)/2, ½).
pub fn two_sided_p(r: f64, n: usize) -> Result<f64, StatsError> {
    if n < 3 {
        return Err(StatsError::TooFewSamples(n));
    }
    let r = r.abs();
    if r >= 1.0 {
        return Ok(0.0);
    }
    let dof = (n - 2) as f64;
    let x = (1.0 - r) * (1.0 + r);
    let p = special::inc_beta(x, r * r, dof / 2.0, 0.5)?;
    Ok(p.clamp(0.0, 1.0))
}

/// Sample Pearson correlation with its two-sided p-value.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(StatsError::TooFewSamples(n));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mean_x = sum(xs.iter().copied()) / n as f64;
    let mean_y = sum(ys.iter().copied()) / n as f64;
    let sxx = sum(xs.iter().map(|x| (x - mean_x) * (x - mean_x)));
    let syy = sum(ys.iter().map(|y| (y - mean_y) * (y - mean_y)));
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let sxy = sum(xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - mean_y)));
    let r = (sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0);
    let p = two_sided_p(r, n)?;
    Ok(CorrelationResult { r, p, n, dof: n - 2 })
}

/// Pearson correlation between a 0/1 indicator and a continuous variable.
pub fn point_biserial(indicator: &[bool], ys: &[f64]) -> Result<CorrelationResult, StatsError> {
    let any_true = indicator.iter().any(|&b| b);
    let any_false = indicator.iter().any(|&b| !b);
    if indicator.len() >= 3 && !(any_true && any_false) {
        return Err(StatsError::DegenerateIndicator);
    }
    let xs: Vec<f64> = indicator.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    pearson_r(&xs, ys)
}

/// A correlation between two named variables within a group, with its
/// corrected significance.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub group: String,
    pub variable_x: String,
    pub variable_y: String,
    pub result: CorrelationResult,
    pub alpha: f64,
    pub divisor: u32,
    /// p < alpha / divisor
    pub significant: bool,
    /// significant and |r| above the report threshold
    pub reported: bool,
}

impl CorrelationReport {
    pub fn new(group: impl Into<String>, x: impl Into<String>, y: impl Into<String>, result: CorrelationResult) -> Self {
        CorrelationReport {
            group: group.into(),
            variable_x: x.into(),
            variable_y: y.into(),
            result,
            alpha: 0.05,
            divisor: 1,
            significant: false,
            reported: false,
        }
    }
}

/// Marks reports significant when p < alpha / divisor. p-values are untouched.
///
/// Panics unless `divisor >= 1` and `0 < alpha < 1`.
pub fn bonferroni(mut reports: Vec<CorrelationReport>, alpha: f64, divisor: u32) -> Vec<CorrelationReport> {
    assert!(divisor >= 1, "Bonferroni divisor must be >= 1");
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    let threshold = alpha / divisor as f64;
    for r in &mut reports {
        r.alpha = alpha;
        r.divisor = divisor;
        r.significant = r.result.p < threshold;
    }
    reports
}

/// Sets `reported` on significant reports whose |r| exceeds `threshold`.
pub fn apply_report_threshold(reports: &mut [CorrelationReport], threshold: f64) {
    for r in reports {
        r.reported = r.significant && r.result.r.abs() > threshold;
    }
}
