//! Two-sided p-values checked against direct numerical integration of the
//! null distribution of r.
//!
//! Under independence the density of a sample correlation is proportional to
//! (1 − r²)^((n−4)/2). Substituting r = sin θ gives cos^(n−3) θ, so
//!
//!   p(r) = ∫_{asin|r|}^{π/2} cos^(n−3) θ dθ / ∫_0^{π/2} cos^(n−3) θ dθ,
//!
//! a smooth integrand that adaptive Gauss–Legendre handles to ~1e−15. Nothing
//! here shares code with the incomplete-beta path under test.

use colex_core::stats::two_sided_p;
use std::f64::consts::FRAC_PI_2;

const ORDER: usize = 16;

fn gauss_legendre() -> ([f64; ORDER], [f64; ORDER]) {
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    for i in 0..ORDER {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (ORDER as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=ORDER {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            derivative = ORDER as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / derivative;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
    }
    (nodes, weights)
}

struct Quadrature {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

impl Quadrature {
    fn new() -> Self {
        let (nodes, weights) = gauss_legendre();
        Quadrature { nodes, weights }
    }

    fn panel(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        half * self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }

    fn adaptive(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = (a + b) / 2.0;
        let (left, right) = (self.panel(f, a, mid), self.panel(f, mid, b));
        if depth == 0 || ((left + right) - whole).abs() <= tol {
            return left + right;
        }
        self.adaptive(f, a, mid, left, tol, depth - 1) + self.adaptive(f, mid, b, right, tol, depth - 1)
    }

    /// Absolute tolerance per panel is fixed relative to the whole integral,
    /// which keeps it above the rounding floor at every level.
    fn integrate(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let coarse = self.panel(f, a, b);
        let scale: f64 = (0..64)
            .map(|i| {
                let h = (b - a) / 64.0;
                self.panel(f, a + i as f64 * h, a + (i + 1) as f64 * h)
            })
            .sum();
        self.adaptive(f, a, b, coarse, 1e-14 * scale.abs(), 20)
    }
}

/// Natural log of the oracle p-value.
fn oracle_ln_p(quad: &Quadrature, r: f64, n: usize) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let power = (n - 3) as f64;
    let start = r.abs().asin();
    let ln_cos_start = start.cos().ln();
    // Scaled so the integrand is 1 at the lower limit and nothing underflows.
    let tail = quad.integrate(&|t: f64| (power * (t.cos().ln() - ln_cos_start)).exp(), start, FRAC_PI_2);
    let total = quad.integrate(&|t: f64| t.cos().powf(power), 0.0, FRAC_PI_2);
    power * ln_cos_start + tail.ln() - total.ln()
}

#[test]
fn quadrature_sanity() {
    let quad = Quadrature::new();
    // ∫_0^{π/2} cos² = π/4
    let v = quad.integrate(&|t: f64| t.cos().powi(2), 0.0, FRAC_PI_2);
    assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    // n = 4: r is uniform on (−1, 1), so p = 1 − |r|
    assert!((oracle_ln_p(&quad, 0.3, 4).exp() - 0.7).abs() < 1e-14);
}

#[test]
fn p_matches_quadrature_grid() {
    let quad = Quadrature::new();
    let mut worst: f64 = 0.0;
    for n in [5usize, 30, 1000] {
        for k in 0..=22 {
            let r = -0.99 + 0.09 * k as f64;
            let ln_expected = oracle_ln_p(&quad, r, n);
            let got = two_sided_p(r, n).unwrap();
            if ln_expected < f64::MIN_POSITIVE.ln() {
                assert!(got < f64::MIN_POSITIVE, "n={n} r={r}: expected underflow, got {got:e}");
                continue;
            }
            let expected = ln_expected.exp();
            let rel = ((got - expected) / expected).abs();
            worst = worst.max(rel);
            assert!(rel <= 1e-10, "n={n} r={r}: got {got:e}, quadrature {expected:e}, rel {rel:e}");
        }
    }
    eprintln!("worst relative deviation from quadrature: {worst:e}");
}
