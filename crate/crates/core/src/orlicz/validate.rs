//! Grid checks of the Orlicz-function axioms and the Δ₂ probe.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

use super::function::{Extension, OrliczFunction};

const REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    ZeroAtZero,
    NonDecreasing,
    MidpointConvex,
    NonDegenerate,
    ConvexExtension,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::ZeroAtZero => "phi(0) = 0",
            Axiom::NonDecreasing => "non-decreasing",
            Axiom::MidpointConvex => "midpoint convex",
            Axiom::NonDegenerate => "non-degenerate",
            Axiom::ConvexExtension => "convex unbounded extension",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub violated: Vec<Axiom>,
    pub grid: (f64, f64, usize),
    /// largest relative drop `(φ(a) - φ(b)) / max(φ(a), φ(b))` over a < b
    pub worst_monotonicity: f64,
    /// largest relative excess `(φ(m) - avg) / avg` at midpoints
    pub worst_convexity: f64,
    pub min_value: f64,
    pub value_at_zero: f64,
    /// how far the extension slope falls short of the left difference quotient at t0
    pub extension_gap: f64,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        if self.passed {
            return "pass".into();
        }
        let names: Vec<String> = self.violated.iter().map(|a| a.to_string()).collect();
        format!(
            "violates {} (monotonicity {:.3e}, convexity {:.3e}, min value {:.3e})",
            names.join(", "),
            self.worst_monotonicity,
            self.worst_convexity,
            self.min_value
        )
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .map(|t| t.min(hi))
        .collect()
}

fn grid_bounds(phi: &OrliczFunction) -> (f64, f64) {
    let hi = if phi.t0().is_finite() { phi.t0() } else { 1e3 };
    (hi * 1e-12, hi)
}

/// Checks every axiom on a log-spaced grid over `(0, t0]`. Violations are
/// reported, not raised; the error path is only for bad arguments.
pub fn validate(phi: &OrliczFunction, grid_size: usize) -> Result<ValidationReport> {
    if grid_size < 16 {
        return Err(Error::InvalidArgument(format!("grid_size {grid_size} < 16")));
    }
    let germ = phi.germ();
    let (lo, hi) = grid_bounds(phi);
    let ts = log_grid(lo, hi, grid_size);
    let vs: Vec<f64> = ts.iter().map(|&t| germ.value(t)).collect();
    let mut violated = Vec::new();

    let value_at_zero = germ.value(0.0);
    if value_at_zero != 0.0 {
        violated.push(Axiom::ZeroAtZero);
    }

    let min_value = vs.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_value > 0.0) || vs.iter().any(|v| !v.is_finite()) {
        violated.push(Axiom::NonDegenerate);
    }

    let mut worst_monotonicity: f64 = 0.0;
    for w in vs.windows(2) {
        let scale = w[0].abs().max(w[1].abs()).max(f64::MIN_POSITIVE);
        worst_monotonicity = worst_monotonicity.max((w[0] - w[1]) / scale);
    }
    if worst_monotonicity > REL_TOL || worst_monotonicity.is_nan() {
        violated.push(Axiom::NonDecreasing);
    }

    let mut worst_convexity: f64 = 0.0;
    let mut check = |a: f64, fa: f64, b: f64, fb: f64| {
        let avg = 0.5 * (fa + fb);
        let fm = germ.value(0.5 * (a + b));
        let scale = avg.abs().max(f64::MIN_POSITIVE);
        worst_convexity = worst_convexity.max((fm - avg) / scale);
    };
    for i in 0..ts.len() {
        check(0.0, value_at_zero, ts[i], vs[i]);
        let mut gap = 1;
        while i + gap < ts.len() {
            check(ts[i], vs[i], ts[i + gap], vs[i + gap]);
            gap *= 2;
        }
    }
    if worst_convexity > REL_TOL || worst_convexity.is_nan() {
        violated.push(Axiom::MidpointConvex);
    }

    let mut extension_gap = 0.0;
    if phi.t0().is_finite() {
        if let Extension::Tangent { slope } = phi.extension() {
            let h = 1e-7 * phi.t0();
            let left = (phi.germ_range() - germ.value(phi.t0() - h)) / h;
            extension_gap = ((left - slope) / slope.abs().max(f64::MIN_POSITIVE)).max(0.0);
            if !(slope > 0.0) || extension_gap > 1e-5 {
                violated.push(Axiom::ConvexExtension);
            }
        }
    }

    Ok(ValidationReport {
        passed: violated.is_empty(),
        violated,
        grid: (lo, hi, grid_size),
        worst_monotonicity,
        worst_convexity,
        min_value,
        value_at_zero,
        extension_gap,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Delta2Report {
    /// max of φ(2t)/φ(t) over the sampled grid; a probe, not the limsup
    pub sup_ratio: f64,
    pub grid: Vec<(f64, f64)>,
}

/// Samples φ(2t)/φ(t) on a log grid over `[1e-100, t0/2]`.
pub fn delta2_probe(phi: &OrliczFunction) -> Result<Delta2Report> {
    let hi = if phi.t0().is_finite() { 0.5 * phi.t0() } else { 0.5 };
    let ts = log_grid(1e-100, hi, 400);
    let mut grid = Vec::with_capacity(ts.len());
    for t in ts {
        let a = phi.evaluate(2.0 * t)?;
        let b = phi.evaluate(t)?;
        let ratio = if a > 0.0 && b > 0.0 && a.is_normal() && b.is_normal() {
            a / b
        } else {
            let u = t.ln();
            (phi.log_evaluate(u + std::f64::consts::LN_2) - phi.log_evaluate(u)).exp()
        };
        grid.push((t, ratio));
    }
    let sup_ratio = grid.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(Delta2Report { sup_ratio, grid })
}
