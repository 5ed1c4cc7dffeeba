//! The interpolated function `φ_z`, defined through its inverse
//! `φ_z⁻¹ = ∏ (φ_j⁻¹)^{μ_z(A_j)}`.

use std::f64::consts::TAU;
use std::sync::Arc as Shared;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{integrate, solve_increasing, QuadOptions};
use crate::orlicz::{Germ, GermFn, OrliczFunction};

use super::disk::DiskPoint;
use super::family::FiniteFamily;

const SOLVE_RTOL: f64 = 1e-14;

/// `ln φ_z⁻¹(e^v) = Σ μ_j ln φ_j⁻¹(e^v)`, with its derivative in `v`.
#[derive(Clone, Debug)]
pub struct WeightedLogInverse {
    terms: Vec<(OrliczFunction, f64)>,
}

impl WeightedLogInverse {
    pub fn new(family: &FiniteFamily, weights: &[f64]) -> Self {
        let terms = family
            .functions()
            .cloned()
            .zip(weights.iter().copied())
            .filter(|&(_, w)| w > 0.0)
            .collect();
        WeightedLogInverse { terms }
    }

    pub fn value(&self, v: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (phi, w) in &self.terms {
            sum += w * phi.log_inverse(v)?;
        }
        Ok(sum)
    }

    /// `(value, d value / dv)`; `d ln φ_j⁻¹ / dv` is the reciprocal local exponent.
    pub fn value_slope(&self, v: f64) -> Result<(f64, f64)> {
        let mut sum = 0.0;
        let mut slope = 0.0;
        for (phi, w) in &self.terms {
            let u = phi.log_inverse(v)?;
            sum += w * u;
            slope += w / phi.log_slope(u);
        }
        Ok((sum, slope))
    }
}

/// Germ of `φ_z`: `ln φ_z(eᵘ)` solves `Σ μ_j ln φ_j⁻¹(e^v) = u` for `v`.
#[derive(Debug)]
pub struct InterpolatedGerm {
    inverse: WeightedLogInverse,
}

impl InterpolatedGerm {
    fn solve(&self, u: f64) -> Result<(f64, f64)> {
        if u == f64::NEG_INFINITY {
            return Ok((f64::NEG_INFINITY, f64::NAN));
        }
        let eval = |v: f64| self.inverse.value_slope(v).unwrap_or((f64::NAN, f64::NAN));
        // first guess: the local exponent at v = u
        let (_, s) = eval(u);
        let start = if s.is_finite() && s > 0.0 { u / s } else { u };
        let v = solve_increasing(eval, u, start, f64::INFINITY, SOLVE_RTOL)?;
        let (_, s) = eval(v);
        Ok((v, 1.0 / s))
    }
}

impl GermFn for InterpolatedGerm {
    fn value(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        self.log_value(t.ln()).exp()
    }

    fn derivative(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let (l, d) = self.log_value_slope(t.ln());
        l.exp() * d / t
    }

    fn log_value(&self, u: f64) -> f64 {
        self.log_value_slope(u).0
    }

    fn log_slope(&self, u: f64) -> f64 {
        self.log_value_slope(u).1
    }

    fn log_value_slope(&self, u: f64) -> (f64, f64) {
        self.solve(u).unwrap_or((f64::NAN, f64::NAN))
    }
}

/// `φ_z⁻¹(s) = ∏_j φ_j⁻¹(s)^{μ_z(A_j)}`, evaluated in the log domain.
pub fn interpolated_inverse(family: &FiniteFamily, z: DiskPoint, s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain { what: "s", value: s, domain: "[0, inf)" });
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let weights = family.weights(z)?;
    Ok(WeightedLogInverse::new(family, &weights).value(s.ln())?.exp())
}

/// `φ_z` with precomputed weights.
///
/// The weighted geometric mean of the (tangent-extended) inverses is concave
/// and increasing on all of `[0, ∞)`, so its inverse is used everywhere and
/// no extension is attached.
pub fn interpolated_function_with_weights(family: &FiniteFamily, weights: &[f64]) -> Result<OrliczFunction> {
    let germ = InterpolatedGerm { inverse: WeightedLogInverse::new(family, weights) };
    let phi = OrliczFunction::unvalidated(Germ::Custom(Shared::new(germ)), f64::INFINITY, "interpolated")?;
    phi.ensure_valid()?;
    Ok(phi)
}

pub fn interpolated_function(family: &FiniteFamily, z: DiskPoint) -> Result<OrliczFunction> {
    interpolated_function_with_weights(family, &family.weights(z)?)
}

/// `I_z(t)` as the harmonic-measure product and as a direct Poisson
/// integral of `ln φ_{e^{iτ}}⁻¹(t)`; returns `(product, quadrature)`.
pub fn iz_quadrature_check(family: &FiniteFamily, z: DiskPoint, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain { what: "t", value: t, domain: "(0, inf)" });
    }
    let product = interpolated_inverse(family, z, t)?;
    let logs: Vec<f64> = family.functions().map(|f| f.log_inverse(t.ln())).collect::<Result<_>>()?;
    let arcs: Vec<_> = family.arcs().collect();
    let (r, theta) = (z.r(), z.theta());
    let integrand = |tau: f64| {
        let j = arcs.iter().position(|a| a.contains(tau)).unwrap_or(arcs.len() - 1);
        let s = (0.5 * (theta - tau)).sin();
        let p = (1.0 - r) * (1.0 + r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s);
        p * logs[j]
    };
    let mut breaks: Vec<f64> = arcs.iter().map(|a| a.alpha()).collect();
    breaks.push(theta);
    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, max_intervals: 4000 };
    let integral = integrate(integrand, 0.0, TAU, &breaks, opts)?;
    Ok((product, (integral.value / TAU).exp()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcavityReport {
    pub passed: bool,
    /// largest `(avg − g(mid)) / avg` over sampled pairs
    pub worst_concavity: f64,
    /// largest `(g(t_i) − g(t_{i+1})) / g(t_{i+1})`; non-negative means not strictly increasing
    pub worst_increase: f64,
    pub points: usize,
}

/// Midpoint concavity and strict increase of `t ↦ φ_z⁻¹(t)` on `grid`.
pub fn concavity_probe(family: &FiniteFamily, z: DiskPoint, grid: &[f64]) -> Result<ConcavityReport> {
    let weights = family.weights(z)?;
    let inv = WeightedLogInverse::new(family, &weights);
    let g = |t: f64| -> Result<f64> { Ok(if t == 0.0 { 0.0 } else { inv.value(t.ln())?.exp() }) };
    let vals: Vec<f64> = grid.iter().map(|&t| g(t)).collect::<Result<_>>()?;
    let tol = 1e-12;
    let mut worst_increase = f64::NEG_INFINITY;
    for w in vals.windows(2) {
        worst_increase = worst_increase.max((w[0] - w[1]) / w[1]);
    }
    let mut worst_concavity: f64 = f64::NEG_INFINITY;
    for i in 0..grid.len() {
        let mut gap = 1;
        while i + gap < grid.len() {
            let (a, b) = (grid[i], grid[i + gap]);
            let avg = 0.5 * (vals[i] + vals[i + gap]);
            let mid = g(0.5 * (a + b))?;
            worst_concavity = worst_concavity.max((avg - mid) / avg);
            gap *= 2;
        }
    }
    let passed = worst_concavity <= tol && (grid.len() < 2 || worst_increase < 0.0);
    Ok(ConcavityReport { passed, worst_concavity, worst_increase, points: grid.len() })
}
