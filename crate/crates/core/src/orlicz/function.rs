use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numeric::solve_increasing;

use super::germ::Germ;
use super::registry::FunctionSpec;
use super::validate::{validate, ValidationReport};

pub(crate) const INVERSE_RTOL: f64 = 1e-14;
pub(crate) const DEFAULT_VALIDATION_GRID: usize = 64;

/// What the function does beyond the germ threshold `t0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extension {
    /// Affine continuation with the given slope (the tangent at `t0`).
    Tangent { slope: f64 },
    /// `+∞` beyond `t0`. Exact Legendre transforms of tangent-extended
    /// functions have this form.
    Infinite,
}

/// An Orlicz function: a germ on `[0, t0]` plus a convex extension.
#[derive(Clone, Debug)]
pub struct OrliczFunction {
    germ: Germ,
    t0: f64,
    top: f64,
    extension: Extension,
    label: String,
    params: BTreeMap<String, f64>,
    spec: Option<FunctionSpec>,
}

impl OrliczFunction {
    /// Builds and validates. The extension is the tangent line at `t0`.
    pub fn new(germ: Germ, t0: f64, label: impl Into<String>) -> Result<Self> {
        let phi = Self::unvalidated(germ, t0, label)?;
        phi.ensure_valid()?;
        Ok(phi)
    }

    /// Builds without running [`validate`]; used to inspect bad candidates.
    pub fn unvalidated(germ: Germ, t0: f64, label: impl Into<String>) -> Result<Self> {
        if !(t0 > 0.0) {
            return Err(Error::Domain { what: "t0", value: t0, domain: "(0, inf]" });
        }
        let (top, extension) = if t0.is_finite() {
            (germ.value(t0), Extension::Tangent { slope: germ.derivative(t0) })
        } else {
            (f64::INFINITY, Extension::Tangent { slope: f64::INFINITY })
        };
        Ok(OrliczFunction {
            germ,
            t0,
            top,
            extension,
            label: label.into(),
            params: BTreeMap::new(),
            spec: None,
        })
    }

    pub(crate) fn with_extension(mut self, extension: Extension) -> Self {
        self.extension = extension;
        self
    }

    pub(crate) fn with_spec(mut self, spec: FunctionSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn with_params<I: IntoIterator<Item = (&'static str, f64)>>(mut self, params: I) -> Self {
        self.params.extend(params.into_iter().map(|(k, v)| (k.to_string(), v)));
        self
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = validate(self, DEFAULT_VALIDATION_GRID)?;
        if report.passed {
            Ok(())
        } else {
            Err(Error::Invariant(format!("`{}` is not an Orlicz function: {}", self.label, report.summary())))
        }
    }

    pub fn validate(&self, grid_size: usize) -> Result<ValidationReport> {
        validate(self, grid_size)
    }

    pub fn germ(&self) -> &Germ {
        &self.germ
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// φ(t0): the top of the value range covered by the germ.
    pub fn germ_range(&self) -> f64 {
        self.top
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn spec(&self) -> Option<&FunctionSpec> {
        self.spec.as_ref()
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain { what: "t", value: t, domain: "[0, inf)" });
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if t <= self.t0 {
            let v = self.germ.value(t);
            if v.is_nan() || v == f64::INFINITY {
                return Err(Error::Divergent(format!("`{}` at t = {t}", self.label)));
            }
            return Ok(v);
        }
        Ok(match self.extension {
            Extension::Tangent { slope } => self.top + slope * (t - self.t0),
            Extension::Infinite => f64::INFINITY,
        })
    }

    pub fn derivative(&self, t: f64) -> f64 {
        if t <= self.t0 {
            self.germ.derivative(t)
        } else {
            match self.extension {
                Extension::Tangent { slope } => slope,
                Extension::Infinite => f64::INFINITY,
            }
        }
    }

    /// `ln φ(eᵘ)`.
    pub fn log_evaluate(&self, u: f64) -> f64 {
        if u <= self.t0.ln() {
            return self.germ.log_value(u);
        }
        match self.extension {
            Extension::Tangent { slope } => {
                let t = u.exp();
                if t.is_finite() {
                    (self.top + slope * (t - self.t0)).ln()
                } else {
                    slope.ln() + u
                }
            }
            Extension::Infinite => f64::INFINITY,
        }
    }

    /// `d ln φ(eᵘ) / du`.
    pub fn log_slope(&self, u: f64) -> f64 {
        if u <= self.t0.ln() {
            return self.germ.log_slope(u);
        }
        match self.extension {
            Extension::Tangent { slope } => {
                let t = u.exp();
                if t.is_finite() {
                    slope * t / (self.top + slope * (t - self.t0))
                } else {
                    1.0
                }
            }
            Extension::Infinite => f64::INFINITY,
        }
    }

    /// `(ln φ(eᵘ), d ln φ(eᵘ)/du)` in one call.
    pub fn log_evaluate_with_slope(&self, u: f64) -> (f64, f64) {
        if u <= self.t0.ln() {
            self.germ.log_value_slope(u)
        } else {
            (self.log_evaluate(u), self.log_slope(u))
        }
    }

    /// `φ⁻¹(s)`, via [`Self::log_inverse`].
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Domain { what: "s", value: s, domain: "[0, inf)" });
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(self.log_inverse(s.ln())?.exp())
    }

    /// `ln φ⁻¹(e^{log_s})`, solved entirely in log coordinates so that
    /// arguments far below the smallest normal double still resolve.
    pub fn log_inverse(&self, log_s: f64) -> Result<f64> {
        if log_s.is_nan() || log_s == f64::INFINITY {
            return Err(Error::Domain { what: "log_s", value: log_s, domain: "[-inf, inf)" });
        }
        if log_s == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        if self.t0.is_finite() && log_s >= self.top.ln() {
            return match self.extension {
                Extension::Tangent { slope } => {
                    let s = log_s.exp();
                    if s.is_finite() {
                        Ok((self.t0 + (s - self.top) / slope).ln())
                    } else {
                        Ok(log_s - slope.ln())
                    }
                }
                Extension::Infinite if log_s == self.top.ln() => Ok(self.t0.ln()),
                Extension::Infinite => Err(Error::Domain {
                    what: "s",
                    value: log_s.exp(),
                    domain: "the finite range of the function",
                }),
            };
        }
        if let Germ::Power { p, scale } = self.germ {
            return Ok((log_s - scale.ln()) / p);
        }
        let upper = self.t0.ln();
        let start = if upper.is_finite() { upper } else { 0.0 };
        solve_increasing(
            |u| self.germ.log_value_slope(u),
            log_s,
            start,
            upper,
            INVERSE_RTOL,
        )
    }
}
