//! Named constructors addressable by JSON, e.g. `{"kind":"power","p":2.0}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::function::OrliczFunction;
use super::germ::Germ;

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `scale · t^p`
    Power {
        p: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t0: Option<f64>,
    },
    /// `scale · t^p · |ln t|^q`
    PowerLog {
        p: f64,
        q: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t0: Option<f64>,
    },
    /// `t`
    Phi0,
    /// `5⁻² t² |ln t|⁴`
    Phi1,
    /// `5⁻² e^{-2+2√(1-t)} (2t + 2√(1-t) - 2)²`
    Phi2,
    /// `t |ln t|²`; not convex near 0, kept as a raw germ
    Psi1,
    /// `e^{-1+√(1-s)} (s - (-1+√(1-s))²)`; not convex near 0, kept as a raw germ
    Psi2,
    /// Piecewise linear through `points`; `(0, 0)` is prepended when missing.
    Tabulated { points: Vec<[f64; 2]> },
}

fn config_err(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.to_string(), message: message.into() }
}

fn check_positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(config_err(field, format!("must be positive, got {v}")))
    }
}

/// Largest `L = |ln t|` at which `t^p L^q` stops being convex, or 0 when it
/// is convex for every `t < 1`.
fn power_log_convexity_root(p: f64, q: f64) -> f64 {
    // φ'' ∝ p(p-1)L² - q(2p-1)L + q(q-1)
    let (a, b, c) = (p * (p - 1.0), -q * (2.0 * p - 1.0), q * (q - 1.0));
    if a <= 0.0 {
        return 0.0;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return 0.0;
    }
    ((-b + disc.sqrt()) / (2.0 * a)).max(0.0)
}

/// Default threshold of the power-log germ: the first `e^{-k}` inside both
/// the monotone region (`L > q/p`) and the convex region.
pub fn power_log_default_t0(p: f64, q: f64) -> f64 {
    let l = power_log_convexity_root(p, q).max(q / p).max(0.0);
    (-l.ceil()).exp().min(1.0)
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FunctionSpec = serde_json::from_str(text)?;
        spec.check()?;
        Ok(spec)
    }

    /// Range checks on the parameters; names the offending field.
    pub fn check(&self) -> Result<()> {
        match self {
            FunctionSpec::Power { p, scale, t0 } => {
                if !(*p >= 1.0) || !p.is_finite() {
                    return Err(config_err("p", format!("must be a finite number >= 1, got {p}")));
                }
                check_positive("scale", *scale)?;
                if let Some(t0) = t0 {
                    check_positive("t0", *t0)?;
                }
            }
            FunctionSpec::PowerLog { p, q, scale, t0 } => {
                if !(*p >= 1.0) || !p.is_finite() {
                    return Err(config_err("p", format!("must be a finite number >= 1, got {p}")));
                }
                if !q.is_finite() {
                    return Err(config_err("q", "must be finite"));
                }
                check_positive("scale", *scale)?;
                if let Some(t0) = t0 {
                    if !(*t0 > 0.0 && *t0 < 1.0) {
                        return Err(config_err("t0", format!("must lie in (0, 1), got {t0}")));
                    }
                }
            }
            FunctionSpec::Tabulated { points } => {
                if points.is_empty() {
                    return Err(config_err("points", "needs at least one point besides the origin"));
                }
                let mut prev = (0.0, 0.0);
                for (i, &[t, v]) in points.iter().enumerate() {
                    if !t.is_finite() || !v.is_finite() {
                        return Err(config_err(&format!("points[{i}]"), "non-finite coordinate"));
                    }
                    if i == 0 && t == 0.0 {
                        if v != 0.0 {
                            return Err(config_err("points[0]", "value at 0 must be 0"));
                        }
                        continue;
                    }
                    if t <= prev.0 {
                        return Err(config_err(&format!("points[{i}]"), "abscissae must be strictly increasing and positive"));
                    }
                    prev = (t, v);
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn parts(&self) -> (Germ, f64, &'static str) {
        match self {
            FunctionSpec::Power { p, scale, t0 } => {
                (Germ::Power { p: *p, scale: *scale }, t0.unwrap_or(f64::INFINITY), "power")
            }
            FunctionSpec::PowerLog { p, q, scale, t0 } => (
                Germ::PowerLog { p: *p, q: *q, scale: *scale },
                t0.unwrap_or_else(|| power_log_default_t0(*p, *q)),
                "power-log",
            ),
            FunctionSpec::Phi0 => (Germ::Power { p: 1.0, scale: 1.0 }, f64::INFINITY, "phi0"),
            FunctionSpec::Phi1 => (Germ::PowerLog { p: 2.0, q: 4.0, scale: 0.04 }, (-5f64).exp(), "phi1"),
            FunctionSpec::Phi2 => (Germ::Phi2, 0.1, "phi2"),
            FunctionSpec::Psi1 => (Germ::PowerLog { p: 1.0, q: 2.0, scale: 1.0 }, (-2f64).exp(), "psi1"),
            FunctionSpec::Psi2 => (Germ::Psi2, 0.1, "psi2"),
            FunctionSpec::Tabulated { points } => {
                let mut pts: Vec<(f64, f64)> = points.iter().map(|&[t, v]| (t, v)).collect();
                if pts[0].0 > 0.0 {
                    pts.insert(0, (0.0, 0.0));
                }
                let t0 = pts.last().map(|p| p.0).unwrap_or(1.0);
                (Germ::Tabulated(pts.into()), t0, "tabulated")
            }
        }
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            FunctionSpec::Power { p, scale, .. } => vec![("p", *p), ("scale", *scale)],
            FunctionSpec::PowerLog { p, q, scale, .. } => vec![("p", *p), ("q", *q), ("scale", *scale)],
            FunctionSpec::Phi1 => vec![("p", 2.0), ("q", 4.0), ("scale", 0.04)],
            _ => Vec::new(),
        }
    }

    /// Builds and validates.
    pub fn build(&self) -> Result<OrliczFunction> {
        self.check()?;
        let (germ, t0, label) = self.parts();
        let phi = OrliczFunction::unvalidated(germ, t0, label)?.with_params(self.params()).with_spec(self.clone());
        phi.ensure_valid()?;
        Ok(phi)
    }

    /// Builds without validation; for germs that are known to fail it.
    pub fn build_unvalidated(&self) -> Result<OrliczFunction> {
        self.check()?;
        let (germ, t0, label) = self.parts();
        Ok(OrliczFunction::unvalidated(germ, t0, label)?.with_params(self.params()).with_spec(self.clone()))
    }
}

/// Every registry entry that builds into a valid Orlicz function, by name.
pub fn builtin_functions() -> Vec<(&'static str, FunctionSpec)> {
    vec![
        ("phi0", FunctionSpec::Phi0),
        ("phi1", FunctionSpec::Phi1),
        ("phi2", FunctionSpec::Phi2),
        ("square", FunctionSpec::Power { p: 2.0, scale: 1.0, t0: None }),
        ("power-1.5", FunctionSpec::Power { p: 1.5, scale: 1.0, t0: None }),
        ("cube", FunctionSpec::Power { p: 3.0, scale: 1.0, t0: None }),
        ("power-log-2-1", FunctionSpec::PowerLog { p: 2.0, q: 1.0, scale: 1.0, t0: None }),
    ]
}

/// The N-functions among [`builtin_functions`] (φ(t)/t → 0 at 0 and → ∞ at ∞).
pub fn builtin_n_functions() -> Vec<(&'static str, FunctionSpec)> {
    builtin_functions().into_iter().filter(|(name, _)| *name != "phi0").collect()
}
