//! Finite interpolation families: a partition of the circle into arcs, each
//! carrying an Orlicz function.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::orlicz::{FunctionSpec, OrliczFunction};

use super::disk::{harmonic_measure, herglotz_prime, Arc, DiskPoint};

/// Closing angles within this distance of 2π are read as 2π, so configs may
/// write the circle's end to a few decimals.
pub const CLOSURE_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct FiniteFamily {
    pieces: Vec<(OrliczFunction, Arc)>,
}

fn cfg(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

impl FiniteFamily {
    /// Pieces in any order; their arcs must tile `[0, 2π)`.
    pub fn new(mut pieces: Vec<(OrliczFunction, Arc)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("a family needs at least one piece".into()));
        }
        pieces.sort_by(|a, b| a.1.alpha().partial_cmp(&b.1.alpha()).unwrap());
        if pieces[0].1.alpha() != 0.0 {
            return Err(Error::InvalidArgument(format!("arcs must start at 0, first starts at {}", pieces[0].1.alpha())));
        }
        for w in pieces.windows(2) {
            if w[0].1.beta() != w[1].1.alpha() {
                return Err(Error::InvalidArgument(format!(
                    "arcs must be contiguous and disjoint: [{}, {}) then [{}, {})",
                    w[0].1.alpha(),
                    w[0].1.beta(),
                    w[1].1.alpha(),
                    w[1].1.beta()
                )));
            }
        }
        let last = pieces.last().unwrap().1;
        if last.beta() != TAU {
            return Err(Error::InvalidArgument(format!("arcs must end at 2pi, last ends at {}", last.beta())));
        }
        Ok(FiniteFamily { pieces })
    }

    /// One function on `k` equal arcs each, in the given order from angle 0.
    pub fn equal_arcs(functions: Vec<OrliczFunction>) -> Result<Self> {
        let k = functions.len();
        if k == 0 {
            return Err(Error::InvalidArgument("a family needs at least one piece".into()));
        }
        let edge = |i: usize| if i == k { TAU } else { TAU * i as f64 / k as f64 };
        let pieces = functions
            .into_iter()
            .enumerate()
            .map(|(i, f)| Ok((f, Arc::new(edge(i), edge(i + 1))?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[(OrliczFunction, Arc)] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn functions(&self) -> impl Iterator<Item = &OrliczFunction> {
        self.pieces.iter().map(|p| &p.0)
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.pieces.iter().map(|p| p.1)
    }

    /// Harmonic measures `μ_z(A_j)`.
    pub fn weights(&self, z: DiskPoint) -> Result<Vec<f64>> {
        self.arcs().map(|a| harmonic_measure(z, a)).collect()
    }

    /// Herglotz derivatives `ψ_j'(z)`.
    pub fn herglotz_primes(&self, z: DiskPoint) -> Vec<Complex64> {
        self.arcs().map(|a| herglotz_prime(z, a)).collect()
    }

    /// `min_j φ_j(t0_j)`: below this every germ is in force.
    pub fn t_witness(&self) -> f64 {
        self.functions().map(|f| f.germ_range()).fold(f64::INFINITY, f64::min)
    }

    /// Parses `{"pieces":[{"function":{...},"arc":[a,b]},...]}`. Errors name
    /// the offending field, e.g. `pieces[1].function.p`.
    pub fn from_json(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| cfg("<json>", e.to_string()))?;
        let pieces = root.get("pieces").ok_or_else(|| cfg("pieces", "missing"))?;
        let pieces = pieces.as_array().ok_or_else(|| cfg("pieces", "must be an array"))?;
        if pieces.is_empty() {
            return Err(cfg("pieces", "must not be empty"));
        }
        let mut out = Vec::with_capacity(pieces.len());
        for (i, piece) in pieces.iter().enumerate() {
            let at = |f: &str| format!("pieces[{i}].{f}");
            let fval = piece.get("function").ok_or_else(|| cfg(at("function"), "missing"))?;
            let spec: FunctionSpec =
                serde_json::from_value(fval.clone()).map_err(|e| cfg(at("function"), e.to_string()))?;
            spec.check().map_err(|e| match e {
                Error::Config { field, message } => cfg(at(&format!("function.{field}")), message),
                other => other,
            })?;
            let phi = spec.build().map_err(|e| cfg(at("function"), e.to_string()))?;
            let aval = piece.get("arc").ok_or_else(|| cfg(at("arc"), "missing"))?;
            let [a, mut b]: [f64; 2] =
                serde_json::from_value(aval.clone()).map_err(|e| cfg(at("arc"), e.to_string()))?;
            if (b - TAU).abs() <= CLOSURE_TOL {
                b = TAU;
            }
            let arc = Arc::new(a, b).map_err(|e| cfg(at("arc"), e.to_string()))?;
            out.push((phi, arc));
        }
        Self::new(out).map_err(|e| cfg("pieces", e.to_string()))
    }

    /// Inverse of [`Self::from_json`]; needs every function to carry its spec.
    pub fn to_json(&self) -> Result<String> {
        let pieces = self
            .pieces
            .iter()
            .map(|(f, a)| {
                let spec = f
                    .spec()
                    .ok_or_else(|| Error::InvalidArgument(format!("`{}` has no registry spec to serialize", f.label())))?;
                Ok(json!({ "function": spec, "arc": [a.alpha(), a.beta()] }))
            })
            .collect::<Result<Vec<Value>>>()?;
        Ok(serde_json::to_string_pretty(&json!({ "pieces": pieces }))?)
    }
}
