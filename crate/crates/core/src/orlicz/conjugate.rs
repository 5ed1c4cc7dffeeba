//! Numerical Legendre–Fenchel conjugation, evaluated lazily per point.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::golden_max;

use super::function::{Extension, OrliczFunction};
use super::germ::{Germ, GermFn};

const GOLDEN_RTOL: f64 = 1e-10;
const LOG_X_FLOOR: f64 = -740.0;

/// `sup { x·y − f(x) : 0 < x ≤ x_cap }` for a function that eventually
/// outgrows every line. Returns `(value, argmax)`; the argmax is 0 when the
/// supremum is only approached as `x → 0`.
///
/// The maximiser is bracketed by walking down from a point where
/// `f(x) ≥ x·y` in steps of `ln x`, then refined by golden section.
pub fn legendre_sup<F: Fn(f64) -> f64>(f: F, y: f64, x_cap: f64) -> Result<(f64, f64)> {
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain { what: "y", value: y, domain: "[0, inf)" });
    }
    if y == 0.0 {
        return Ok((0.0, 0.0));
    }
    let g = |u: f64| {
        let x = u.exp();
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            x * y - v
        }
    };

    let u_top = if x_cap.is_finite() {
        x_cap.ln()
    } else {
        let mut x = 1.0f64;
        while f(x) < x * y {
            x *= 2.0;
            if x > 1e300 {
                return Err(Error::Divergent(format!("sup of x*{y} - f(x) over x in (0, inf)")));
            }
        }
        x.ln()
    };

    let mut upper = u_top;
    let mut u_prev = u_top;
    let mut g_prev = g(u_top);
    let mut step = 0.5;
    let mut steps = 0;
    let (lo, hi) = loop {
        let u = u_prev - step;
        let gu = g(u);
        if gu < g_prev {
            break (u, upper);
        }
        if u < LOG_X_FLOOR {
            // increasing all the way down: the sup is the limit at 0
            return Ok(if g_prev > 0.0 { (g_prev, u_prev.exp()) } else { (0.0, 0.0) });
        }
        upper = u_prev;
        u_prev = u;
        g_prev = gu;
        steps += 1;
        if steps > 8 {
            step *= 2.0;
        }
    };
    let (u_star, best) = golden_max(g, lo, hi, GOLDEN_RTOL);
    if best > 0.0 {
        Ok((best, u_star.exp()))
    } else {
        Ok((0.0, 0.0))
    }
}

/// Germ of `φ*`; the argmax of the inner problem is its derivative.
#[derive(Debug)]
pub struct ConjugateGerm {
    base: OrliczFunction,
    x_cap: f64,
}

impl ConjugateGerm {
    fn sup(&self, y: f64) -> Result<(f64, f64)> {
        let base = &self.base;
        legendre_sup(|x| base.evaluate(x).unwrap_or(f64::INFINITY), y, self.x_cap)
    }
}

impl GermFn for ConjugateGerm {
    fn value(&self, y: f64) -> f64 {
        self.sup(y).map(|r| r.0).unwrap_or(f64::INFINITY)
    }

    fn derivative(&self, y: f64) -> f64 {
        self.sup(y).map(|r| r.1).unwrap_or(f64::INFINITY)
    }

    fn log_slope(&self, u: f64) -> f64 {
        self.log_value_slope(u).1
    }

    fn log_value_slope(&self, u: f64) -> (f64, f64) {
        let y = u.exp();
        match self.sup(y) {
            Ok((v, x)) if v > 0.0 => (v.ln(), y * x / v),
            Ok(_) => (f64::NEG_INFINITY, f64::NAN),
            Err(_) => (f64::INFINITY, f64::NAN),
        }
    }
}

/// `φ*(y) = sup { xy − φ(x) : x > 0 }` as an [`OrliczFunction`].
///
/// A tangent extension with slope `m` makes `φ*` infinite beyond `m`, so the
/// conjugate lives on `[0, m]` with an infinite extension. Functions without
/// extension (`t0 = ∞`) conjugate to functions without extension.
pub fn conjugate(phi: &OrliczFunction) -> Result<OrliczFunction> {
    let (x_cap, t0, extension) = match phi.extension() {
        Extension::Tangent { slope } if phi.t0().is_finite() => (phi.t0(), slope, Extension::Infinite),
        Extension::Infinite => (phi.t0(), f64::INFINITY, Extension::Tangent { slope: f64::INFINITY }),
        Extension::Tangent { .. } => (f64::INFINITY, f64::INFINITY, Extension::Tangent { slope: f64::INFINITY }),
    };
    if x_cap.is_infinite() {
        // superlinear growth check; a linear φ has no finite conjugate on (1, ∞)
        let y = 2.0 * phi.evaluate(1.0)?.max(1.0);
        legendre_sup(|x| phi.evaluate(x).unwrap_or(f64::INFINITY), y, x_cap)?;
    }
    let germ = Germ::Custom(Arc::new(ConjugateGerm { base: phi.clone(), x_cap }));
    let out = OrliczFunction::unvalidated(germ, t0, format!("conjugate({})", phi.label()))?.with_extension(extension);
    out.ensure_valid()?;
    Ok(out)
}
