//! One-dimensional solvers: a bracketed Newton iteration for increasing
//! functions and golden-section maximisation.

use crate::error::{Error, Result};

pub const MAX_ITER: usize = 200;

/// Bracketed Newton iteration with bisection fallback.
///
/// Solves `g(u) = target` for a non-decreasing `g`, where `eval(u)` returns
/// `(g(u), g'(u))`. The search is confined to `u <= upper` (pass
/// `f64::INFINITY` for no bound). The bracket is found by doubling steps
/// away from `start`.
pub fn solve_increasing<F>(eval: F, target: f64, start: f64, upper: f64, rtol: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    if !target.is_finite() || !start.is_finite() {
        return Err(Error::InvalidArgument(format!("solve_increasing: target {target}, start {start}")));
    }
    let start = start.min(upper);
    let (g0, _) = eval(start);
    if g0.is_nan() {
        return Err(Error::Bracket(format!("NaN at u = {start}")));
    }
    if g0 == target {
        return Ok(start);
    }
    let (mut lo, mut hi);
    let mut step = 1.0;
    if g0 < target {
        if start == upper {
            return Err(Error::Bracket(format!("target {target} above the value {g0} at the upper bound")));
        }
        lo = start;
        loop {
            let cand = (start + step).min(upper);
            let (g, _) = eval(cand);
            if g.is_nan() {
                return Err(Error::Bracket(format!("NaN at u = {cand}")));
            }
            if g >= target {
                hi = cand;
                break;
            }
            if cand == upper || step > 1e7 {
                return Err(Error::Bracket(format!("target {target} not reached from below")));
            }
            lo = cand;
            step *= 2.0;
        }
    } else {
        hi = start;
        loop {
            let cand = start - step;
            let (g, _) = eval(cand);
            if g.is_nan() {
                return Err(Error::Bracket(format!("NaN at u = {cand}")));
            }
            if g <= target {
                lo = cand;
                break;
            }
            if step > 1e7 {
                return Err(Error::Bracket(format!("target {target} not reached from above")));
            }
            hi = cand;
            step *= 2.0;
        }
    }

    let mut u = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let (g, d) = eval(u);
        if g.is_nan() {
            return Err(Error::Bracket(format!("NaN at u = {u}")));
        }
        let r = g - target;
        if r == 0.0 {
            return Ok(u);
        }
        if r < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let tol = rtol * u.abs().max(1.0);
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let newton = u - r / d;
        let next = if d.is_finite() && d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - u).abs() <= 0.25 * tol {
            return Ok(next);
        }
        u = next;
    }
    Err(Error::NoConvergence("bracketed Newton", MAX_ITER))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `g` on `[a, c]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(g: F, mut a: f64, mut c: f64, rtol: f64) -> (f64, f64) {
    let mut x1 = c - INV_PHI * (c - a);
    let mut x2 = a + INV_PHI * (c - a);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..MAX_ITER {
        if c - a <= rtol * x1.abs().max(1.0) {
            break;
        }
        if g1 >= g2 {
            c = x2;
            x2 = x1;
            g2 = g1;
            x1 = c - INV_PHI * (c - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + INV_PHI * (c - a);
            g2 = g(x2);
        }
    }
    if g1 >= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}
