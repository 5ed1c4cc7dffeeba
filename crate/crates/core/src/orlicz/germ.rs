//! Closed-form germs: the formulas that define an Orlicz function near 0.

use std::fmt;
use std::sync::Arc;

/// A germ supplied by another part of the crate (conjugates, interpolated
/// functions). `log_value` and `log_slope` work in `u = ln t`.
pub trait GermFn: Send + Sync + fmt::Debug {
    fn value(&self, t: f64) -> f64;

    fn derivative(&self, t: f64) -> f64;

    fn log_value(&self, u: f64) -> f64 {
        self.value(u.exp()).ln()
    }

    /// d ln φ(eᵘ) / du, the local power exponent.
    fn log_slope(&self, u: f64) -> f64 {
        let t = u.exp();
        t * self.derivative(t) / self.value(t)
    }

    /// `(log_value(u), log_slope(u))`; override when both share work.
    fn log_value_slope(&self, u: f64) -> (f64, f64) {
        (self.log_value(u), self.log_slope(u))
    }
}

#[derive(Clone, Debug)]
pub enum Germ {
    /// `scale · t^p`
    Power { p: f64, scale: f64 },
    /// `scale · t^p · |ln t|^q`
    PowerLog { p: f64, q: f64, scale: f64 },
    /// `5⁻² e^{-2+2√(1-t)} (2t + 2√(1-t) - 2)²`
    Phi2,
    /// `e^{-1+√(1-s)} (s - (-1+√(1-s))²)`
    Psi2,
    /// Piecewise linear through the points, starting at (0, 0).
    Tabulated(Arc<[(f64, f64)]>),
    Custom(Arc<dyn GermFn>),
}

// With w = √(1-t): 2t + 2w - 2 = 2w(1-w) = 2wt/(1+w) and w - 1 = -t/(1+w);
// these forms keep full relative precision as t → 0.
fn psi2_parts(t: f64) -> (f64, f64, f64) {
    let w = (1.0 - t).sqrt();
    let core = 2.0 * w * t / (1.0 + w);
    let expo = -t / (1.0 + w);
    (w, core, expo)
}

impl Germ {
    pub fn value(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        match self {
            Germ::Power { p, scale } => scale * t.powf(*p),
            Germ::PowerLog { p, q, scale } => scale * t.powf(*p) * t.ln().abs().powf(*q),
            Germ::Phi2 => {
                let (_, core, expo) = psi2_parts(t);
                let psi = expo.exp() * core;
                psi * psi / 25.0
            }
            Germ::Psi2 => {
                let (_, core, expo) = psi2_parts(t);
                expo.exp() * core
            }
            Germ::Tabulated(points) => tabulated_value(points, t),
            Germ::Custom(g) => g.value(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Germ::Power { p, scale } => {
                if t == 0.0 {
                    if *p > 1.0 {
                        0.0
                    } else {
                        *scale
                    }
                } else {
                    scale * p * t.powf(p - 1.0)
                }
            }
            Germ::PowerLog { p, q, scale } => {
                if t == 0.0 {
                    return if *p > 1.0 { 0.0 } else { f64::INFINITY };
                }
                let l = t.ln();
                if *q == 0.0 {
                    return scale * p * t.powf(p - 1.0);
                }
                scale * t.powf(p - 1.0) * l.abs().powf(q - 1.0) * (p * l.abs() + q * l.signum())
            }
            Germ::Phi2 => {
                let (w, core, expo) = psi2_parts(t);
                let e = expo.exp();
                let psi = e * core;
                let dpsi = e * (w * w + w - 1.0) / w;
                2.0 * psi * dpsi / 25.0
            }
            Germ::Psi2 => {
                let (w, _, expo) = psi2_parts(t);
                expo.exp() * (w * w + w - 1.0) / w
            }
            Germ::Tabulated(points) => tabulated_slope(points, t),
            Germ::Custom(g) => g.derivative(t),
        }
    }

    pub fn log_value(&self, u: f64) -> f64 {
        match self {
            Germ::Power { p, scale } => scale.ln() + p * u,
            Germ::PowerLog { p, q, scale } => {
                if *q == 0.0 {
                    scale.ln() + p * u
                } else {
                    scale.ln() + p * u + q * u.abs().ln()
                }
            }
            Germ::Phi2 => {
                let t = u.exp();
                let w = (1.0 - t).sqrt();
                2.0 * (-t / (1.0 + w) + (2.0 * w / (1.0 + w)).ln() + u) - 25f64.ln()
            }
            Germ::Psi2 => {
                let t = u.exp();
                let w = (1.0 - t).sqrt();
                -t / (1.0 + w) + (2.0 * w / (1.0 + w)).ln() + u
            }
            Germ::Tabulated(points) => tabulated_value(points, u.exp()).ln(),
            Germ::Custom(g) => g.log_value(u),
        }
    }

    pub fn log_value_slope(&self, u: f64) -> (f64, f64) {
        match self {
            Germ::Custom(g) => g.log_value_slope(u),
            _ => (self.log_value(u), self.log_slope(u)),
        }
    }

    pub fn log_slope(&self, u: f64) -> f64 {
        match self {
            Germ::Power { p, .. } => *p,
            Germ::PowerLog { p, q, .. } => {
                if *q == 0.0 {
                    *p
                } else {
                    p + q / u
                }
            }
            Germ::Phi2 => {
                let w = (1.0 - u.exp()).sqrt();
                (w * w + w - 1.0) * (1.0 + w) / (w * w)
            }
            Germ::Psi2 => {
                let w = (1.0 - u.exp()).sqrt();
                (w * w + w - 1.0) * (1.0 + w) / (2.0 * w * w)
            }
            Germ::Tabulated(points) => {
                let t = u.exp();
                t * tabulated_slope(points, t) / tabulated_value(points, t)
            }
            Germ::Custom(g) => g.log_slope(u),
        }
    }
}

fn segment_index(points: &[(f64, f64)], t: f64) -> usize {
    // index i of the segment [points[i], points[i+1]] containing t
    let i = points.partition_point(|&(x, _)| x <= t);
    i.saturating_sub(1).min(points.len() - 2)
}

fn tabulated_value(points: &[(f64, f64)], t: f64) -> f64 {
    let i = segment_index(points, t);
    let (x0, y0) = points[i];
    let (x1, y1) = points[i + 1];
    y0 + (y1 - y0) * (t - x0) / (x1 - x0)
}

fn tabulated_slope(points: &[(f64, f64)], t: f64) -> f64 {
    let i = segment_index(points, t);
    let (x0, y0) = points[i];
    let (x1, y1) = points[i + 1];
    (y1 - y0) / (x1 - x0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi2_naive(t: f64) -> f64 {
        let w = (1.0 - t).sqrt();
        (-2.0 + 2.0 * w).exp() * (2.0 * t + 2.0 * w - 2.0).powi(2) / 25.0
    }

    #[test]
    fn phi2_stable_form_matches_naive_formula() {
        for &t in &[1e-3, 1e-2, 0.05, 0.1, 0.5] {
            let a = Germ::Phi2.value(t);
            let b = phi2_naive(t);
            assert!((a - b).abs() <= 1e-12 * b, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn log_forms_agree_with_values() {
        let germs = [
            Germ::Power { p: 2.5, scale: 0.3 },
            Germ::PowerLog { p: 2.0, q: 4.0, scale: 0.04 },
            Germ::Phi2,
            Germ::Psi2,
        ];
        for g in &germs {
            for &t in &[1e-6, 1e-3, 0.05] {
                let u = f64::ln(t);
                assert!((g.log_value(u) - g.value(t).ln()).abs() < 1e-12, "{g:?} at {t}");
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let germs = [
            Germ::Power { p: 2.5, scale: 0.3 },
            Germ::PowerLog { p: 2.0, q: 4.0, scale: 0.04 },
            Germ::PowerLog { p: 1.0, q: 2.0, scale: 1.0 },
            Germ::Phi2,
            Germ::Psi2,
        ];
        for g in &germs {
            for &t in &[1e-3, 5e-3, 0.05] {
                let h = 1e-6 * t;
                let fd = (g.value(t + h) - g.value(t - h)) / (2.0 * h);
                let d = g.derivative(t);
                assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-300), "{g:?} at {t}: {fd} vs {d}");
                let ls = g.log_slope(t.ln());
                assert!((ls - t * d / g.value(t)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let g = Germ::Tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)].into());
        assert_eq!(g.value(0.5), 0.5);
        assert_eq!(g.value(1.5), 2.0);
        assert_eq!(g.derivative(1.5), 2.0);
        assert_eq!(g.derivative(2.0), 2.0);
    }
}
