//! Points of the disk, boundary arcs, the Poisson kernel, harmonic measure
//! and Herglotz integrals.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{integrate, QuadOptions};

pub const MAX_RADIUS: f64 = 1.0 - 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiskPoint {
    z: Complex64,
}

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > MAX_RADIUS {
            return Err(Error::Domain { what: "|z|", value: z.norm(), domain: "[0, 1 - 1e-9]" });
        }
        Ok(DiskPoint { z })
    }

    pub fn origin() -> Self {
        DiskPoint { z: Complex64::new(0.0, 0.0) }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn r(&self) -> f64 {
        self.z.norm()
    }

    pub fn theta(&self) -> f64 {
        self.z.arg().rem_euclid(TAU)
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        DiskPoint::new(z)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Complex64 {
        p.z
    }
}

/// The half-open arc `{ e^{it} : α ≤ t < β }` with `0 ≤ α < β ≤ 2π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Arc {
    alpha: f64,
    beta: f64,
}

impl Arc {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha < beta && beta <= TAU) {
            return Err(Error::InvalidArgument(format!("arc [{alpha}, {beta}) must satisfy 0 <= alpha < beta <= 2pi")));
        }
        Ok(Arc { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn length(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn contains(&self, t: f64) -> bool {
        let t = t.rem_euclid(TAU);
        t >= self.alpha && t < self.beta
    }
}

impl TryFrom<[f64; 2]> for Arc {
    type Error = Error;

    fn try_from(a: [f64; 2]) -> Result<Self> {
        Arc::new(a[0], a[1])
    }
}

impl From<Arc> for [f64; 2] {
    fn from(a: Arc) -> [f64; 2] {
        [a.alpha, a.beta]
    }
}

fn poisson_unchecked(r: f64, t: f64) -> f64 {
    // 1 - 2r cos t + r² = (1-r)² + 4r sin²(t/2), without cancellation near t = 0
    let s = (0.5 * t).sin();
    (1.0 - r) * (1.0 + r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s)
}

/// `P(r, t) = (1 − r²) / (1 − 2r cos t + r²)`.
pub fn poisson_kernel(r: f64, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain { what: "r", value: r, domain: "[0, 1)" });
    }
    if !t.is_finite() {
        return Err(Error::Domain { what: "t", value: t, domain: "finite reals" });
    }
    Ok(poisson_unchecked(r, t))
}

fn quad_opts() -> QuadOptions {
    QuadOptions { rel_tol: 1e-12, abs_tol: 1e-15, max_intervals: 4000 }
}

/// Angles inside `[alpha, beta]` congruent to `theta` mod 2π; the Poisson
/// peak sits there.
fn peak_breaks(theta: f64, alpha: f64, beta: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut t = theta - TAU * ((theta - alpha) / TAU).floor();
    while t < beta {
        v.push(t);
        t += TAU;
    }
    v
}

/// `(1/2π) ∫_α^β P(r, θ − t) dt` by adaptive quadrature.
pub fn harmonic_measure(z: DiskPoint, arc: Arc) -> Result<f64> {
    let (r, theta) = (z.r(), z.theta());
    if r == 0.0 {
        return Ok(arc.length() / TAU);
    }
    let breaks = peak_breaks(theta, arc.alpha, arc.beta);
    let res = integrate(|t| poisson_unchecked(r, theta - t), arc.alpha, arc.beta, &breaks, quad_opts())?;
    Ok((res.value / TAU).clamp(0.0, 1.0))
}

/// `ψ(z) = (1/2π) ∫_arc (e^{it} + z)/(e^{it} − z) dt`, the Herglotz
/// integral whose real part is the arc indicator on the circle.
pub fn herglotz(z: DiskPoint, arc: Arc) -> Result<Complex64> {
    let zz = z.z();
    let breaks = peak_breaks(z.theta(), arc.alpha, arc.beta);
    let f = |t: f64| {
        let w = Complex64::from_polar(1.0, t);
        (w + zz) / (w - zz)
    };
    let res = integrate(f, arc.alpha, arc.beta, &breaks, quad_opts())?;
    Ok(res.value / TAU)
}

/// `ψ'(z) = (i/π) [1/(e^{iβ} − z) − 1/(e^{iα} − z)]`.
pub fn herglotz_prime(z: DiskPoint, arc: Arc) -> Complex64 {
    let zz = z.z();
    let a = Complex64::from_polar(1.0, arc.alpha);
    let b = Complex64::from_polar(1.0, arc.beta);
    Complex64::new(0.0, 1.0 / PI) * ((b - zz).inv() - (a - zz).inv())
}
