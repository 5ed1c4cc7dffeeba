//! Finitely supported complex sequences, the Orlicz modular and the
//! Luxemburg norm.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{golden_max, solve_increasing};
use crate::orlicz::OrliczFunction;

const NORM_RTOL: f64 = 1e-14;
pub const DUAL_ORACLE_MAX_SUPPORT: usize = 8;

/// A complex sequence indexed from 1 with finitely many non-zero entries.
/// Only non-zero finite values are stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FiniteSequence {
    entries: BTreeMap<usize, Complex64>,
}

impl FiniteSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, Complex64)>>(entries: I) -> Result<Self> {
        let mut x = Self::new();
        for (n, v) in entries {
            x.set(n, v)?;
        }
        Ok(x)
    }

    /// Real entries at indices `1..=values.len()`.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_entries(values.iter().enumerate().map(|(i, &v)| (i + 1, Complex64::new(v, 0.0))))
    }

    /// The unit vector `e_n`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::from_entries([(n, Complex64::new(1.0, 0.0))])
    }

    /// `s_n = n^{-1/2} (e_1 + … + e_n)`, of unit ℓ₂ norm.
    pub fn flat(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("flat sequence needs n >= 1".into()));
        }
        let v = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(FiniteSequence { entries: (1..=n).map(|i| (i, v)).collect() })
    }

    pub fn set(&mut self, n: usize, v: Complex64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidArgument("sequence indices start at 1".into()));
        }
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite entry {v} at index {n}")));
        }
        if v == Complex64::new(0.0, 0.0) {
            self.entries.remove(&n);
        } else {
            self.entries.insert(n, v);
        }
        Ok(())
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.entries.get(&n).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.entries.iter().map(|(&n, &v)| (n, v))
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    fn from_map_lossy(entries: impl Iterator<Item = (usize, Complex64)>) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        FiniteSequence { entries: entries.filter(|&(_, v)| v != zero && v.re.is_finite() && v.im.is_finite()).collect() }
    }

    pub fn map<F: Fn(usize, Complex64) -> Complex64>(&self, f: F) -> Self {
        Self::from_map_lossy(self.iter().map(|(n, v)| (n, f(n, v))))
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        self.map(|_, v| lambda * v)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.map(|n, v| v * other.get(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let keys: std::collections::BTreeSet<usize> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        Self::from_map_lossy(keys.into_iter().map(|n| (n, self.get(n) + other.get(n))))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Real parts, as a real-valued sequence.
    pub fn re(&self) -> Self {
        self.map(|_, v| Complex64::new(v.re, 0.0))
    }

    /// Imaginary parts, as a real-valued sequence.
    pub fn im(&self) -> Self {
        self.map(|_, v| Complex64::new(v.im, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.entries.values().all(|v| v.im == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_norm();
        }
        let m = self.sup_norm();
        if m == 0.0 {
            return 0.0;
        }
        m * self.entries.values().map(|v| (v.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }

    /// Distinct moduli with their multiplicities, ascending.
    pub fn magnitude_groups(&self) -> Vec<(f64, usize)> {
        let mut mags: Vec<f64> = self.entries.values().map(|v| v.norm()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut out: Vec<(f64, usize)> = Vec::new();
        for m in mags {
            match out.last_mut() {
                Some((v, c)) if *v == m => *c += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }

    /// JSON array of `[index, re, im]` triples.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self.iter().map(|(n, v)| serde_json::json!([n, v.re, v.im])).collect();
        serde_json::Value::Array(rows).to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<(usize, f64, f64)> = serde_json::from_str(text)?;
        Self::from_entries(rows.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im))))
    }

    /// CSV with header `index,re,im` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,re,im\n");
        for (n, v) in self.iter() {
            writeln!(s, "{n},{:.16e},{:.16e}", v.re, v.im).unwrap();
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut x = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("index")) {
                continue;
            }
            let bad = || Error::Config { field: format!("line {}", i + 1), message: format!("expected index,re,im: `{line}`") };
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(bad());
            }
            let n: usize = cols[0].parse().map_err(|_| bad())?;
            let re: f64 = cols[1].parse().map_err(|_| bad())?;
            let im: f64 = cols[2].parse().map_err(|_| bad())?;
            x.set(n, Complex64::new(re, im))?;
        }
        Ok(x)
    }
}

/// `Σ_n φ(|x(n)| / ρ)`.
pub fn modular(phi: &OrliczFunction, x: &FiniteSequence, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain { what: "rho", value: rho, domain: "(0, inf)" });
    }
    let mut sum = 0.0;
    for (m, count) in x.magnitude_groups() {
        sum += count as f64 * phi.evaluate(m / rho)?;
    }
    Ok(sum)
}

fn log_sum_exp(terms: &[(f64, f64)]) -> (f64, f64) {
    // terms are (log value, weight); returns (log Σ e^l, Σ softmax·weight)
    let max = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return (max, f64::INFINITY);
    }
    let mut s = 0.0;
    let mut w = 0.0;
    for &(l, d) in terms {
        let e = (l - max).exp();
        s += e;
        w += e * d;
    }
    (max + s.ln(), w / s)
}

/// `‖x‖_φ = inf { ρ > 0 : Σ φ(|x(n)|/ρ) ≤ 1 }`.
///
/// Solved for `w = −ln ρ`, where the log of the modular is increasing with
/// derivative equal to the modular-weighted mean of the local exponents.
pub fn luxemburg_norm(phi: &OrliczFunction, x: &FiniteSequence) -> Result<f64> {
    if x.is_empty() {
        return Ok(0.0);
    }
    let groups: Vec<(f64, f64)> = x.magnitude_groups().into_iter().map(|(m, c)| (m.ln(), (c as f64).ln())).collect();
    let eval = |w: f64| {
        let terms: Vec<(f64, f64)> = groups
            .iter()
            .map(|&(lm, lc)| {
                let (l, d) = phi.log_evaluate_with_slope(lm + w);
                (lc + l, d)
            })
            .collect();
        log_sum_exp(&terms)
    };
    let start = -x.sup_norm().ln();
    let w = solve_increasing(eval, 0.0, start, f64::INFINITY, NORM_RTOL)?;
    Ok((-w).exp())
}

fn ratio(phi: &OrliczFunction, weights: &[f64], a: &[f64], support: &[usize]) -> f64 {
    let x = FiniteSequence::from_map_lossy(support.iter().zip(a).map(|(&n, &v)| (n, Complex64::new(v, 0.0))));
    if x.is_empty() {
        return 0.0;
    }
    match luxemburg_norm(phi, &x) {
        Ok(norm) if norm > 0.0 => weights.iter().zip(a).map(|(w, v)| w * v).sum::<f64>() / norm,
        _ => 0.0,
    }
}

/// Lower estimate of the Köthe dual norm `sup { Σ|y(n) x(n)| : ‖x‖_φ ≤ 1 }`.
///
/// The objective is the ratio `Σ|y|a / ‖a‖_φ` over `a ≥ 0`, which is
/// quasi-concave; the best of `ball_samples` random starts is polished by
/// coordinate-wise golden section in `ln a_k`.
pub fn dual_norm_oracle(phi: &OrliczFunction, y: &FiniteSequence, ball_samples: usize, seed: u64) -> Result<f64> {
    if y.support_size() > DUAL_ORACLE_MAX_SUPPORT {
        return Err(Error::InvalidArgument(format!(
            "dual norm oracle supports at most {DUAL_ORACLE_MAX_SUPPORT} entries, got {}",
            y.support_size()
        )));
    }
    if y.is_empty() {
        return Ok(0.0);
    }
    let support = y.support();
    let weights: Vec<f64> = y.iter().map(|(_, v)| v.norm()).collect();
    let k = support.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best_a = weights.clone();
    let mut best = ratio(phi, &weights, &best_a, &support);
    for _ in 0..ball_samples {
        let a: Vec<f64> = (0..k).map(|i| weights[i] * rng.gen_range(-6.0f64..6.0).exp()).collect();
        let r = ratio(phi, &weights, &a, &support);
        if r > best {
            best = r;
            best_a = a;
        }
    }

    for _sweep in 0..60 {
        let before = best;
        for i in 0..k {
            let centre = best_a[i].ln();
            let mut a = best_a.clone();
            let g = |u: f64| {
                let mut a = a.clone();
                a[i] = u.exp();
                ratio(phi, &weights, &a, &support)
            };
            let (u, r) = golden_max(g, centre - 8.0, centre + 8.0, 1e-10);
            if r > best {
                a[i] = u.exp();
                best = r;
                best_a = a;
            }
        }
        if best - before <= 1e-13 * best {
            break;
        }
    }
    Ok(best)
}
