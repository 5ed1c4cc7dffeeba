//! The three-space example: `t`, `5⁻² t² |ln t|⁴` and the `φ²` germ on the
//! thirds of the circle, with its witness sequences `A_n`, `B_n`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interp::{Arc, DiskPoint, FiniteFamily, Interpolation};
use crate::orlicz::{legendre_sup, FunctionSpec, Germ, OrliczFunction};
use crate::sequence::{luxemburg_norm, FiniteSequence};

pub const GAMMA_GRID: [f64; 8] = [-2.0, -1.0, -1.0 / 3.0, 0.0, 1.0 / 3.0, 0.5, 1.0, 2.0];

/// `A₀ = [0, 2π/3)`, `A₁ = [2π/3, 4π/3)`, `A₂ = [4π/3, 2π)` carrying `φ⁰, φ¹, φ²`.
pub fn three_space_family() -> Result<FiniteFamily> {
    let edges = [0.0, TAU / 3.0, 2.0 * TAU / 3.0, TAU];
    let specs = [FunctionSpec::Phi0, FunctionSpec::Phi1, FunctionSpec::Phi2];
    let pieces = specs
        .iter()
        .enumerate()
        .map(|(j, s)| Ok((s.build()?, Arc::new(edges[j], edges[j + 1])?)))
        .collect::<Result<Vec<_>>>()?;
    FiniteFamily::new(pieces)
}

/// `ln (φʲ)⁻¹(r)` for `j = 0, 1, 2`, from `ln r`.
fn log_inverses(family: &FiniteFamily, log_r: f64) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (slot, phi) in out.iter_mut().zip(family.functions()) {
        *slot = phi.log_inverse(log_r)?;
    }
    Ok(out)
}

/// `(A, B)` at `r`: `A = ln[(φ⁰)⁻¹(r)(φ²)⁻¹(r)/((φ¹)⁻¹(r))²]`, `B = ln[(φ²)⁻¹(r)/(φ⁰)⁻¹(r)]`.
pub fn witness_pair(family: &FiniteFamily, log_r: f64) -> Result<(f64, f64)> {
    let [l0, l1, l2] = log_inverses(family, log_r)?;
    Ok((l0 + l2 - 2.0 * l1, l2 - l0))
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRow {
    pub n: u64,
    pub a_n: f64,
    pub b_n: f64,
    /// largest pointwise gap between the computed `Ω₁(s_n)`, `Ω₂(s_n)` and
    /// `(√3/2π) A s_n`, `(3/2π) B s_n`
    pub omega_check: f64,
    /// the argument `φ_0(s_n(k)/‖s_n‖)` lies inside every germ
    pub within_germs: bool,
}

/// Witness at `s_n`.
///
/// At `s_n` every entry has modulus `‖s_n‖ φ_0⁻¹(1/n)`, so the factorization
/// map evaluates each `(φʲ)⁻¹` at `r = 1/n`; `A_n`, `B_n` are the closed
/// forms at that argument.
pub fn witness_row(it: &Interpolation, n: u64) -> Result<WitnessRow> {
    if n == 0 {
        return Err(Error::InvalidArgument("witness row needs n >= 1".into()));
    }
    let log_r = -(n as f64).ln();
    let (a_n, b_n) = witness_pair(it.family(), log_r)?;
    let s_n = FiniteSequence::flat(n as usize)?;
    let report = it.derivation(&s_n)?;
    let entry = 1.0 / (n as f64).sqrt();
    let want1 = 3f64.sqrt() / TAU * a_n * entry;
    let want2 = 3.0 / TAU * b_n * entry;
    let mut omega_check: f64 = 0.0;
    for k in 1..=n as usize {
        omega_check = omega_check.max((report.omega1.get(k) - Complex64::new(want1, 0.0)).norm());
        omega_check = omega_check.max((report.omega2.get(k) - Complex64::new(want2, 0.0)).norm());
    }
    Ok(WitnessRow { n, a_n, b_n, omega_check, within_germs: log_r <= it.family().t_witness().ln() })
}

pub fn witness_rows(ns: &[u64]) -> Result<Vec<WitnessRow>> {
    let it = Interpolation::new(&three_space_family()?, DiskPoint::origin())?;
    ns.iter().map(|&n| witness_row(&it, n)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichRow {
    pub t: f64,
    /// `ln t − ½ ln[(φ¹)⁻¹(t⁴/100) (φ²)⁻¹(t⁴/100)]`
    pub lower_margin: f64,
    /// `½ ln[(φ¹)⁻¹(t⁴) (φ²)⁻¹(t⁴)] − ln t`
    pub upper_margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
    pub lower_violations: usize,
    pub upper_violations: usize,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

/// `√((φ¹)⁻¹(t⁴/100)(φ²)⁻¹(t⁴/100)) ≤ t ≤ √((φ¹)⁻¹(t⁴)(φ²)⁻¹(t⁴))`, in logs.
pub fn sandwich_check(t_grid: &[f64]) -> Result<SandwichReport> {
    let family = three_space_family()?;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) {
            return Err(Error::Domain { what: "t", value: t, domain: "(0, inf)" });
        }
        let lt = t.ln();
        let [_, a1, a2] = log_inverses(&family, 4.0 * lt - 100f64.ln())?;
        let [_, b1, b2] = log_inverses(&family, 4.0 * lt)?;
        rows.push(SandwichRow { t, lower_margin: lt - 0.5 * (a1 + a2), upper_margin: 0.5 * (b1 + b2) - lt });
    }
    let lower_violations = rows.iter().filter(|r| !(r.lower_margin > 0.0)).count();
    let upper_violations = rows.iter().filter(|r| !(r.upper_margin > 0.0)).count();
    Ok(SandwichReport { rows, lower_violations, upper_violations })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportBand {
    pub support: usize,
    pub samples: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl SupportBand {
    pub fn width(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Ell2Report {
    pub bands: Vec<SupportBand>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// width of the band over all supports up to the largest, over the
    /// width at support 2
    pub width_growth: f64,
    /// the same comparison using only the vectors of the largest support
    pub per_support_width_growth: f64,
}

impl Ell2Report {
    /// The band containing every ratio widens by at most 4×.
    pub fn stable(&self) -> bool {
        self.width_growth <= 4.0
    }
}

/// `‖x‖_{φ_0} / ‖x‖₂` over random vectors on the support ladder
/// `2, 4, …, max_support`, entries uniform in `[−1, 1]`, trials split evenly.
pub fn ell2_equivalence_probe(trials: usize, max_support: usize, seed: u64) -> Result<Ell2Report> {
    if trials == 0 || max_support < 2 {
        return Err(Error::InvalidArgument("need trials >= 1 and max_support >= 2".into()));
    }
    let it = Interpolation::new(&three_space_family()?, DiskPoint::origin())?;
    let mut ladder = vec![];
    let mut k = 2;
    while k < max_support {
        ladder.push(k);
        k *= 2;
    }
    ladder.push(max_support);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bands = Vec::new();
    for (i, &support) in ladder.iter().enumerate() {
        let samples = trials / ladder.len() + usize::from(i < trials % ladder.len());
        let mut band = SupportBand { support, samples, min_ratio: f64::INFINITY, max_ratio: 0.0 };
        for _ in 0..samples {
            let values: Vec<f64> = (0..support).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = FiniteSequence::from_real(&values)?;
            if x.is_empty() {
                continue;
            }
            let ratio = luxemburg_norm(it.phi_z(), &x)? / x.lp_norm(2.0);
            band.min_ratio = band.min_ratio.min(ratio);
            band.max_ratio = band.max_ratio.max(ratio);
        }
        bands.push(band);
    }
    let populated: Vec<&SupportBand> = bands.iter().filter(|b| b.samples > 0).collect();
    let min_ratio = populated.iter().map(|b| b.min_ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = populated.iter().map(|b| b.max_ratio).fold(0.0, f64::max);
    let (width_growth, per_support_width_growth) = match (populated.first(), populated.last()) {
        (Some(a), Some(b)) => ((max_ratio / min_ratio) / a.width(), b.width() / a.width()),
        _ => (f64::NAN, f64::NAN),
    };
    Ok(Ell2Report { bands, min_ratio, max_ratio, width_growth, per_support_width_growth })
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaGrowth {
    pub gamma: f64,
    pub first: f64,
    pub max: f64,
    pub max_at_end: bool,
}

impl GammaGrowth {
    pub fn grows_by_one(&self) -> bool {
        self.max - self.first >= 1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    /// `(n, A_n, B_n)` with `r_n = 1/√n`
    pub rows: Vec<(f64, f64, f64)>,
    /// `(n, γ, |γ A_n − B_n|)`
    pub values: Vec<(f64, f64, f64)>,
    pub abs_a_strictly_increasing: bool,
    /// first grid index from which `|A_n|` increases strictly to the end
    pub abs_a_increasing_from: usize,
    pub gamma_growth: Vec<GammaGrowth>,
}

/// `|A_n|` and `|γ A_n − B_n|` at `r_n = 1/√n` over the grids. Evidence of
/// growth on a finite grid, not a proof of unboundedness.
pub fn divergence_report(n_grid: &[f64], gamma_grid: &[f64]) -> Result<DivergenceReport> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| !(w[0] < w[1])) || !(n_grid[0] >= 1.0) {
        return Err(Error::InvalidArgument("n grid must be increasing and start at n >= 1".into()));
    }
    let family = three_space_family()?;
    let rows: Vec<(f64, f64, f64)> = n_grid
        .iter()
        .map(|&n| {
            let (a, b) = witness_pair(&family, -0.5 * n.ln())?;
            Ok((n, a, b))
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::new();
    let mut gamma_growth = Vec::new();
    for &gamma in gamma_grid {
        let seq: Vec<f64> = rows.iter().map(|&(_, a, b)| (gamma * a - b).abs()).collect();
        for (&(n, _, _), &v) in rows.iter().zip(&seq) {
            values.push((n, gamma, v));
        }
        let max = seq.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        gamma_growth.push(GammaGrowth { gamma, first: seq[0], max, max_at_end: *seq.last().unwrap() == max });
    }
    let abs_a: Vec<f64> = rows.iter().map(|r| r.1.abs()).collect();
    let mut from = abs_a.len() - 1;
    while from > 0 && abs_a[from - 1] < abs_a[from] {
        from -= 1;
    }
    Ok(DivergenceReport { rows, values, abs_a_strictly_increasing: from == 0, abs_a_increasing_from: from, gamma_growth })
}

/// `e^{−1+√(1−s)} (s − (−1+√(1−s))²)` as printed.
pub fn psi2_closed_form(s: f64) -> f64 {
    let w = (1.0 - s).sqrt();
    (-1.0 + w).exp() * (s - (-1.0 + w) * (-1.0 + w))
}

/// `t |ln t|²`, the first function of the Young pair, on `(0, ∞)`.
pub fn psi1(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln() * t.ln()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Psi2Row {
    pub s: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub rel_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Psi2Report {
    pub rows: Vec<Psi2Row>,
    pub max_rel_err: f64,
    /// largest relative gap between `φ²(t)` and `5⁻² ψ²(t)²` on the grid
    pub identity_max_rel_err: f64,
}

/// Numerical Legendre transform of `ψ¹` against the closed form, and the
/// identity `φ² = 5⁻² (ψ²)²`.
pub fn psi2_closed_form_check(s_grid: &[f64]) -> Result<Psi2Report> {
    let mut rows = Vec::with_capacity(s_grid.len());
    let mut identity_max_rel_err: f64 = 0.0;
    for &s in s_grid {
        if !(s > 0.0 && s <= 0.1) {
            return Err(Error::Domain { what: "s", value: s, domain: "(0, 0.1]" });
        }
        let (numeric, _) = legendre_sup(psi1, s, f64::INFINITY)?;
        let closed_form = psi2_closed_form(s);
        let rel_err = (numeric - closed_form).abs() / closed_form.abs();
        rows.push(Psi2Row { s, numeric, closed_form, rel_err });
        let phi2 = Germ::Phi2.value(s);
        let from_psi2 = psi2_closed_form(s).powi(2) / 25.0;
        identity_max_rel_err = identity_max_rel_err.max((phi2 - from_psi2).abs() / phi2);
    }
    let max_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    Ok(Psi2Report { rows, max_rel_err, identity_max_rel_err })
}

#[derive(Clone, Debug, Serialize)]
pub struct YoungPairReport {
    /// `(t, (ψ¹)⁻¹(t)(ψ²)⁻¹(t)/t)`
    pub rows: Vec<(f64, f64)>,
    pub upper_holds: bool,
    pub lower_holds: bool,
}

/// `t/5 ≤ (ψ¹)⁻¹(t)(ψ²)⁻¹(t) ≤ 2t` on the grid.
pub fn young_pair_check(t_grid: &[f64]) -> Result<YoungPairReport> {
    let psi1 = FunctionSpec::Psi1.build_unvalidated()?;
    let psi2 = FunctionSpec::Psi2.build_unvalidated()?;
    let rows: Vec<(f64, f64)> = t_grid
        .iter()
        .map(|&t| Ok((t, (psi1.log_inverse(t.ln())? + psi2.log_inverse(t.ln())? - t.ln()).exp())))
        .collect::<Result<_>>()?;
    Ok(YoungPairReport {
        upper_holds: rows.iter().all(|r| r.1 <= 2.0),
        lower_holds: rows.iter().all(|r| r.1 >= 0.2),
        rows,
    })
}

/// Constant of the two-power derivation at the origin:
/// `Ω(x)(n) = κ x(n) ln(|x(n)|/‖x‖)` with `κ = (2i/π)(1/p₁ − 1/p₀) p_z`.
pub fn kalton_peck_constant(p0: f64, p1: f64) -> Complex64 {
    let pz = 1.0 / (0.5 / p0 + 0.5 / p1);
    Complex64::new(0.0, 2.0 / PI) * (1.0 / p1 - 1.0 / p0) * pz
}

pub fn witness_csv(rows: &[WitnessRow]) -> String {
    let mut s = String::from("n,A_n,B_n,omega_check\n");
    for r in rows {
        writeln!(s, "{},{:.16e},{:.16e},{:.16e}", r.n, r.a_n, r.b_n, r.omega_check).unwrap();
    }
    s
}

pub fn divergence_csv(report: &DivergenceReport) -> String {
    let mut s = String::from("n,gamma,value\n");
    let mut values = report.values.clone();
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
    for (n, g, v) in values {
        writeln!(s, "{:.16e},{:.16e},{:.16e}", n, g, v).unwrap();
    }
    s
}

pub fn sandwich_csv(report: &SandwichReport) -> String {
    let mut s = String::from("t,lower_margin,upper_margin\n");
    for r in &report.rows {
        writeln!(s, "{:.16e},{:.16e},{:.16e}", r.t, r.lower_margin, r.upper_margin).unwrap();
    }
    s
}

/// `n` points spaced evenly in `ln t` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `10^2, 10^3, …, 10^16`.
pub fn decade_grid(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 10f64.powi(k)).collect()
}

/// Unit-ball functions used by property checks: `φ⁰`, `φ¹`, `φ²`.
pub fn three_space_functions() -> Result<[OrliczFunction; 3]> {
    Ok([FunctionSpec::Phi0.build()?, FunctionSpec::Phi1.build()?, FunctionSpec::Phi2.build()?])
}
