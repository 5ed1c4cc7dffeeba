//! Factorization maps, the derivation `Ω_z` and its centralizer defect.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{integrate, QuadOptions};
use crate::orlicz::OrliczFunction;
use crate::sequence::{luxemburg_norm, FiniteSequence};

use super::disk::DiskPoint;
use super::family::FiniteFamily;
use super::phi_z::interpolated_function_with_weights;

/// A family evaluated at one point of the disk: weights, Herglotz
/// derivatives and `φ_z`, computed once and reused.
#[derive(Clone, Debug)]
pub struct Interpolation {
    family: FiniteFamily,
    z: DiskPoint,
    weights: Vec<f64>,
    primes: Vec<Complex64>,
    phi_z: OrliczFunction,
}

#[derive(Clone, Debug)]
pub struct DerivationReport {
    pub omega: FiniteSequence,
    /// `Re Ω(Re x) + i Re Ω(Im x)`
    pub omega1: FiniteSequence,
    /// `Im Ω(Re x) + i Im Ω(Im x)`
    pub omega2: FiniteSequence,
    /// `‖x‖` in `ℓ_{φ_z}`
    pub norm_used: f64,
    pub t_witness: f64,
    /// indices whose `φ_z(|x(n)|/‖x‖)` exceeds `t_witness`
    pub beyond_witness: Vec<usize>,
}

impl DerivationReport {
    /// Columns `n,re_omega,im_omega,re_omega1,re_omega2`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,re_omega,im_omega,re_omega1,re_omega2\n");
        for n in self.omega.support().into_iter().chain(self.omega1.support()).chain(self.omega2.support()).collect::<std::collections::BTreeSet<_>>() {
            let (o, o1, o2) = (self.omega.get(n), self.omega1.get(n), self.omega2.get(n));
            writeln!(s, "{n},{:.16e},{:.16e},{:.16e},{:.16e}", o.re, o.im, o1.re, o2.re).unwrap();
        }
        s
    }
}

/// How the integral form evaluates `∫_{A_j} e^{it}/(e^{it} − z)² dt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcIntegral {
    /// `[i/(e^{it} − z)]_α^β`
    Antiderivative,
    /// Adaptive quadrature of the whole boundary integral.
    Quadrature,
}

impl Interpolation {
    pub fn new(family: &FiniteFamily, z: DiskPoint) -> Result<Self> {
        let weights = family.weights(z)?;
        let primes = family.herglotz_primes(z);
        let phi_z = interpolated_function_with_weights(family, &weights)?;
        Ok(Interpolation { family: family.clone(), z, weights, primes, phi_z })
    }

    pub fn family(&self) -> &FiniteFamily {
        &self.family
    }

    pub fn z(&self) -> DiskPoint {
        self.z
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn herglotz_primes(&self) -> &[Complex64] {
        &self.primes
    }

    pub fn phi_z(&self) -> &OrliczFunction {
        &self.phi_z
    }

    pub fn norm(&self, x: &FiniteSequence) -> Result<f64> {
        luxemburg_norm(&self.phi_z, x)
    }

    /// `‖x‖·φ_j⁻¹(φ_z(|x(n)|/‖x‖))`, the factorization map at `w ∈ A_j` with `a = 1`.
    pub fn factorization_value(&self, x: &FiniteSequence, n: usize, j: usize) -> Result<f64> {
        let (phi_j, _) = self
            .family
            .pieces()
            .get(j)
            .ok_or_else(|| Error::InvalidArgument(format!("arc index {j} out of range")))?;
        if x.is_empty() {
            return Err(Error::InvalidArgument("factorization of the zero sequence".into()));
        }
        let m = x.get(n).norm();
        if m == 0.0 {
            return Ok(0.0);
        }
        let norm = self.norm(x)?;
        let lphi = self.phi_z.log_evaluate(m.ln() - norm.ln());
        Ok((norm.ln() + phi_j.log_inverse(lphi)?).exp())
    }

    /// `Ω_z(x)` without the split; the zero sequence maps to zero.
    fn omega_raw(&self, x: &FiniteSequence) -> Result<(FiniteSequence, f64, Vec<usize>)> {
        if x.is_empty() {
            return Ok((FiniteSequence::new(), 0.0, Vec::new()));
        }
        let norm = self.norm(x)?;
        let log_norm = norm.ln();
        let t_witness = self.family.t_witness();
        let mut coeff: BTreeMap<u64, (Complex64, bool)> = BTreeMap::new();
        for (m, _) in x.magnitude_groups() {
            let lphi = self.phi_z.log_evaluate(m.ln() - log_norm);
            let mut c = Complex64::new(0.0, 0.0);
            for ((phi_j, _), p) in self.family.pieces().iter().zip(&self.primes) {
                c += p * phi_j.log_inverse(lphi)?;
            }
            coeff.insert(m.to_bits(), (c, lphi > t_witness.ln()));
        }
        let beyond = x.iter().filter(|(_, v)| coeff[&v.norm().to_bits()].1).map(|(n, _)| n).collect();
        let omega = x.map(|_, v| v * coeff[&v.norm().to_bits()].0);
        Ok((omega, norm, beyond))
    }

    /// `Ω_z(x)(n) = x(n) Σ_j ψ_j'(z) ln φ_j⁻¹(φ_z(|x(n)|/‖x‖))`.
    pub fn derivation(&self, x: &FiniteSequence) -> Result<DerivationReport> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("derivation of the zero sequence".into()));
        }
        let (omega, norm_used, beyond_witness) = self.omega_raw(x)?;
        let (re_part, im_part) = if x.is_real() {
            (omega.clone(), FiniteSequence::new())
        } else {
            (self.omega_raw(&x.re())?.0, self.omega_raw(&x.im())?.0)
        };
        let i = Complex64::new(0.0, 1.0);
        let omega1 = re_part.re().add(&im_part.re().scale(i));
        let omega2 = re_part.im().add(&im_part.im().scale(i));
        Ok(DerivationReport { omega, omega1, omega2, norm_used, t_witness: self.family.t_witness(), beyond_witness })
    }

    /// `Ω_z(x)(n) = (x(n)/π) ∫ e^{it}/(e^{it} − z)² ln B_z(x)(n, e^{it}) dt`
    /// with the piecewise-constant `ln B = ln‖x‖ + ln φ_j⁻¹(φ_z(|x(n)|/‖x‖))`.
    pub fn derivation_integral_form(&self, x: &FiniteSequence, method: ArcIntegral) -> Result<FiniteSequence> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("derivation of the zero sequence".into()));
        }
        let norm = self.norm(x)?;
        let zz = self.z.z();
        let arcs: Vec<_> = self.family.arcs().collect();
        let kernel_integrals: Vec<Complex64> = match method {
            ArcIntegral::Antiderivative => arcs
                .iter()
                .map(|a| {
                    let anti = |t: f64| Complex64::new(0.0, 1.0) / (Complex64::from_polar(1.0, t) - zz);
                    anti(a.beta()) - anti(a.alpha())
                })
                .collect(),
            ArcIntegral::Quadrature => Vec::new(),
        };
        let mut cache: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (m, _) in x.magnitude_groups() {
            let lphi = self.phi_z.log_evaluate(m.ln() - norm.ln());
            let log_b: Vec<f64> = self
                .family
                .functions()
                .map(|f| Ok(norm.ln() + f.log_inverse(lphi)?))
                .collect::<Result<_>>()?;
            let integral = match method {
                ArcIntegral::Antiderivative => kernel_integrals.iter().zip(&log_b).map(|(k, b)| k * b).sum(),
                ArcIntegral::Quadrature => {
                    let f = |t: f64| {
                        let j = arcs.iter().position(|a| a.contains(t)).unwrap_or(arcs.len() - 1);
                        let w = Complex64::from_polar(1.0, t);
                        w / ((w - zz) * (w - zz)) * log_b[j]
                    };
                    let mut breaks: Vec<f64> = arcs.iter().map(|a| a.alpha()).collect();
                    breaks.push(self.z.theta());
                    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-13, max_intervals: 8000 };
                    integrate(f, 0.0, TAU, &breaks, opts)?.value
                }
            };
            cache.insert(m.to_bits(), integral / PI);
        }
        Ok(x.map(|_, v| v * cache[&v.norm().to_bits()]))
    }

    /// `‖Ω(ux) − uΩ(x)‖ / (‖u‖_∞ ‖x‖)`, both norms in `ℓ_{φ_z}`.
    pub fn centralizer_defect(&self, x: &FiniteSequence, u: &FiniteSequence) -> Result<f64> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("centralizer defect at the zero sequence".into()));
        }
        let u_sup = u.sup_norm();
        if u_sup == 0.0 {
            return Ok(0.0);
        }
        let (omega_x, norm_x, _) = self.omega_raw(x)?;
        let (omega_ux, _, _) = self.omega_raw(&u.mul(x))?;
        let diff = omega_ux.sub(&u.mul(&omega_x));
        Ok(self.norm(&diff)? / (u_sup * norm_x))
    }
}

pub fn factorization_value(family: &FiniteFamily, z: DiskPoint, x: &FiniteSequence, n: usize, j: usize) -> Result<f64> {
    Interpolation::new(family, z)?.factorization_value(x, n, j)
}

pub fn derivation(family: &FiniteFamily, z: DiskPoint, x: &FiniteSequence) -> Result<DerivationReport> {
    Interpolation::new(family, z)?.derivation(x)
}

pub fn centralizer_defect(family: &FiniteFamily, z: DiskPoint, x: &FiniteSequence, u: &FiniteSequence) -> Result<f64> {
    Interpolation::new(family, z)?.centralizer_defect(x, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::FunctionSpec;

    fn power(p: f64) -> OrliczFunction {
        FunctionSpec::Power { p, scale: 1.0, t0: None }.build().unwrap()
    }

    fn three_space() -> FiniteFamily {
        FiniteFamily::equal_arcs(vec![
            FunctionSpec::Phi0.build().unwrap(),
            FunctionSpec::Phi1.build().unwrap(),
            FunctionSpec::Phi2.build().unwrap(),
        ])
        .unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> FiniteSequence {
        FiniteSequence::from_entries([(1, c(0.5, 0.0)), (2, c(-1e-3, 0.0)), (5, c(2.0, 0.0)), (6, c(0.5, 0.0))]).unwrap()
    }

    #[test]
    fn constant_family_has_zero_derivation() {
        let phi = FunctionSpec::Phi1.build().unwrap();
        let f = FiniteFamily::equal_arcs(vec![phi.clone(), phi.clone(), phi]).unwrap();
        let it = Interpolation::new(&f, DiskPoint::new(c(0.2, -0.6)).unwrap()).unwrap();
        let r = it.derivation(&sample()).unwrap();
        for (_, v) in r.omega.iter() {
            assert!(v.norm() < 1e-10);
        }
    }

    #[test]
    fn constant_family_factorization_is_identity() {
        let phi = FunctionSpec::Phi2.build().unwrap();
        let f = FiniteFamily::equal_arcs(vec![phi.clone(), phi]).unwrap();
        let it = Interpolation::new(&f, DiskPoint::new(c(0.5, 0.1)).unwrap()).unwrap();
        let x = sample();
        for n in x.support() {
            for j in 0..2 {
                let v = it.factorization_value(&x, n, j).unwrap();
                assert!((v - x.get(n).norm()).abs() <= 1e-10 * x.get(n).norm());
            }
        }
    }

    #[test]
    fn factorization_on_three_space_family() {
        let f = three_space();
        let it = Interpolation::new(&f, DiskPoint::origin()).unwrap();
        let s4 = FiniteSequence::flat(4).unwrap();
        let norm = it.norm(&s4).unwrap();
        for (j, phi_j) in f.functions().enumerate() {
            let oracle = norm * phi_j.inverse(it.phi_z().evaluate(0.5 / norm).unwrap()).unwrap();
            for n in 1..=4 {
                let v = it.factorization_value(&s4, n, j).unwrap();
                assert!((v - oracle).abs() <= 1e-10 * oracle);
            }
            let lam = 3.7;
            let scaled = it.factorization_value(&s4.scale(c(-lam, 0.0)), 2, j).unwrap();
            assert!((scaled - lam * oracle).abs() <= 1e-10 * lam * oracle);
        }
    }

    #[test]
    fn kalton_peck_for_two_powers() {
        let (p0, p1) = (2.0, 4.0);
        let f = FiniteFamily::equal_arcs(vec![power(p0), power(p1)]).unwrap();
        let it = Interpolation::new(&f, DiskPoint::origin()).unwrap();
        let x = sample();
        let r = it.derivation(&x).unwrap();
        let pz = 1.0 / (0.5 / p0 + 0.5 / p1);
        let norm = x.lp_norm(pz);
        assert!((r.norm_used - norm).abs() < 1e-12 * norm);
        for (n, v) in x.iter() {
            let expected = c(0.0, 2.0 / PI) * (1.0 / p1 - 1.0 / p0) * pz * v * (v.norm() / norm).ln();
            assert!((r.omega.get(n) - expected).norm() <= 1e-9 * expected.norm(), "n={n}");
        }
    }

    #[test]
    fn split_recombines_on_real_inputs() {
        let it = Interpolation::new(&three_space(), DiskPoint::new(c(0.1, 0.3)).unwrap()).unwrap();
        let r = it.derivation(&sample()).unwrap();
        for n in sample().support() {
            let recombined = r.omega1.get(n) + Complex64::new(0.0, 1.0) * r.omega2.get(n);
            assert!((recombined - r.omega.get(n)).norm() < 1e-10);
        }
    }

    #[test]
    fn complex_split_uses_real_and_imaginary_parts() {
        let it = Interpolation::new(&three_space(), DiskPoint::origin()).unwrap();
        let x = FiniteSequence::from_entries([(1, c(0.3, -0.4)), (2, c(0.0, 1.0)), (3, c(2.0, 0.0))]).unwrap();
        let r = it.derivation(&x).unwrap();
        let re = it.derivation(&x.re()).unwrap().omega;
        let im = it.derivation(&x.im()).unwrap().omega;
        for n in 1..=3 {
            assert!((r.omega1.get(n) - c(re.get(n).re, im.get(n).re)).norm() < 1e-15);
            assert!((r.omega2.get(n) - c(re.get(n).im, im.get(n).im)).norm() < 1e-15);
        }
    }

    #[test]
    fn complex_homogeneity() {
        let it = Interpolation::new(&three_space(), DiskPoint::new(c(-0.3, 0.3)).unwrap()).unwrap();
        let x = sample();
        let lam = c(-0.6, 2.2);
        let a = it.derivation(&x.scale(lam)).unwrap().omega;
        let b = it.derivation(&x).unwrap().omega.scale(lam);
        for n in x.support() {
            assert!((a.get(n) - b.get(n)).norm() <= 1e-9 * b.get(n).norm());
        }
    }

    #[test]
    fn integral_forms_agree() {
        let it = Interpolation::new(&three_space(), DiskPoint::new(c(0.35, -0.2)).unwrap()).unwrap();
        let x = sample();
        let closed = it.derivation(&x).unwrap().omega;
        let anti = it.derivation_integral_form(&x, ArcIntegral::Antiderivative).unwrap();
        let quad = it.derivation_integral_form(&x, ArcIntegral::Quadrature).unwrap();
        for n in x.support() {
            assert!((closed.get(n) - anti.get(n)).norm() < 1e-9);
            assert!((closed.get(n) - quad.get(n)).norm() < 1e-9);
        }
    }

    #[test]
    fn defect_vanishes_for_constant_multipliers() {
        let it = Interpolation::new(&three_space(), DiskPoint::origin()).unwrap();
        let x = sample();
        let one = x.map(|_, _| c(1.0, 0.0));
        assert!(it.centralizer_defect(&x, &one).unwrap() < 1e-10);
        let lam = x.map(|_, _| c(0.6, -0.8));
        assert!(it.centralizer_defect(&x, &lam).unwrap() < 1e-10);
    }

    #[test]
    fn zero_input_is_rejected() {
        let it = Interpolation::new(&three_space(), DiskPoint::origin()).unwrap();
        assert!(it.derivation(&FiniteSequence::new()).is_err());
        assert!(it.centralizer_defect(&FiniteSequence::new(), &sample()).is_err());
    }

    #[test]
    fn csv_has_documented_header() {
        let it = Interpolation::new(&three_space(), DiskPoint::origin()).unwrap();
        let csv = it.derivation(&FiniteSequence::flat(3).unwrap()).unwrap().to_csv();
        assert!(csv.starts_with("n,re_omega,im_omega,re_omega1,re_omega2\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
