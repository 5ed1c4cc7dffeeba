//! Acceptance criteria 1 to 10. Each test prints one PASS/FAIL line before
//! asserting, so `cargo test --test acceptance -- --nocapture` gives a table.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use orlicz_interp::cli::random_defect_pair;
use orlicz_interp::example::{
    decade_grid, divergence_report, ell2_equivalence_probe, log_grid, three_space_family, psi2_closed_form_check,
    sandwich_check, witness_pair, GAMMA_GRID,
};
use orlicz_interp::interp::{
    concavity_probe, herglotz_prime, iz_quadrature_check, Arc, ArcIntegral, DiskPoint, FiniteFamily, Interpolation,
};
use orlicz_interp::orlicz::{builtin_functions, builtin_n_functions, FunctionSpec};
use orlicz_interp::sequence::{luxemburg_norm, modular, FiniteSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion:>2}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn criterion_01_herglotz_coefficients() {
    let s3 = 3f64.sqrt();
    let expected = [c(s3, -3.0) / TAU, c(-s3 / PI, 0.0), c(s3, 3.0) / TAU];
    let z = DiskPoint::origin();
    let mut worst: f64 = 0.0;
    for (j, want) in expected.iter().enumerate() {
        let arc = Arc::new(j as f64 * TAU / 3.0, (j + 1) as f64 * TAU / 3.0).unwrap();
        worst = worst.max((herglotz_prime(z, arc) - want).norm());
    }
    let ok = worst <= 1e-12;
    report(1, ok, &format!("max |error| {worst:.2e}, atol 1e-12"));
    assert!(ok);
}

#[test]
fn criterion_02_witness_reproduction() {
    let start = Instant::now();
    let family = three_space_family().unwrap();
    let it = Interpolation::new(&family, DiskPoint::origin()).unwrap();
    let mut worst: f64 = 0.0;
    for n in [100usize, 1_000, 10_000, 100_000, 1_000_000] {
        let s_n = FiniteSequence::flat(n).unwrap();
        let r = it.derivation(&s_n).unwrap();
        // every entry of s_n is mapped to r = φ_0(s_n(k)/‖s_n‖) = 1/n
        let (a, b) = witness_pair(&family, -(n as f64).ln()).unwrap();
        let entry = 1.0 / (n as f64).sqrt();
        let (want1, want2) = (3f64.sqrt() / TAU * a * entry, 3.0 / TAU * b * entry);
        for k in 1..=n {
            worst = worst.max((r.omega1.get(k) - c(want1, 0.0)).norm());
            worst = worst.max((r.omega2.get(k) - c(want2, 0.0)).norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-8;
    report(2, ok, &format!("max pointwise gap {worst:.2e}, atol 1e-8, {secs:.2}s"));
    assert!(ok);
}

#[test]
fn criterion_03_sandwich_inequalities() {
    let r = sandwich_check(&log_grid(1e-12, 1e-2, 50)).unwrap();
    let min_lower = r.rows.iter().map(|x| x.lower_margin).fold(f64::INFINITY, f64::min);
    let min_upper = r.rows.iter().map(|x| x.upper_margin).fold(f64::INFINITY, f64::min);
    let ok = r.holds();
    report(
        3,
        ok,
        &format!(
            "lower violated at {}/50 (min log margin {min_lower:.3}), upper violated at {}/50 (min log margin {min_upper:.3})",
            r.lower_violations, r.upper_violations
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_04_psi2_closed_form() {
    let grid: Vec<f64> = (1..=20).map(|k| 0.005 * k as f64).collect();
    let r = psi2_closed_form_check(&grid).unwrap();
    let ok = r.max_rel_err <= 1e-6 && r.identity_max_rel_err <= 1e-12;
    report(
        4,
        ok,
        &format!(
            "Legendre vs closed form max rel err {:.2e} (rtol 1e-6), identity max rel err {:.2e} (rtol 1e-12)",
            r.max_rel_err, r.identity_max_rel_err
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_05_divergence_evidence() {
    let r = divergence_report(&decade_grid(2, 16), &GAMMA_GRID).unwrap();
    let short: Vec<String> =
        r.gamma_growth.iter().filter(|g| !g.grows_by_one()).map(|g| format!("{:.3}", g.gamma)).collect();
    let ok = r.abs_a_strictly_increasing && short.is_empty();
    report(
        5,
        ok,
        &format!(
            "|A_n| strictly increasing: {} (increasing from grid index {}), gammas growing < 1: [{}]",
            r.abs_a_strictly_increasing,
            r.abs_a_increasing_from,
            short.join(" ")
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_06_ell2_equivalence() {
    let start = Instant::now();
    let r = ell2_equivalence_probe(1000, 256, 7).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = r.stable();
    report(
        6,
        ok,
        &format!(
            "ratios in [{:.4}, {:.4}], band growth {:.3} (limit 4), per-support width growth {:.3}, {secs:.1}s",
            r.min_ratio, r.max_ratio, r.width_growth, r.per_support_width_growth
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_07_closed_form_vs_integral_form() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x07);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let family = common::random_family(&mut rng);
        let z = common::random_point(&mut rng, 0.9);
        let x = common::random_sequence(&mut rng, 16);
        let it = Interpolation::new(&family, z).unwrap();
        let closed = it.derivation(&x).unwrap().omega;
        let integral = it.derivation_integral_form(&x, ArcIntegral::Antiderivative).unwrap();
        for n in x.support() {
            worst = worst.max((closed.get(n) - integral.get(n)).norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-9;
    report(7, ok, &format!("100 triples, max |gap| {worst:.2e}, atol 1e-9, {secs:.1}s"));
    assert!(ok);
}

#[test]
fn criterion_08_conjugate_sandwich() {
    let mut failures = Vec::new();
    for (name, spec) in builtin_n_functions() {
        let phi = spec.build().unwrap();
        let conj = phi.conjugate().unwrap();
        let top = phi.germ_range().min(conj.germ_range()).min(1.0);
        let mut worst_lower = f64::INFINITY;
        let mut worst_upper = f64::INFINITY;
        for t in log_grid(top * 1e-10, top, 40) {
            let product = phi.inverse(t).unwrap() * conj.inverse(t).unwrap();
            worst_lower = worst_lower.min((product - t) / t);
            worst_upper = worst_upper.min((2.0 * t - product) / t);
        }
        if !(worst_lower >= 1e-12 && worst_upper >= 1e-12) {
            failures.push(format!("{name} (min margins {worst_lower:.2e}, {worst_upper:.2e})"));
        }
    }
    let ok = failures.is_empty();
    report(8, ok, &format!("strict margin 1e-12 t; failing: [{}]", failures.join(", ")));
    assert!(ok);
}

#[test]
fn criterion_09_two_power_specialization() {
    let mut worst: f64 = 0.0;
    for (p0, p1) in [(1.0f64, 2.0f64), (2.0, 4.0)] {
        let power = |p| FunctionSpec::Power { p, scale: 1.0, t0: None }.build().unwrap();
        let family = FiniteFamily::equal_arcs(vec![power(p0), power(p1)]).unwrap();
        let it = Interpolation::new(&family, DiskPoint::origin()).unwrap();
        let x = FiniteSequence::from_entries([(1, c(0.5, 0.0)), (2, c(-1e-3, 0.2)), (4, c(2.0, 0.0)), (9, c(0.0, -0.07))])
            .unwrap();
        let omega = it.derivation(&x).unwrap().omega;
        // direct: half-circle Herglotz derivatives ∓2i/π, φ_j⁻¹(φ_z(a)) = a^{p_z/p_j}
        let pz = 2.0 / (1.0 / p0 + 1.0 / p1);
        let norm = x.iter().map(|(_, v)| v.norm().powf(pz)).sum::<f64>().powf(1.0 / pz);
        let primes = [c(0.0, -2.0 / PI), c(0.0, 2.0 / PI)];
        for (n, v) in x.iter() {
            let la = (v.norm() / norm).ln();
            let direct: Complex64 = v * (primes[0] * (pz / p0) * la + primes[1] * (pz / p1) * la);
            let stated = c(0.0, 2.0 / PI) * (1.0 / p1 - 1.0 / p0) * pz * v * la;
            assert!((direct - stated).norm() <= 1e-12 * stated.norm());
            worst = worst.max((omega.get(n) - direct).norm() / direct.norm());
        }
    }
    let ok = worst <= 1e-9;
    report(9, ok, &format!("(1,2) and (2,4), max rel err {worst:.2e}, rtol 1e-9"));
    assert!(ok);
}

#[test]
fn criterion_10_property_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x10);
    let mut rows: Vec<(&str, bool, String)> = Vec::new();

    // norm homogeneity, lattice monotonicity, modular at the norm
    let registry: Vec<_> = builtin_functions().into_iter().map(|(n, s)| (n, s.build().unwrap())).collect();
    let (mut homog, mut lattice, mut modular_gap) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let (_, phi) = &registry[rng.gen_range(0..registry.len())];
        let x = common::random_sequence(&mut rng, 12);
        let lam = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let nx = luxemburg_norm(phi, &x).unwrap();
        let nlx = luxemburg_norm(phi, &x.scale(lam)).unwrap();
        homog = homog.max((nlx - lam.norm() * nx).abs() / (lam.norm() * nx));
        let factors: Vec<f64> = x.support().iter().map(|_| rng.gen_range(0.0..1.0)).collect();
        let support = x.support();
        let shrink = x.map(|n, v| v * factors[support.binary_search(&n).unwrap()]);
        lattice = lattice.max(luxemburg_norm(phi, &shrink).unwrap() - nx);
        modular_gap = modular_gap.max((modular(phi, &x, nx).unwrap() - 1.0).abs());
    }
    rows.push(("norm homogeneity (rtol 1e-9)", homog <= 1e-9, format!("{homog:.2e}")));
    rows.push(("lattice monotonicity (tol 1e-12)", lattice <= 1e-12, format!("{lattice:.2e}")));
    rows.push(("modular at the norm (1 +- 1e-6)", modular_gap <= 1e-6, format!("{modular_gap:.2e}")));

    // harmonic measures sum to one, Herglotz derivatives to zero
    let (mut mu, mut psi) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let family = common::random_family(&mut rng);
        let z = common::random_point(&mut rng, 0.999);
        mu = mu.max((family.weights(z).unwrap().iter().sum::<f64>() - 1.0).abs());
        psi = psi.max(family.herglotz_primes(z).iter().sum::<Complex64>().norm());
    }
    rows.push(("sum of harmonic measures = 1 (atol 1e-10)", mu <= 1e-10, format!("{mu:.2e}")));
    rows.push(("sum of Herglotz derivatives = 0 (atol 1e-10)", psi <= 1e-10, format!("{psi:.2e}")));

    // I_z as a product against the Poisson integral
    let three_space = three_space_family().unwrap();
    let mut iz: f64 = 0.0;
    for (z, t) in [(c(0.3, 0.2), 1e-4), (c(0.0, 0.0), 1e-6), (c(-0.6, 0.1), 1e-3), (c(0.1, -0.8), 1e-9)] {
        let (product, quadrature) = iz_quadrature_check(&three_space, DiskPoint::new(z).unwrap(), t).unwrap();
        iz = iz.max((product - quadrature).abs() / product);
    }
    rows.push(("I_z product vs quadrature (rtol 1e-8)", iz <= 1e-8, format!("{iz:.2e}")));

    // concavity and strict increase of I_z
    let conc = concavity_probe(&three_space, DiskPoint::origin(), &log_grid(1e-12, 1e-2, 60)).unwrap();
    let conc_off = concavity_probe(&three_space, DiskPoint::new(c(0.4, -0.3)).unwrap(), &log_grid(1e-12, 1e-2, 60)).unwrap();
    rows.push((
        "I_z concave and increasing",
        conc.passed && conc_off.passed,
        format!("worst concavity {:.2e}", conc.worst_concavity.max(conc_off.worst_concavity)),
    ));

    // centralizer defect: unimodular u (bound 10, frozen), and |u| <= 1 for finiteness
    let it = Interpolation::new(&three_space, DiskPoint::origin()).unwrap();
    let (mut unimodular, mut general) = (0.0f64, 0.0f64);
    let mut trial_rng = ChaCha8Rng::seed_from_u64(0xdef);
    for _ in 0..1000 {
        let (x, u) = random_defect_pair(&mut trial_rng, 64, true).unwrap();
        unimodular = unimodular.max(it.centralizer_defect(&x, &u).unwrap());
    }
    for _ in 0..300 {
        let (x, u) = random_defect_pair(&mut trial_rng, 64, false).unwrap();
        general = general.max(it.centralizer_defect(&x, &u).unwrap());
    }
    rows.push(("centralizer defect, |u| = 1, 1000 trials (<= 10)", unimodular <= 10.0, format!("{unimodular:.2e}")));
    rows.push(("centralizer defect, |u| <= 1, 300 trials (finite, <= 10)", general.is_finite() && general <= 10.0, format!("{general:.2e}")));

    let secs = start.elapsed().as_secs_f64();
    for (name, ok, detail) in &rows {
        println!("  {} {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    let ok = rows.iter().all(|r| r.1);
    report(10, ok, &format!("{} invariants, {secs:.1}s", rows.len()));
    assert!(ok);
}
