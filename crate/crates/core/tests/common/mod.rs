#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use orlicz_interp::interp::{Arc, DiskPoint, FiniteFamily};
use orlicz_interp::orlicz::builtin_functions;
use orlicz_interp::sequence::FiniteSequence;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// 2 to 4 registry functions on a random partition of the circle.
pub fn random_family(rng: &mut ChaCha8Rng) -> FiniteFamily {
    let registry = builtin_functions();
    let k = rng.gen_range(2..=4);
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(0.2..TAU - 0.2)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut edges = vec![0.0];
    for c in cuts {
        if c - edges.last().unwrap() > 0.05 {
            edges.push(c);
        }
    }
    edges.push(TAU);
    let pieces = edges
        .windows(2)
        .map(|w| {
            let (_, spec) = &registry[rng.gen_range(0..registry.len())];
            (spec.build().unwrap(), Arc::new(w[0], w[1]).unwrap())
        })
        .collect();
    FiniteFamily::new(pieces).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, max_r: f64) -> DiskPoint {
    DiskPoint::new(Complex64::from_polar(rng.gen_range(0.0..max_r), rng.gen_range(0.0..TAU))).unwrap()
}

/// Complex entries with log-uniform moduli in `[1e-6, 1]`.
pub fn random_sequence(rng: &mut ChaCha8Rng, max_support: usize) -> FiniteSequence {
    let k = rng.gen_range(1..=max_support);
    let mut x = FiniteSequence::new();
    for _ in 0..k {
        let n = rng.gen_range(1..=4 * max_support);
        let m = 10f64.powf(rng.gen_range(-6.0..0.0));
        x.set(n, Complex64::from_polar(m, rng.gen_range(0.0..TAU))).unwrap();
    }
    x
}
