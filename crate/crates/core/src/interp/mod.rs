//! Complex interpolation of finite families of Orlicz sequence spaces.

mod derivation;
mod disk;
mod family;
mod phi_z;

pub use derivation::{centralizer_defect, derivation, factorization_value, ArcIntegral, DerivationReport, Interpolation};
pub use disk::{harmonic_measure, herglotz, herglotz_prime, poisson_kernel, Arc, DiskPoint, MAX_RADIUS};
pub use family::{FiniteFamily, CLOSURE_TOL};
pub use phi_z::{
    concavity_probe, interpolated_function, interpolated_function_with_weights, interpolated_inverse,
    iz_quadrature_check, ConcavityReport, InterpolatedGerm, WeightedLogInverse,
};
