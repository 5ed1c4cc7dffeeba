//! Orlicz functions: validated convex germs with evaluation, inversion and
//! conjugation.

mod conjugate;
mod function;
mod germ;
mod registry;
mod validate;

pub use conjugate::{conjugate, legendre_sup, ConjugateGerm};
pub use function::{Extension, OrliczFunction};
pub use germ::{Germ, GermFn};
pub use registry::{builtin_functions, builtin_n_functions, power_log_default_t0, FunctionSpec};
pub use validate::{delta2_probe, validate, Axiom, Delta2Report, ValidationReport};

impl OrliczFunction {
    pub fn conjugate(&self) -> crate::error::Result<OrliczFunction> {
        conjugate(self)
    }
}
