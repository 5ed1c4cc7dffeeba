pub mod quad;
pub mod roots;

pub use quad::{integrate, QuadOptions, QuadResult, QuadValue};
pub use roots::{golden_max, solve_increasing};
