pub mod cli;
pub mod error;
pub mod example;
pub mod interp;
pub mod numeric;
pub mod orlicz;
pub mod sequence;

pub use error::{Error, Result};
