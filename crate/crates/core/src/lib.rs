//! Exact computations with alternating tensors in `T^n_A R`.

pub mod error;
pub mod random;
pub mod ring;
pub mod tensor;
pub mod witness;
pub mod alternator;
pub mod span;
pub mod norm;
pub mod blowup;

pub use error::{Error, Result};
