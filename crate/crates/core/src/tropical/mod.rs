//! The completed max-plus semiring and its matrices.

mod matrix;
mod scalar;

pub use matrix::TropicalMatrix;
pub use scalar::ExtendedTropical;
