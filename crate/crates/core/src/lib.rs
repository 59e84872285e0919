//! Max-plus linear algebra with residuation, and the Fréchet bounds of the
//! class of contingency tables with prescribed marginals.
//!
//! The upper bound is computed as the greatest subsolution of a max-plus
//! linear system through residuated division; the lower bound by a greedy
//! sweep over the cumulative array. Both are cross-checked against the
//! classical closed forms `min(α_i, β_j)` and `max(0, α_i + β_j − σ)`.

pub mod cumulative;
pub mod error;
pub mod frechet;
pub mod gen;
pub mod numeric;
pub mod tropical;
pub mod verify;

pub use cumulative::{Array2, ContingencyTable, CumulativeArray, CumulativeVector, MassVector};
pub use error::{Error, Result};
pub use frechet::{BoundsResult, FrechetInstance, SandwichReport};
pub use numeric::{NumericMode, Rational, Scalar, Tolerance};
pub use tropical::{ExtendedTropical, TropicalMatrix};
