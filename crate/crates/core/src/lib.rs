pub mod algebra;
pub mod algebroid;
pub mod conformal;
pub mod leibniz;
pub mod liealg;
pub mod linalg;
pub mod scalar;
pub mod va;

pub use linalg::{ExactMatrix, Subspace};
pub use scalar::ExactScalar;

/// Version tag carried by every emitted JSON document.
pub const SCHEMA_VERSION: u32 = 1;
