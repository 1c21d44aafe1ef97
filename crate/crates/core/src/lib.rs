//! Exact cohomology of nilpotent radicals of even parabolic subalgebras of
//! gl(m|n), their Euler generating functions, and the calculus of mixed
//! complexes and sl(1|1)-modules.

pub mod ce_cohomology;
pub mod characters;
pub mod error;
pub mod euler_series;
pub mod exact_linalg;
pub mod lie_superalgebra;
pub mod mixed_complexes;
pub mod registry;
pub mod root_data;
pub mod suite;

pub use error::{Error, Result};
