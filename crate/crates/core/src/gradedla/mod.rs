//! Exact dense linear algebra over `F_p` and graded subspaces of a
//! polynomial ring, one echelonized matrix per degree.

mod graded;
mod mat;

pub use graded::{GradedBasis, GradedRing};
pub use mat::MatFp;
