//! Exact degreewise computations for modular representations of the cyclic
//! group of prime order p over `F_p`: the group action, transfer and norms,
//! invariant rings and transfer ideals up to a degree bound, bounded
//! verification of regular sequences and depth, and monomial subalgebras of
//! `K[x, y]`.

pub mod depthlab;
pub mod error;
pub mod gradedla;
pub mod invariants;
pub mod monoalg;
pub mod poly;
pub mod rep;
pub mod report;
pub mod sample;

pub use error::{Error, Result};
pub use gradedla::{GradedBasis, GradedRing, MatFp};
pub use invariants::{HilbertData, InvariantRingSlice, TransferIdealSlice};
pub use poly::{Mono, Poly, PrimeP, Scalar};
pub use rep::{CpRep, DecompResult};
pub use report::CheckReport;
