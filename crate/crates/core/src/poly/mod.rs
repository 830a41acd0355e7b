//! Prime-field scalars, sparse multivariate polynomials, monomial
//! enumeration and the text grammar.

pub mod field;
pub mod grammar;
pub mod mono;
pub mod polynomial;

pub use field::{PrimeP, Scalar};
pub use grammar::{parse, render, VarLayout};
pub use mono::{monomials_of_degree, Mono, MonomialBasis};
pub use polynomial::Poly;
