//! Bigraded Koszul-type complexes for a pair of m-primary monomial ideals,
//! their homology lengths, bivariate Hilbert polynomials and mixed
//! multiplicities, fiber-cone Hilbert coefficients, and checkers for the
//! identities that connect them.

pub mod complex;
pub mod error;
pub mod exec;
pub mod field;
pub mod filtration;
pub mod hilbert;
pub mod linalg;
pub mod ring;
pub mod sequence;
pub mod theorems;
pub mod util;
pub mod verdict;

pub use error::{Error, Result};
