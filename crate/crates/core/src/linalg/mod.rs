//! Exact linear algebra over GF(p) and certified length computations.

pub mod length;
pub mod matrix;

pub use length::{
    colon_length, intersection_length, length_of_quotient, stable_quotient_length,
    CertifiedLength, Evidence, LengthOptions, TruncationCertificate,
};
pub use matrix::{rank_profile, Echelon, GfpMatrix, SparseRow};
