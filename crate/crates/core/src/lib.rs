//! Finite-field, q-polynomial and rank-metric code arithmetic, together with
//! the Extended Gabidulin Kronecker encryption schemes built on them.

pub mod clmul;
pub mod codes;
pub mod error;
pub mod galois;
pub mod gf2x;
pub mod linalg;
pub mod mrd;
pub mod qpoly;
pub mod ring;
pub mod sampling;
pub mod schemes;

pub use error::{DecodeFailure, Error, FailureReason, Result};
pub use galois::{Field, FieldElement};
