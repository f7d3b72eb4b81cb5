//! Learning with positively decomposable kernels on non-Euclidean spaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod geometry;
pub mod harmonic;
pub mod io;
pub mod kernels;
pub mod learners;
pub mod linalg;
pub mod quadrature;

pub use error::{KreinError, Result};
