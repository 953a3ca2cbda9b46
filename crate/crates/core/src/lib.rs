//! Dense linear-algebra kernels and the benchmark harness that times them.
//!
//! Kernels are generic over [`Real`] (`f32` or `f64`); the harness and the
//! task suite run in double precision through the aliases below.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balassa;
pub mod bench;
pub mod calc;
mod error;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod prog;
pub mod report;
pub mod rng;
mod scalar;
pub mod validate;

pub use error::{Error, Result};
pub use matrix::{ComplexVector, DenseMatrix};
pub use rng::RngStream;
pub use scalar::Real;

pub type Matrix = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type CVector = ComplexVector<f64>;
pub type Lu = linalg::LuFactors<f64>;
