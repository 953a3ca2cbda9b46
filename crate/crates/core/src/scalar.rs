//! Scalar abstraction shared by every kernel.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real floating-point scalar usable by the dense kernels: `f32` or `f64`.
///
/// The associated tolerances are the structural thresholds the kernels use
/// to reject inputs (asymmetry, numerical rank loss). They scale with the
/// precision of the type.
pub trait Real:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Largest tolerated `|a(i,j) - a(j,i)|`, relative to `max(1, max|a|)`.
    const SYMMETRY_TOL: f64;
    /// `|R(j,j)|` below this fraction of `‖A‖_F` marks a rank-deficient column.
    const RANK_TOL: f64;

    /// Converts an `f64` literal or intermediate into this scalar type.
    fn lit(v: f64) -> Self;

    fn to_f64_lossy(self) -> f64;
}

impl Real for f64 {
    const SYMMETRY_TOL: f64 = 1e-10;
    const RANK_TOL: f64 = 1e-12;

    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const SYMMETRY_TOL: f64 = 1e-4;
    const RANK_TOL: f64 = 1e-6;

    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}
