//! Decomposition and transform kernels.

mod cholesky;
mod eigen;
mod fft;
mod lu;
mod qr;
mod solve;

pub use cholesky::cholesky;
pub use eigen::{eigen_sym, eigenvalues_sym, SymmetricEigen};
pub use fft::{fft, fft_in_place, power_of_two_floor};
pub use lu::{determinant, inverse, lu_decompose, LuFactors};
pub use qr::least_squares;
pub use solve::{solve_naive, solve_smart, LinearSystem};
