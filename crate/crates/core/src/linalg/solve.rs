use crate::calc::randn_matrix;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::RngStream;
use crate::scalar::Real;

use super::lu::{inverse, lu_decompose};

/// `A·X = B` with `A` square. `x_true` is set when the system was planted.
#[derive(Debug, Clone)]
pub struct LinearSystem<T> {
    pub a: DenseMatrix<T>,
    pub b: DenseMatrix<T>,
    pub x_true: Option<DenseMatrix<T>>,
}

impl<T: Real> LinearSystem<T> {
    pub fn new(a: DenseMatrix<T>, b: DenseMatrix<T>) -> Result<Self> {
        let sys = Self { a, b, x_true: None };
        sys.validate()?;
        Ok(sys)
    }

    /// Random `A` (`n × n`) and `X` (`n × m`), then `B = A·X`.
    pub fn planted(rng: &mut RngStream, n: usize, m: usize) -> Result<Self> {
        let a = randn_matrix(rng, n, n, 1.0)?;
        let x = randn_matrix(rng, n, m, 1.0)?;
        let b = a.matmul(&x)?;
        Ok(Self { a, b, x_true: Some(x) })
    }

    pub fn order(&self) -> usize {
        self.a.rows()
    }

    fn validate(&self) -> Result<()> {
        if !self.a.is_square() {
            return Err(Error::invalid(format!("A must be square, got {:?}", self.a.shape())));
        }
        if self.b.rows() != self.a.rows() {
            return Err(Error::invalid(format!(
                "B has {} rows, A has {}",
                self.b.rows(),
                self.a.rows()
            )));
        }
        Ok(())
    }
}

/// Factor `A` once, substitute per column of `B`.
pub fn solve_smart<T: Real>(sys: &LinearSystem<T>) -> Result<DenseMatrix<T>> {
    sys.validate()?;
    lu_decompose(&sys.a)?.solve(&sys.b)
}

/// `A⁻¹·B` with the inverse formed explicitly.
pub fn solve_naive<T: Real>(sys: &LinearSystem<T>) -> Result<DenseMatrix<T>> {
    sys.validate()?;
    inverse(&sys.a)?.matmul(&sys.b)
}
