//! Element-manipulation kernels: generation, transposition, reshaping,
//! power, cross product and sorting.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::RngStream;
use crate::scalar::Real;

/// `n × m` matrix of standard-normal draws divided by `scale`, filled in
/// column-major order. Consumes exactly `n·m` normal draws.
pub fn randn_matrix<T: Real>(
    rng: &mut RngStream,
    n: usize,
    m: usize,
    scale: f64,
) -> Result<DenseMatrix<T>> {
    if n == 0 || m == 0 {
        return Err(Error::invalid(format!("zero dimension {n}x{m}")));
    }
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::invalid(format!("scale must be finite and non-zero, got {scale}")));
    }
    let data = (0..n * m).map(|_| T::lit(rng.normal() / scale)).collect();
    DenseMatrix::from_col_major(n, m, data)
}

pub fn transpose<T: Real>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    a.transpose()
}

/// Element-by-element double loop through the bounds-checked accessors.
/// Same result as [`transpose`]; kept as the measurable anti-pattern.
pub fn transpose_naive<T: Real>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    let mut b = DenseMatrix::zeros(a.cols(), a.rows());
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            b[(i, j)] = a[(j, i)];
        }
    }
    b
}

pub fn reshape<T: Real>(a: DenseMatrix<T>, new_rows: usize, new_cols: usize) -> Result<DenseMatrix<T>> {
    a.reshape(new_rows, new_cols)
}

#[derive(Debug, Clone)]
pub struct CreateModifyOutput<T> {
    /// Shapes of the transposed, reshaped and re-transposed matrices.
    pub shapes: [(usize, usize); 3],
    pub result: DenseMatrix<T>,
}

/// Generate `n × n` normals / 10, transpose, reshape to `(n/2) × 2n`,
/// transpose back.
pub fn create_modify<T: Real>(rng: &mut RngStream, n: usize) -> Result<CreateModifyOutput<T>> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("create/modify needs an even size >= 2, got {n}")));
    }
    let a: DenseMatrix<T> = randn_matrix(rng, n, n, 10.0)?;
    let b = a.transpose();
    let s0 = b.shape();
    let b = b.reshape(n / 2, n * 2)?;
    let s1 = b.shape();
    let a = b.transpose();
    Ok(CreateModifyOutput {
        shapes: [s0, s1, a.shape()],
        result: a,
    })
}

/// Returns 0 on success, like the benchmark functions it mirrors.
pub fn create_modify_task(rng: &mut RngStream, n: usize) -> Result<i32> {
    create_modify::<f64>(rng, n).map(|_| 0)
}

pub fn elementwise_power<T: Real>(a: &DenseMatrix<T>, exponent: T) -> DenseMatrix<T> {
    a.map(|x| x.powf(exponent))
}

/// `n × n` matrix of `|N(0,1)| / 2` entries, each raised to `exponent`.
pub fn elementwise_power_matrix(rng: &mut RngStream, n: usize, exponent: f64) -> Result<DenseMatrix<f64>> {
    if n == 0 {
        return Err(Error::invalid("power task needs n >= 1"));
    }
    let base = randn_matrix::<f64>(rng, n, n, 1.0)?.map(|x| x.abs() / 2.0);
    Ok(elementwise_power(&base, exponent))
}

pub fn elementwise_power_task(rng: &mut RngStream, n: usize, exponent: f64) -> Result<i32> {
    elementwise_power_matrix(rng, n, exponent).map(|_| 0)
}

/// `aᵗ·a` from column dot products; the lower triangle is mirrored from the
/// upper, so the result is exactly symmetric.
pub fn crossprod<T: Real>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    let p = a.cols();
    let mut c = DenseMatrix::zeros(p, p);
    for j in 0..p {
        let cj = a.col(j);
        for i in 0..=j {
            let ci = a.col(i);
            let dot = ci.iter().zip(cj).fold(T::zero(), |s, (&x, &y)| s + x * y);
            c[(i, j)] = dot;
            c[(j, i)] = dot;
        }
    }
    c
}

/// Ascending sort; NaN anywhere is rejected.
pub fn sort_values<T: Real>(mut v: Vec<T>) -> Result<Vec<T>> {
    if let Some(pos) = v.iter().position(|x| x.is_nan()) {
        return Err(Error::invalid(format!("NaN at position {pos}")));
    }
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN filtered above"));
    Ok(v)
}
