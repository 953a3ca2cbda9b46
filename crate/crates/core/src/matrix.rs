//! Column-major dense storage.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense column-major matrix. Element `(i, j)` lives at `data[j * rows + i]`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!("zero dimension {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices, in reading order.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        if nrows == 0 || ncols == 0 {
            return Err(Error::invalid("empty row list"));
        }
        if rows.iter().any(|r| r.as_ref().len() != ncols) {
            return Err(Error::invalid("ragged rows"));
        }
        Ok(Self::from_fn(nrows, ncols, |i, j| rows[i].as_ref()[j]))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![T::one(); n])
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Flattened column-major data.
    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        (i < self.rows && j < self.cols).then(|| self.data[j * self.rows + i])
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).collect()
    }

    pub fn trace(&self) -> T {
        self.diagonal().into_iter().sum()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Cache-blocked out-of-place transpose. Each tile is written row by row
    /// of the output so stores stay contiguous.
    pub fn transpose(&self) -> Self {
        const TILE: usize = 64;
        let (r, c) = (self.rows, self.cols);
        let mut out = vec![T::zero(); r * c];
        let src = &self.data;
        for jb in (0..c).step_by(TILE) {
            let jend = (jb + TILE).min(c);
            for ib in (0..r).step_by(TILE) {
                let iend = (ib + TILE).min(r);
                for i in ib..iend {
                    // out is c x r, so column i of out holds row i of self
                    let dst = &mut out[i * c + jb..i * c + jend];
                    for (d, j) in dst.iter_mut().zip(jb..jend) {
                        *d = src[j * r + i];
                    }
                }
            }
        }
        Self {
            rows: c,
            cols: r,
            data: out,
        }
    }

    /// Reinterprets the column-major data under new dimensions.
    pub fn reshape(self, new_rows: usize, new_cols: usize) -> Result<Self> {
        if new_rows == 0 || new_cols == 0 || new_rows * new_cols != self.data.len() {
            return Err(Error::invalid(format!(
                "cannot reshape {}x{} into {new_rows}x{new_cols}",
                self.rows, self.cols
            )));
        }
        Ok(Self {
            rows: new_rows,
            cols: new_cols,
            data: self.data,
        })
    }

    /// `self · other`, accumulated column by column.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let bj = other.col(j);
            let cj = out.col_mut(j);
            for (k, &bkj) in bj.iter().enumerate() {
                if bkj == T::zero() {
                    continue;
                }
                let ak = &self.data[k * self.rows..(k + 1) * self.rows];
                for (c, &a) in cj.iter_mut().zip(ak) {
                    *c += a * bkj;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Elementwise difference; shapes must agree.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `‖self − other‖_F / ‖other‖_F` (absolute when `other` is zero).
    pub fn rel_frobenius_diff(&self, other: &Self) -> Result<T> {
        let diff = self.sub(other)?.frobenius_norm();
        let base = other.frobenius_norm();
        Ok(if base > T::zero() { diff / base } else { diff })
    }

    /// Symmetric to within `tol · max(1, max|a|)`.
    pub fn is_symmetric(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let bound = tol * self.max_abs().max(T::one());
        (0..self.cols).all(|j| (0..j).all(|i| (self[(i, j)] - self[(j, i)]).abs() <= bound))
    }

    /// Submatrix from selected columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        assert!(!cols.is_empty(), "empty column selection");
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for &j in cols {
            data.extend_from_slice(self.col(j));
        }
        Self {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::invalid(format!(
                "shape mismatch {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }
}

impl<T> AsRef<[T]> for DenseMatrix<T> {
    fn as_ref(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[j * self.rows + i]
    }
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<&T> = (0..self.cols).map(|j| &self.data[j * self.rows + i]).collect();
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Fixed-length complex sequence carried in and out of the FFT.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    values: Vec<Complex<T>>,
}

impl<T: Real> ComplexVector<T> {
    pub fn new(values: Vec<Complex<T>>) -> Self {
        Self { values }
    }

    pub fn from_real(re: &[T]) -> Self {
        Self {
            values: re.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_inner(self) -> Vec<Complex<T>> {
        self.values
    }

    /// `Σ |v_k|²`.
    pub fn energy(&self) -> T {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.len() != other.len() {
            return Err(Error::invalid("length mismatch"));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_major_offsets() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(m.as_slice()[j * 2 + i], m[(i, j)]);
            }
        }
        assert_eq!(m.get(2, 0), None);
    }

    #[test]
    fn constructor_errors() {
        assert!(DenseMatrix::<f64>::from_col_major(2, 2, vec![1.0; 3]).is_err());
        assert!(DenseMatrix::<f64>::from_col_major(0, 2, vec![]).is_err());
        assert!(DenseMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn transpose_rectangular_tiles() {
        let a = DenseMatrix::<f64>::from_fn(70, 33, |i, j| (i * 100 + j) as f64);
        let t = a.transpose();
        assert_eq!(t.shape(), (33, 70));
        for i in 0..70 {
            for j in 0..33 {
                assert_eq!(t[(j, i)], a[(i, j)]);
            }
        }
    }

    #[test]
    fn matmul_small() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[[5.0, 6.0], [7.0, 8.0]]).unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!(c, DenseMatrix::from_rows(&[[19.0, 22.0], [43.0, 50.0]]).unwrap());
        assert!(a.matmul(&DenseMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn symmetry_check_is_scaled() {
        let mut m = DenseMatrix::<f64>::from_rows(&[[1e6, 2.0], [2.0, 1.0]]).unwrap();
        assert!(m.is_symmetric(1e-10));
        m[(0, 1)] += 1e-5;
        assert!(m.is_symmetric(1e-10));
        m[(0, 1)] += 1e-3;
        assert!(!m.is_symmetric(1e-10));
    }

    #[test]
    fn works_in_single_precision() {
        let a = DenseMatrix::<f32>::identity(3);
        assert_eq!(a.matmul(&a).unwrap(), a);
        assert_eq!(a.trace(), 3.0f32);
    }
}
