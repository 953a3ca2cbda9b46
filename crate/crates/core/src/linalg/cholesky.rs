use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Lower-triangular `L` with `L·Lᵗ = a`. Left-looking, one column at a time.
pub fn cholesky<T: Real>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !a.is_square() {
        return Err(Error::invalid(format!("Cholesky needs a square matrix, got {:?}", a.shape())));
    }
    if !a.is_symmetric(T::lit(T::SYMMETRY_TOL)) {
        return Err(Error::invalid("Cholesky input is not symmetric"));
    }
    let n = a.rows();
    let mut l = a.clone();
    let data = l.as_mut_slice();
    for j in 0..n {
        let (done, rest) = data.split_at_mut(j * n);
        let col_j = &mut rest[..n];
        for col_k in done.chunks_exact(n) {
            let ljk = col_k[j];
            if ljk != T::zero() {
                for (x, &l) in col_j[j..].iter_mut().zip(&col_k[j..]) {
                    *x -= ljk * l;
                }
            }
        }
        let d = col_j[j];
        if !(d > T::zero()) {
            return Err(Error::NotPositiveDefinite { column: j });
        }
        let d = d.sqrt();
        col_j[j] = d;
        for x in &mut col_j[j + 1..] {
            *x /= d;
        }
        for x in &mut col_j[..j] {
            *x = T::zero();
        }
    }
    Ok(l)
}
