use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Least-squares solution of `a·x ≈ b` by Householder QR.
///
/// `a` must be `m × n` with `m ≥ n` and full column rank. Every right-hand
/// side column of `b` is solved in the same pass.
pub fn least_squares<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::invalid(format!("underdetermined system {m}x{n}")));
    }
    if b.rows() != m {
        return Err(Error::invalid(format!("b has {} rows, a has {m}", b.rows())));
    }
    let threshold = T::lit(T::RANK_TOL) * a.frobenius_norm();
    let mut r = a.clone();
    let mut qtb = b.clone();
    let mut v = vec![T::zero(); m];

    for j in 0..n {
        let x = &r.col(j)[j..];
        let sigma = x.iter().map(|&t| t * t).sum::<T>().sqrt();
        if sigma <= threshold {
            return Err(Error::RankDeficient { column: j });
        }
        let alpha = if x[0] > T::zero() { -sigma } else { sigma };
        let v = &mut v[..m - j];
        v.copy_from_slice(x);
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|&t| t * t).sum();

        let reflect = |col: &mut [T]| {
            let dot: T = col.iter().zip(v.iter()).map(|(&c, &w)| c * w).sum();
            let f = (dot + dot) / vnorm2;
            for (c, &w) in col.iter_mut().zip(v.iter()) {
                *c -= f * w;
            }
        };
        for k in j + 1..n {
            reflect(&mut r.col_mut(k)[j..]);
        }
        for k in 0..qtb.cols() {
            reflect(&mut qtb.col_mut(k)[j..]);
        }
        let col = r.col_mut(j);
        col[j] = alpha;
        for t in &mut col[j + 1..] {
            *t = T::zero();
        }
    }

    let mut x = DenseMatrix::zeros(n, b.cols());
    for k in 0..b.cols() {
        let mut y = qtb.col(k)[..n].to_vec();
        for i in (0..n).rev() {
            let ri = r.col(i);
            y[i] /= ri[i];
            let yi = y[i];
            for (yy, &rr) in y[..i].iter_mut().zip(&ri[..i]) {
                *yy -= rr * yi;
            }
        }
        x.col_mut(k).copy_from_slice(&y);
    }
    Ok(x)
}
