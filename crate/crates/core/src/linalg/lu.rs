use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

const RHS_GROUP: usize = 16;

/// Partial-pivoting LU factors packed in one matrix: strict lower triangle
/// holds `L` (unit diagonal implied), upper triangle holds `U`.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: DenseMatrix<T>,
    /// `perm[i]` is the row of the original matrix that ended up in row `i`.
    perm: Vec<usize>,
    sign: i8,
}

impl<T: Real> LuFactors<T> {
    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    pub fn packed(&self) -> &DenseMatrix<T> {
        &self.lu
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Parity of the row permutation, `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn lower(&self) -> DenseMatrix<T> {
        let n = self.order();
        DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu[(i, j)],
            std::cmp::Ordering::Equal => T::one(),
            std::cmp::Ordering::Less => T::zero(),
        })
    }

    pub fn upper(&self) -> DenseMatrix<T> {
        let n = self.order();
        DenseMatrix::from_fn(n, n, |i, j| if i <= j { self.lu[(i, j)] } else { T::zero() })
    }

    /// `P·a`: rows of `a` reordered by the pivot sequence.
    pub fn permute_rows(&self, a: &DenseMatrix<T>) -> DenseMatrix<T> {
        DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(self.perm[i], j)])
    }

    pub fn determinant(&self) -> T {
        let prod = self.lu.diagonal().into_iter().fold(T::one(), |p, d| p * d);
        if self.sign < 0 {
            -prod
        } else {
            prod
        }
    }

    /// `max|U(k,k)| / min|U(k,k)|`, a cheap stand-in for the condition number.
    pub fn condition_estimate(&self) -> T {
        let diag = self.lu.diagonal();
        let max = diag.iter().fold(T::zero(), |m, d| m.max(d.abs()));
        let min = diag.iter().fold(T::infinity(), |m, d| m.min(d.abs()));
        max / min
    }

    /// Solves `A·x = b` in place for one right-hand side.
    pub fn solve_vec_in_place(&self, b: &mut [T]) {
        let n = self.order();
        assert_eq!(b.len(), n, "right-hand side length");
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        // forward: unit lower triangle, column oriented
        for k in 0..n {
            let yk = y[k];
            if yk != T::zero() {
                let lk = &self.lu.col(k)[k + 1..];
                for (yi, &l) in y[k + 1..].iter_mut().zip(lk) {
                    *yi -= l * yk;
                }
            }
        }
        // backward: upper triangle
        for k in (0..n).rev() {
            let uk = self.lu.col(k);
            y[k] /= uk[k];
            let yk = y[k];
            if yk != T::zero() {
                for (yi, &u) in y[..k].iter_mut().zip(&uk[..k]) {
                    *yi -= u * yk;
                }
            }
        }
        b.copy_from_slice(&y);
    }

    /// Solves `A·X = B`. Right-hand sides are substituted in groups so each
    /// factor column is loaded once per group rather than once per column.
    pub fn solve(&self, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        if b.rows() != self.order() {
            return Err(Error::invalid(format!(
                "right-hand side has {} rows, system has {}",
                b.rows(),
                self.order()
            )));
        }
        let n = self.order();
        let mut x = DenseMatrix::from_fn(n, b.cols(), |i, j| b[(self.perm[i], j)]);
        for group in x.as_mut_slice().chunks_mut(RHS_GROUP * n) {
            self.substitute_group(group);
        }
        Ok(x)
    }

    /// Forward then backward substitution on already-permuted columns.
    fn substitute_group(&self, group: &mut [T]) {
        let n = self.order();
        for k in 0..n {
            let lk = &self.lu.col(k)[k + 1..];
            for y in group.chunks_exact_mut(n) {
                let yk = y[k];
                if yk != T::zero() {
                    for (yi, &l) in y[k + 1..].iter_mut().zip(lk) {
                        *yi -= l * yk;
                    }
                }
            }
        }
        for k in (0..n).rev() {
            let uk = self.lu.col(k);
            for y in group.chunks_exact_mut(n) {
                y[k] /= uk[k];
                let yk = y[k];
                if yk != T::zero() {
                    for (yi, &u) in y[..k].iter_mut().zip(&uk[..k]) {
                        *yi -= u * yk;
                    }
                }
            }
        }
    }

    pub fn inverse(&self) -> DenseMatrix<T> {
        self.solve(&DenseMatrix::identity(self.order()))
            .expect("identity has matching order")
    }
}

const PANEL: usize = 48;

/// Partial-pivoting LU, blocked by column panels. Each panel is factored
/// right-looking; the trailing columns then receive all of the panel's
/// updates one column at a time, so a trailing column stays in cache while
/// the panel streams past it.
pub fn lu_decompose<T: Real>(a: &DenseMatrix<T>) -> Result<LuFactors<T>> {
    if !a.is_square() {
        return Err(Error::invalid(format!("LU needs a square matrix, got {:?}", a.shape())));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1i8;
    let data = lu.as_mut_slice();

    for k0 in (0..n).step_by(PANEL) {
        let k1 = (k0 + PANEL).min(n);
        for k in k0..k1 {
            let col_k = &data[k * n..(k + 1) * n];
            let (mut p, mut best) = (k, col_k[k].abs());
            for (i, v) in col_k.iter().enumerate().skip(k + 1) {
                if v.abs() > best {
                    best = v.abs();
                    p = i;
                }
            }
            if best == T::zero() || best.is_nan() {
                return Err(Error::Singular { column: k });
            }
            if p != k {
                for j in 0..n {
                    data.swap(j * n + k, j * n + p);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let (left, right) = data.split_at_mut((k + 1) * n);
            let col_k = &mut left[k * n..];
            let pivot = col_k[k];
            for l in &mut col_k[k + 1..] {
                *l /= pivot;
            }
            let lk = &col_k[k + 1..];
            for col_j in right.chunks_exact_mut(n).take(k1 - k - 1) {
                eliminate(col_j, lk, k);
            }
        }

        let (done, trailing) = data.split_at_mut(k1 * n);
        let panel = &done[k0 * n..];
        for col_j in trailing.chunks_exact_mut(n) {
            for (k, col_k) in (k0..k1).zip(panel.chunks_exact(n)) {
                eliminate(col_j, &col_k[k + 1..], k);
            }
        }
    }
    Ok(LuFactors { lu, perm, sign })
}

/// `col[k+1..] -= l · col[k]`.
#[inline]
fn eliminate<T: Real>(col: &mut [T], l: &[T], k: usize) {
    let akj = col[k];
    if akj != T::zero() {
        for (x, &lv) in col[k + 1..].iter_mut().zip(l) {
            *x -= lv * akj;
        }
    }
}

/// `sign · Π U(k,k)`; an exactly singular matrix gives zero.
pub fn determinant<T: Real>(a: &DenseMatrix<T>) -> Result<T> {
    match lu_decompose(a) {
        Ok(f) => Ok(f.determinant()),
        Err(Error::Singular { .. }) => Ok(T::zero()),
        Err(e) => Err(e),
    }
}

pub fn inverse<T: Real>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    Ok(lu_decompose(a)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calc::randn_matrix;
    use crate::oracle;
    use crate::rng::RngStream;

    fn random(seed: u64, n: usize) -> DenseMatrix<f64> {
        randn_matrix(&mut RngStream::new(seed), n, n, 1.0).unwrap()
    }

    #[test]
    fn identity_factors_trivially() {
        let f = lu_decompose(&DenseMatrix::<f64>::identity(4)).unwrap();
        assert_eq!(f.lower(), DenseMatrix::identity(4));
        assert_eq!(f.upper(), DenseMatrix::identity(4));
        assert_eq!(f.sign(), 1);
    }

    #[test]
    fn swap_matrix_has_odd_parity() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let f = lu_decompose(&a).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.permutation(), &[1, 0]);
        assert_eq!(f.determinant(), -1.0);
    }

    #[test]
    fn reconstruction_seed_3() {
        let a = random(3, 50);
        let f = lu_decompose(&a).unwrap();
        let pa = f.permute_rows(&a);
        let lu = f.lower().matmul(&f.upper()).unwrap();
        assert!(lu.rel_frobenius_diff(&pa).unwrap() <= 1e-10);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            lu_decompose(&DenseMatrix::<f64>::zeros(2, 3)),
            Err(Error::InvalidArgument(_))
        ));
        let singular = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(lu_decompose(&singular), Err(Error::Singular { column: 1 })));
        assert!(matches!(inverse(&singular), Err(Error::Singular { .. })));
        assert_eq!(determinant(&singular).unwrap(), 0.0);
        assert!(determinant(&DenseMatrix::<f64>::zeros(3, 2)).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&DenseMatrix::<f64>::identity(6)).unwrap(), 1.0);
        assert_eq!(determinant(&DenseMatrix::from_diag(&[2.0, 3.0, 4.0])).unwrap(), 24.0);
        let a = random(12, 8);
        let want = oracle::cofactor_determinant(&a);
        let got = determinant(&a).unwrap();
        assert!((got - want).abs() <= 1e-8 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn inverse_examples() {
        let i5 = DenseMatrix::<f64>::identity(5);
        assert_eq!(inverse(&i5).unwrap(), i5);
        let d = inverse(&DenseMatrix::from_diag(&[2.0, 4.0])).unwrap();
        assert_eq!(d, DenseMatrix::from_diag(&[0.5, 0.25]));
        let a = random(21, 60);
        let resid = a.matmul(&inverse(&a).unwrap()).unwrap().max_abs_diff(&DenseMatrix::identity(60)).unwrap();
        assert!(resid <= 1e-8, "{resid}");
    }

    #[test]
    fn single_precision_lu() {
        let a = DenseMatrix::<f32>::from_rows(&[[4.0, 3.0], [6.0, 3.0]]).unwrap();
        let f = lu_decompose(&a).unwrap();
        assert!((f.determinant() + 6.0).abs() < 1e-5);
    }
}
