use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenpairs of a symmetric matrix, ascending by eigenvalue. Column `k` of
/// `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: DenseMatrix<T>,
}

/// Cyclic Jacobi rotations on the symmetrized input `(a + aᵗ)/2`.
pub fn eigen_sym<T: Real>(a: &DenseMatrix<T>) -> Result<SymmetricEigen<T>> {
    if !a.is_square() {
        return Err(Error::invalid(format!("eigenvalues need a square matrix, got {:?}", a.shape())));
    }
    if !a.is_symmetric(T::lit(T::SYMMETRY_TOL)) {
        return Err(Error::invalid("eigenvalue input is not symmetric"));
    }
    let n = a.rows();
    let half = T::lit(0.5);
    let mut m = DenseMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)]) * half);
    let mut v = DenseMatrix::<T>::identity(n);
    let scale = m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= T::epsilon() * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = m.diagonal();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    Ok(SymmetricEigen {
        values: order.iter().map(|&k| diag[k]).collect(),
        vectors: v.select_cols(&order),
    })
}

pub fn eigenvalues_sym<T: Real>(a: &DenseMatrix<T>) -> Result<Vec<T>> {
    eigen_sym(a).map(|e| e.values)
}

fn off_diagonal_norm<T: Real>(m: &DenseMatrix<T>) -> T {
    let n = m.rows();
    let mut s = T::zero();
    for j in 0..n {
        for (i, &x) in m.col(j).iter().enumerate() {
            if i != j {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

/// One plane rotation zeroing `m(p,q)`, accumulated into `v`.
fn rotate<T: Real>(m: &mut DenseMatrix<T>, v: &mut DenseMatrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == T::zero() {
        return;
    }
    let two = T::lit(2.0);
    let theta = (m[(q, q)] - m[(p, p)]) / (two * apq);
    let t = {
        let mag = T::one() / (theta.abs() + theta.hypot(T::one()));
        if theta < T::zero() {
            -mag
        } else {
            mag
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    let n = m.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp;
        m[(k, q)] = new_kq;
        m[(q, k)] = new_kq;
    }
    m[(p, p)] -= t * apq;
    m[(q, q)] += t * apq;
    m[(p, q)] = T::zero();
    m[(q, p)] = T::zero();

    let (vp, vq) = {
        let data = v.as_mut_slice();
        let (lo, hi) = data.split_at_mut(q * n);
        (&mut lo[p * n..(p + 1) * n], &mut hi[..n])
    };
    for (xp, xq) in vp.iter_mut().zip(vq.iter_mut()) {
        let (a, b) = (*xp, *xq);
        *xp = c * a - s * b;
        *xq = s * a + c * b;
    }
}
