//! Slow, independent reference computations.
//!
//! Nothing here calls into the kernels it is used to check: each function
//! works from the textbook definition with plain loops and indexing.

use num_complex::Complex;

use crate::matrix::{ComplexVector, DenseMatrix};
use crate::scalar::Real;

/// Triple-loop `a · b`.
pub fn naive_matmul<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions differ");
    DenseMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut s = T::zero();
        for k in 0..a.cols() {
            s += a[(i, k)] * b[(k, j)];
        }
        s
    })
}

/// Laplace expansion along the first row. `O(n!)`; meant for `n ≤ 8`.
pub fn cofactor_determinant<T: Real>(a: &DenseMatrix<T>) -> T {
    assert!(a.is_square());
    let rows: Vec<Vec<T>> = (0..a.rows()).map(|i| a.row(i)).collect();
    laplace(&rows)
}

fn laplace<T: Real>(m: &[Vec<T>]) -> T {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => {
            let mut det = T::zero();
            for c in 0..n {
                let minor: Vec<Vec<T>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != c)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let term = m[0][c] * laplace(&minor);
                if c % 2 == 0 {
                    det += term;
                } else {
                    det -= term;
                }
            }
            det
        }
    }
}

pub fn insertion_sort<T: Real>(v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    for i in 1..out.len() {
        let key = out[i];
        let mut j = i;
        while j > 0 && out[j - 1] > key {
            out[j] = out[j - 1];
            j -= 1;
        }
        out[j] = key;
    }
    out
}

/// Direct `O(N²)` forward DFT. The phase index `jk mod N` is reduced in
/// integers so large products do not lose angle precision.
pub fn naive_dft<T: Real>(v: &ComplexVector<T>) -> ComplexVector<T> {
    let n = v.len();
    let x = v.values();
    let out = (0..n)
        .map(|k| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (j, &xj) in x.iter().enumerate() {
                let phase = ((j * k) % n) as f64 / n as f64;
                let angle = -2.0 * std::f64::consts::PI * phase;
                acc += xj * Complex::new(T::lit(angle.cos()), T::lit(angle.sin()));
            }
            acc
        })
        .collect();
    ComplexVector::new(out)
}

/// Fibonacci by repeated addition.
pub fn fibonacci_iterative(a: u32) -> u128 {
    let (mut f0, mut f1) = (0u128, 1u128);
    for _ in 0..a {
        let next = f0 + f1;
        f0 = f1;
        f1 = next;
    }
    f0
}

/// Largest `d` dividing both, found by counting down from `min(a, b)`.
pub fn gcd_trial_division(a: u64, b: u64) -> u64 {
    let mut d = a.min(b);
    while d > 1 {
        if a.is_multiple_of(d) && b.is_multiple_of(d) {
            return d;
        }
        d -= 1;
    }
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        1
    }
}

pub fn hilbert_entry(i1: usize, j1: usize) -> f64 {
    1.0 / (i1 + j1 - 1) as f64
}

pub fn toeplitz_entry(i1: usize, j1: usize) -> f64 {
    (i1.abs_diff(j1) + 1) as f64
}

fn standardize(x: &DenseMatrix<f64>) -> Vec<Vec<f64>> {
    let n = x.rows() as f64;
    (0..x.cols())
        .map(|j| {
            let col: Vec<f64> = (0..x.rows()).map(|i| x[(i, j)]).collect();
            let mean = col.iter().sum::<f64>() / n;
            let sd = (col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
            col.iter().map(|v| (v - mean) / sd).collect()
        })
        .collect()
}

fn correlation(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a[0].len() as f64;
    a.iter()
        .map(|ca| {
            b.iter()
                .map(|cb| ca.iter().zip(cb).map(|(u, v)| u * v).sum::<f64>() / (n - 1.0))
                .collect()
        })
        .collect()
}

fn product(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn trace(m: &[Vec<f64>]) -> f64 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

/// RV coefficient with every correlation block and product formed explicitly.
pub fn rv_direct(x: &DenseMatrix<f64>, y: &DenseMatrix<f64>) -> f64 {
    let xs = standardize(x);
    let ys = standardize(y);
    let cxx = correlation(&xs, &xs);
    let cyy = correlation(&ys, &ys);
    let cxy = correlation(&xs, &ys);
    let cyx = correlation(&ys, &xs);
    let num = trace(&product(&cxy, &cyx));
    let den = (trace(&product(&cxx, &cxx)) * trace(&product(&cyy, &cyy))).sqrt();
    num / den
}

/// Greedy forward selection recomputed from [`rv_direct`] at every step.
/// Returns the 1-based ordering.
pub fn escoufier_exhaustive(data: &DenseMatrix<f64>) -> Vec<usize> {
    let p = data.cols();
    let mut selected: Vec<usize> = Vec::new();
    while selected.len() < p {
        let mut best: Option<(usize, f64)> = None;
        for v in 0..p {
            if selected.contains(&v) {
                continue;
            }
            let mut cand = selected.clone();
            cand.push(v);
            let rv = rv_direct(&data.select_cols(&cand), data);
            if best.is_none_or(|(_, b)| rv > b) {
                best = Some((v, rv));
            }
        }
        selected.push(best.expect("at least one candidate").0);
    }
    selected.into_iter().map(|v| v + 1).collect()
}

/// Balassa index written exactly as the share-of-product over
/// share-of-country ratio, one cell at a time.
pub fn balassa_scalar(x: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    let (c_n, p_n) = x.shape();
    let mut total = 0.0;
    for c in 0..c_n {
        for p in 0..p_n {
            total += x[(c, p)];
        }
    }
    DenseMatrix::from_fn(c_n, p_n, |c, p| {
        let product_total: f64 = (0..c_n).map(|k| x[(k, p)]).sum();
        let country_total: f64 = (0..p_n).map(|k| x[(c, k)]).sum();
        (x[(c, p)] / product_total) / (country_total / total)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_small_cases() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(cofactor_determinant(&a), -2.0);
        let b = DenseMatrix::from_diag(&[2.0, 3.0, 4.0]);
        assert_eq!(cofactor_determinant(&b), 24.0);
    }

    #[test]
    fn fibonacci_known_values() {
        assert_eq!(fibonacci_iterative(0), 0);
        assert_eq!(fibonacci_iterative(1), 1);
        assert_eq!(fibonacci_iterative(10), 55);
        assert_eq!(fibonacci_iterative(70), 190_392_490_709_135);
    }

    #[test]
    fn trial_division_cases() {
        assert_eq!(gcd_trial_division(12, 18), 6);
        assert_eq!(gcd_trial_division(7, 1), 1);
        assert_eq!(gcd_trial_division(9, 9), 9);
    }

    #[test]
    fn dft_of_delta_is_flat() {
        let v = ComplexVector::from_real(&[1.0, 0.0, 0.0, 0.0]);
        let f = naive_dft(&v);
        for c in f.values() {
            assert!((c - Complex::new(1.0, 0.0)).norm() < 1e-15);
        }
    }
}
