//! Scalar and structural tasks: Fibonacci, Hilbert, Toeplitz, Escoufier's
//! variable selection, GCDs.

use crate::calc::crossprod;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::RngStream;
use crate::scalar::Real;

/// Binet's closed form `(φᵃ − (−φ)⁻ᵃ)/√5`.
pub fn binet(a: u32) -> f64 {
    let sqrt5 = 5f64.sqrt();
    let phi = (1.0 + sqrt5) / 2.0;
    let a = a as i32;
    (phi.powi(a) - (-phi).powi(-a)) / sqrt5
}

/// `count` Binet values at random exponents `floor(1000·u)`, `u ∈ [0, 1)`.
pub fn fibonacci_vector(rng: &mut RngStream, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("fibonacci count must be >= 1"));
    }
    Ok((0..count)
        .map(|_| binet((1000.0 * rng.uniform()).floor() as u32))
        .collect())
}

/// `H(i,j) = 1/(i+j−1)` with 1-based indices.
pub fn hilbert_matrix<T: Real>(n: usize) -> Result<DenseMatrix<T>> {
    if n == 0 {
        return Err(Error::invalid("Hilbert order must be >= 1"));
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| T::one() / T::lit((i + j + 1) as f64)))
}

/// `T(i,j) = |i−j| + 1`.
pub fn toeplitz_matrix<T: Real>(n: usize) -> Result<DenseMatrix<T>> {
    if n == 0 {
        return Err(Error::invalid("Toeplitz order must be >= 1"));
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| T::lit((i.abs_diff(j) + 1) as f64)))
}

/// Columns centred and scaled to unit sample variance.
fn standardize<T: Real>(x: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let n = x.rows();
    if n < 2 {
        return Err(Error::invalid("standardizing needs at least two observations"));
    }
    let nt = T::lit(n as f64);
    let mut z = x.clone();
    for j in 0..z.cols() {
        let col = z.col_mut(j);
        let mean = col.iter().copied().sum::<T>() / nt;
        let ss: T = col.iter().map(|&v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (nt - T::one())).sqrt();
        if !(sd > T::zero()) {
            return Err(Error::invalid(format!("column {} has zero variance", j + 1)));
        }
        for v in col.iter_mut() {
            *v = (*v - mean) / sd;
        }
    }
    Ok(z)
}

/// `Zᵗ·Z/(n−1)` for standardized `Z`.
fn correlation<T: Real>(z: &DenseMatrix<T>) -> DenseMatrix<T> {
    let denom = T::lit((z.rows() - 1) as f64);
    crossprod(z).map(|v| v / denom)
}

/// RV coefficient `tr(Cxy·Cyx)/√(tr(Cxx²)·tr(Cyy²))` over correlation blocks.
pub fn rv_coefficient<T: Real>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> Result<T> {
    if x.rows() != y.rows() {
        return Err(Error::invalid(format!(
            "observation counts differ: {} vs {}",
            x.rows(),
            y.rows()
        )));
    }
    let zx = standardize(x)?;
    let zy = standardize(y)?;
    let denom = T::lit((x.rows() - 1) as f64);
    let cxy = zx.transpose().matmul(&zy)?.map(|v| v / denom);
    let sq = |m: &DenseMatrix<T>| m.as_slice().iter().map(|&v| v * v).sum::<T>();
    let num = sq(&cxy);
    let den = (sq(&correlation(&zx)) * sq(&correlation(&zy))).sqrt();
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscoufierResult<T> {
    /// 1-based variable indices in selection order.
    pub ordering: Vec<usize>,
    /// RV of the selected set against the full set after each step.
    pub rv_trajectory: Vec<T>,
}

/// Greedy forward selection: each step adds the variable maximizing
/// `RV(selected ∪ {v}, all)`, lowest index on ties.
///
/// Works on the full correlation matrix `C`: for a subset `S`,
/// `RV = Σ_{i∈S,j} C²ᵢⱼ / √(Σ_{i,k∈S} C²ᵢₖ · Σ C²)`, with both sums updated
/// incrementally.
pub fn escoufier_select<T: Real>(data: &DenseMatrix<T>) -> Result<EscoufierResult<T>> {
    let p = data.cols();
    let c = correlation(&standardize(data)?);
    let sq = |v: T| v * v;
    let row_sq: Vec<T> = (0..p).map(|i| c.col(i).iter().map(|&v| sq(v)).sum()).collect();
    let total: T = row_sq.iter().copied().sum();

    let mut selected: Vec<usize> = Vec::with_capacity(p);
    let mut chosen = vec![false; p];
    let mut num = T::zero();
    let mut block = T::zero();
    let mut trajectory = Vec::with_capacity(p);

    for _ in 0..p {
        let mut best: Option<(usize, T, T, T)> = None;
        for v in (0..p).filter(|&v| !chosen[v]) {
            let cross: T = selected.iter().map(|&i| sq(c[(i, v)])).sum();
            let cand_num = num + row_sq[v];
            let cand_block = block + cross + cross + sq(c[(v, v)]);
            let rv = cand_num / (cand_block * total).sqrt();
            if best.is_none_or(|(_, b, _, _)| rv > b) {
                best = Some((v, rv, cand_num, cand_block));
            }
        }
        let (v, rv, n_new, b_new) = best.expect("an unselected variable remains");
        chosen[v] = true;
        selected.push(v);
        num = n_new;
        block = b_new;
        trajectory.push(rv);
    }

    Ok(EscoufierResult {
        ordering: selected.into_iter().map(|v| v + 1).collect(),
        rv_trajectory: trajectory,
    })
}

/// `n × p` matrix of `|N(0,1)|` draws, the Escoufier task input.
pub fn escoufier_input(rng: &mut RngStream, n: usize, p: usize) -> Result<DenseMatrix<f64>> {
    Ok(crate::calc::randn_matrix::<f64>(rng, n, p, 1.0)?.map(f64::abs))
}

/// Euclid's algorithm.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn draw_pairs(rng: &mut RngStream, count: usize, max_value: u64) -> Result<Vec<(u64, u64)>> {
    if count == 0 || max_value == 0 {
        return Err(Error::invalid("gcd pairs need count >= 1 and max_value >= 1"));
    }
    Ok((0..count)
        .map(|_| (rng.uniform_int(1, max_value), rng.uniform_int(1, max_value)))
        .collect())
}

/// Draws `count` pairs uniformly from `[1, max_value]²` and returns their GCDs.
pub fn gcd_pairs(rng: &mut RngStream, count: usize, max_value: u64) -> Result<Vec<u64>> {
    Ok(draw_pairs(rng, count, max_value)?
        .into_iter()
        .map(|(a, b)| gcd(a, b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn binet_known_values() {
        assert_eq!(binet(0).round(), 0.0);
        assert!((binet(1) - 1.0).abs() < 1e-9);
        assert!((binet(2) - 1.0).abs() < 1e-9);
        assert!((binet(10) - 55.0).abs() < 1e-9);
    }

    #[test]
    fn binet_matches_iteration_up_to_70() {
        for a in 0..=70 {
            assert_eq!(binet(a).round() as u128, oracle::fibonacci_iterative(a), "a = {a}");
        }
    }

    #[test]
    fn fibonacci_vector_draws() {
        let v = fibonacci_vector(&mut RngStream::new(1), 1000).unwrap();
        assert_eq!(v.len(), 1000);
        assert!(v.iter().all(|x| x.is_finite() && *x >= 0.0));
        assert!(fibonacci_vector(&mut RngStream::new(1), 0).is_err());
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_matrix::<f64>(1).unwrap(), DenseMatrix::from_rows(&[[1.0]]).unwrap());
        let h2 = hilbert_matrix::<f64>(2).unwrap();
        assert_eq!(h2, DenseMatrix::from_rows(&[[1.0, 0.5], [0.5, 1.0 / 3.0]]).unwrap());
        let h = hilbert_matrix::<f64>(20).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                assert_eq!(h[(i, j)], oracle::hilbert_entry(i + 1, j + 1));
                assert_eq!(h[(i, j)], h[(j, i)]);
            }
        }
    }

    #[test]
    fn hilbert_positive_definite_to_12() {
        for n in 1..=12 {
            assert!(crate::linalg::cholesky(&hilbert_matrix::<f64>(n).unwrap()).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn toeplitz_examples() {
        assert_eq!(toeplitz_matrix::<f64>(1).unwrap(), DenseMatrix::from_rows(&[[1.0]]).unwrap());
        let t3 = toeplitz_matrix::<f64>(3).unwrap();
        let want = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 1.0, 2.0], [3.0, 2.0, 1.0]]).unwrap();
        assert_eq!(t3, want);
        let t = toeplitz_matrix::<f64>(25).unwrap();
        for i in 0..24 {
            for j in 0..24 {
                assert_eq!(t[(i, j)], t[(i + 1, j + 1)]);
            }
        }
        assert!(hilbert_matrix::<f64>(0).is_err());
        assert!(toeplitz_matrix::<f64>(0).is_err());
    }

    fn data(seed: u64, n: usize, p: usize) -> DenseMatrix<f64> {
        escoufier_input(&mut RngStream::new(seed), n, p).unwrap()
    }

    #[test]
    fn rv_self_and_symmetry() {
        let x = data(1, 20, 4);
        assert!((rv_coefficient(&x, &x).unwrap() - 1.0).abs() <= 1e-12);
        let y = data(2, 20, 3);
        let a = rv_coefficient(&x, &y).unwrap();
        let b = rv_coefficient(&y, &x).unwrap();
        assert!((a - b).abs() <= 1e-12);
        assert!((-1e-12..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn rv_matches_direct_formula() {
        let x = data(3, 10, 2);
        let y = data(4, 10, 3);
        let got = rv_coefficient(&x, &y).unwrap();
        assert!((got - oracle::rv_direct(&x, &y)).abs() <= 1e-12);
    }

    #[test]
    fn rv_errors() {
        let x = data(1, 10, 2);
        assert!(rv_coefficient(&x, &data(1, 9, 2)).is_err());
        let flat = DenseMatrix::from_fn(10, 2, |i, j| if j == 0 { i as f64 } else { 3.0 });
        assert!(matches!(rv_coefficient(&x, &flat), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn escoufier_single_variable() {
        let r = escoufier_select(&data(5, 6, 1)).unwrap();
        assert_eq!(r.ordering, vec![1]);
        assert!((r.rv_trajectory[0] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn escoufier_ends_at_one() {
        let r = escoufier_select(&data(6, 12, 5)).unwrap();
        assert!((r.rv_trajectory.last().unwrap() - 1.0).abs() <= 1e-10);
        let mut sorted = r.ordering.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3, 4, 5]);
        assert!(r.rv_trajectory.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
    }

    #[test]
    fn escoufier_matches_exhaustive_oracle() {
        let d = data(7, 15, 4);
        assert_eq!(escoufier_select(&d).unwrap().ordering, oracle::escoufier_exhaustive(&d));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(7, 1), 1);
        assert_eq!(gcd(13, 13), 13);
    }

    #[test]
    fn gcd_pairs_against_trial_division() {
        let pairs = draw_pairs(&mut RngStream::new(11), 10_000, 1000).unwrap();
        let gcds = gcd_pairs(&mut RngStream::new(11), 10_000, 1000).unwrap();
        for (&(a, b), &g) in pairs.iter().zip(&gcds) {
            assert!((1..=1000).contains(&a) && (1..=1000).contains(&b));
            assert_eq!(a % g, 0);
            assert_eq!(b % g, 0);
            assert_eq!(g, oracle::gcd_trial_division(a, b));
        }
        assert!(gcd_pairs(&mut RngStream::new(1), 0, 10).is_err());
    }
}
