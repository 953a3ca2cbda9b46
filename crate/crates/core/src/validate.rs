//! Correctness checks of every kernel against the independent references in
//! [`crate::oracle`], over seeded random inputs.

use crate::balassa::{balassa_matrix, TradeMatrix};
use crate::calc::{crossprod, randn_matrix, sort_values, transpose_naive};
use crate::error::Result;
use crate::linalg::{cholesky, determinant, eigen_sym, fft, inverse, least_squares, lu_decompose};
use crate::linalg::{solve_naive, solve_smart, LinearSystem};
use crate::matrix::{ComplexVector, DenseMatrix};
use crate::oracle;
use crate::prog::{binet, draw_pairs, escoufier_select, gcd, hilbert_matrix, rv_coefficient, toeplitz_matrix};
use crate::rng::RngStream;

pub const DEFAULT_SEEDS: usize = 20;
pub const MIN_SIZE: usize = 2;
pub const MAX_SIZE: usize = 80;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    /// Cases per oracle.
    pub seeds: usize,
    pub base_seed: u64,
    /// Negative control: corrupts the LU check so it must fail.
    pub inject_fault: bool,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self { seeds: DEFAULT_SEEDS, base_seed: 0x5EED, inject_fault: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Largest error metric seen, comparable to `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl std::fmt::Display for OracleOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<28} cases={:<4} worst={:.3e} tol={:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance
        )?;
        if let Some(d) = &self.detail {
            write!(f, "  ({d})")?;
        }
        Ok(())
    }
}

/// Size for case `k`, sweeping `lo..=hi` so early cases hit both ends.
pub fn case_size(k: usize, lo: usize, hi: usize) -> usize {
    let span = hi - lo + 1;
    match k {
        0 => lo,
        1 => hi,
        _ => lo + (k * 37) % span,
    }
}

struct Check {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
    detail: Option<String>,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, cases: 0, worst: 0.0, detail: None }
    }

    fn record(&mut self, case: &str, err: f64) {
        self.cases += 1;
        if err.is_nan() || err > self.worst {
            self.worst = if err.is_nan() { f64::INFINITY } else { err };
        }
        if !(err <= self.tolerance) && self.detail.is_none() {
            self.detail = Some(format!("{case}: error {err:.3e}"));
        }
    }

    fn record_result(&mut self, case: &str, r: Result<f64>) {
        match r {
            Ok(e) => self.record(case, e),
            Err(e) => {
                self.cases += 1;
                self.worst = f64::INFINITY;
                if self.detail.is_none() {
                    self.detail = Some(format!("{case}: {e}"));
                }
            }
        }
    }

    fn finish(self) -> OracleOutcome {
        OracleOutcome {
            name: self.name,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            passed: self.cases > 0 && self.detail.is_none(),
            detail: self.detail,
        }
    }
}

fn randn(rng: &mut RngStream, r: usize, c: usize) -> Result<DenseMatrix<f64>> {
    randn_matrix(rng, r, c, 1.0)
}

fn symmetric(rng: &mut RngStream, n: usize) -> Result<DenseMatrix<f64>> {
    let a = randn(rng, n, n)?;
    Ok(DenseMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)]) / 2.0))
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn exact(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        f64::INFINITY
    }
}

type Body = fn(&mut Check, &mut RngStream, usize, &ValidationConfig);

const CHECKS: &[(&str, f64, Body)] = &[
    ("lu-reconstruction", 1e-10, lu_reconstruction),
    ("determinant-cofactor", 1e-8, determinant_cofactor),
    ("inverse-residual", 1e-8, inverse_residual),
    ("cholesky-reconstruction", 1e-9, cholesky_reconstruction),
    ("lstsq-planted", 1e-8, lstsq_planted),
    ("lstsq-orthogonality", 1e-6, lstsq_orthogonality),
    ("eigen-trace", 1e-8, eigen_trace),
    ("eigen-determinant", 1e-6, eigen_determinant),
    ("eigen-residual", 1e-8, eigen_residual),
    ("fft-vs-dft", 1e-9, fft_vs_dft),
    ("fft-parseval", 1e-9, fft_parseval),
    ("transpose-variants", 0.0, transpose_variants),
    ("reshape-round-trip", 0.0, reshape_round_trip),
    ("sort-vs-insertion", 0.0, sort_vs_insertion),
    ("crossprod-vs-matmul", 1e-12, crossprod_vs_matmul),
    ("fibonacci-binet", 0.0, fibonacci_binet),
    ("gcd-trial-division", 0.0, gcd_trial),
    ("hilbert-formula", 0.0, hilbert_formula),
    ("toeplitz-formula", 0.0, toeplitz_formula),
    ("escoufier-exhaustive", 0.0, escoufier_vs_exhaustive),
    ("rv-self", 1e-10, rv_self),
    ("rv-direct", 1e-10, rv_vs_direct),
    ("solve-planted", 1e-6, solve_planted),
    ("balassa-scalar", 1e-12, balassa_vs_scalar),
    ("balassa-scale-invariance", 1e-12, balassa_scale_invariance),
    ("balassa-fixed-cases", 0.0, balassa_fixed_cases),
];

/// Names of all checks, in run order.
pub fn oracle_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every oracle with `cfg.seeds` cases each.
pub fn run_oracles(cfg: &ValidationConfig) -> Vec<OracleOutcome> {
    run_oracles_with(cfg, |_| {})
}

/// As [`run_oracles`], reporting each outcome as soon as it is known.
pub fn run_oracles_with(cfg: &ValidationConfig, mut on_outcome: impl FnMut(&OracleOutcome)) -> Vec<OracleOutcome> {
    CHECKS
        .iter()
        .map(|&(name, tol, body)| {
            let mut check = Check::new(name, tol);
            for k in 0..cfg.seeds {
                let mut rng = RngStream::for_run(cfg.base_seed, name, k as u64);
                body(&mut check, &mut rng, k, cfg);
            }
            let outcome = check.finish();
            on_outcome(&outcome);
            outcome
        })
        .collect()
}

fn lu_reconstruction(c: &mut Check, rng: &mut RngStream, k: usize, cfg: &ValidationConfig) {
    let n = case_size(k, MIN_SIZE, MAX_SIZE);
    let r = (|| {
        let a = randn(rng, n, n)?;
        let f = lu_decompose(&a)?;
        let mut lu = f.lower().matmul(&f.upper())?;
        if cfg.inject_fault {
            lu[(0, 0)] += 1e-3;
        }
        f.permute_rows(&a).rel_frobenius_diff(&lu)
    })();
    c.record_result(&format!("n={n}"), r);
}

fn determinant_cofactor(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, 1, 8);
    let r = (|| {
        let a = randn(rng, n, n)?;
        Ok(rel_err(determinant(&a)?, oracle::cofactor_determinant(&a)))
    })();
    c.record_result(&format!("n={n}"), r);
}

fn inverse_residual(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, MIN_SIZE, MAX_SIZE);
    let r = (|| {
        // Ill-conditioned draws are outside the contract; draw again.
        let mut a = randn(rng, n, n)?;
        while lu_decompose(&a).map_or(true, |f| f.condition_estimate() > 1e6) {
            a = randn(rng, n, n)?;
        }
        let prod = a.matmul(&inverse(&a)?)?;
        prod.max_abs_diff(&DenseMatrix::identity(n))
    })();
    c.record_result(&format!("n={n}"), r);
}

fn cholesky_reconstruction(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, MIN_SIZE, MAX_SIZE);
    let r = (|| {
        let b = randn(rng, n, n)?;
        let mut a = crossprod(&b);
        for i in 0..n {
            a[(i, i)] += n as f64;
        }
        let l = cholesky(&a)?;
        a.rel_frobenius_diff(&l.matmul(&l.transpose())?)
    })();
    c.record_result(&format!("n={n}"), r);
}

fn tall_shape(k: usize) -> (usize, usize) {
    let cols = case_size(k, MIN_SIZE, MAX_SIZE);
    (cols + (k * 7) % 20, cols)
}

fn lstsq_planted(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let (m, n) = tall_shape(k);
    let r = (|| {
        let a = randn(rng, m, n)?;
        let x0 = randn(rng, n, 1)?;
        let x = least_squares(&a, &a.matmul(&x0)?)?;
        Ok(norm(x.sub(&x0)?.as_slice()) / norm(x0.as_slice()))
    })();
    c.record_result(&format!("{m}x{n}"), r);
}

fn lstsq_orthogonality(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let (m, n) = tall_shape(k);
    let r = (|| {
        let a = randn(rng, m, n)?;
        let b = randn(rng, m, 1)?;
        let x = least_squares(&a, &b)?;
        let resid = b.sub(&a.matmul(&x)?)?;
        let at_r = a.transpose().matmul(&resid)?;
        Ok(at_r.max_abs() / (a.frobenius_norm() * b.frobenius_norm()))
    })();
    c.record_result(&format!("{m}x{n}"), r);
}

fn eigen_trace(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, MIN_SIZE, MAX_SIZE);
    let r = (|| {
        let a = symmetric(rng, n)?;
        let sum: f64 = eigen_sym(&a)?.values.iter().sum();
        let tr = a.trace();
        Ok((sum - tr).abs() / tr.abs().max(a.frobenius_norm()))
    })();
    c.record_result(&format!("n={n}"), r);
}

fn eigen_determinant(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, MIN_SIZE, MAX_SIZE);
    let r = (|| {
        let a = symmetric(rng, n)?;
        let prod: f64 = eigen_sym(&a)?.values.iter().product();
        Ok(rel_err(prod, determinant(&a)?))
    })();
    c.record_result(&format!("n={n}"), r);
}

fn eigen_residual(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, MIN_SIZE, MAX_SIZE);
    let r = (|| {
        let a = symmetric(rng, n)?;
        let e = eigen_sym(&a)?;
        let av = a.matmul(&e.vectors)?;
        let scale = a.frobenius_norm();
        let mut worst = 0.0f64;
        for (j, &lambda) in e.values.iter().enumerate() {
            let res: Vec<f64> = av.col(j).iter().zip(e.vectors.col(j)).map(|(x, v)| x - lambda * v).collect();
            worst = worst.max(norm(&res) / scale);
        }
        Ok(worst)
    })();
    c.record_result(&format!("n={n}"), r);
}

const FFT_LEN: usize = 1024;

fn fft_input(rng: &mut RngStream, len: usize) -> ComplexVector<f64> {
    let v = (0..len)
        .map(|_| num_complex::Complex::new(rng.normal(), rng.normal()))
        .collect();
    ComplexVector::new(v)
}

fn fft_vs_dft(c: &mut Check, rng: &mut RngStream, _: usize, _: &ValidationConfig) {
    let x = fft_input(rng, FFT_LEN);
    let r = fft(&x).and_then(|f| f.max_abs_diff(&oracle::naive_dft(&x)));
    c.record_result(&format!("len={FFT_LEN}"), r);
}

fn fft_parseval(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let len = 1usize << (1 + k % 12);
    let x = fft_input(rng, len);
    let r = fft(&x).map(|f| rel_err(f.energy(), len as f64 * x.energy()));
    c.record_result(&format!("len={len}"), r);
}

fn transpose_variants(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let (r, n) = (case_size(k, MIN_SIZE, MAX_SIZE), case_size(k + 5, MIN_SIZE, MAX_SIZE));
    let res = randn(rng, r, n).map(|a| {
        let strided = DenseMatrix::from_fn(n, r, |i, j| a[(j, i)]);
        exact(transpose_naive(&a) == a.transpose() && strided == a.transpose())
    });
    c.record_result(&format!("{r}x{n}"), res);
}

fn reshape_round_trip(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let (r, n) = (case_size(k, MIN_SIZE, MAX_SIZE), 2 * case_size(k + 3, 1, 40));
    let res = (|| {
        let a = randn(rng, r, n)?;
        let b = a.clone().reshape(n / 2, 2 * r)?;
        let same_order = b.as_slice() == a.as_slice();
        Ok(exact(same_order && b.reshape(r, n)? == a))
    })();
    c.record_result(&format!("{r}x{n}"), res);
}

fn sort_vs_insertion(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let len = 10 * case_size(k, MIN_SIZE, MAX_SIZE);
    let v: Vec<f64> = (0..len).map(|_| rng.normal()).collect();
    let r = sort_values(v.clone()).map(|s| exact(s == oracle::insertion_sort(&v)));
    c.record_result(&format!("len={len}"), r);
}

fn crossprod_vs_matmul(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let (m, n) = tall_shape(k);
    let r = (|| {
        let a = randn(rng, m, n)?;
        let want = oracle::naive_matmul(&a.transpose(), &a);
        crossprod(&a).rel_frobenius_diff(&want)
    })();
    c.record_result(&format!("{m}x{n}"), r);
}

fn fibonacci_binet(c: &mut Check, rng: &mut RngStream, _: usize, _: &ValidationConfig) {
    let a = rng.uniform_int(0, 70) as u32;
    let got = binet(a).round();
    c.record(&format!("a={a}"), exact(got as u128 == oracle::fibonacci_iterative(a)));
    if c.cases == 1 {
        for a in 0..=70 {
            let ok = binet(a).round() as u128 == oracle::fibonacci_iterative(a);
            c.record(&format!("a={a}"), exact(ok));
        }
    }
}

fn gcd_trial(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let max = if k.is_multiple_of(2) { 1000 } else { 5000 };
    let r = draw_pairs(rng, 10_000, max).map(|pairs| {
        let bad = pairs.iter().find(|&&(a, b)| gcd(a, b) != oracle::gcd_trial_division(a, b));
        exact(bad.is_none())
    });
    c.record_result(&format!("max={max}"), r);
}

fn hilbert_formula(c: &mut Check, _: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, 1, MAX_SIZE);
    let r = hilbert_matrix::<f64>(n)
        .map(|h| exact((0..n).all(|i| (0..n).all(|j| h[(i, j)] == oracle::hilbert_entry(i + 1, j + 1)))));
    c.record_result(&format!("n={n}"), r);
}

fn toeplitz_formula(c: &mut Check, _: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, 1, MAX_SIZE);
    let r = toeplitz_matrix::<f64>(n)
        .map(|t| exact((0..n).all(|i| (0..n).all(|j| t[(i, j)] == oracle::toeplitz_entry(i + 1, j + 1)))));
    c.record_result(&format!("n={n}"), r);
}

fn escoufier_vs_exhaustive(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let p = case_size(k, 2, 5);
    let n = p + 3 + k % 10;
    let r = (|| {
        let x = randn(rng, n, p)?.map(f64::abs);
        Ok(exact(escoufier_select(&x)?.ordering == oracle::escoufier_exhaustive(&x)))
    })();
    c.record_result(&format!("{n}x{p}"), r);
}

fn rv_self(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let (m, n) = tall_shape(k);
    let r = (|| {
        let x = randn(rng, m, n)?;
        Ok((rv_coefficient(&x, &x)? - 1.0).abs())
    })();
    c.record_result(&format!("{m}x{n}"), r);
}

fn rv_vs_direct(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, 3, 30);
    let (px, py) = (1 + k % 5, 1 + (k / 5) % 5);
    let r = (|| {
        let x = randn(rng, n, px)?;
        let y = randn(rng, n, py)?;
        Ok((rv_coefficient(&x, &y)? - oracle::rv_direct(&x, &y)).abs())
    })();
    c.record_result(&format!("n={n} p={px},{py}"), r);
}

fn solve_planted(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let n = case_size(k, 1, MAX_SIZE);
    let m = 1 + k % 10;
    let r = (|| {
        let sys = LinearSystem::<f64>::planted(rng, n, m)?;
        let x_true = sys.x_true.as_ref().expect("planted");
        let smart = solve_smart(&sys)?;
        let naive = solve_naive(&sys)?;
        let e1 = smart.rel_frobenius_diff(x_true)?;
        let e2 = naive.rel_frobenius_diff(x_true)?;
        let e3 = smart.rel_frobenius_diff(&naive)?;
        Ok(e1.max(e2).max(e3))
    })();
    c.record_result(&format!("n={n} m={m}"), r);
}

fn labelled(x: DenseMatrix<f64>) -> TradeMatrix<f64> {
    let (c, p) = x.shape();
    TradeMatrix {
        x,
        countries: (0..c).map(|i| format!("c{i}")).collect(),
        products: (0..p).map(|i| format!("p{i}")).collect(),
    }
}

fn positive(rng: &mut RngStream, c: usize, p: usize) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(c, p, |_, _| 0.01 + 100.0 * rng.uniform())
}

fn balassa_vs_scalar(c: &mut Check, rng: &mut RngStream, _: usize, _: &ValidationConfig) {
    let x = positive(rng, 20, 30);
    let want = oracle::balassa_scalar(&x);
    let r = balassa_matrix(&labelled(x)).and_then(|b| b.b.max_abs_diff(&want));
    c.record_result("20x30", r);
}

fn balassa_scale_invariance(c: &mut Check, rng: &mut RngStream, _: usize, _: &ValidationConfig) {
    let x = positive(rng, 20, 30);
    let k = 10f64.powf(6.0 * rng.uniform() - 3.0);
    let r = (|| {
        let b1 = balassa_matrix(&labelled(x.clone()))?.b;
        let b2 = balassa_matrix(&labelled(x.map(|v| v * k)))?.b;
        b1.max_abs_diff(&b2)
    })();
    c.record_result(&format!("k={k:.3e}"), r);
}

fn balassa_fixed_cases(c: &mut Check, rng: &mut RngStream, k: usize, _: &ValidationConfig) {
    let (r, p) = (case_size(k, 1, 20), case_size(k + 1, 1, 30));
    let v = 1.0 + rng.uniform_int(0, 1000) as f64;
    let uniform = balassa_matrix(&labelled(DenseMatrix::from_fn(r, p, |_, _| v)))
        .map(|b| exact(b.s.as_slice().iter().all(|&s| s == 1.0)));
    c.record_result(&format!("uniform {r}x{p}"), uniform);
    if k == 0 {
        let x = DenseMatrix::from_rows(&[[10.0, 0.0], [0.0, 10.0]]).expect("2x2");
        let block = balassa_matrix(&labelled(x)).map(|b| {
            let want_b = DenseMatrix::from_rows(&[[2.0, 0.0], [0.0, 2.0]]).expect("2x2");
            exact(b.b == want_b && b.s == DenseMatrix::identity(2))
        });
        c.record_result("block-diagonal", block);
    }
}
