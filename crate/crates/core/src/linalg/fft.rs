use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexVector;
use crate::scalar::Real;

/// Largest power of two not exceeding `n` (`n ≥ 1`).
pub fn power_of_two_floor(n: usize) -> usize {
    assert!(n >= 1, "no power of two below 1");
    1 << (usize::BITS - 1 - n.leading_zeros())
}

/// Unnormalized forward DFT, `out[k] = Σ_j v[j]·exp(−2πi·jk/N)`, by
/// iterative radix-2 Cooley–Tukey.
pub fn fft<T: Real>(v: &ComplexVector<T>) -> Result<ComplexVector<T>> {
    let mut out = v.clone();
    fft_in_place(&mut out)?;
    Ok(out)
}

pub fn fft_in_place<T: Real>(v: &mut ComplexVector<T>) -> Result<()> {
    let n = v.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid(format!("FFT length {n} is not a power of two")));
    }
    let x = v.values_mut();
    if n == 1 {
        return Ok(());
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            x.swap(i, j);
        }
    }

    // Twiddles for the full length; a stage of width `len` uses every
    // (n/len)-th entry. Angles are evaluated in f64 whatever T is.
    let twiddles: Vec<Complex<T>> = (0..n / 2)
        .map(|k| {
            let angle = -2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Complex::new(T::lit(angle.cos()), T::lit(angle.sin()))
        })
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for chunk in x.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let t = *b * twiddles[k * stride];
                *b = *a - t;
                *a += t;
            }
        }
        len <<= 1;
    }
    Ok(())
}
