//! Seeded, platform-independent random streams.
//!
//! Uniforms come from a counter-based generator: draw `k` of a stream with
//! key `s` is the SplitMix64 finalizer applied to `s + k·γ`. Normals use the
//! polar Box–Muller method on top of those uniforms. Everything is integer
//! arithmetic plus IEEE-754 `ln`/`sqrt`, so a given seed reproduces the same
//! bits on every platform.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A single-owner random stream. Not `Clone`: two owners of one stream would
/// silently share draws.
#[derive(Debug)]
pub struct RngStream {
    seed: u64,
    key: u64,
    counter: u64,
    spare_normal: Option<f64>,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            key: mix64(seed ^ 0x6A09_E667_F3BC_C909),
            counter: 0,
            spare_normal: None,
        }
    }

    /// Stream for one benchmark run, keyed by `(seed, task, run_index)`.
    pub fn for_run(seed: u64, task_id: &str, run_index: u64) -> Self {
        // FNV-1a over the task id keeps the derivation independent of std's
        // randomized hashers.
        let mut h: u64 = 0xCBF2_9CE4_8422_2325;
        for b in task_id.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
        let derived = mix64(seed ^ mix64(h) ^ mix64(run_index.wrapping_add(GOLDEN_GAMMA)));
        Self::new(derived)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[lo, hi]`, unbiased (Lemire's multiply-and-reject).
    pub fn uniform_int(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi, "empty integer range");
        let span = hi - lo;
        if span == u64::MAX {
            return self.next_u64();
        }
        let range = span + 1;
        let threshold = range.wrapping_neg() % range;
        loop {
            let m = u128::from(self.next_u64()) * u128::from(range);
            if (m as u64) >= threshold {
                return lo + (m >> 64) as u64;
            }
        }
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bits() {
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        for _ in 0..1000 {
            assert_eq!(a.normal().to_bits(), b.normal().to_bits());
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = RngStream::new(1);
        let mut b = RngStream::new(2);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn run_streams_depend_on_every_key_part() {
        let first = RngStream::for_run(7, "fft", 0).next_u64();
        assert_eq!(first, RngStream::for_run(7, "fft", 0).next_u64());
        assert_ne!(first, RngStream::for_run(8, "fft", 0).next_u64());
        assert_ne!(first, RngStream::for_run(7, "sort", 0).next_u64());
        assert_ne!(first, RngStream::for_run(7, "fft", 1).next_u64());
    }

    #[test]
    fn normal_moments_at_one_million() {
        let mut rng = RngStream::new(2024);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn uniform_int_stays_in_range_and_hits_ends() {
        let mut rng = RngStream::new(3);
        let mut seen = [false; 6];
        for _ in 0..10_000 {
            let k = rng.uniform_int(1, 6);
            assert!((1..=6).contains(&k));
            seen[(k - 1) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(rng.uniform_int(9, 9), 9);
    }

    #[test]
    fn uniform_is_half_open() {
        let mut rng = RngStream::new(11);
        for _ in 0..100_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
