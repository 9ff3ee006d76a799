//! Small numeric helpers shared across the crate.

/// Kahan compensated accumulator.
///
/// All geometric summations (areas, lengths, angle defects) run through this
/// in a fixed index order so residuals are reproducible across runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Compensated sum of an iterator in its native order.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Bisection for a continuous function with a sign change on `[lo, hi]`.
///
/// Runs a fixed number of iterations; the bracket width halves each step, so
/// 60 iterations pin the root to ~1e-18 on unit-scale brackets.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let flo = f(lo);
    debug_assert!(
        flo * f(hi) <= 0.0,
        "bisect requires a sign change on the bracket"
    );
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// SplitMix64: a tiny deterministic generator for noise fixtures.
///
/// Not for statistics; it only has to be reproducible across platforms so
/// that seeded pipelines emit byte-identical reports.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_symmetric(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        // Naive summation of 1.0 followed by 1e16 copies of 1e-16 loses the
        // small terms; Kahan keeps them.
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        assert!((acc.value() - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let root = bisect(|x| x * x - 2.0, 1.0, 2.0, 80);
        assert!((root - std::f64::consts::SQRT_2).abs() < 1e-14);
    }
}
