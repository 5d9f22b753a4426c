use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Seeded random source shared by every stochastic routine.
///
/// Backed by ChaCha8 (`rand_chacha`), seeded through `SeedableRng::seed_from_u64`.
/// ChaCha output is defined by its reference algorithm, so the same seed yields
/// the same draws on every platform. Uniform reals take 53 random bits and
/// Gaussian draws use the ziggurat sampler from `rand_distr`.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform index in `[0, n)`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform real in `[lo, hi]`; returns `lo` exactly when the interval is degenerate.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        if lo >= hi {
            return lo;
        }
        (lo + (hi - lo) * self.unit()).min(hi)
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_is_bit_exact() {
        let mut a = RandomStream::new(7);
        let mut b = RandomStream::new(7);
        for _ in 0..1000 {
            assert_eq!(a.unit().to_bits(), b.unit().to_bits());
            assert_eq!(a.normal().to_bits(), b.normal().to_bits());
            assert_eq!(a.index(13), b.index(13));
        }
    }

    #[test]
    fn first_draws_are_pinned() {
        // Frozen so accidental generator changes show up as a test failure.
        let mut r = RandomStream::new(42);
        let first: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        let mut again = RandomStream::new(42);
        assert_eq!(first, (0..3).map(|_| again.next_u64()).collect::<Vec<_>>());
        assert_eq!(first, PINNED_SEED_42);
    }

    const PINNED_SEED_42: [u64; 3] = [12578764544318200737, 17529487244874322312, 7886285670807131020];

    #[test]
    fn degenerate_interval() {
        let mut r = RandomStream::new(1);
        assert_eq!(r.uniform_in(2.0, 2.0), 2.0);
        for _ in 0..1000 {
            let v = r.uniform_in(-1.0, 3.0);
            assert!((-1.0..=3.0).contains(&v));
        }
    }
}
