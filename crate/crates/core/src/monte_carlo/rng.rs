use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Identifies the generator and the stream layout. Changing either breaks
/// reproducibility of saved streams.
pub const GENERATOR_NAME: &str = "chacha8-stream-v1";

/// ChaCha8 keyed by a 64-bit seed, with an independent stream per chunk of
/// work. Chunk `k` always draws the same numbers, whichever thread runs it.
#[derive(Debug, Clone)]
pub struct StreamRng(ChaCha8Rng);

impl StreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform variate in the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        uniform_open(self.0.next_u64())
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }
}

/// Maps 52 random bits to the midpoint grid `(k + ½)/2⁵²`, never 0 or 1.
pub fn uniform_open(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_interval() {
        assert!(uniform_open(0) > 0.0);
        assert!(uniform_open(u64::MAX) < 1.0);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..8)
            .map({
                let mut r = StreamRng::new(7, 0);
                move |_| r.next_u64()
            })
            .collect();
        let b: Vec<u64> = (0..8)
            .map({
                let mut r = StreamRng::new(7, 0);
                move |_| r.next_u64()
            })
            .collect();
        let c: Vec<u64> = (0..8)
            .map({
                let mut r = StreamRng::new(7, 1);
                move |_| r.next_u64()
            })
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn pinned_first_draw() {
        // guards the generator choice; update GENERATOR_NAME if this changes
        let mut r = StreamRng::new(42, 0);
        let first = r.next_u64();
        let mut again = StreamRng::new(42, 0);
        assert_eq!(first, again.next_u64());
        assert_eq!(first, PINNED_SEED42_STREAM0);
    }

    const PINNED_SEED42_STREAM0: u64 = 12_578_764_544_318_200_737;
}
