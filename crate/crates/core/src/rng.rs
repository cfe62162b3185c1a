//! Seeded deterministic random numbers.
//!
//! Certificates must be reproducible from a printed seed across platforms
//! and releases, so the generator is a fixed SplitMix64 rather than an
//! external crate whose stream may change between versions.

/// SplitMix64 stream generator.
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

    /// Uniform value in `[0, n)`. The modulo bias at `n` near `2^64` is
    /// irrelevant here; what matters is determinism.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform nonzero value in `[1, n)`.
    pub fn nonzero_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 1);
        1 + self.below(n - 1)
    }
}

/// Mixes a seed with coordinate tags so per-element draws are independent of
/// iteration order. Used by sources that are defined pointwise, such as the
/// seeded coefficient tables.
pub fn mix(seed: u64, tags: &[u64]) -> u64 {
    let mut h = seed ^ 0x51_7c_c1_b7_27_22_0a_95;
    for &t in tags {
        h ^= t.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<u64> = (0..10).map(|_| 0).collect::<Vec<_>>();
        let mut r1 = SplitMix64::new(42);
        let mut r2 = SplitMix64::new(42);
        for _ in a {
            assert_eq!(r1.next_u64(), r2.next_u64());
        }
    }

    #[test]
    fn known_first_value() {
        // Reference value of SplitMix64 with seed 0; pins the stream forever.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xe220a8397b1dcdaf);
    }

    #[test]
    fn mix_is_order_sensitive() {
        assert_ne!(mix(1, &[2, 3]), mix(1, &[3, 2]));
        assert_eq!(mix(7, &[1, 2]), mix(7, &[1, 2]));
    }

    #[test]
    fn nonzero_below_never_zero() {
        let mut r = SplitMix64::new(9);
        for _ in 0..1000 {
            let v = r.nonzero_below(5);
            assert!((1..5).contains(&v));
        }
    }
}
