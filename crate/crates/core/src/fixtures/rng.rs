use num::{BigInt, Signed};

use crate::lattice::Vector;
use crate::rational::Rational;

/// 64-bit linear congruential generator, `s <- s·6364136223846793005 +
/// 1442695040888963407 (mod 2^64)`, emitting the high 32 bits of the state.
///
/// Every random draw in the crate goes through this generator so that a seed
/// pins down a run exactly, independent of platform and dependency versions.
#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        let mut rng = Lcg64 { state: seed };
        rng.step();
        rng
    }

    /// An independent generator for item `index` of a run seeded by `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        Lcg64::new(seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn step(&mut self) {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
    }

    pub fn next_u32(&mut self) -> u32 {
        self.step();
        (self.state >> 32) as u32
    }

    /// Uniform in `0..n` for `1 <= n <= 2^32`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0 && n <= 1 << 32, "range out of bounds");
        (u64::from(self.next_u32()) * n) >> 32
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn coin(&mut self) -> bool {
        self.next_u32() >> 31 == 1
    }

    /// `p/q` with `|p| <= magnitude` and `1 <= q <= magnitude`.
    pub fn rational(&mut self, magnitude: i64) -> Rational {
        let p = self.range(-magnitude, magnitude);
        let q = self.range(1, magnitude.max(1));
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    /// `p/q` with `0 <= p <= magnitude` and `1 <= q <= magnitude`.
    pub fn nonneg_rational(&mut self, magnitude: i64) -> Rational {
        let p = self.range(0, magnitude);
        let q = self.range(1, magnitude.max(1));
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    /// A rational in `[-bound, bound]` with denominator at most 4.
    pub fn bounded(&mut self, bound: i64) -> Rational {
        let q = self.range(1, 4);
        let p = self.range(-bound * q, bound * q);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn vector(&mut self, n: usize, bound: i64) -> Vector {
        (0..n).map(|_| self.bounded(bound)).collect()
    }

    pub fn nonneg_vector(&mut self, n: usize, bound: i64) -> Vector {
        (0..n).map(|_| self.bounded(bound).abs()).collect()
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a: Vec<u32> = {
            let mut r = Lcg64::new(1);
            (0..8).map(|_| r.next_u32()).collect()
        };
        let b: Vec<u32> = {
            let mut r = Lcg64::new(1);
            (0..8).map(|_| r.next_u32()).collect()
        };
        let c: Vec<u32> = {
            let mut r = Lcg64::new(2);
            (0..8).map(|_| r.next_u32()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn ranges_respected() {
        let mut r = Lcg64::new(7);
        for _ in 0..2000 {
            let x = r.range(-3, 5);
            assert!((-3..=5).contains(&x));
            let q = r.bounded(10);
            assert!(q.abs() <= Rational::from_integer(10.into()));
            assert!(!r.nonneg_rational(9).is_negative());
        }
        let mut hits = [false; 4];
        for _ in 0..200 {
            hits[r.below(4) as usize] = true;
        }
        assert!(hits.iter().all(|&h| h));
    }
}
