//! The single random stream every simulation draws from.
//!
//! The generator is xoshiro256++ seeded through SplitMix64 (the reference
//! seeding procedure), so a 64-bit seed maps to the same sequence on every
//! platform. Uniform floats take the top 53 bits of a 64-bit output and
//! scale by 2^-53, giving values on the grid `k / 2^53` in `[0, 1)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

const F64_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    inner: Xoshiro256PlusPlus,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// The seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * F64_SCALE
    }

    /// `true` with probability `p`. Always consumes exactly one draw.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform index in `0..n` as `floor(uniform() * n)`. Consumes one draw.
    ///
    /// Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index() needs a non-empty range");
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }
}
