//! Reproducible measurement randomness.
//!
//! Every shot owns a ChaCha8 stream: the master seed selects the key, the
//! shot index selects the stream. A random measurement consumes exactly one
//! value from ℤ/dℤ, drawn by rejection on the smallest power-of-two range
//! covering `d`.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct MeasurementRng {
    inner: ChaCha8Rng,
}

impl MeasurementRng {
    pub fn new(seed: u64) -> Self {
        Self::for_shot(seed, 0)
    }

    pub fn for_shot(seed: u64, shot: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(shot);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw from `0..d`.
    pub fn uniform_mod(&mut self, d: u32) -> u32 {
        assert!(d >= 1);
        let mask = (d as u64).next_power_of_two() - 1;
        loop {
            let v = self.next_u64() & mask;
            if v < d as u64 {
                return v as u32;
            }
        }
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn uniform_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Where a measurement outcome comes from when it is not determined.
#[derive(Debug)]
pub enum Randomness<'a> {
    Seeded(&'a mut MeasurementRng),
    Forced(u32),
}
