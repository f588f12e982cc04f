//! Deterministic Gaussian streams keyed by `(seed, purpose, index)`.
//!
//! Each stream is a ChaCha8 keystream: the seed picks the key and
//! `(purpose, index)` picks the stream id, so draws never depend on evaluation
//! order and values are identical on every platform. Box-Muller uses the
//! pure-Rust `libm`, not the host math library.

use core::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub(crate) fn new(seed: u64, purpose: u16, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((purpose as u64) << 48) ^ index);
        GaussianStream { rng, spare: None }
    }

    /// Uniform on `(0, 1]` with 53 random bits.
    fn uniform_open0(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub(crate) fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform_open0();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let angle = TAU * u2;
        self.spare = Some(radius * libm::sin(angle));
        radius * libm::cos(angle)
    }

    /// Standard complex Gaussian: `E|z|^2 = 1`.
    pub(crate) fn complex_normal(&mut self) -> Complex64 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.standard_normal() * s, self.standard_normal() * s)
    }
}
