//! Seeded Gaussian sampling.
//!
//! The generator is ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`).
//! Uniforms are built from the top 53 bits of each `u64` draw; Gaussians
//! use the Box–Muller transform. Complex entries consume two uniforms
//! `(u1, u2)`: radius `sqrt(-ln u1)` and angle `2π·u2`, giving real and
//! imaginary parts with variance ½ each. Every sample is produced in `f64`
//! and then cast, so `f32` and `f64` draws share a seed stream.

use num_complex::Complex;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::ComplexMatrix;
use crate::scalar::Real;

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_M53
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open_zero(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Standard circularly-symmetric complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex<f64> {
        let r = (-self.uniform_open_zero().ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.uniform();
        Complex::new(r * theta.cos(), r * theta.sin())
    }

    /// Standard real Gaussian; pairs come from one complex draw.
    pub fn normal(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        let z = self.complex_normal() * std::f64::consts::SQRT_2;
        self.spare = Some(z.im);
        z.re
    }

    pub fn complex_matrix<T: Real>(&mut self, rows: usize, cols: usize) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            let z = self.complex_normal();
            Complex::new(T::of(z.re), T::of(z.im))
        })
    }
}

/// i.i.d. unit-variance complex Gaussian matrix, deterministic in `seed`.
pub fn randn_complex<T: Real>(rows: usize, cols: usize, seed: u64) -> ComplexMatrix<T> {
    GaussianSource::new(seed).complex_matrix(rows, cols)
}

/// Derives an independent sub-seed for `stream` from a master seed (SplitMix64 finalizer).
pub fn sub_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
