//! Dual-blind deconvolution for MIMO and joint radar-communication (JRC)
//! systems.
//!
//! The unknown channel and transmit signal are recovered by an ADMM
//! splitting: closed-form least-squares channel and signal updates,
//! gradient or proximal updates on auxiliary copies that carry the
//! regularizers, and dual ascent on the consensus constraints.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the simulator and
//! experiment harness use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admm;
pub mod error;
pub mod experiment;
pub mod io;
pub mod jrc;
pub mod matkit;
pub mod metrics;
pub mod regularizers;
pub mod scalar;
pub mod simkit;

pub use error::{Error, Result};
pub use scalar::Real;

pub use admm::{AdmmConfig, AdmmState, StopReason, ZMode};
pub use metrics::IterationRecord;
pub use regularizers::{RegKind, RegularizerSpec};

/// `f64` complex matrix.
pub type Matrix = matkit::ComplexMatrix<f64>;
/// `f32` complex matrix.
pub type Matrix32 = matkit::ComplexMatrix<f32>;
pub type Complex = num_complex::Complex<f64>;

pub type Regularizer = regularizers::RegularizerSpec<f64>;
pub type Config = admm::AdmmConfig<f64>;
pub type State = admm::AdmmState<f64>;
pub type BlindInstance = admm::BlindInstance<f64>;
pub type JrcInstance = jrc::JrcInstance<f64>;
pub type JrcSolution = jrc::JrcSolution<f64>;
