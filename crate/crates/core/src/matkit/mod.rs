//! Dense complex linear algebra: the matrix type, Hermitian-PD solves,
//! seeded Gaussian sampling and singular-value diagnostics.

mod chol;
mod matrix;
mod rng;
mod svd;

pub use chol::{solve_left, solve_right, Cholesky};
pub(crate) use chol::{solve_left_for, solve_right_for};
pub use matrix::ComplexMatrix;
pub use rng::{randn_complex, sub_seed, GaussianSource};
pub use svd::{gram_condition, numerical_rank, singular_values};

use crate::scalar::Real;

/// Conjugate transpose.
pub fn hermitian<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.hermitian()
}

pub fn frob_norm_sq<T: Real>(a: &ComplexMatrix<T>) -> T {
    a.frob_norm_sq()
}

/// `Re tr(Aᴴ·B)`.
pub fn frob_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> crate::Result<T> {
    a.frob_inner(b)
}
