use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Cholesky factor `A = L·Lᴴ` of a Hermitian positive-definite matrix.
///
/// Only the lower triangle of `A` is read. `L` has a real, strictly positive
/// diagonal.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: ComplexMatrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// Factors `a`; `context` names the caller in the error when the
    /// matrix is not numerically positive definite.
    pub fn factor(a: &ComplexMatrix<T>, context: &'static str) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::ShapeMismatch {
                op: "cholesky",
                left: a.shape(),
                right: (a.cols(), a.rows()),
            });
        }
        let n = a.rows();
        let scale = (0..n).fold(T::zero(), |m, i| m.max(a[(i, i)].re.abs()));
        let floor = T::epsilon() * T::of(n as f64) * scale;

        let mut l = ComplexMatrix::<T>::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !d.is_finite() || !floor.is_finite() {
                return Err(Error::NonFinite { context });
            }
            if !(d > floor) {
                return Err(Error::IllConditioned { context, pivot: j });
            }
            let djj = d.sqrt();
            l[(j, j)] = Complex::new(djj, T::zero());
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor_matrix(&self) -> &ComplexMatrix<T> {
        &self.l
    }

    /// Solves `A·X = B`.
    pub fn solve_left(&self, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let n = self.l.rows();
        assert_eq!(b.rows(), n, "solve_left: rhs has {} rows, system is {n}", b.rows());
        let m = b.cols();
        let l = &self.l;
        let mut x = b.clone();
        // L·W = B, forward.
        for i in 0..n {
            for k in 0..i {
                let lik = l[(i, k)];
                if lik.re == T::zero() && lik.im == T::zero() {
                    continue;
                }
                let (head, tail) = x.as_mut_slice().split_at_mut(i * m);
                let src = &head[k * m..(k + 1) * m];
                for (dst, &s) in tail[..m].iter_mut().zip(src) {
                    *dst -= lik * s;
                }
            }
            let inv = T::one() / l[(i, i)].re;
            for v in x.row_mut(i) {
                *v *= inv;
            }
        }
        // Lᴴ·X = W, backward.
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let lki = l[(k, i)].conj();
                if lki.re == T::zero() && lki.im == T::zero() {
                    continue;
                }
                let (head, tail) = x.as_mut_slice().split_at_mut(k * m);
                let src = &tail[..m];
                for (dst, &s) in head[i * m..(i + 1) * m].iter_mut().zip(src) {
                    *dst -= lki * s;
                }
            }
            let inv = T::one() / l[(i, i)].re;
            for v in x.row_mut(i) {
                *v *= inv;
            }
        }
        x
    }

    /// Solves `X·A = B` row by row (`X·L·Lᴴ = B`).
    pub fn solve_right(&self, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let n = self.l.rows();
        assert_eq!(b.cols(), n, "solve_right: rhs has {} cols, system is {n}", b.cols());
        let l = &self.l;
        let mut x = b.clone();
        for r in 0..b.rows() {
            let row = x.row_mut(r);
            // W·Lᴴ = B: W[j] = (B[j] - Σ_{k<j} W[k]·conj(L[j,k])) / L[j,j]
            for j in 0..n {
                let mut s = row[j];
                for k in 0..j {
                    s -= row[k] * l[(j, k)].conj();
                }
                row[j] = s / l[(j, j)].re;
            }
            // X·L = W: X[j] = (W[j] - Σ_{k>j} X[k]·L[k,j]) / L[j,j]
            for j in (0..n).rev() {
                let mut s = row[j];
                for k in (j + 1)..n {
                    s -= row[k] * l[(k, j)];
                }
                row[j] = s / l[(j, j)].re;
            }
        }
        x
    }

    /// `ln det A = 2·Σ ln L_ii`.
    pub fn ln_det(&self) -> T {
        let two = T::one() + T::one();
        (0..self.l.rows()).fold(T::zero(), |acc, i| acc + self.l[(i, i)].re.ln()) * two
    }
}

/// `A⁻¹·B` for Hermitian positive-definite `A`, via Cholesky.
pub fn solve_left<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    solve_left_for(a, b, "linear solve")
}

/// `B·A⁻¹` for Hermitian positive-definite `A`, via Cholesky.
pub fn solve_right<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    solve_right_for(a, b, "linear solve")
}

pub(crate) fn solve_left_for<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    context: &'static str,
) -> Result<ComplexMatrix<T>> {
    if b.rows() != a.rows() {
        return Err(Error::ShapeMismatch {
            op: "solve_left",
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(Cholesky::factor(a, context)?.solve_left(b))
}

pub(crate) fn solve_right_for<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    context: &'static str,
) -> Result<ComplexMatrix<T>> {
    if b.cols() != a.rows() {
        return Err(Error::ShapeMismatch {
            op: "solve_right",
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(Cholesky::factor(a, context)?.solve_right(b))
}
