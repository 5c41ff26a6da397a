use num_complex::Complex;

use super::ComplexMatrix;
use crate::scalar::Real;

/// Singular values in descending order, via one-sided (Hestenes) Jacobi.
///
/// Returns `min(rows, cols)` values. Accurate to a few ulps of the largest
/// singular value, which is what rank and conditioning diagnostics need.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Vec<T> {
    // Orthogonalize the columns of whichever orientation has fewer of them.
    let m = if a.cols() > a.rows() { a.hermitian() } else { a.clone() };
    let (rows, cols) = m.shape();
    let mut columns: Vec<Vec<Complex<T>>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();

    let tol = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&columns[p], &columns[q]);
                    let alpha = cp.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
                    let beta = cq.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
                    let gamma = cp
                        .iter()
                        .zip(cq)
                        .fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| s + x.conj() * y);
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let two = T::one() + T::one();
                let zeta = (beta - alpha) / (two * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = columns.split_at_mut(q);
                let (cp, cq) = (&mut lo[p], &mut hi[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yq = *y * phase.conj();
                    let xn = *x * c - yq * s;
                    let yn = *x * s + yq * c;
                    *x = xn;
                    *y = yn;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<T> = columns
        .iter()
        .map(|col| col.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    sv.truncate(rows.min(cols));
    sv
}

/// Numerical rank with relative threshold `rel_tol · σ_max`.
pub fn numerical_rank<T: Real>(a: &ComplexMatrix<T>, rel_tol: T) -> usize {
    let sv = singular_values(a);
    let top = sv.first().copied().unwrap_or_else(T::zero);
    if top == T::zero() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Condition number of the Gram matrix `Aᴴ·A` (`cols × cols`).
///
/// Infinite when `A` has fewer rows than columns or a zero singular value.
pub fn gram_condition<T: Real>(a: &ComplexMatrix<T>) -> T {
    if a.rows() < a.cols() {
        return T::infinity();
    }
    let sv = singular_values(a);
    let (hi, lo) = (sv[0], sv[sv.len() - 1]);
    if lo == T::zero() {
        T::infinity()
    } else {
        (hi / lo) * (hi / lo)
    }
}
