use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense complex matrix stored row-major.
///
/// Every constructor guarantees `rows, cols >= 1`, `data.len() == rows * cols`,
/// and that all entries are finite. Arithmetic that can leave the finite range
/// (overflow in a diverging solve) is detected by [`ComplexMatrix::is_finite`]
/// at the call sites that care.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                k / cols,
                k % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from `(re, im)` pairs given row by row.
    pub fn from_rows(rows: &[&[(f64, f64)]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&(re, im)| Complex::new(T::of(re), T::of(im))))
            .collect();
        Self::new(r, c, data)
    }

    /// Real-valued matrix from rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let pairs: Vec<Vec<(f64, f64)>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| (x, 0.0)).collect())
            .collect();
        let refs: Vec<&[(f64, f64)]> = pairs.iter().map(Vec::as_slice).collect();
        Self::from_rows(&refs)
    }

    /// Column vector.
    pub fn column(entries: Vec<Complex<T>>) -> Result<Self> {
        let n = entries.len();
        Self::new(n, 1, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data: out,
        }
    }

    /// Sum of squared entry magnitudes.
    pub fn frob_norm_sq(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
    }

    pub fn frob_norm(&self) -> T {
        self.frob_norm_sq().sqrt()
    }

    /// `Re tr(selfᴴ · other)`, the real inner product used by every Lagrangian term.
    pub fn frob_inner(&self, other: &Self) -> Result<T> {
        self.check_same_shape("frob_inner", other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + a.re * b.re + a.im * b.im))
    }

    pub fn check_same_shape(&self, op: &'static str, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    /// `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {:?} x {:?}",
            self.shape(),
            rhs.shape()
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self · rhsᴴ` without materializing the adjoint.
    pub fn mul_adj(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.cols,
            "mul_adj: {:?} x {:?}ᴴ",
            self.shape(),
            rhs.shape()
        );
        let mut out = Self::zeros(self.rows, rhs.rows);
        for i in 0..self.rows {
            let a = self.row(i);
            for j in 0..rhs.rows {
                let b = rhs.row(j);
                let mut acc = Complex::new(T::zero(), T::zero());
                for (x, y) in a.iter().zip(b) {
                    acc += x * y.conj();
                }
                out.data[i * rhs.rows + j] = acc;
            }
        }
        out
    }

    /// `selfᴴ · rhs` without materializing the adjoint.
    pub fn adj_mul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.rows, rhs.rows,
            "adj_mul: {:?}ᴴ x {:?}",
            self.shape(),
            rhs.shape()
        );
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let b = rhs.row(k);
            for i in 0..self.cols {
                let a = self.data[k * self.cols + i].conj();
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for (o, &y) in out.data[i * rhs.cols..(i + 1) * rhs.cols].iter_mut().zip(b) {
                    *o += a * y;
                }
            }
        }
        out
    }

    /// Adds `s` to every diagonal entry of a square matrix.
    pub fn add_diag(mut self, s: T) -> Self {
        assert!(self.is_square(), "add_diag on non-square {:?}", self.shape());
        for i in 0..self.rows {
            self.data[i * self.cols + i].re += s;
        }
        self
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: T, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "axpy shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// Returns the rows of `self` reordered so that row `i` of the result is row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        let mut data = Vec::with_capacity(self.data.len());
        for &p in perm {
            data.extend_from_slice(self.row(p));
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Converts the scalar type, e.g. `f64` data into an `f32` solve.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::of(z.re.as_f64()), U::of(z.im.as_f64())))
                .collect(),
        }
    }

    /// Largest entrywise difference magnitude.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! elementwise {
    ($tr:ident, $method:ident, $op:tt, $assign_tr:ident, $assign:ident) => {
        impl<T: Real> $tr<&ComplexMatrix<T>> for &ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;

            fn $method(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
                assert_eq!(
                    self.shape(),
                    rhs.shape(),
                    concat!(stringify!($method), " shape mismatch")
                );
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }

        impl<T: Real> $tr<ComplexMatrix<T>> for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;

            fn $method(mut self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
                self.$assign(&rhs);
                self
            }
        }

        impl<T: Real> $tr<&ComplexMatrix<T>> for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;

            fn $method(mut self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
                self.$assign(rhs);
                self
            }
        }

        impl<T: Real> $assign_tr<&ComplexMatrix<T>> for ComplexMatrix<T> {
            fn $assign(&mut self, rhs: &ComplexMatrix<T>) {
                assert_eq!(
                    self.shape(),
                    rhs.shape(),
                    concat!(stringify!($assign), " shape mismatch")
                );
                for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = *a $op b;
                }
            }
        }
    };
}

elementwise!(Add, add, +, AddAssign, add_assign);
elementwise!(Sub, sub, -, SubAssign, sub_assign);

impl<T: Real> Mul<T> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, s: T) -> ComplexMatrix<T> {
        self.scale(s)
    }
}

impl<T: Real> Mul<T> for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(mut self, s: T) -> ComplexMatrix<T> {
        for z in &mut self.data {
            *z *= s;
        }
        self
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "({:?}, {:?})  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
