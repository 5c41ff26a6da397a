//! Independent reference implementations shared by the integration tests.
//! Everything here works on plain `Vec<Vec<Complex>>` scalar loops so it
//! never routes through the library's matrix kernels.
#![allow(dead_code)]

use dualblind::matkit::{randn_complex, ComplexMatrix, GaussianSource};
use dualblind::Complex;

pub type M = ComplexMatrix<f64>;
pub type Grid = Vec<Vec<Complex>>;

pub fn to_grid(a: &M) -> Grid {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

pub fn from_grid(g: &Grid) -> M {
    M::from_fn(g.len(), g[0].len(), |i, j| g[i][j])
}

pub fn mul(a: &Grid, b: &Grid) -> Grid {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![Complex::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s = Complex::new(0.0, 0.0);
            for l in 0..k {
                s += a[i][l] * b[l][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn sub(a: &Grid, b: &Grid) -> Grid {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn add(a: &Grid, b: &Grid) -> Grid {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn norm_sq(a: &Grid) -> f64 {
    a.iter().flatten().map(|z| z.re * z.re + z.im * z.im).sum()
}

/// `Re tr(AᴴB)`.
pub fn inner(a: &Grid, b: &Grid) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// `(c/2)‖Y − A·B‖²` over plain grids.
pub fn fit(c: f64, y: &Grid, a: &Grid, b: &Grid) -> f64 {
    0.5 * c * norm_sq(&sub(y, &mul(a, b)))
}

/// `⟨μ, V − Z⟩ + (ρ/2)‖V − Z‖²`.
pub fn coupling(v: &Grid, z: &Grid, mu: &Grid, rho: f64) -> f64 {
    let gap = sub(v, z);
    inner(mu, &gap) + 0.5 * rho * norm_sq(&gap)
}

/// Norm of the central-difference gradient of `f` at `x` over all real and
/// imaginary coordinates.
pub fn fd_grad_norm(f: &dyn Fn(&Grid) -> f64, x: &Grid, h: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..x.len() {
        for j in 0..x[0].len() {
            for dir in [Complex::new(h, 0.0), Complex::new(0.0, h)] {
                let mut plus = x.clone();
                let mut minus = x.clone();
                plus[i][j] += dir;
                minus[i][j] -= dir;
                let d = (f(&plus) - f(&minus)) / (2.0 * h);
                total += d * d;
            }
        }
    }
    total.sqrt()
}

pub fn rng(seed: u64) -> GaussianSource {
    GaussianSource::new(seed)
}

/// Uniform integer in `1..=max`.
pub fn dims(r: &mut GaussianSource, max: usize) -> usize {
    1 + ((r.uniform() * max as f64) as usize).min(max - 1)
}

pub fn randn(rows: usize, cols: usize, seed: u64) -> M {
    randn_complex(rows, cols, seed)
}

/// `Q` with orthonormal columns from Gram–Schmidt on a Gaussian draw.
pub fn random_unitary(n: usize, seed: u64) -> M {
    let a = to_grid(&randn(n, n, seed));
    let mut cols: Vec<Vec<Complex>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<Complex> = a.iter().map(|row| row[j]).collect();
        for q in &cols {
            let proj: Complex = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / nrm).collect());
    }
    M::from_fn(n, n, |i, j| cols[j][i])
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Minimizer of `f` over the grid `{(i + j·i)·step : |i|, |j| ≤ reach/step}`.
pub fn grid_argmin(f: impl Fn(Complex) -> f64, reach: f64, step: f64) -> Complex {
    let n = (reach / step).ceil() as i64;
    let mut best = (f64::INFINITY, Complex::new(0.0, 0.0));
    for i in -n..=n {
        for j in -n..=n {
            let u = Complex::new(i as f64 * step, j as f64 * step);
            let v = f(u);
            if v < best.0 {
                best = (v, u);
            }
        }
    }
    best.1
}

pub fn scalar(z: Complex) -> M {
    M::from_fn(1, 1, |_, _| z)
}
