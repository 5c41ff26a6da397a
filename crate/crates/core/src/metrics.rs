//! Link-quality metrics and the per-iteration record.
//!
//! SINR, spectral efficiency and radar mutual information use the standard
//! Gaussian-channel forms:
//!
//! * `SINR = 10·log10(‖H·X‖² / ‖Y − H·X‖²)`, pooled over all antennas;
//! * `SE = log2 det(I + H·Q·Hᴴ / σ²)` with `Q = X·Xᴴ / T`;
//! * radar MI is the same expression with the radar channel `G` in place of `H`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkit::{Cholesky, ComplexMatrix};
use crate::scalar::Real;

/// CSV column order for [`IterationRecord`].
pub const CSV_HEADER: &str =
    "iter,r1,r2,s1,s2,objective,sinr_db,spectral_eff_bits,radar_mi_bits,tx_power,elapsed_s";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub r1: f64,
    pub r2: f64,
    pub s1: f64,
    pub s2: f64,
    pub objective: f64,
    pub sinr_db: f64,
    pub spectral_eff_bits: f64,
    pub radar_mi_bits: f64,
    pub tx_power: f64,
    pub elapsed_s: f64,
}

impl IterationRecord {
    /// One CSV line (no newline), floats with 9 significant digits.
    pub fn to_csv_row(&self) -> String {
        let fields = [
            self.r1,
            self.r2,
            self.s1,
            self.s2,
            self.objective,
            self.sinr_db,
            self.spectral_eff_bits,
            self.radar_mi_bits,
            self.tx_power,
            self.elapsed_s,
        ];
        let mut line = self.iter.to_string();
        for v in fields {
            line.push(',');
            line.push_str(&fmt_sig9(v));
        }
        line
    }

    /// Equality on everything except wall-clock time.
    pub fn same_numbers(&self, other: &Self) -> bool {
        let numbers = |r: &Self| {
            [
                r.r1,
                r.r2,
                r.s1,
                r.s2,
                r.objective,
                r.sinr_db,
                r.spectral_eff_bits,
                r.radar_mi_bits,
                r.tx_power,
            ]
        };
        self.iter == other.iter
            && numbers(self)
                .iter()
                .zip(&numbers(other))
                .all(|(x, y)| x.to_bits() == y.to_bits())
    }
}

/// Scientific notation with 9 significant digits; `inf`, `-inf`, `NaN` spelled out.
pub fn fmt_sig9(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkMetrics {
    pub sinr_db: f64,
    pub spectral_eff_bits: f64,
    pub radar_mi_bits: f64,
}

/// Pooled SINR in dB of the model `H·X` against observations `y_comm`.
pub fn comm_sinr_db<T: Real>(
    y_comm: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    x: &ComplexMatrix<T>,
) -> Result<T> {
    let model = h.matmul(x);
    y_comm.check_same_shape("comm_sinr_db", &model)?;
    let signal = model.frob_norm_sq();
    let residual = (y_comm - &model).frob_norm_sq();
    match (signal == T::zero(), residual == T::zero()) {
        (true, true) => Err(Error::UndefinedMetric("SINR of zero signal with zero residual")),
        (false, true) => Ok(T::infinity()),
        (true, false) => Ok(T::neg_infinity()),
        (false, false) => Ok(T::of(10.0) * (signal / residual).log10()),
    }
}

/// `log2 det(I + M·Mᴴ / (T·σ²))` for `M = channel·X`.
fn gaussian_capacity<T: Real>(channel: &ComplexMatrix<T>, x: &ComplexMatrix<T>, noise_var: T, t: usize) -> Result<T> {
    if !(noise_var > T::zero()) {
        return Err(Error::UndefinedMetric("noise variance must be positive"));
    }
    if t == 0 {
        return Err(Error::UndefinedMetric("symbol count must be positive"));
    }
    let m = channel.matmul(x);
    let gram = m.mul_adj(&m).scale(T::one() / (T::of(t as f64) * noise_var)).add_diag(T::one());
    let chol = Cholesky::factor(&gram, "log-det")?;
    Ok((chol.ln_det() / T::LN_2()).max(T::zero()))
}

/// Spectral efficiency in bits/s/Hz.
pub fn spectral_efficiency<T: Real>(h: &ComplexMatrix<T>, x: &ComplexMatrix<T>, noise_var: T) -> Result<T> {
    gaussian_capacity(h, x, noise_var, x.cols())
}

/// Spectral efficiency with an explicit covariance normalization `t`.
pub fn spectral_efficiency_t<T: Real>(h: &ComplexMatrix<T>, x: &ComplexMatrix<T>, noise_var: T, t: usize) -> Result<T> {
    gaussian_capacity(h, x, noise_var, t)
}

/// Radar mutual information in bits per channel use.
pub fn radar_mutual_information<T: Real>(g: &ComplexMatrix<T>, x: &ComplexMatrix<T>, noise_var: T) -> Result<T> {
    gaussian_capacity(g, x, noise_var, x.cols())
}

pub fn radar_mutual_information_t<T: Real>(g: &ComplexMatrix<T>, x: &ComplexMatrix<T>, noise_var: T, t: usize) -> Result<T> {
    gaussian_capacity(g, x, noise_var, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateError {
    pub absolute: f64,
    /// `absolute / ‖truth‖_F`; infinite for a zero truth with nonzero error.
    pub relative: f64,
}

/// `‖estimate − truth‖_F` and its relative form.
pub fn channel_error<T: Real>(estimate: &ComplexMatrix<T>, truth: &ComplexMatrix<T>) -> Result<EstimateError> {
    estimate.check_same_shape("channel_error", truth)?;
    let absolute = (estimate - truth).frob_norm().as_f64();
    let scale = truth.frob_norm().as_f64();
    let relative = if scale > 0.0 {
        absolute / scale
    } else if absolute == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(EstimateError { absolute, relative })
}

/// `Tr(X·Xᴴ) = ‖X‖_F²`.
pub fn tx_power<T: Real>(x: &ComplexMatrix<T>) -> T {
    x.frob_norm_sq()
}
