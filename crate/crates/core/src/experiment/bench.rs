use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::admm::AdmmConfig;
use crate::error::{Error, Result};
use crate::io;
use crate::jrc::{solve_jrc, JrcInstance};
use crate::matkit::{randn_complex, sub_seed};
use crate::metrics::fmt_sig9;
use crate::regularizers::RegularizerSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// Array sizes `N` (`N_t = N_r = N`), strictly ascending.
    pub sizes: Vec<usize>,
    /// Block length `T = round(t_factor · N)`.
    pub t_factor: f64,
    pub reps: usize,
    /// Iterations timed per repetition.
    pub iters: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![32, 64, 128, 256],
            t_factor: 1.0,
            reps: 3,
            iters: 3,
            seed: 0,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidConfig(format!("bench: {m}")));
        if self.sizes.is_empty() || self.sizes[0] == 0 {
            return fail("sizes must be nonempty and positive");
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return fail("sizes must be strictly ascending");
        }
        if self.reps < 3 {
            return fail("reps must be at least 3");
        }
        if self.iters == 0 {
            return fail("iters must be positive");
        }
        if !(self.t_factor > 0.0 && self.t_factor.is_finite()) {
            return fail("t_factor must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub t: usize,
    pub median_iter_s: f64,
    pub min_iter_s: f64,
    pub max_iter_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `ln(median time)` against `ln N`.
    pub slope: f64,
    /// Median time never decreases as `N` grows.
    pub monotone: bool,
}

pub const BENCH_CSV_HEADER: &str = "n,t,median_iter_s,min_iter_s,max_iter_s";

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{BENCH_CSV_HEADER}\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n,
                r.t,
                fmt_sig9(r.median_iter_s),
                fmt_sig9(r.min_iter_s),
                fmt_sig9(r.max_iter_s)
            ));
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        io::write_text(&dir.join("bench.csv"), &self.to_csv())?;
        io::write_text(&dir.join("bench.json"), &io::to_json_string(self))
    }
}

/// Dense JRC instance with `N` transmit and radar receive elements,
/// `max(1, N/4)` comm receivers and `T` symbols.
pub fn bench_instance(n: usize, t: usize, seed: u64) -> JrcInstance<f64> {
    let n_comm = (n / 4).max(1);
    let g = randn_complex::<f64>(n, n, sub_seed(seed, 1));
    let h = randn_complex::<f64>(n_comm, n, sub_seed(seed, 2));
    let x = randn_complex::<f64>(n, t, sub_seed(seed, 3));
    JrcInstance {
        y_radar: g.matmul(&x),
        y_comm: h.matmul(&x),
        h_comm: h,
        g_nominal: None,
        lambda_radar: 1.0,
        lambda_comm: 1.0,
        reg_channel: RegularizerSpec::squared_frobenius(0.01),
        reg_signal: RegularizerSpec::squared_frobenius(0.01),
        noise_var: 1e-3,
        channel_radius: None,
        ground_truth: None,
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Times full solver iterations (updates plus per-iteration metrics) at each size.
pub fn bench(config: &BenchConfig, mut progress: impl FnMut(&BenchRow)) -> Result<BenchReport> {
    config.validate()?;
    let admm = AdmmConfig {
        max_iter: config.iters,
        tol: f64::MIN_POSITIVE,
        ..AdmmConfig::default()
    };
    let mut rows = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        let t = ((config.t_factor * n as f64).round() as usize).max(1);
        let instance = bench_instance(n, t, config.seed);
        let mut times = Vec::with_capacity(config.reps);
        for _ in 0..config.reps {
            let start = Instant::now();
            let sol = solve_jrc(&instance, &admm, |_| {})?;
            times.push(start.elapsed().as_secs_f64() / sol.trace.len() as f64);
        }
        times.sort_by(f64::total_cmp);
        let row = BenchRow {
            n,
            t,
            median_iter_s: times[times.len() / 2],
            min_iter_s: times[0],
            max_iter_s: times[times.len() - 1],
        };
        progress(&row);
        rows.push(row);
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_iter_s.ln()).collect();
    let slope = if rows.len() >= 2 { fit_slope(&xs, &ys) } else { f64::NAN };
    let monotone = rows.windows(2).all(|w| w[1].median_iter_s >= w[0].median_iter_s);
    Ok(BenchReport {
        config: config.clone(),
        rows,
        slope,
        monotone,
    })
}
