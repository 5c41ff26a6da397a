use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::admm::{AdmmConfig, StopReason};
use crate::error::{Error, Result};
use crate::io::{self, InstanceFile};
use crate::jrc::{solve_jrc, JrcInstance};
use crate::metrics::{self, EstimateError, IterationRecord, CSV_HEADER};
use crate::simkit::{self, JrcWeights, RadarScene};

/// Final-iterate numbers written to `summary_<seed>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub stop_reason: String,
    pub iterations: usize,
    pub final_residuals: [f64; 4],
    pub objective: f64,
    pub sinr_db: f64,
    pub spectral_eff_bits: f64,
    pub radar_mi_bits: f64,
    /// `Tr(X·Xᴴ)` of the reported signal estimate.
    pub tx_power: f64,
    pub channel_error: Option<EstimateError>,
    pub signal_error: Option<EstimateError>,
    pub config: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    /// Linear-interpolation quartiles; non-finite values are dropped.
    pub fn of(values: &[f64]) -> Option<Self> {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        let (q1, median, q3) = (q(0.25), q(0.5), q(0.75));
        Some(Self {
            median,
            q1,
            q3,
            iqr: q3 - q1,
            min: v[0],
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub seeds: Vec<u64>,
    pub runs_at_iteration_cap: usize,
    pub iterations: Option<Spread>,
    pub objective: Option<Spread>,
    pub sinr_db: Option<Spread>,
    pub spectral_eff_bits: Option<Spread>,
    pub radar_mi_bits: Option<Spread>,
    pub tx_power: Option<Spread>,
    pub channel_error_abs: Option<Spread>,
    pub signal_error_abs: Option<Spread>,
}

impl Aggregate {
    pub fn from_summaries(summaries: &[SeedSummary]) -> Self {
        let col = |f: &dyn Fn(&SeedSummary) -> Option<f64>| {
            let v: Vec<f64> = summaries.iter().filter_map(f).collect();
            Spread::of(&v)
        };
        Self {
            seeds: summaries.iter().map(|s| s.seed).collect(),
            runs_at_iteration_cap: summaries
                .iter()
                .filter(|s| s.stop_reason == StopReason::MaxIter.as_str())
                .count(),
            iterations: col(&|s| Some(s.iterations as f64)),
            objective: col(&|s| Some(s.objective)),
            sinr_db: col(&|s| Some(s.sinr_db)),
            spectral_eff_bits: col(&|s| Some(s.spectral_eff_bits)),
            radar_mi_bits: col(&|s| Some(s.radar_mi_bits)),
            tx_power: col(&|s| Some(s.tx_power)),
            channel_error_abs: col(&|s| s.channel_error.map(|e| e.absolute)),
            signal_error_abs: col(&|s| s.signal_error.map(|e| e.absolute)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub summaries: Vec<SeedSummary>,
    pub aggregate: Aggregate,
    pub output_dir: PathBuf,
}

pub fn trace_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("trace_{seed}.csv"))
}

pub fn summary_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("summary_{seed}.json"))
}

pub fn instance_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("instance_{seed}.json"))
}

/// Builds (or loads) the instance a seed solves, with the config's weights applied.
pub fn prepare_instance(config: &RunConfig, seed: u64) -> Result<InstanceFile> {
    let scenario = &config.scenario;
    let mut file = match &scenario.instance_path {
        Some(path) => io::load_instance(path)?,
        None => {
            let scene = RadarScene::draw(&scenario.scene, seed)?;
            let built = simkit::build_instance::<f64>(&scene, &scenario.sim, seed)?;
            let mut file = InstanceFile::new(built.instance);
            file.master_seed = Some(seed);
            file.sim = Some(scenario.sim.clone());
            file.scene = Some(scene);
            file.g_nominal = Some(built.g_nominal);
            file
        }
    };
    if let Some(w) = &config.solver.weights {
        w.apply(&mut file.instance);
    }
    file.instance.validate()?;
    Ok(file)
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Solves one seed, streaming the trace to `trace_<seed>.csv`. On
/// divergence the rows written so far stay on disk.
pub fn run_seed(config: &RunConfig, seed: u64) -> Result<SeedSummary> {
    let dir = &config.output_dir;
    let file = prepare_instance(config, seed)?;
    if config.save_instances {
        io::save_instance(&instance_path(dir, seed), &file)?;
    }
    let instance = &file.instance;
    let admm = AdmmConfig {
        init_seed: simkit::solver_seed(seed),
        ..config.solver.admm.clone()
    };

    let path = trace_path(dir, seed);
    let on_io = io_err(&path);
    let mut out = BufWriter::new(File::create(&path).map_err(&on_io)?);
    writeln!(out, "{CSV_HEADER}").map_err(&on_io)?;
    let mut write_failure = None;
    let solved = solve_jrc(instance, &admm, |rec: &IterationRecord| {
        if write_failure.is_some() {
            return;
        }
        let mut row = *rec;
        if !config.record_timing {
            row.elapsed_s = f64::NAN;
        }
        if let Err(e) = writeln!(out, "{}", row.to_csv_row()) {
            write_failure = Some(e);
        }
    });
    out.flush().map_err(&on_io)?;
    if let Some(e) = write_failure {
        return Err(on_io(e));
    }
    let solution = solved?;

    let last = solution.trace.last();
    let pick = |f: fn(&IterationRecord) -> f64| last.map_or(f64::NAN, f);
    let (channel_error, signal_error) = match &instance.ground_truth {
        Some(gt) => (
            Some(metrics::channel_error(&solution.g_est, &gt.g_true)?),
            Some(metrics::channel_error(&solution.x_est, &gt.x_true)?),
        ),
        None => (None, None),
    };
    let summary = SeedSummary {
        seed,
        stop_reason: solution.stop.as_str().to_string(),
        iterations: solution.trace.len(),
        final_residuals: [pick(|r| r.r1), pick(|r| r.r2), pick(|r| r.s1), pick(|r| r.s2)],
        objective: pick(|r| r.objective),
        sinr_db: pick(|r| r.sinr_db),
        spectral_eff_bits: pick(|r| r.spectral_eff_bits),
        radar_mi_bits: pick(|r| r.radar_mi_bits),
        tx_power: metrics::tx_power(&solution.x_est),
        channel_error,
        signal_error,
        config: config.clone(),
    };
    io::write_text(&summary_path(dir, seed), &io::to_json_string(&summary))?;
    Ok(summary)
}

/// Runs every seed (in parallel) and writes `aggregate.json`.
///
/// The first failing seed in config order determines the returned error;
/// the other seeds still finish and keep their outputs.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    std::fs::create_dir_all(&config.output_dir).map_err(io_err(&config.output_dir))?;
    let results: Vec<Result<SeedSummary>> = config.seeds.par_iter().map(|&s| run_seed(config, s)).collect();
    let summaries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let aggregate = Aggregate::from_summaries(&summaries);
    io::write_text(&config.output_dir.join("aggregate.json"), &io::to_json_string(&aggregate))?;
    Ok(RunReport {
        summaries,
        aggregate,
        output_dir: config.output_dir.clone(),
    })
}

/// Weights that a generated instance will carry under `config`.
pub fn effective_weights(config: &RunConfig) -> JrcWeights {
    config
        .solver
        .weights
        .unwrap_or_else(|| JrcWeights::for_sim(&config.scenario.sim))
}

/// Instance for a seed without touching the filesystem (generated scenarios only).
pub fn generated_instance(config: &RunConfig, seed: u64) -> Result<JrcInstance<f64>> {
    if config.scenario.instance_path.is_some() {
        return Err(Error::InvalidConfig("scenario uses a saved instance".into()));
    }
    Ok(prepare_instance(config, seed)?.instance)
}
