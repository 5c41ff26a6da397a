//! mmWave JRC scenario generator.
//!
//! A uniform linear array with `n_tx` transmit and `n_rx_radar` receive
//! elements observes point targets; the nominal radar channel is the sum of
//! rcs-weighted receive/transmit steering outer products built from
//! per-element-perturbed steering vectors. The true channel adds a bounded
//! random deviation `δG` to the nominal one. The communication channel is
//! i.i.d. complex Gaussian and the transmit block is a power-scaled
//! Gaussian draw. Observations add circular complex AWGN.
//!
//! All randomness derives from one master seed through [`sub_seed`] with
//! the stream identifiers in [`streams`], so an instance can be rebuilt
//! bit-exactly from `(SimConfig, SceneConfig, seed)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jrc::{GroundTruth, JrcInstance};
use crate::matkit::{sub_seed, ComplexMatrix, GaussianSource};
use crate::regularizers::RegularizerSpec;
use crate::scalar::Real;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Sub-seed stream identifiers.
pub mod streams {
    pub const SCENE_ANGLES: u64 = 1;
    pub const SCENE_RCS: u64 = 2;
    pub const TX_IMPERFECTION: u64 = 3;
    pub const RX_IMPERFECTION: u64 = 4;
    pub const NOMINAL_GAUSSIAN: u64 = 5;
    pub const DELTA_G: u64 = 6;
    pub const COMM_CHANNEL: u64 = 7;
    pub const SIGNAL: u64 = 8;
    pub const RADAR_NOISE: u64 = 9;
    pub const COMM_NOISE: u64 = 10;
    pub const SOLVER_INIT: u64 = 11;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Imperfection {
    /// Std of the multiplicative amplitude error `a_k`.
    pub amplitude_std: f64,
    /// Std of the phase error `φ_k`, radians.
    pub phase_std_rad: f64,
}

impl Default for Imperfection {
    fn default() -> Self {
        Self {
            amplitude_std: 0.05,
            phase_std_rad: 0.05,
        }
    }
}

impl Imperfection {
    pub const NONE: Self = Self {
        amplitude_std: 0.0,
        phase_std_rad: 0.0,
    };

    fn is_zero(&self) -> bool {
        self.amplitude_std == 0.0 && self.phase_std_rad == 0.0
    }
}

/// Scene parameters before the random draw; angles and RCS may be pinned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub n_tx: usize,
    pub n_rx_radar: usize,
    pub carrier_hz: f64,
    pub wavelength_m: f64,
    pub n_targets: usize,
    /// Half-width of the field of view; angles are uniform on `(−fov, fov)`.
    pub fov_deg: f64,
    pub element_spacing_in_wavelengths: f64,
    pub imperfection: Imperfection,
    pub angles_deg: Option<Vec<f64>>,
    /// `[re, im]` per target.
    pub rcs: Option<Vec<[f64; 2]>>,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            n_tx: 8,
            n_rx_radar: 4,
            carrier_hz: 28e9,
            wavelength_m: 0.011,
            n_targets: 4,
            fov_deg: 60.0,
            element_spacing_in_wavelengths: 0.5,
            imperfection: Imperfection::default(),
            angles_deg: None,
            rcs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarScene {
    pub n_tx: usize,
    pub n_rx_radar: usize,
    pub carrier_hz: f64,
    pub wavelength_m: f64,
    pub angles_rad: Vec<f64>,
    /// `[re, im]` per target.
    pub rcs: Vec<[f64; 2]>,
    pub element_spacing_in_wavelengths: f64,
    pub imperfection: Imperfection,
}

impl RadarScene {
    pub fn n_targets(&self) -> usize {
        self.angles_rad.len()
    }

    /// Draws angles and RCS not pinned by `config` from the master seed.
    pub fn draw(config: &SceneConfig, master_seed: u64) -> Result<Self> {
        let angles_rad = match &config.angles_deg {
            Some(a) => a.iter().map(|d| d.to_radians()).collect(),
            None => {
                let mut src = GaussianSource::new(sub_seed(master_seed, streams::SCENE_ANGLES));
                let half = config.fov_deg.to_radians();
                (0..config.n_targets)
                    .map(|_| -half + 2.0 * half * src.uniform())
                    .collect()
            }
        };
        let rcs = match &config.rcs {
            Some(r) => r.clone(),
            None => {
                let mut src = GaussianSource::new(sub_seed(master_seed, streams::SCENE_RCS));
                (0..config.n_targets)
                    .map(|_| {
                        let z = src.complex_normal();
                        [z.re, z.im]
                    })
                    .collect()
            }
        };
        let scene = Self {
            n_tx: config.n_tx,
            n_rx_radar: config.n_rx_radar,
            carrier_hz: config.carrier_hz,
            wavelength_m: config.wavelength_m,
            angles_rad,
            rcs,
            element_spacing_in_wavelengths: config.element_spacing_in_wavelengths,
            imperfection: config.imperfection,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(format!("radar scene: {msg}")));
        if self.n_tx == 0 || self.n_rx_radar == 0 {
            return fail("array sizes must be positive".into());
        }
        if self.angles_rad.len() != self.rcs.len() {
            return fail(format!(
                "{} angles but {} rcs coefficients",
                self.angles_rad.len(),
                self.rcs.len()
            ));
        }
        let limit = std::f64::consts::FRAC_PI_2;
        if let Some(a) = self.angles_rad.iter().find(|a| !(a.abs() < limit)) {
            return fail(format!("angle {a} rad outside (−π/2, π/2)"));
        }
        if !(self.carrier_hz > 0.0 && self.wavelength_m > 0.0) {
            return fail("carrier and wavelength must be positive".into());
        }
        let implied = SPEED_OF_LIGHT / self.carrier_hz;
        if ((self.wavelength_m - implied) / implied).abs() > 0.05 {
            return fail(format!(
                "wavelength {} m inconsistent with carrier (c/f = {implied:.5} m)",
                self.wavelength_m
            ));
        }
        if !(self.element_spacing_in_wavelengths > 0.0) {
            return fail("element spacing must be positive".into());
        }
        let imp = self.imperfection;
        if !(imp.amplitude_std >= 0.0 && imp.phase_std_rad >= 0.0) {
            return fail("imperfection scales must be nonnegative".into());
        }
        Ok(())
    }
}

/// Where the nominal radar channel comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NominalSource {
    /// Steering-vector target model.
    Scene,
    /// i.i.d. unit-variance complex Gaussian entries.
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_comm_rx: usize,
    pub t_symbols: usize,
    pub noise_var: f64,
    pub power_budget: f64,
    /// Transmit power of the true signal as a fraction of the budget.
    pub signal_power_fraction: f64,
    pub delta_g_bound_sq: f64,
    pub nominal: NominalSource,
    /// Give the solver `G₀` and estimate only `ΔG`.
    pub estimate_delta: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_comm_rx: 2,
            t_symbols: 16,
            noise_var: 1e-3,
            power_budget: 10.0,
            signal_power_fraction: 0.75,
            delta_g_bound_sq: 1e-2,
            nominal: NominalSource::Scene,
            estimate_delta: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(format!("simulation: {msg}")));
        if self.n_comm_rx == 0 || self.t_symbols == 0 {
            return fail("n_comm_rx and t_symbols must be positive");
        }
        if !(self.noise_var >= 0.0 && self.noise_var.is_finite()) {
            return fail("noise_var must be finite and nonnegative");
        }
        if !(self.power_budget > 0.0 && self.power_budget.is_finite()) {
            return fail("power_budget must be positive");
        }
        if !(self.signal_power_fraction > 0.0 && self.signal_power_fraction <= 1.0) {
            return fail("signal_power_fraction must lie in (0, 1]");
        }
        if !(self.delta_g_bound_sq >= 0.0 && self.delta_g_bound_sq.is_finite()) {
            return fail("delta_g_bound_sq must be finite and nonnegative");
        }
        Ok(())
    }
}

/// Fidelity weights and regularizers applied to a generated instance.
///
/// The default is the reference recipe: unit fidelity weights, ridge weight
/// 0.01 on the channel variable and the transmit power budget enforced as a
/// constraint on the signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JrcWeights {
    pub lambda_radar: f64,
    pub lambda_comm: f64,
    pub reg_channel: RegularizerSpec<f64>,
    pub reg_signal: RegularizerSpec<f64>,
}

impl Default for JrcWeights {
    fn default() -> Self {
        Self::for_sim(&SimConfig::default())
    }
}

impl JrcWeights {
    pub fn for_sim(sim: &SimConfig) -> Self {
        Self {
            lambda_radar: 1.0,
            lambda_comm: 1.0,
            reg_channel: RegularizerSpec::squared_frobenius(0.01),
            reg_signal: RegularizerSpec::power_ball(sim.power_budget),
        }
    }

    pub fn apply<T: Real>(&self, instance: &mut JrcInstance<T>) {
        instance.lambda_radar = T::of(self.lambda_radar);
        instance.lambda_comm = T::of(self.lambda_comm);
        instance.reg_channel = self.reg_channel.cast();
        instance.reg_signal = self.reg_signal.cast();
    }
}

/// Steering vector of an `n_elems` ULA toward `angle` (radians from broadside).
///
/// Ideal entry `k` is `exp(i·2π·spacing·k·sin θ)`; each element then gets a
/// fixed `(1 + a_k)·exp(i·φ_k)` error drawn from `seed`.
pub fn steering_vector<T: Real>(
    n_elems: usize,
    angle: f64,
    spacing: f64,
    imperfection: Imperfection,
    seed: u64,
) -> ComplexMatrix<T> {
    let phase_step = 2.0 * std::f64::consts::PI * spacing * angle.sin();
    let mut entries: Vec<Complex<f64>> = (0..n_elems)
        .map(|k| Complex::from_polar(1.0, phase_step * k as f64))
        .collect();
    if !imperfection.is_zero() {
        let mut src = GaussianSource::new(seed);
        let amps: Vec<f64> = (0..n_elems).map(|_| imperfection.amplitude_std * src.normal()).collect();
        let phases: Vec<f64> = (0..n_elems).map(|_| imperfection.phase_std_rad * src.normal()).collect();
        for ((e, a), p) in entries.iter_mut().zip(amps).zip(phases) {
            *e *= Complex::from_polar(1.0 + a, p);
        }
    }
    ComplexMatrix::from_fn(n_elems, 1, |k, _| Complex::new(T::of(entries[k].re), T::of(entries[k].im)))
}

/// `G₀ = Σ_k rcs_k · a_rx(θ_k) · a_tx(θ_k)ᴴ`; the array errors are fixed
/// per element, shared by all targets.
pub fn gen_radar_channel<T: Real>(scene: &RadarScene, seed: u64) -> ComplexMatrix<T> {
    let tx_seed = sub_seed(seed, streams::TX_IMPERFECTION);
    let rx_seed = sub_seed(seed, streams::RX_IMPERFECTION);
    let d = scene.element_spacing_in_wavelengths;
    let mut g = ComplexMatrix::<T>::zeros(scene.n_rx_radar, scene.n_tx);
    for (&theta, rcs) in scene.angles_rad.iter().zip(&scene.rcs) {
        let a_tx = steering_vector::<T>(scene.n_tx, theta, d, scene.imperfection, tx_seed);
        let a_rx = steering_vector::<T>(scene.n_rx_radar, theta, d, scene.imperfection, rx_seed);
        let beta = Complex::new(T::of(rcs[0]), T::of(rcs[1]));
        let outer = a_rx.mul_adj(&a_tx).map(|z| z * beta);
        g += &outer;
    }
    g
}

/// Adds a random deviation with `‖δG‖_F² = u·bound_sq`, `u ~ U(0, 1]`.
pub fn perturb_channel<T: Real>(
    g0: &ComplexMatrix<T>,
    bound_sq: f64,
    seed: u64,
) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    if bound_sq == 0.0 {
        return (g0.clone(), ComplexMatrix::zeros(g0.rows(), g0.cols()));
    }
    let mut src = GaussianSource::new(seed);
    let raw = src.complex_matrix::<T>(g0.rows(), g0.cols());
    let target = src.uniform_open_zero() * bound_sq;
    let mut delta = raw.scale(T::of((target / raw.frob_norm_sq().as_f64()).sqrt()));
    let bound = T::of(bound_sq);
    while delta.frob_norm_sq() > bound {
        delta = delta.scale(T::one() - T::epsilon());
    }
    (g0 + &delta, delta)
}

/// i.i.d. unit-variance complex Gaussian channel.
pub fn gen_comm_channel<T: Real>(n_rx: usize, n_tx: usize, seed: u64) -> ComplexMatrix<T> {
    GaussianSource::new(seed).complex_matrix(n_rx, n_tx)
}

/// Gaussian block scaled so `Tr(X·Xᴴ) = power_fraction · power_budget`.
pub fn gen_signal<T: Real>(n_tx: usize, t: usize, power_budget: f64, power_fraction: f64, seed: u64) -> ComplexMatrix<T> {
    let raw = GaussianSource::new(seed).complex_matrix::<T>(n_tx, t);
    let target = power_fraction * power_budget;
    raw.scale(T::of((target / raw.frob_norm_sq().as_f64()).sqrt()))
}

/// `channel·X + N` with per-entry noise variance `noise_var`.
pub fn observe<T: Real>(channel: &ComplexMatrix<T>, x: &ComplexMatrix<T>, noise_var: f64, seed: u64) -> ComplexMatrix<T> {
    let clean = channel.matmul(x);
    if noise_var == 0.0 {
        return clean;
    }
    let noise = GaussianSource::new(seed).complex_matrix::<T>(clean.rows(), clean.cols());
    let mut y = clean;
    y.axpy(T::of(noise_var.sqrt()), &noise);
    y
}

/// A generated instance with the pieces the solver does not see.
#[derive(Debug, Clone)]
pub struct Scenario<T> {
    pub instance: JrcInstance<T>,
    pub g_nominal: ComplexMatrix<T>,
    pub delta_g: ComplexMatrix<T>,
    pub master_seed: u64,
}

/// Assembles a full JRC instance from a drawn scene.
pub fn build_instance<T: Real>(scene: &RadarScene, sim: &SimConfig, master_seed: u64) -> Result<Scenario<T>> {
    scene.validate()?;
    sim.validate()?;
    let seed = |stream| sub_seed(master_seed, stream);

    let g_nominal = match sim.nominal {
        NominalSource::Scene => gen_radar_channel::<T>(scene, master_seed),
        NominalSource::Gaussian => {
            GaussianSource::new(seed(streams::NOMINAL_GAUSSIAN)).complex_matrix(scene.n_rx_radar, scene.n_tx)
        }
    };
    let (g_true, delta_g) = perturb_channel(&g_nominal, sim.delta_g_bound_sq, seed(streams::DELTA_G));
    let h = gen_comm_channel::<T>(sim.n_comm_rx, scene.n_tx, seed(streams::COMM_CHANNEL));
    let x = gen_signal::<T>(
        scene.n_tx,
        sim.t_symbols,
        sim.power_budget,
        sim.signal_power_fraction,
        seed(streams::SIGNAL),
    );
    let y_radar = observe(&g_true, &x, sim.noise_var, seed(streams::RADAR_NOISE));
    let y_comm = observe(&h, &x, sim.noise_var, seed(streams::COMM_NOISE));

    let mut instance = JrcInstance {
        y_radar,
        y_comm,
        h_comm: h,
        g_nominal: sim.estimate_delta.then(|| g_nominal.clone()),
        lambda_radar: T::one(),
        lambda_comm: T::one(),
        reg_channel: RegularizerSpec::zero(),
        reg_signal: RegularizerSpec::zero(),
        noise_var: T::of(sim.noise_var),
        channel_radius: sim.estimate_delta.then(|| T::of(sim.delta_g_bound_sq.sqrt())),
        ground_truth: Some(GroundTruth { g_true, x_true: x }),
    };
    JrcWeights::for_sim(sim).apply(&mut instance);
    Ok(Scenario {
        instance,
        g_nominal,
        delta_g,
        master_seed,
    })
}

/// Draws the scene and builds the instance in one step.
pub fn build_from_seed<T: Real>(scene: &SceneConfig, sim: &SimConfig, master_seed: u64) -> Result<Scenario<T>> {
    let scene = RadarScene::draw(scene, master_seed)?;
    build_instance(&scene, sim, master_seed)
}

/// Solver initialization seed for a master seed.
pub fn solver_seed(master_seed: u64) -> u64 {
    sub_seed(master_seed, streams::SOLVER_INIT)
}
