//! Joint radar-communication specialization.
//!
//! One transmit signal `X` (`N_t × T`) illuminates the radar channel `G`
//! (`N_r × N_t`, unknown) and a communication link with known channel `H`
//! (`N_c × N_t`). The estimator minimizes
//!
//! ```text
//! (λ_radar/2)‖Yʳ − G·X‖² + (λ_comm/2)‖Yᶜ − H·X‖² + λ_R·R(G or ΔG) + λ_C·C(X)
//! ```
//!
//! With a nominal channel `G₀` the unknown is the perturbation `ΔG = G − G₀`
//! and the radar data are whitened to `Yʳ − G₀·X` in the channel update.
//! The regularizers act only through the split copies, so both primal
//! subproblems stay quadratic with closed forms.

use serde::{Deserialize, Serialize};

use crate::admm::{self, AdmmConfig, AdmmState, SolveOutcome, SplitProblem, StopReason};
use crate::error::{Error, Result};
use crate::matkit::{solve_left_for, ComplexMatrix};
use crate::metrics::{self, IterationRecord, LinkMetrics};
use crate::regularizers::{project_ball, project_power, RegKind, RegularizerSpec};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GroundTruth<T> {
    pub g_true: ComplexMatrix<T>,
    pub x_true: ComplexMatrix<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct JrcInstance<T> {
    pub y_radar: ComplexMatrix<T>,
    pub y_comm: ComplexMatrix<T>,
    pub h_comm: ComplexMatrix<T>,
    /// Known nominal radar channel; when present the solver estimates `ΔG`.
    pub g_nominal: Option<ComplexMatrix<T>>,
    pub lambda_radar: T,
    pub lambda_comm: T,
    pub reg_channel: RegularizerSpec<T>,
    pub reg_signal: RegularizerSpec<T>,
    /// Receiver noise variance used by the capacity metrics.
    pub noise_var: T,
    /// Known bound on `‖channel variable‖_F` (the perturbation radius in
    /// delta mode); the reported channel is projected onto it.
    #[serde(default)]
    pub channel_radius: Option<T>,
    pub ground_truth: Option<GroundTruth<T>>,
}

impl<T: Real> JrcInstance<T> {
    pub fn n_tx(&self) -> usize {
        self.h_comm.cols()
    }

    pub fn n_symbols(&self) -> usize {
        self.y_radar.cols()
    }

    pub fn is_delta_mode(&self) -> bool {
        self.g_nominal.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let mismatch = |op, left, right| Err(Error::ShapeMismatch { op, left, right });
        if self.y_radar.cols() != self.y_comm.cols() {
            return mismatch("symbol count (y_radar vs y_comm)", self.y_radar.shape(), self.y_comm.shape());
        }
        if self.h_comm.rows() != self.y_comm.rows() {
            return mismatch("comm receivers (h_comm vs y_comm)", self.h_comm.shape(), self.y_comm.shape());
        }
        if let Some(g0) = &self.g_nominal {
            if g0.shape() != (self.y_radar.rows(), self.n_tx()) {
                return mismatch("g_nominal", g0.shape(), (self.y_radar.rows(), self.n_tx()));
            }
        }
        if let Some(gt) = &self.ground_truth {
            if gt.g_true.shape() != (self.y_radar.rows(), self.n_tx()) {
                return mismatch("g_true", gt.g_true.shape(), (self.y_radar.rows(), self.n_tx()));
            }
            if gt.x_true.shape() != (self.n_tx(), self.n_symbols()) {
                return mismatch("x_true", gt.x_true.shape(), (self.n_tx(), self.n_symbols()));
            }
        }
        let weights_ok = self.lambda_radar >= T::zero()
            && self.lambda_comm >= T::zero()
            && self.lambda_radar + self.lambda_comm > T::zero()
            && (self.lambda_radar + self.lambda_comm).is_finite();
        if !weights_ok {
            return Err(Error::InvalidConfig(format!(
                "fidelity weights must be nonnegative with a positive sum, got λ_radar={} λ_comm={}",
                self.lambda_radar, self.lambda_comm
            )));
        }
        if !(self.noise_var >= T::zero()) {
            return Err(Error::InvalidConfig(format!("noise_var must be nonnegative, got {}", self.noise_var)));
        }
        if let Some(r) = self.channel_radius {
            if !(r >= T::zero() && r.is_finite()) {
                return Err(Error::InvalidConfig(format!("channel_radius must be finite and nonnegative, got {r}")));
            }
        }
        self.reg_channel.validate()?;
        self.reg_signal.validate()
    }

    /// Full radar channel for a solver channel variable (`G₀ + ΔG` in delta mode).
    pub fn full_channel(&self, channel_var: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        match &self.g_nominal {
            Some(g0) => g0 + channel_var,
            None => channel_var.clone(),
        }
    }

    /// Solver channel variable for a full radar channel.
    pub fn channel_variable(&self, g: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        match &self.g_nominal {
            Some(g0) => g - g0,
            None => g.clone(),
        }
    }

    fn fit_terms(&self, g: &ComplexMatrix<T>, x: &ComplexMatrix<T>) -> T {
        let half = T::of(0.5);
        let mut total = T::zero();
        if self.lambda_radar != T::zero() {
            total += half * self.lambda_radar * (&self.y_radar - &g.matmul(x)).frob_norm_sq();
        }
        if self.lambda_comm != T::zero() {
            total += half * self.lambda_comm * (&self.y_comm - &self.h_comm.matmul(x)).frob_norm_sq();
        }
        total
    }

    /// Objective at a full radar channel `g` and signal `x`; the channel
    /// regularizer sees `g − G₀` in delta mode.
    pub fn objective(&self, g: &ComplexMatrix<T>, x: &ComplexMatrix<T>) -> T {
        let reg_arg = self.channel_variable(g);
        self.fit_terms(g, x)
            + self.reg_channel.weight * self.reg_channel.eval(&reg_arg)
            + self.reg_signal.weight * self.reg_signal.eval(x)
    }

    /// Exact channel-variable minimizer for fixed `X`.
    pub fn update_g(
        &self,
        x: &ComplexMatrix<T>,
        z1: &ComplexMatrix<T>,
        mu1: &ComplexMatrix<T>,
        rho: T,
    ) -> Result<ComplexMatrix<T>> {
        match &self.g_nominal {
            Some(g0) => {
                let y_eff = &self.y_radar - &g0.matmul(x);
                admm::update_channel(&y_eff, x, z1, mu1, rho, self.lambda_radar)
            }
            None => admm::update_channel(&self.y_radar, x, z1, mu1, rho, self.lambda_radar),
        }
    }

    /// Exact signal minimizer for a fixed full radar channel `g`:
    /// `X = (λ_r·GᴴG + λ_c·HᴴH + ρI)⁻¹(λ_r·GᴴYʳ + λ_c·HᴴYᶜ − μ₂ + ρ·Z₂)`.
    pub fn update_x(
        &self,
        g: &ComplexMatrix<T>,
        z2: &ComplexMatrix<T>,
        mu2: &ComplexMatrix<T>,
        rho: T,
    ) -> Result<ComplexMatrix<T>> {
        let (lr, lc) = (self.lambda_radar, self.lambda_comm);
        if lc == T::zero() {
            return admm::update_signal(g, &self.y_radar, z2, mu2, rho, lr);
        }
        if lr == T::zero() {
            return admm::update_signal(&self.h_comm, &self.y_comm, z2, mu2, rho, lc);
        }
        let mut system = g.adj_mul(g).scale(lr);
        system.axpy(lc, &self.h_comm.adj_mul(&self.h_comm));
        let system = system.add_diag(rho);
        let mut rhs = g.adj_mul(&self.y_radar).scale(lr);
        rhs.axpy(lc, &self.h_comm.adj_mul(&self.y_comm));
        rhs -= mu2;
        rhs.axpy(rho, z2);
        solve_left_for(&system, &rhs, "signal")
    }

    pub fn initial_state(&self, config: &AdmmConfig<T>) -> AdmmState<T> {
        AdmmState::initial(
            self.channel_shape(),
            self.signal_shape(),
            config.init_scale,
            config.init_seed,
        )
    }
}

impl<T: Real> SplitProblem<T> for JrcInstance<T> {
    fn channel_shape(&self) -> (usize, usize) {
        (self.y_radar.rows(), self.n_tx())
    }

    fn signal_shape(&self) -> (usize, usize) {
        (self.n_tx(), self.n_symbols())
    }

    fn reg_channel(&self) -> &RegularizerSpec<T> {
        &self.reg_channel
    }

    fn reg_signal(&self) -> &RegularizerSpec<T> {
        &self.reg_signal
    }

    fn update_channel(
        &self,
        signal: &ComplexMatrix<T>,
        z1: &ComplexMatrix<T>,
        mu1: &ComplexMatrix<T>,
        rho: T,
    ) -> Result<ComplexMatrix<T>> {
        self.update_g(signal, z1, mu1, rho)
    }

    fn update_signal(
        &self,
        channel: &ComplexMatrix<T>,
        z2: &ComplexMatrix<T>,
        mu2: &ComplexMatrix<T>,
        rho: T,
    ) -> Result<ComplexMatrix<T>> {
        match &self.g_nominal {
            Some(g0) => self.update_x(&(g0 + channel), z2, mu2, rho),
            None => self.update_x(channel, z2, mu2, rho),
        }
    }

    fn fidelity(&self, channel: &ComplexMatrix<T>, signal: &ComplexMatrix<T>) -> T {
        match &self.g_nominal {
            Some(g0) => self.fit_terms(&(g0 + channel), signal),
            None => self.fit_terms(channel, signal),
        }
    }

    fn data_norm(&self) -> T {
        (self.y_radar.frob_norm_sq() + self.y_comm.frob_norm_sq()).sqrt()
    }

    fn link_metrics(&self, channel: &ComplexMatrix<T>, signal: &ComplexMatrix<T>) -> LinkMetrics {
        let g = self.full_channel(channel);
        let sinr_db = metrics::comm_sinr_db(&self.y_comm, &self.h_comm, signal)
            .map_or(f64::NAN, Real::as_f64);
        let spectral_eff_bits = metrics::spectral_efficiency(&self.h_comm, signal, self.noise_var)
            .map_or(f64::NAN, Real::as_f64);
        let radar_mi_bits = metrics::radar_mutual_information(&g, signal, self.noise_var)
            .map_or(f64::NAN, Real::as_f64);
        LinkMetrics {
            sinr_db,
            spectral_eff_bits,
            radar_mi_bits,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JrcSolution<T> {
    /// Full radar channel estimate (`G₀ + ΔG` in delta mode), with the
    /// channel variable projected onto `channel_radius` when one is set.
    pub g_est: ComplexMatrix<T>,
    /// Final signal iterate, projected onto the power ball when one is active.
    pub x_est: ComplexMatrix<T>,
    pub state: AdmmState<T>,
    pub trace: Vec<IterationRecord>,
    pub stop: StopReason,
}

impl<T: Real> JrcSolution<T> {
    fn from_outcome(instance: &JrcInstance<T>, outcome: SolveOutcome<T>) -> Self {
        let g_est = match instance.channel_radius {
            Some(r) => instance.full_channel(&project_ball(&outcome.state.channel, r)),
            None => instance.full_channel(&outcome.state.channel),
        };
        let x_est = match instance.reg_signal.kind {
            RegKind::PowerBall { budget } => project_power(&outcome.state.signal, budget),
            _ => outcome.state.signal.clone(),
        };
        Self {
            g_est,
            x_est,
            state: outcome.state,
            trace: outcome.trace,
            stop: outcome.stop,
        }
    }
}

/// Runs the JRC solver from the default initialization.
pub fn solve_jrc<T, F>(instance: &JrcInstance<T>, config: &AdmmConfig<T>, observer: F) -> Result<JrcSolution<T>>
where
    T: Real,
    F: FnMut(&IterationRecord),
{
    solve_jrc_from(instance, config, instance.initial_state(config), observer)
}

/// Runs the JRC solver from an explicit initial state (channel variable in
/// the instance's mode).
pub fn solve_jrc_from<T, F>(
    instance: &JrcInstance<T>,
    config: &AdmmConfig<T>,
    init: AdmmState<T>,
    observer: F,
) -> Result<JrcSolution<T>>
where
    T: Real,
    F: FnMut(&IterationRecord),
{
    instance.validate()?;
    let outcome = admm::run(instance, config, init, observer)?;
    Ok(JrcSolution::from_outcome(instance, outcome))
}
