//! ADMM engine for bilinear deconvolution `Y ≈ H·X`.
//!
//! The splitting introduces copies `Z₁ = H`, `Z₂ = X` that carry the
//! regularizers, with multipliers `μ₁, μ₂` under the real inner product
//! `⟨A, B⟩ = Re tr(AᴴB)`. One iteration is a Gauss–Seidel sweep in the
//! order channel → signal → Z₁ → Z₂ → duals. Channel and signal updates are
//! exact minimizers of quadratic subproblems and are solved by Cholesky;
//! the Z-updates are either a gradient step (smooth regularizers) or an
//! exact proximal map.
//!
//! The engine is written against [`SplitProblem`] so the plain MIMO model
//! ([`BlindInstance`]) and the joint radar-communication model
//! ([`crate::jrc::JrcInstance`]) share one loop.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkit::{solve_left_for, solve_right_for, ComplexMatrix, GaussianSource};
use crate::metrics::{self, IterationRecord, LinkMetrics};
use crate::regularizers::RegularizerSpec;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZMode {
    /// One gradient step on the Z-subproblem; both regularizers must be smooth.
    Smooth,
    /// Exact proximal Z-update; any regularizer.
    Prox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
#[serde(default, deny_unknown_fields)]
pub struct AdmmConfig<T> {
    /// Penalty parameter, `ρ > 0`.
    pub rho: T,
    pub max_iter: usize,
    /// Stop once every residual is below `tol · max(1, ‖Y‖_F)`.
    pub tol: T,
    /// Gradient step for Z₁ in smooth mode; `None` uses `1/(ρ + λ)`.
    pub eta_z1: Option<T>,
    pub eta_z2: Option<T>,
    pub z_mode: ZMode,
    /// Prox Z-update at the bare primal iterate, without the `μ/ρ` shift.
    pub legacy_prox_no_dual_shift: bool,
    /// Standard deviation scale of the random initial signal.
    pub init_scale: T,
    pub init_seed: u64,
}

impl<T: Real> Default for AdmmConfig<T> {
    fn default() -> Self {
        Self {
            rho: T::one(),
            max_iter: 50,
            tol: T::of(1e-4),
            eta_z1: None,
            eta_z2: None,
            z_mode: ZMode::Prox,
            legacy_prox_no_dual_shift: false,
            init_scale: T::of(1e-2),
            init_seed: 0,
        }
    }
}

impl<T: Real> AdmmConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("rho", self.rho)?;
        positive("tol", self.tol)?;
        if let Some(eta) = self.eta_z1 {
            positive("eta_z1", eta)?;
        }
        if let Some(eta) = self.eta_z2 {
            positive("eta_z2", eta)?;
        }
        if !(self.init_scale > T::zero()) {
            return Err(Error::InvalidConfig(
                "init_scale must be positive; a zero signal freezes the channel update".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState<T> {
    pub channel: ComplexMatrix<T>,
    pub signal: ComplexMatrix<T>,
    pub z1: ComplexMatrix<T>,
    pub z2: ComplexMatrix<T>,
    pub mu1: ComplexMatrix<T>,
    pub mu2: ComplexMatrix<T>,
    pub iter: usize,
}

impl<T: Real> AdmmState<T> {
    /// Zero channel, small seeded Gaussian signal, copies equal to the
    /// primal iterates, zero duals.
    pub fn initial(
        channel_shape: (usize, usize),
        signal_shape: (usize, usize),
        init_scale: T,
        seed: u64,
    ) -> Self {
        let channel = ComplexMatrix::zeros(channel_shape.0, channel_shape.1);
        let signal = GaussianSource::new(seed)
            .complex_matrix::<T>(signal_shape.0, signal_shape.1)
            .scale(init_scale);
        Self::from_primal(channel, signal)
    }

    pub fn from_primal(channel: ComplexMatrix<T>, signal: ComplexMatrix<T>) -> Self {
        Self {
            z1: channel.clone(),
            z2: signal.clone(),
            mu1: ComplexMatrix::zeros(channel.rows(), channel.cols()),
            mu2: ComplexMatrix::zeros(signal.rows(), signal.cols()),
            channel,
            signal,
            iter: 0,
        }
    }

    /// Replaces the channel iterate and its copy.
    pub fn with_channel(mut self, channel: ComplexMatrix<T>) -> Self {
        assert_eq!(channel.shape(), self.channel.shape());
        self.z1 = channel.clone();
        self.channel = channel;
        self
    }

    fn check_shapes(&self, channel: (usize, usize), signal: (usize, usize)) -> Result<()> {
        let pairs = [
            ("channel", self.channel.shape(), channel),
            ("z1", self.z1.shape(), channel),
            ("mu1", self.mu1.shape(), channel),
            ("signal", self.signal.shape(), signal),
            ("z2", self.z2.shape(), signal),
            ("mu2", self.mu2.shape(), signal),
        ];
        for (op, got, want) in pairs {
            if got != want {
                return Err(Error::ShapeMismatch {
                    op,
                    left: got,
                    right: want,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIter,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxIter => "max_iter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals<T> {
    /// `‖channel − Z₁‖_F`
    pub r1: T,
    /// `‖signal − Z₂‖_F`
    pub r2: T,
    /// `ρ‖Z₁ − Z₁_prev‖_F`
    pub s1: T,
    /// `ρ‖Z₂ − Z₂_prev‖_F`
    pub s2: T,
}

impl<T: Real> Residuals<T> {
    pub fn max(&self) -> T {
        self.r1.max(self.r2).max(self.s1).max(self.s2)
    }
}

pub fn residuals<T: Real>(
    state: &AdmmState<T>,
    z1_prev: &ComplexMatrix<T>,
    z2_prev: &ComplexMatrix<T>,
    rho: T,
) -> Residuals<T> {
    Residuals {
        r1: (&state.channel - &state.z1).frob_norm(),
        r2: (&state.signal - &state.z2).frob_norm(),
        s1: (&state.z1 - z1_prev).frob_norm() * rho,
        s2: (&state.z2 - z2_prev).frob_norm() * rho,
    }
}

/// Minimizer of `(c/2)‖Y − G·X‖² + ⟨μ₁, G − Z₁⟩ + (ρ/2)‖G − Z₁‖²`:
/// `G = (c·Y·Xᴴ − μ₁ + ρ·Z₁)(c·X·Xᴴ + ρI)⁻¹`.
pub fn update_channel<T: Real>(
    y: &ComplexMatrix<T>,
    x: &ComplexMatrix<T>,
    z1: &ComplexMatrix<T>,
    mu1: &ComplexMatrix<T>,
    rho: T,
    c: T,
) -> Result<ComplexMatrix<T>> {
    let system = x.mul_adj(x).scale(c).add_diag(rho);
    let mut rhs = y.mul_adj(x).scale(c);
    rhs -= mu1;
    rhs.axpy(rho, z1);
    solve_right_for(&system, &rhs, "channel")
}

/// Minimizer of `(c/2)‖Y − H·X‖² + ⟨μ₂, X − Z₂⟩ + (ρ/2)‖X − Z₂‖²`:
/// `X = (ρI + c·HᴴH)⁻¹(c·HᴴY − μ₂ + ρ·Z₂)`.
pub fn update_signal<T: Real>(
    h: &ComplexMatrix<T>,
    y: &ComplexMatrix<T>,
    z2: &ComplexMatrix<T>,
    mu2: &ComplexMatrix<T>,
    rho: T,
    c: T,
) -> Result<ComplexMatrix<T>> {
    let system = h.adj_mul(h).scale(c).add_diag(rho);
    let mut rhs = h.adj_mul(y).scale(c);
    rhs -= mu2;
    rhs.axpy(rho, z2);
    solve_left_for(&system, &rhs, "signal")
}

/// One gradient step on `λR(Z) − ⟨μ, Z⟩ + (ρ/2)‖Z − anchor‖²`.
pub fn update_z_smooth<T: Real>(
    z: &ComplexMatrix<T>,
    anchor: &ComplexMatrix<T>,
    mu: &ComplexMatrix<T>,
    spec: &RegularizerSpec<T>,
    lambda: T,
    rho: T,
    eta: T,
) -> Result<ComplexMatrix<T>> {
    let mut grad = spec.grad(z)?.scale(lambda);
    grad -= mu;
    grad.axpy(rho, &(z - anchor));
    let mut out = z.clone();
    out.axpy(-eta, &grad);
    Ok(out)
}

/// `prox_{(λ/ρ)R}(anchor + μ/ρ)`, the exact Z-subproblem minimizer.
pub fn update_z_prox<T: Real>(
    anchor: &ComplexMatrix<T>,
    mu: &ComplexMatrix<T>,
    spec: &RegularizerSpec<T>,
    lambda: T,
    rho: T,
) -> ComplexMatrix<T> {
    let mut v = anchor.clone();
    v.axpy(T::one() / rho, mu);
    spec.prox(&v, lambda / rho)
}

/// `μ + ρ·gap`.
pub fn update_duals<T: Real>(
    mu: &ComplexMatrix<T>,
    primal_gap: &ComplexMatrix<T>,
    rho: T,
) -> Result<ComplexMatrix<T>> {
    mu.check_same_shape("update_duals", primal_gap)?;
    let mut out = mu.clone();
    out.axpy(rho, primal_gap);
    Ok(out)
}

/// A bilinear fidelity model the ADMM loop can drive.
pub trait SplitProblem<T: Real> {
    fn channel_shape(&self) -> (usize, usize);
    fn signal_shape(&self) -> (usize, usize);
    fn reg_channel(&self) -> &RegularizerSpec<T>;
    fn reg_signal(&self) -> &RegularizerSpec<T>;

    fn update_channel(
        &self,
        signal: &ComplexMatrix<T>,
        z1: &ComplexMatrix<T>,
        mu1: &ComplexMatrix<T>,
        rho: T,
    ) -> Result<ComplexMatrix<T>>;

    fn update_signal(
        &self,
        channel: &ComplexMatrix<T>,
        z2: &ComplexMatrix<T>,
        mu2: &ComplexMatrix<T>,
        rho: T,
    ) -> Result<ComplexMatrix<T>>;

    /// Data-fit terms of the objective at a primal point.
    fn fidelity(&self, channel: &ComplexMatrix<T>, signal: &ComplexMatrix<T>) -> T;

    /// `‖Y‖_F` over all observations; scales the stopping tolerance.
    fn data_norm(&self) -> T;

    fn link_metrics(&self, channel: &ComplexMatrix<T>, signal: &ComplexMatrix<T>) -> LinkMetrics;
}

/// Augmented Lagrangian; `+∞` when an indicator rejects a Z copy.
pub fn lagrangian_eval<T: Real, P: SplitProblem<T> + ?Sized>(
    problem: &P,
    state: &AdmmState<T>,
    rho: T,
) -> T {
    let (rc, rs) = (problem.reg_channel(), problem.reg_signal());
    let reg = rc.weight * rc.eval(&state.z1) + rs.weight * rs.eval(&state.z2);
    if !reg.is_finite() {
        return T::infinity();
    }
    let gap1 = &state.channel - &state.z1;
    let gap2 = &state.signal - &state.z2;
    let half = T::of(0.5);
    problem.fidelity(&state.channel, &state.signal)
        + reg
        + state.mu1.frob_inner(&gap1).expect("state shapes checked")
        + state.mu2.frob_inner(&gap2).expect("state shapes checked")
        + half * rho * gap1.frob_norm_sq()
        + half * rho * gap2.frob_norm_sq()
}

/// Fidelity at the primal iterates plus weighted regularizers at the
/// split copies. The copies are always feasible in prox mode, so indicator
/// regularizers never make this infinite.
pub fn split_objective<T: Real, P: SplitProblem<T> + ?Sized>(problem: &P, state: &AdmmState<T>) -> T {
    let (rc, rs) = (problem.reg_channel(), problem.reg_signal());
    problem.fidelity(&state.channel, &state.signal)
        + rc.weight * rc.eval(&state.z1)
        + rs.weight * rs.eval(&state.z2)
}

#[derive(Debug, Clone)]
pub struct SolveOutcome<T> {
    pub state: AdmmState<T>,
    pub trace: Vec<IterationRecord>,
    pub stop: StopReason,
}

fn check_finite<T: Real>(m: &ComplexMatrix<T>, iter: usize, what: &'static str) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::Divergence { iter, what })
    }
}

/// Runs the ADMM loop from `init`.
///
/// `observer` sees each [`IterationRecord`] after the dual update; records
/// already delivered stay valid if a later iteration diverges.
pub fn run<T, P, F>(problem: &P, config: &AdmmConfig<T>, init: AdmmState<T>, mut observer: F) -> Result<SolveOutcome<T>>
where
    T: Real,
    P: SplitProblem<T> + ?Sized,
    F: FnMut(&IterationRecord),
{
    config.validate()?;
    let (rc, rs) = (*problem.reg_channel(), *problem.reg_signal());
    rc.validate()?;
    rs.validate()?;
    if config.z_mode == ZMode::Smooth {
        for spec in [&rc, &rs] {
            if !spec.is_smooth() {
                return Err(Error::NotDifferentiable(spec.name()));
            }
        }
    }
    init.check_shapes(problem.channel_shape(), problem.signal_shape())?;

    let rho = config.rho;
    let eta1 = config.eta_z1.unwrap_or_else(|| T::one() / (rho + rc.weight));
    let eta2 = config.eta_z2.unwrap_or_else(|| T::one() / (rho + rs.weight));
    let threshold = config.tol * problem.data_norm().max(T::one());

    let z_update = |z: &ComplexMatrix<T>,
                    anchor: &ComplexMatrix<T>,
                    mu: &ComplexMatrix<T>,
                    spec: &RegularizerSpec<T>,
                    eta: T|
     -> Result<ComplexMatrix<T>> {
        match config.z_mode {
            ZMode::Smooth => update_z_smooth(z, anchor, mu, spec, spec.weight, rho, eta),
            ZMode::Prox if config.legacy_prox_no_dual_shift => {
                Ok(spec.prox(anchor, spec.weight / rho))
            }
            ZMode::Prox => Ok(update_z_prox(anchor, mu, spec, spec.weight, rho)),
        }
    };

    let start = Instant::now();
    let mut state = init;
    let mut trace = Vec::with_capacity(config.max_iter);
    let mut stop = StopReason::MaxIter;

    while state.iter < config.max_iter {
        let k = state.iter + 1;
        let z1_prev = state.z1.clone();
        let z2_prev = state.z2.clone();

        let diverged = |e: Error| match e {
            Error::NonFinite { context } => Error::Divergence { iter: k, what: context },
            other => other,
        };
        state.channel = problem
            .update_channel(&state.signal, &state.z1, &state.mu1, rho)
            .map_err(diverged)?;
        check_finite(&state.channel, k, "channel")?;
        state.signal = problem
            .update_signal(&state.channel, &state.z2, &state.mu2, rho)
            .map_err(diverged)?;
        check_finite(&state.signal, k, "signal")?;
        state.z1 = z_update(&state.z1, &state.channel, &state.mu1, &rc, eta1)?;
        check_finite(&state.z1, k, "z1")?;
        state.z2 = z_update(&state.z2, &state.signal, &state.mu2, &rs, eta2)?;
        check_finite(&state.z2, k, "z2")?;
        state.mu1 = update_duals(&state.mu1, &(&state.channel - &state.z1), rho)?;
        state.mu2 = update_duals(&state.mu2, &(&state.signal - &state.z2), rho)?;
        check_finite(&state.mu1, k, "mu1")?;
        check_finite(&state.mu2, k, "mu2")?;
        state.iter = k;

        let res = residuals(&state, &z1_prev, &z2_prev, rho);
        let link = problem.link_metrics(&state.channel, &state.signal);
        let record = IterationRecord {
            iter: k,
            r1: res.r1.as_f64(),
            r2: res.r2.as_f64(),
            s1: res.s1.as_f64(),
            s2: res.s2.as_f64(),
            objective: split_objective(problem, &state).as_f64(),
            sinr_db: link.sinr_db,
            spectral_eff_bits: link.spectral_eff_bits,
            radar_mi_bits: link.radar_mi_bits,
            tx_power: metrics::tx_power(&state.signal).as_f64(),
            elapsed_s: start.elapsed().as_secs_f64(),
        };
        observer(&record);
        trace.push(record);

        if res.max() < threshold {
            stop = StopReason::Converged;
            break;
        }
    }

    Ok(SolveOutcome { state, trace, stop })
}

/// Plain MIMO dual-blind deconvolution, `Y ≈ H·X` with both factors unknown.
#[derive(Debug, Clone)]
pub struct BlindInstance<T> {
    pub y: ComplexMatrix<T>,
    /// Number of transmit antennas (`H` is `rows(Y) × n_tx`).
    pub n_tx: usize,
    /// Fidelity weight `c` in `(c/2)‖Y − HX‖²`; `c = 2` is the unweighted `‖Y − HX‖²`.
    pub fidelity_weight: T,
    pub reg_channel: RegularizerSpec<T>,
    pub reg_signal: RegularizerSpec<T>,
    /// When known, enables the spectral-efficiency metric.
    pub noise_var: Option<T>,
}

impl<T: Real> BlindInstance<T> {
    pub fn new(y: ComplexMatrix<T>, n_tx: usize) -> Self {
        Self {
            y,
            n_tx,
            fidelity_weight: T::of(2.0),
            reg_channel: RegularizerSpec::zero(),
            reg_signal: RegularizerSpec::zero(),
            noise_var: None,
        }
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

impl<T: Real> SplitProblem<T> for BlindInstance<T> {
    fn channel_shape(&self) -> (usize, usize) {
        (self.y.rows(), self.n_tx)
    }

    fn signal_shape(&self) -> (usize, usize) {
        (self.n_tx, self.y.cols())
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
        update_channel(&self.y, signal, z1, mu1, rho, self.fidelity_weight)
    }

    fn update_signal(
        &self,
        channel: &ComplexMatrix<T>,
        z2: &ComplexMatrix<T>,
        mu2: &ComplexMatrix<T>,
        rho: T,
    ) -> Result<ComplexMatrix<T>> {
        update_signal(channel, &self.y, z2, mu2, rho, self.fidelity_weight)
    }

    fn fidelity(&self, channel: &ComplexMatrix<T>, signal: &ComplexMatrix<T>) -> T {
        let residual = &self.y - &channel.matmul(signal);
        T::of(0.5) * self.fidelity_weight * residual.frob_norm_sq()
    }

    fn data_norm(&self) -> T {
        self.y.frob_norm()
    }

    fn link_metrics(&self, channel: &ComplexMatrix<T>, signal: &ComplexMatrix<T>) -> LinkMetrics {
        let sinr_db = metrics::comm_sinr_db(&self.y, channel, signal)
            .map(Real::as_f64)
            .unwrap_or(f64::NAN);
        let spectral_eff_bits = self
            .noise_var
            .and_then(|nv| metrics::spectral_efficiency(channel, signal, nv).ok())
            .map_or(f64::NAN, Real::as_f64);
        LinkMetrics {
            sinr_db,
            spectral_eff_bits,
            radar_mi_bits: f64::NAN,
        }
    }
}

/// Solves a plain MIMO instance from the default initialization.
pub fn solve<T, F>(instance: &BlindInstance<T>, config: &AdmmConfig<T>, observer: F) -> Result<SolveOutcome<T>>
where
    T: Real,
    F: FnMut(&IterationRecord),
{
    run(instance, config, instance.initial_state(config), observer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::randn_complex;

    type M = ComplexMatrix<f64>;
    type Spec = RegularizerSpec<f64>;

    #[test]
    fn channel_update_fixed_point_and_pull() {
        let g = randn_complex::<f64>(3, 4, 1);
        let x = randn_complex::<f64>(4, 6, 2);
        let y = g.matmul(&x);
        let zero = M::zeros(3, 4);
        let out = update_channel(&y, &x, &g, &zero, 1.0, 2.0).unwrap();
        assert!(out.max_abs_diff(&g) < 1e-8);

        let z1 = randn_complex::<f64>(3, 4, 3);
        let out = update_channel(&y, &M::zeros(4, 6), &z1, &zero, 0.7, 2.0).unwrap();
        assert!(out.max_abs_diff(&z1) < 1e-14);
    }

    #[test]
    fn signal_update_fixed_point_and_pull() {
        let h = randn_complex::<f64>(2, 8, 4);
        let x = randn_complex::<f64>(8, 5, 5);
        let y = h.matmul(&x);
        let zero = M::zeros(8, 5);
        assert!(update_signal(&h, &y, &x, &zero, 1.0, 2.0).unwrap().max_abs_diff(&x) < 1e-8);

        let z2 = randn_complex::<f64>(8, 5, 6);
        let out = update_signal(&M::zeros(2, 8), &y, &z2, &zero, 3.0, 2.0).unwrap();
        assert!(out.max_abs_diff(&z2) < 1e-14);
    }

    #[test]
    fn smooth_z_update_examples() {
        let anchor = randn_complex::<f64>(3, 3, 7);
        let mu = randn_complex::<f64>(3, 3, 8);
        let rho = 2.0;
        let stationary = &anchor + &mu.scale(1.0 / rho);
        let out = update_z_smooth(&stationary, &anchor, &mu, &Spec::zero(), 0.0, rho, 0.3).unwrap();
        assert!(out.max_abs_diff(&stationary) < 1e-15);

        let z = randn_complex::<f64>(3, 3, 9);
        let zero = M::zeros(3, 3);
        let out = update_z_smooth(&z, &anchor, &zero, &Spec::zero(), 0.0, rho, 1.0 / rho).unwrap();
        assert!(out.max_abs_diff(&anchor) < 1e-15);

        // Stationary point of λz − μ + ρ(z − a) = 0.
        let (lambda, rho) = (0.3, 1.5);
        let spec = Spec::squared_frobenius(lambda);
        let target = (&mu + &anchor.scale(rho)).scale(1.0 / (lambda + rho));
        let mut z = randn_complex::<f64>(3, 3, 10);
        for _ in 0..5 {
            z = update_z_smooth(&z, &anchor, &mu, &spec, lambda, rho, 1.0 / (lambda + rho)).unwrap();
        }
        assert!(z.max_abs_diff(&target) < 1e-6);

        assert!(update_z_smooth(&z, &anchor, &mu, &Spec::l1(1.0), 1.0, rho, 0.1).is_err());
    }

    #[test]
    fn prox_z_update_examples() {
        let anchor = randn_complex::<f64>(2, 2, 11);
        let mu = randn_complex::<f64>(2, 2, 12);
        let out = update_z_prox(&anchor, &mu, &Spec::zero(), 0.0, 4.0);
        assert!(out.max_abs_diff(&(&anchor + &mu.scale(0.25))) < 1e-15);

        let small = anchor.scale(0.05 / anchor.frob_norm());
        let out = update_z_prox(&small, &M::zeros(2, 2), &Spec::frobenius_ball(0.1), 1.0, 1.0);
        assert_eq!(out, small);

        let three = M::from_real_rows(&[&[3.0]]).unwrap();
        let out = update_z_prox(&three, &M::zeros(1, 1), &Spec::l1(1.0), 1.0, 1.0);
        assert!((out[(0, 0)].re - 2.0).abs() < 1e-15 && out[(0, 0)].im == 0.0);
    }

    #[test]
    fn dual_update_examples() {
        let mu = randn_complex::<f64>(2, 3, 13);
        let gap = randn_complex::<f64>(2, 3, 14);
        assert_eq!(update_duals(&mu, &M::zeros(2, 3), 1.0).unwrap(), mu);
        assert_eq!(update_duals(&M::zeros(2, 3), &gap, 1.0).unwrap(), gap);
        let twice = update_duals(&update_duals(&mu, &gap, 0.5).unwrap(), &gap, 0.5).unwrap();
        assert!(twice.max_abs_diff(&(&mu + &gap.scale(1.0))) < 1e-15);
        assert!(update_duals(&mu, &M::zeros(3, 2), 1.0).is_err());
    }

    #[test]
    fn residual_examples() {
        let g = randn_complex::<f64>(2, 3, 15);
        let x = randn_complex::<f64>(3, 4, 16);
        let state = AdmmState::from_primal(g.clone(), x.clone());
        let r = residuals(&state, &g, &x, 1.0);
        assert_eq!((r.r1, r.r2, r.s1, r.s2), (0.0, 0.0, 0.0, 0.0));

        let mut state = AdmmState::from_primal(M::zeros(2, 3), x.clone());
        state.channel = g.clone();
        let r = residuals(&state, &M::zeros(2, 3), &x, 1.0);
        assert!((r.r1 - g.frob_norm()).abs() < 1e-15);
    }

    #[test]
    fn lagrangian_examples() {
        let h = randn_complex::<f64>(2, 3, 17);
        let x = randn_complex::<f64>(3, 4, 18);
        let inst = BlindInstance::new(h.matmul(&x), 3);
        let state = AdmmState::from_primal(h.clone(), x.clone());
        assert!(lagrangian_eval(&inst, &state, 1.0).abs() < 1e-12);

        let mut state = AdmmState::from_primal(h.clone(), x.clone());
        state.mu1 = randn_complex::<f64>(2, 3, 19);
        state.mu2 = randn_complex::<f64>(3, 4, 20);
        let fit = inst.fidelity(&h, &x);
        assert_eq!(lagrangian_eval(&inst, &state, 3.0), fit);

        let mut inst = inst;
        inst.reg_signal = Spec::power_ball(1e-3);
        assert!(lagrangian_eval(&inst, &state, 1.0).is_infinite());
    }

    #[test]
    fn zero_budget_returns_initial_state() {
        let inst = BlindInstance::new(randn_complex::<f64>(2, 4, 21), 2);
        let cfg = AdmmConfig {
            max_iter: 0,
            ..AdmmConfig::default()
        };
        let out = solve(&inst, &cfg, |_| panic!("no iterations expected")).unwrap();
        assert!(out.trace.is_empty());
        assert_eq!(out.state, inst.initial_state(&cfg));
        assert_eq!(out.stop, StopReason::MaxIter);
    }

    #[test]
    fn smooth_mode_rejects_nonsmooth_regularizer() {
        let mut inst = BlindInstance::new(randn_complex::<f64>(2, 4, 22), 2);
        inst.reg_signal = Spec::l1(0.1);
        let cfg = AdmmConfig {
            z_mode: ZMode::Smooth,
            ..AdmmConfig::default()
        };
        assert!(matches!(solve(&inst, &cfg, |_| {}), Err(Error::NotDifferentiable("l1"))));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let inst = BlindInstance::new(randn_complex::<f64>(2, 4, 23), 2);
        let cfg = AdmmConfig {
            rho: 0.0,
            ..AdmmConfig::default()
        };
        assert!(matches!(solve(&inst, &cfg, |_| {}), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn divergence_reports_iteration() {
        let inst = BlindInstance::new(randn_complex::<f64>(2, 4, 24).scale(1e300), 2);
        let cfg = AdmmConfig {
            init_scale: 1e300,
            ..AdmmConfig::default()
        };
        let mut seen = 0;
        let err = solve(&inst, &cfg, |_| seen += 1).unwrap_err();
        match err {
            Error::Divergence { iter, .. } => assert_eq!(iter, seen + 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn observer_sees_every_record() {
        let h = randn_complex::<f64>(2, 2, 25);
        let x = randn_complex::<f64>(2, 4, 26);
        let inst = BlindInstance::new(h.matmul(&x), 2);
        let cfg = AdmmConfig {
            max_iter: 7,
            tol: 1e-300,
            ..AdmmConfig::default()
        };
        let mut seen = Vec::new();
        let out = solve(&inst, &cfg, |r| seen.push(r.iter)).unwrap();
        assert_eq!(seen, (1..=7).collect::<Vec<_>>());
        assert_eq!(out.trace.len(), 7);
        assert_eq!(out.state.iter, 7);
    }

    #[test]
    fn runs_in_single_precision() {
        let h = randn_complex::<f32>(2, 2, 27);
        let x = randn_complex::<f32>(2, 6, 28);
        let inst = BlindInstance::new(h.matmul(&x), 2);
        let cfg = AdmmConfig::<f32> {
            max_iter: 200,
            tol: 1e-5,
            ..AdmmConfig::default()
        };
        let out = solve(&inst, &cfg, |_| {}).unwrap();
        let fit = (&inst.y - &out.state.channel.matmul(&out.state.signal)).frob_norm();
        assert!(fit < 1e-2 * inst.y.frob_norm(), "fit {fit}");
    }
}
