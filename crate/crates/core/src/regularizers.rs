//! Regularizer catalog for the channel and signal splits.
//!
//! Each [`RegularizerSpec`] describes a function `R(V)` together with the
//! weight `λ` the solver applies to it. Evaluation, gradients and proximal
//! maps here never apply the weight themselves; the solver folds it into
//! the step size (`τ = λ/ρ` for the proximal update).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkit::ComplexMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
#[serde(tag = "type")]
pub enum RegKind<T> {
    #[serde(rename = "zero")]
    Zero,
    /// `½‖V‖_F²`.
    #[serde(rename = "sq_frobenius")]
    SquaredFrobenius,
    /// `Σ|v_ij|`.
    #[serde(rename = "l1")]
    EntrywiseL1,
    /// Indicator of `‖V‖_F ≤ radius`.
    #[serde(rename = "frob_ball")]
    FrobeniusBall { radius: T },
    /// Indicator of `‖V‖_F² ≤ budget` (transmit power `Tr(V·Vᴴ)`).
    #[serde(rename = "power_ball")]
    PowerBall { budget: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RegularizerSpec<T> {
    #[serde(flatten)]
    pub kind: RegKind<T>,
    #[serde(default = "one")]
    pub weight: T,
}

fn one<T: Real>() -> T {
    T::one()
}

impl<T: Real> RegularizerSpec<T> {
    pub fn new(kind: RegKind<T>, weight: T) -> Self {
        Self { kind, weight }
    }

    pub fn zero() -> Self {
        Self::new(RegKind::Zero, T::zero())
    }

    pub fn squared_frobenius(weight: T) -> Self {
        Self::new(RegKind::SquaredFrobenius, weight)
    }

    pub fn l1(weight: T) -> Self {
        Self::new(RegKind::EntrywiseL1, weight)
    }

    /// Indicator constraints carry unit weight; it has no effect on a projection.
    pub fn frobenius_ball(radius: T) -> Self {
        Self::new(RegKind::FrobeniusBall { radius }, T::one())
    }

    pub fn power_ball(budget: T) -> Self {
        Self::new(RegKind::PowerBall { budget }, T::one())
    }

    /// Same spec in another scalar type.
    pub fn cast<U: Real>(&self) -> RegularizerSpec<U> {
        let kind = match self.kind {
            RegKind::Zero => RegKind::Zero,
            RegKind::SquaredFrobenius => RegKind::SquaredFrobenius,
            RegKind::EntrywiseL1 => RegKind::EntrywiseL1,
            RegKind::FrobeniusBall { radius } => RegKind::FrobeniusBall { radius: U::of(radius.as_f64()) },
            RegKind::PowerBall { budget } => RegKind::PowerBall { budget: U::of(budget.as_f64()) },
        };
        RegularizerSpec::new(kind, U::of(self.weight.as_f64()))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            RegKind::Zero => "zero",
            RegKind::SquaredFrobenius => "sq_frobenius",
            RegKind::EntrywiseL1 => "l1",
            RegKind::FrobeniusBall { .. } => "frob_ball",
            RegKind::PowerBall { .. } => "power_ball",
        }
    }

    /// Whether a gradient exists everywhere.
    pub fn is_smooth(&self) -> bool {
        matches!(self.kind, RegKind::Zero | RegKind::SquaredFrobenius)
    }

    pub fn is_indicator(&self) -> bool {
        matches!(self.kind, RegKind::FrobeniusBall { .. } | RegKind::PowerBall { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: T| {
            Err(Error::InvalidConfig(format!(
                "{} regularizer: {what} must be finite and nonnegative, got {v}",
                self.name()
            )))
        };
        if !(self.weight >= T::zero()) || !self.weight.is_finite() {
            return bad("weight", self.weight);
        }
        match self.kind {
            RegKind::FrobeniusBall { radius } if !(radius >= T::zero() && radius.is_finite()) => {
                bad("radius", radius)
            }
            RegKind::PowerBall { budget } if !(budget >= T::zero() && budget.is_finite()) => {
                bad("budget", budget)
            }
            _ => Ok(()),
        }
    }

    /// `R(V)`, with `+∞` outside an indicator's feasible set.
    pub fn eval(&self, v: &ComplexMatrix<T>) -> T {
        match self.kind {
            RegKind::Zero => T::zero(),
            RegKind::SquaredFrobenius => v.frob_norm_sq() / (T::one() + T::one()),
            RegKind::EntrywiseL1 => v.as_slice().iter().fold(T::zero(), |s, z| s + z.norm()),
            RegKind::FrobeniusBall { radius } => {
                if v.frob_norm() <= radius {
                    T::zero()
                } else {
                    T::infinity()
                }
            }
            RegKind::PowerBall { budget } => {
                if v.frob_norm_sq() <= budget {
                    T::zero()
                } else {
                    T::infinity()
                }
            }
        }
    }

    /// `∇R(V)` for the smooth variants.
    pub fn grad(&self, v: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        match self.kind {
            RegKind::Zero => Ok(ComplexMatrix::zeros(v.rows(), v.cols())),
            RegKind::SquaredFrobenius => Ok(v.clone()),
            _ => Err(Error::NotDifferentiable(self.name())),
        }
    }

    /// `argmin_U τ·R(U) + ½‖U − V‖_F²`.
    pub fn prox(&self, v: &ComplexMatrix<T>, tau: T) -> ComplexMatrix<T> {
        match self.kind {
            RegKind::Zero => v.clone(),
            RegKind::SquaredFrobenius => v.scale(T::one() / (T::one() + tau)),
            RegKind::EntrywiseL1 => v.map(|z| soft_threshold(z, tau)),
            RegKind::FrobeniusBall { radius } => project_ball(v, radius),
            RegKind::PowerBall { budget } => project_power(v, budget),
        }
    }
}

/// Complex soft threshold `z·max(1 − τ/|z|, 0)`.
pub fn soft_threshold<T: Real>(z: Complex<T>, tau: T) -> Complex<T> {
    let mag = z.norm();
    if mag <= tau {
        Complex::new(T::zero(), T::zero())
    } else {
        z * ((mag - tau) / mag)
    }
}

/// Radial projection onto `{‖U‖_F ≤ radius}`.
pub fn project_ball<T: Real>(v: &ComplexMatrix<T>, radius: T) -> ComplexMatrix<T> {
    let norm = v.frob_norm();
    if norm <= radius {
        return v.clone();
    }
    pull_inside(v.scale(radius / norm), |u| u.frob_norm() <= radius)
}

/// Radial projection onto `{‖U‖_F² ≤ budget}`.
pub fn project_power<T: Real>(v: &ComplexMatrix<T>, budget: T) -> ComplexMatrix<T> {
    let norm_sq = v.frob_norm_sq();
    if norm_sq <= budget {
        return v.clone();
    }
    pull_inside(v.scale((budget / norm_sq).sqrt()), |u| u.frob_norm_sq() <= budget)
}

// radial scaling can land an ulp outside; nudge inward until the eval test agrees
fn pull_inside<T: Real>(mut u: ComplexMatrix<T>, inside: impl Fn(&ComplexMatrix<T>) -> bool) -> ComplexMatrix<T> {
    let shrink = T::one() - T::of(4.0) * T::epsilon();
    while !inside(&u) {
        u = u.scale(shrink);
    }
    u
}

pub fn reg_eval<T: Real>(spec: &RegularizerSpec<T>, v: &ComplexMatrix<T>) -> T {
    spec.eval(v)
}

pub fn reg_grad<T: Real>(spec: &RegularizerSpec<T>, v: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    spec.grad(v)
}

pub fn reg_prox<T: Real>(spec: &RegularizerSpec<T>, v: &ComplexMatrix<T>, tau: T) -> ComplexMatrix<T> {
    spec.prox(v, tau)
}
