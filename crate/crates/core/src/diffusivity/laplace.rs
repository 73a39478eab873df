//! The `κ = 0` branch, where the compatibility ODE is linear and separable.
//!
//! These closed forms are diagnostic: the branch is inadmissible for
//! population models because `D` diverges at a zero of `R`. The Huxley and
//! Fitzhugh–Nagumo expressions contain powers of negative bases on `(0, 1)`;
//! they are evaluated with absolute values, the sign being absorbed into `c₁`.

use serde::{Deserialize, Serialize};

use super::DiffusivityError;
use crate::model::{ReactionKind, ReactionModel};

/// Closed-form `D(θ)` for `κ = 0` (`c₁ = 1` reproduces the Fisher form as
/// usually written).
///
/// * Fisher: `−(A/s) θ⁻² (θ⁻¹ − 1)^{A/s}`
/// * Huxley: `c₁ θ⁻¹ (1−θ)⁻² |1 − θ⁻¹|^{1−A/s} exp(−A/(sθ))`
/// * Fitzhugh–Nagumo, `α = A/s`:
///   `c₁ θ^{−(1+α/θ₁)} |θ−1|^{−1+α/(θ₁−1)} |θ−θ₁|^{−1−α/(θ₁(θ₁−1))}`
pub fn laplace_branch_d(
    model: &ReactionModel,
    a: f64,
    c1: f64,
    theta: f64,
) -> Result<f64, DiffusivityError> {
    let s = model.s();
    let alpha = a / s;
    if model.roots().contains(&theta) || !(theta > 0.0 && theta < 1.0) {
        return Err(DiffusivityError::EvaluationAtSingularity { theta });
    }
    let d = match model.kind() {
        ReactionKind::Fisher => {
            -c1 * alpha * theta.powi(-2) * (1.0 / theta - 1.0).powf(alpha)
        }
        ReactionKind::Huxley => {
            c1 / theta / (1.0 - theta).powi(2)
                * (1.0 - 1.0 / theta).abs().powf(1.0 - alpha)
                * (-alpha / theta).exp()
        }
        ReactionKind::FitzhughNagumo => {
            let t1 = model.theta1().expect("FHN carries θ₁");
            c1 * theta.powf(-(1.0 + alpha / t1))
                * (theta - 1.0).abs().powf(-1.0 + alpha / (t1 - 1.0))
                * (theta - t1).abs().powf(-1.0 - alpha / (t1 * (t1 - 1.0)))
        }
    };
    if d.is_finite() {
        Ok(d)
    } else {
        Err(DiffusivityError::EvaluationAtSingularity { theta })
    }
}

/// Behaviour of the `κ = 0` diffusivity as `θ` approaches a zero of `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    /// The zero of `R` being approached.
    pub at: f64,
    /// Power-law exponent of `|θ − at|` in `D` near `at` (`−∞` when an
    /// essential singularity dominates).
    pub exponent: f64,
    pub divergent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub kind: ReactionKind,
    pub a: f64,
    pub points: Vec<Divergence>,
}

impl DivergenceReport {
    pub fn divergent_points(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|d| d.divergent)
            .map(|d| d.at)
            .collect()
    }

    pub fn any_divergent(&self) -> bool {
        self.points.iter().any(|d| d.divergent)
    }
}

/// Where the `κ = 0` closed form diverges, read off its local exponents.
pub fn divergence_report(model: &ReactionModel, a: f64) -> DivergenceReport {
    let alpha = a / model.s();
    let point = |at: f64, exponent: f64| Divergence {
        at,
        exponent,
        divergent: exponent < 0.0,
    };
    let points = match model.kind() {
        // θ^{−2−α} (1−θ)^{α}
        ReactionKind::Fisher => vec![point(0.0, -2.0 - alpha), point(1.0, alpha)],
        // θ^{α−2} exp(−α/θ) (1−θ)^{−1−α}
        ReactionKind::Huxley => {
            let at_zero = if alpha < 0.0 {
                f64::NEG_INFINITY
            } else if alpha > 0.0 {
                f64::INFINITY
            } else {
                -2.0
            };
            vec![point(0.0, at_zero), point(1.0, -1.0 - alpha)]
        }
        ReactionKind::FitzhughNagumo => {
            let t1 = model.theta1().expect("FHN carries θ₁");
            let mut pts = vec![
                point(0.0, -(1.0 + alpha / t1)),
                point(1.0, -1.0 + alpha / (t1 - 1.0)),
                point(t1, -1.0 - alpha / (t1 * (t1 - 1.0))),
            ];
            pts.sort_by(|x, y| x.at.total_cmp(&y.at));
            pts
        }
    };
    DivergenceReport {
        kind: model.kind(),
        a,
        points,
    }
}
