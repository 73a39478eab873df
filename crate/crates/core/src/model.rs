//! Reaction terms, symmetry parameters and the admissibility case analysis.
//!
//! Densities `θ` are dimensionless (scaled by the carrying capacity), the
//! growth rate `s` carries 1/time, diffusivities carry length²/time and the
//! Helmholtz parameter `κ` carries 1/length².

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors raised while building reaction models or anchoring constants.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("growth rate must be positive and finite, got s = {0}")]
    NonPositiveRate(f64),
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("temporal rate A = {a} is not negative; the extinguishing solution requires decay")]
    NonDecayingRate { a: f64 },
    #[error("anchored diffusivity D(1) = {d1} is not positive")]
    NonPositiveAnchor { d1: f64 },
    #[error("singular branch D(0) = -s·θ₁/K² requires θ₁ < 0, got θ₁ = {0}")]
    SingularBranchUnavailable(f64),
}

/// The three logistic reaction families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReactionKind {
    /// `R(θ) = sθ(1−θ)`
    Fisher,
    /// `R(θ) = sθ²(1−θ)`
    Huxley,
    /// `R(θ) = sθ(1−θ)(θ−θ₁)`
    FitzhughNagumo,
}

impl ReactionKind {
    pub const ALL: [ReactionKind; 3] = [
        ReactionKind::Fisher,
        ReactionKind::Huxley,
        ReactionKind::FitzhughNagumo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReactionKind::Fisher => "fisher",
            ReactionKind::Huxley => "huxley",
            ReactionKind::FitzhughNagumo => "fhn",
        }
    }
}

impl fmt::Display for ReactionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A logistic reaction term `R(θ)`.
///
/// Evaluation is exact polynomial arithmetic. `theta1` is only meaningful for
/// the Fitzhugh–Nagumo family and is stored as zero otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReactionModel {
    kind: ReactionKind,
    s: f64,
    theta1: f64,
}

impl ReactionModel {
    pub fn fisher(s: f64) -> Result<Self, ModelError> {
        Self::new(ReactionKind::Fisher, s, 0.0)
    }

    pub fn huxley(s: f64) -> Result<Self, ModelError> {
        Self::new(ReactionKind::Huxley, s, 0.0)
    }

    pub fn fitzhugh_nagumo(s: f64, theta1: f64) -> Result<Self, ModelError> {
        Self::new(ReactionKind::FitzhughNagumo, s, theta1)
    }

    /// `theta1` is ignored for Fisher and Huxley.
    pub fn new(kind: ReactionKind, s: f64, theta1: f64) -> Result<Self, ModelError> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(ModelError::NonPositiveRate(s));
        }
        let theta1 = match kind {
            ReactionKind::FitzhughNagumo => {
                if !theta1.is_finite() {
                    return Err(ModelError::NonPositive {
                        name: "theta1 (finite)",
                        value: theta1,
                    });
                }
                theta1
            }
            _ => 0.0,
        };
        Ok(Self { kind, s, theta1 })
    }

    pub fn kind(&self) -> ReactionKind {
        self.kind
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Threshold density; `None` outside the Fitzhugh–Nagumo family.
    pub fn theta1(&self) -> Option<f64> {
        match self.kind {
            ReactionKind::FitzhughNagumo => Some(self.theta1),
            _ => None,
        }
    }

    /// `R(θ)`, defined for every real `θ`.
    pub fn eval(&self, theta: f64) -> f64 {
        let logistic = theta * (1.0 - theta);
        match self.kind {
            ReactionKind::Fisher => self.s * logistic,
            ReactionKind::Huxley => self.s * theta * logistic,
            ReactionKind::FitzhughNagumo => self.s * logistic * (theta - self.theta1),
        }
    }

    /// `R'(θ)`.
    pub fn derivative(&self, theta: f64) -> f64 {
        let s = self.s;
        match self.kind {
            ReactionKind::Fisher => s * (1.0 - 2.0 * theta),
            ReactionKind::Huxley => s * theta * (2.0 - 3.0 * theta),
            ReactionKind::FitzhughNagumo => {
                let t1 = self.theta1;
                // d/dθ [ -θ³ + (1+θ₁)θ² - θ₁θ ]
                s * (-3.0 * theta * theta + 2.0 * (1.0 + t1) * theta - t1)
            }
        }
    }

    /// Zeros of `R`, in ascending order, without repetition.
    pub fn roots(&self) -> Vec<f64> {
        let mut roots = vec![0.0, 1.0];
        if self.kind == ReactionKind::FitzhughNagumo && !roots.contains(&self.theta1) {
            roots.push(self.theta1);
        }
        roots.sort_by(f64::total_cmp);
        roots
    }
}

/// Sign class of the Helmholtz parameter `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaSign {
    Positive,
    Zero,
    Negative,
}

impl KappaSign {
    pub const ALL: [KappaSign; 3] = [KappaSign::Positive, KappaSign::Zero, KappaSign::Negative];
}

/// Temporal rate `A` (1/time) and Helmholtz parameter `κ ∈ {K², −K², 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryParams {
    a: f64,
    kappa: f64,
    k: f64,
}

impl SymmetryParams {
    /// `κ = K² > 0`.
    pub fn helmholtz(a: f64, k: f64) -> Result<Self, ModelError> {
        check_positive("K", k)?;
        Ok(Self { a, kappa: k * k, k })
    }

    /// `κ = −K² < 0`.
    pub fn modified_helmholtz(a: f64, k: f64) -> Result<Self, ModelError> {
        check_positive("K", k)?;
        Ok(Self {
            a,
            kappa: -k * k,
            k,
        })
    }

    /// `κ = 0`; `K` is reported as zero.
    pub fn laplace(a: f64) -> Self {
        Self {
            a,
            kappa: 0.0,
            k: 0.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kappa_sign(&self) -> KappaSign {
        if self.kappa > 0.0 {
            KappaSign::Positive
        } else if self.kappa < 0.0 {
            KappaSign::Negative
        } else {
            KappaSign::Zero
        }
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NonPositive { name, value })
    }
}

/// Symmetry parameters plus the diffusivity values fixed by the compatibility
/// relation at the zeros of `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchors {
    pub params: SymmetryParams,
    /// `D(0)`.
    pub d0: f64,
    /// `D(1)`.
    pub d1: f64,
    /// `D(θ₁)`, Fitzhugh–Nagumo only (equals `D(1)`).
    pub d_theta1: Option<f64>,
    /// Fitzhugh–Nagumo singular branch `D(0) = −sθ₁/K²`, where `A` is free.
    pub singular: bool,
}

/// `A` and the anchored diffusivities for `κ = K² > 0`, given `D(0)`.
///
/// * Fisher: `A = s − K²D(0)`, `D(1) = −A/K²`
/// * Huxley: `A = −K²D(0)`, `D(1) = D(0)`
/// * Fitzhugh–Nagumo (non-singular): `A = −(sθ₁ + K²D(0))`, `D(1) = D(θ₁) = −A/K²`
///
/// Parameter sets with `A ≥ 0` or `D(1) ≤ 0` are rejected.
pub fn consistency_constants(
    model: &ReactionModel,
    k: f64,
    d0: f64,
) -> Result<Anchors, ModelError> {
    check_positive("K", k)?;
    check_positive("D0", d0)?;
    let k2 = k * k;
    let s = model.s();
    let a = match model.kind() {
        ReactionKind::Fisher => s - k2 * d0,
        ReactionKind::Huxley => -k2 * d0,
        ReactionKind::FitzhughNagumo => -(s * model.theta1 + k2 * d0),
    };
    let d1 = match model.kind() {
        ReactionKind::Huxley => d0,
        _ => -a / k2,
    };
    finish_anchors(model, a, k, d0, d1, false)
}

/// Inverse of [`consistency_constants`]: recover `D(0)` from `A`.
pub fn anchors_from_rate(model: &ReactionModel, k: f64, a: f64) -> Result<Anchors, ModelError> {
    check_positive("K", k)?;
    if !(a < 0.0) {
        return Err(ModelError::NonDecayingRate { a });
    }
    let k2 = k * k;
    let d0 = match model.kind() {
        ReactionKind::Fisher => (model.s() - a) / k2,
        ReactionKind::Huxley => -a / k2,
        ReactionKind::FitzhughNagumo => -(a + model.s() * model.theta1) / k2,
    };
    check_positive("D0", d0)?;
    let d1 = -a / k2;
    finish_anchors(model, a, k, d0, d1, false)
}

/// Fitzhugh–Nagumo singular branch: `D(0) = −sθ₁/K²` with `A` supplied freely.
///
/// No diffusivity construction is specialised to this branch; the anchors are
/// exposed for diagnostics.
pub fn singular_branch_constants(
    model: &ReactionModel,
    k: f64,
    a: f64,
) -> Result<Anchors, ModelError> {
    check_positive("K", k)?;
    let theta1 = match model.theta1() {
        Some(t) if t < 0.0 => t,
        Some(t) => return Err(ModelError::SingularBranchUnavailable(t)),
        None => return Err(ModelError::SingularBranchUnavailable(f64::NAN)),
    };
    let k2 = k * k;
    let d0 = -model.s() * theta1 / k2;
    finish_anchors(model, a, k, d0, -a / k2, true)
}

fn finish_anchors(
    model: &ReactionModel,
    a: f64,
    k: f64,
    d0: f64,
    d1: f64,
    singular: bool,
) -> Result<Anchors, ModelError> {
    if !(a < 0.0) {
        return Err(ModelError::NonDecayingRate { a });
    }
    if !(d1 > 0.0) {
        return Err(ModelError::NonPositiveAnchor { d1 });
    }
    Ok(Anchors {
        params: SymmetryParams::helmholtz(a, k)?,
        d0,
        d1,
        d_theta1: model.theta1().map(|_| d1),
        singular,
    })
}

/// Why a `(family, sign κ)` pair cannot describe a bounded population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InadmissibleReason {
    /// `κ = 0`: the closed-form diffusivity diverges at a zero of `R`.
    DivergentDiffusivity,
    /// `κ < 0`: `A = K²D(1) > 0` forces growth, with modes singular at the
    /// origin or unbounded at large `r`.
    ForcedGrowth,
}

/// Outcome of the admissibility case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Admissibility {
    /// `κ = K² > 0`: valid with `A = −K²D(1) < 0`.
    Admissible,
    Inadmissible { reason: InadmissibleReason },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }

    /// Human-readable explanation for the pair.
    pub fn explain(&self, kind: ReactionKind) -> &'static str {
        match (self, kind) {
            (Admissibility::Admissible, _) => {
                "kappa = K^2 > 0: D(1) = -A/K^2 > 0 forces A < 0, u decays exponentially"
            }
            (
                Admissibility::Inadmissible {
                    reason: InadmissibleReason::DivergentDiffusivity,
                },
                ReactionKind::Fisher,
            ) => "kappa = 0: positivity forces A < 0 and then D -> infinity as theta -> 1-",
            (
                Admissibility::Inadmissible {
                    reason: InadmissibleReason::DivergentDiffusivity,
                },
                ReactionKind::Huxley,
            ) => "kappa = 0: D diverges as theta -> 0 for A >= 0 and as theta -> 1- for A < 0",
            (
                Admissibility::Inadmissible {
                    reason: InadmissibleReason::DivergentDiffusivity,
                },
                ReactionKind::FitzhughNagumo,
            ) => "kappa = 0: D diverges at theta1 (A < 0), at 0 and 1 (A > 0), at all zeros of R (A = 0)",
            (
                Admissibility::Inadmissible {
                    reason: InadmissibleReason::ForcedGrowth,
                },
                _,
            ) => "kappa = -K^2 < 0: R(1) = 0 gives A = K^2 D(1) > 0, unbounded growth or singular modes",
        }
    }
}

/// The case analysis is identical for all three families; the family only
/// changes where the divergence occurs (see [`Admissibility::explain`]).
pub fn classify_admissibility(_kind: ReactionKind, sign: KappaSign) -> Admissibility {
    match sign {
        KappaSign::Positive => Admissibility::Admissible,
        KappaSign::Zero => Admissibility::Inadmissible {
            reason: InadmissibleReason::DivergentDiffusivity,
        },
        KappaSign::Negative => Admissibility::Inadmissible {
            reason: InadmissibleReason::ForcedGrowth,
        },
    }
}
