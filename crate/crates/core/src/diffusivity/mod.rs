//! Compatible nonlinear diffusivities `D(θ)` and the Kirchhoff accumulator
//! `U(θ) = ∫₀^θ D`.
//!
//! Three routes are provided and cross-checked in the tests:
//!
//! * [`solve_profile`] integrates `dU/dθ = A·U / (R(θ) − κU)` from `U(0) = 0`;
//! * [`picard_iterate`] applies the fixed-point map
//!   `D ↦ A∫D / (R − κ∫D)` to a tabulated profile;
//! * [`closed_form_iterate`] evaluates the first iterates of that map in
//!   closed form, and [`laplace_branch_d`] the `κ = 0` general solutions.

mod closed_form;
mod laplace;
mod profile;

pub use closed_form::{closed_form_iterate, IterateLevel};
pub use laplace::{divergence_report, laplace_branch_d, Divergence, DivergenceReport};
pub use profile::{picard_iterate, solve_profile, solve_profile_with, DiffusivityProfile, SolveOptions};

use crate::model::ModelError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffusivityError {
    #[error("diffusivity diverges: R(θ) − κU(θ) vanishes near θ = {theta}")]
    BlowUp { theta: f64 },
    #[error("non-positive diffusivity D = {d} at θ = {theta}")]
    NonPositiveD { theta: f64, d: f64 },
    #[error("integrator step size underflow at θ = {theta}")]
    ToleranceFailure { theta: f64 },
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("closed-form level-2 iterate unavailable in this parameter regime: {0}")]
    WrongRegime(&'static str),
    #[error("closed-form iterate has a pole at θ = {theta}")]
    DomainSingularity { theta: f64 },
    #[error("κ = 0 closed form is singular at θ = {theta}")]
    EvaluationAtSingularity { theta: f64 },
    #[error("profile construction requires κ = K² > 0 and A < 0 (got A = {a}, κ = {kappa})")]
    Inadmissible { a: f64, kappa: f64 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
