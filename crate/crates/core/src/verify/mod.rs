//! Independent checks of assembled solutions: pointwise PDE residuals, the
//! compatibility relation on the profile grid, and a finite-difference
//! radial simulator used as an end-to-end oracle.

mod residual;
mod simulate;

pub use residual::{pde_residual, pde_residual_convergence, relation_residual, PdeResidual};
pub use simulate::{
    compare, compare_trajectories, fd_simulate, radiation_boundary_value, BoundaryCondition,
    ErrorNorms, SimConfig, SimState, Trajectory,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffusivity::DiffusivityError;
use crate::solution::SolutionError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("grid parameter `{name}` = {value} below the minimum {min}")]
    GridTooSmall {
        name: &'static str,
        value: usize,
        min: usize,
    },
    #[error("time step {dt} exceeds the stability limit {limit} (0.25·Δr²/max D)")]
    StabilityViolation { dt: f64, limit: f64 },
    #[error("inconsistent boundary condition: {0}")]
    BcInconsistent(String),
    #[error("initial density {value} at node {index} outside [0, {theta_max}]")]
    InitialOutOfRange {
        index: usize,
        value: f64,
        theta_max: f64,
    },
    #[error("Kirchhoff variable {u} at node {index} left [0, {u_max}] at t = {t}")]
    RangeExceeded {
        t: f64,
        index: usize,
        u: f64,
        u_max: f64,
    },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid simulation setup: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Solution(#[from] SolutionError),
    #[error(transparent)]
    Diffusivity(#[from] DiffusivityError),
}

/// Summary of one residual or convergence check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    /// Number of radial points (or θ grid points for the relation check).
    pub grid: usize,
    /// Time step, for simulator-based checks.
    pub dt: Option<f64>,
    pub max_abs: f64,
    pub rms: f64,
    pub samples: usize,
    /// Radial spacing, when a spatial grid is involved.
    pub dr: Option<f64>,
    /// Magnitude the residual is measured against.
    pub scale: f64,
    pub order_estimate: Option<f64>,
}

impl ResidualReport {
    pub(crate) fn from_values(
        check: &str,
        grid: usize,
        dr: Option<f64>,
        scale: f64,
        values: &[f64],
    ) -> Self {
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rms = if values.is_empty() {
            0.0
        } else {
            (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
        };
        Self {
            check: check.to_string(),
            grid,
            dt: None,
            max_abs,
            rms,
            samples: values.len(),
            dr,
            scale,
            order_estimate: None,
        }
    }

    /// `max_abs ≤ rel·scale`.
    pub fn within(&self, rel: f64) -> bool {
        self.max_abs <= rel * self.scale
    }
}
