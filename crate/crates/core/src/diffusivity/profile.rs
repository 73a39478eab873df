use std::io::{self, Write};

use super::DiffusivityError;
use crate::model::{anchors_from_rate, ReactionKind, ReactionModel, SymmetryParams};
use crate::numerics::{cumulative_simpson, fmt17, lagrange4_uniform, linspace, MonotoneHermite};
use crate::ode::{integrate_dense, OdeError, Tolerances};

/// Newton stopping tolerance (in θ) for Kirchhoff inversion.
const INVERSION_TOL: f64 = 1e-13;

/// Tabulated `(θ, U(θ), D(θ))` on a uniform grid over `[0, θ_max]`.
///
/// Invariants, checked at construction: `θ₀ = 0`, `U(0) = 0`, `D > 0`
/// everywhere and `U` strictly increasing (hence invertible).
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusivityProfile {
    model: ReactionModel,
    params: SymmetryParams,
    kirchhoff: MonotoneHermite,
    d: Vec<f64>,
    spacing: f64,
}

impl DiffusivityProfile {
    /// Build from explicit tables. `theta` must be uniform and start at 0.
    pub fn from_tables(
        model: ReactionModel,
        params: SymmetryParams,
        theta: Vec<f64>,
        u: Vec<f64>,
        d: Vec<f64>,
    ) -> Result<Self, DiffusivityError> {
        let n = theta.len();
        if n < 4 || u.len() != n || d.len() != n {
            return Err(DiffusivityError::InvalidProfile(format!(
                "need at least 4 points and equal lengths (θ: {n}, U: {}, D: {})",
                u.len(),
                d.len()
            )));
        }
        if theta[0] != 0.0 {
            return Err(DiffusivityError::InvalidProfile(format!(
                "grid must start at θ = 0, starts at {}",
                theta[0]
            )));
        }
        let spacing = theta[n - 1] / (n - 1) as f64;
        if !(spacing > 0.0)
            || theta
                .iter()
                .enumerate()
                .any(|(i, &t)| (t - i as f64 * spacing).abs() > 1e-9 * spacing)
        {
            return Err(DiffusivityError::InvalidProfile(
                "grid must be uniform and increasing".into(),
            ));
        }
        if u[0] != 0.0 {
            return Err(DiffusivityError::InvalidProfile(format!(
                "U(0) must be 0, got {}",
                u[0]
            )));
        }
        if let Some((i, &di)) = d
            .iter()
            .enumerate()
            .find(|(_, &di)| !(di > 0.0 && di.is_finite()))
        {
            return Err(DiffusivityError::NonPositiveD {
                theta: theta[i],
                d: di,
            });
        }
        if let Some(i) = (1..n).find(|&i| !(u[i] > u[i - 1])) {
            return Err(DiffusivityError::InvalidProfile(format!(
                "U not strictly increasing at θ = {}",
                theta[i]
            )));
        }
        let kirchhoff = MonotoneHermite::new(theta, u, d.clone());
        Ok(Self {
            model,
            params,
            kirchhoff,
            d,
            spacing,
        })
    }

    /// Build from diffusivity samples on a uniform grid over `[0, theta_max]`;
    /// `U` is the cumulative Simpson integral of `D`.
    pub fn from_diffusivity(
        model: ReactionModel,
        params: SymmetryParams,
        theta_max: f64,
        d: Vec<f64>,
    ) -> Result<Self, DiffusivityError> {
        if d.len() < 4 {
            return Err(DiffusivityError::InvalidProfile(
                "need at least 4 points".into(),
            ));
        }
        let theta = linspace(0.0, theta_max, d.len());
        let h = theta_max / (d.len() - 1) as f64;
        let u = cumulative_simpson(&d, h);
        Self::from_tables(model, params, theta, u, d)
    }

    /// Constant diffusivity `d0` (the zeroth iterate of the fixed-point map).
    pub fn constant(
        model: ReactionModel,
        params: SymmetryParams,
        d0: f64,
        theta_max: f64,
        points: usize,
    ) -> Result<Self, DiffusivityError> {
        let theta = linspace(0.0, theta_max, points);
        let u = theta.iter().map(|t| d0 * t).collect();
        Self::from_tables(model, params, theta, u, vec![d0; points])
    }

    pub fn model(&self) -> &ReactionModel {
        &self.model
    }

    pub fn params(&self) -> &SymmetryParams {
        &self.params
    }

    pub fn theta_grid(&self) -> &[f64] {
        self.kirchhoff.x()
    }

    pub fn kirchhoff_values(&self) -> &[f64] {
        self.kirchhoff.y()
    }

    pub fn diffusivity_values(&self) -> &[f64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn theta_max(&self) -> f64 {
        *self.theta_grid().last().expect("non-empty grid")
    }

    /// `U(θ_max)`, the largest Kirchhoff value the profile can invert.
    pub fn u_max(&self) -> f64 {
        *self.kirchhoff_values().last().expect("non-empty grid")
    }

    pub fn max_diffusivity(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// `U(θ)` by monotone cubic Hermite interpolation.
    pub fn kirchhoff_u(&self, theta: f64) -> Result<f64, DiffusivityError> {
        self.check_theta(theta)?;
        Ok(self.kirchhoff.eval(theta))
    }

    /// `θ` with `U(θ) = u`.
    pub fn invert_kirchhoff(&self, u: f64) -> Result<f64, DiffusivityError> {
        let hi = self.u_max();
        if !(0.0..=hi).contains(&u) {
            return Err(DiffusivityError::OutOfRange {
                what: "u",
                value: u,
                lo: 0.0,
                hi,
            });
        }
        Ok(self.kirchhoff.invert_increasing(u, INVERSION_TOL))
    }

    /// `D(θ)` by local cubic interpolation of the tabulated values.
    pub fn diffusivity_at(&self, theta: f64) -> Result<f64, DiffusivityError> {
        self.check_theta(theta)?;
        Ok(lagrange4_uniform(0.0, self.spacing, &self.d, theta))
    }

    fn check_theta(&self, theta: f64) -> Result<(), DiffusivityError> {
        let hi = self.theta_max();
        if (0.0..=hi).contains(&theta) {
            Ok(())
        } else {
            Err(DiffusivityError::OutOfRange {
                what: "theta",
                value: theta,
                lo: 0.0,
                hi,
            })
        }
    }

    /// CSV with header `theta,U,D`, one row per grid point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "theta,U,D")?;
        for ((t, u), d) in self
            .theta_grid()
            .iter()
            .zip(self.kirchhoff_values())
            .zip(&self.d)
        {
            writeln!(w, "{},{},{}", fmt17(*t), fmt17(*u), fmt17(*d))?;
        }
        Ok(())
    }
}

/// Options for [`solve_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub theta_max: f64,
    /// Relative tolerance of the adaptive integrator.
    pub rtol: f64,
    /// Absolute tolerance of the adaptive integrator.
    pub atol: f64,
    pub grid_points: usize,
    /// The singular start at θ = 0 is replaced by `U(ε) = D(0)·ε` with
    /// `ε = launch_fraction · θ_max`.
    pub launch_fraction: f64,
}

impl SolveOptions {
    /// `θ_max = 2` for Fisher, 1 otherwise.
    pub fn for_kind(kind: ReactionKind) -> Self {
        let theta_max = match kind {
            ReactionKind::Fisher => 2.0,
            _ => 1.0,
        };
        Self {
            theta_max,
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.rtol = tol;
        self.atol = tol * 1e-2;
        self
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            theta_max: 1.0,
            rtol: 1e-10,
            atol: 1e-12,
            grid_points: 1001,
            launch_fraction: 1e-6,
        }
    }
}

/// Integrate the compatibility ODE `dU/dθ = A·U / (R(θ) − κU)` with `U(0) = 0`.
///
/// `tol` is the relative tolerance (absolute is `tol/100`); the default grid
/// has 1001 points.
pub fn solve_profile(
    model: &ReactionModel,
    params: &SymmetryParams,
    theta_max: f64,
    tol: f64,
) -> Result<DiffusivityProfile, DiffusivityError> {
    let opts = SolveOptions {
        theta_max,
        ..SolveOptions::default()
    }
    .with_tol(tol);
    solve_profile_with(model, params, &opts)
}

/// [`solve_profile`] with full control over grid and launch.
pub fn solve_profile_with(
    model: &ReactionModel,
    params: &SymmetryParams,
    opts: &SolveOptions,
) -> Result<DiffusivityProfile, DiffusivityError> {
    let (a, kappa) = (params.a(), params.kappa());
    if !(kappa > 0.0 && a < 0.0) {
        return Err(DiffusivityError::Inadmissible { a, kappa });
    }
    if !(opts.theta_max > 0.0) || opts.grid_points < 4 {
        return Err(DiffusivityError::InvalidProfile(format!(
            "θ_max = {} and grid = {} must be positive and ≥ 4",
            opts.theta_max, opts.grid_points
        )));
    }
    let d0 = anchors_from_rate(model, params.k(), a)?.d0;
    let eps = opts.launch_fraction * opts.theta_max;

    let rhs = |theta: f64, u: f64| -> Option<f64> {
        let den = model.eval(theta) - kappa * u;
        let d = a * u / den;
        (den < 0.0 && d.is_finite()).then_some(d)
    };
    let den0 = model.eval(eps) - kappa * d0 * eps;
    if !(den0 < 0.0) {
        return Err(DiffusivityError::NonPositiveD {
            theta: eps,
            d: a * d0 * eps / den0,
        });
    }

    let theta = linspace(0.0, opts.theta_max, opts.grid_points);
    let tol = Tolerances {
        rtol: opts.rtol,
        atol: opts.atol,
        ..Tolerances::default()
    };
    let interior = integrate_dense(rhs, eps, d0 * eps, opts.theta_max, &theta[1..], tol)
        .map_err(|e| match e {
            OdeError::RhsFailure { x } => DiffusivityError::BlowUp { theta: x },
            OdeError::StepUnderflow { x, .. } => DiffusivityError::ToleranceFailure { theta: x },
            OdeError::TooManySteps(_) => DiffusivityError::ToleranceFailure {
                theta: opts.theta_max,
            },
        })?;

    let mut u = Vec::with_capacity(theta.len());
    let mut d = Vec::with_capacity(theta.len());
    u.push(0.0);
    d.push(d0);
    for (t, ui) in theta[1..].iter().zip(interior) {
        let den = model.eval(*t) - kappa * ui;
        let di = a * ui / den;
        if !(den < 0.0) || !di.is_finite() {
            return Err(DiffusivityError::BlowUp { theta: *t });
        }
        u.push(ui);
        d.push(di);
    }
    DiffusivityProfile::from_tables(*model, *params, theta, u, d)
}

/// One application of `D ↦ A·U / (R − κU)` with `U` the cumulative Simpson
/// integral of the current `D`. The new `U` is recomputed from the new `D`.
///
/// At θ = 0 the ratio is 0/0 and the one-sided limit
/// `A·D(0) / (R'(0) − κD(0))` is used.
pub fn picard_iterate(
    model: &ReactionModel,
    params: &SymmetryParams,
    current: &DiffusivityProfile,
) -> Result<DiffusivityProfile, DiffusivityError> {
    let (a, kappa) = (params.a(), params.kappa());
    let d = current.diffusivity_values();
    let theta = current.theta_grid();
    let u = cumulative_simpson(d, current.spacing());

    let mut next = Vec::with_capacity(d.len());
    let origin = a * d[0] / (model.derivative(0.0) - kappa * d[0]);
    if !(origin > 0.0 && origin.is_finite()) {
        return Err(DiffusivityError::BlowUp { theta: 0.0 });
    }
    next.push(origin);
    for (t, ui) in theta.iter().zip(&u).skip(1) {
        let di = a * ui / (model.eval(*t) - kappa * ui);
        if !(di > 0.0 && di.is_finite()) {
            return Err(DiffusivityError::BlowUp { theta: *t });
        }
        next.push(di);
    }
    DiffusivityProfile::from_diffusivity(*model, *params, current.theta_max(), next)
}
