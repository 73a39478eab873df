//! The separable solution `u(r,t) = e^{At}Φ(r)` and its density form
//! `θ(r,t) = U⁻¹(u(r,t))`, profile tables, and critical reserve radii.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffusivity::{DiffusivityError, DiffusivityProfile};
use crate::model::{KappaSign, ReactionKind, ReactionModel, SymmetryParams};
use crate::numerics::{fmt17, linspace};
use crate::spatial::{first_bessel_zero, Dimension, RadialMode, SpatialError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolutionError {
    #[error("inadmissible parameters: the exact solution needs A < 0 and kappa > 0 (A = {a}, kappa = {kappa})")]
    InadmissibleParams { a: f64, kappa: f64 },
    #[error("centre density {value} outside (0, {theta_max}]")]
    NormalizationOutOfRange { value: f64, theta_max: f64 },
    #[error("profile was built for different model or symmetry parameters")]
    ProfileMismatch,
    #[error("u({r}, {t}) exceeds the tabulated Kirchhoff range; earliest valid time is {earliest_t}")]
    AboveRange { r: f64, t: f64, earliest_t: f64 },
    #[error("radius {r} outside the solution domain [0, {r1}]")]
    OutOfDomain { r: f64, r1: f64 },
    #[error("Fitzhugh-Nagumo threshold theta1 = {0} >= 0: no finite protective radius")]
    NoProtectiveRadius(f64),
    #[error("`{name}` must be positive and finite, got {value}")]
    InvalidInput { name: &'static str, value: f64 },
    #[error(transparent)]
    Spatial(#[from] SpatialError),
    #[error(transparent)]
    Diffusivity(#[from] DiffusivityError),
}

/// An assembled exact solution on the disc (ball, interval) `0 ≤ r ≤ r₁`.
#[derive(Debug, Clone)]
pub struct ExactSolution {
    model: ReactionModel,
    params: SymmetryParams,
    profile: DiffusivityProfile,
    mode: RadialMode,
    theta_center0: f64,
    r1: f64,
}

impl ExactSolution {
    /// Build the solution whose centre density at `t = 0` is `theta_center0`.
    pub fn assemble(
        model: &ReactionModel,
        params: &SymmetryParams,
        profile: DiffusivityProfile,
        dim: Dimension,
        theta_center0: f64,
    ) -> Result<Self, SolutionError> {
        if !(params.a() < 0.0 && params.kappa_sign() == KappaSign::Positive) {
            return Err(SolutionError::InadmissibleParams {
                a: params.a(),
                kappa: params.kappa(),
            });
        }
        if profile.model() != model || profile.params() != params {
            return Err(SolutionError::ProfileMismatch);
        }
        let theta_max = profile.theta_max();
        if !(theta_center0 > 0.0 && theta_center0 <= theta_max) {
            return Err(SolutionError::NormalizationOutOfRange {
                value: theta_center0,
                theta_max,
            });
        }
        let c = profile.kirchhoff_u(theta_center0)?;
        let mode = RadialMode::helmholtz(dim, params.k(), c)?;
        let r1 = mode.domain_radius().expect("kappa > 0 mode");
        Ok(Self {
            model: *model,
            params: *params,
            profile,
            mode,
            theta_center0,
            r1,
        })
    }

    pub fn model(&self) -> &ReactionModel {
        &self.model
    }

    pub fn params(&self) -> &SymmetryParams {
        &self.params
    }

    pub fn profile(&self) -> &DiffusivityProfile {
        &self.profile
    }

    pub fn mode(&self) -> &RadialMode {
        &self.mode
    }

    pub fn a(&self) -> f64 {
        self.params.a()
    }

    pub fn theta_center0(&self) -> f64 {
        self.theta_center0
    }

    /// Outer cull radius `r₁`.
    pub fn domain_radius(&self) -> f64 {
        self.r1
    }

    /// Earliest time at which `u(0,t)` still lies inside the tabulated range.
    pub fn earliest_time(&self) -> f64 {
        (self.profile.u_max() / self.mode.amplitude()).ln() / self.a()
    }

    fn check_r(&self, r: f64) -> Result<(), SolutionError> {
        if (0.0..=self.r1).contains(&r) {
            Ok(())
        } else {
            Err(SolutionError::OutOfDomain { r, r1: self.r1 })
        }
    }

    /// Kirchhoff variable `u(r,t)`; exactly zero at `r₁`.
    pub fn u(&self, r: f64, t: f64) -> Result<f64, SolutionError> {
        self.check_r(r)?;
        if r == self.r1 {
            return Ok(0.0);
        }
        Ok((self.a() * t).exp() * self.mode.phi(r).max(0.0))
    }

    /// `∂u/∂r`.
    pub fn u_r(&self, r: f64, t: f64) -> Result<f64, SolutionError> {
        self.check_r(r)?;
        Ok((self.a() * t).exp() * self.mode.phi_prime(r))
    }

    /// Density `θ(r,t)`.
    pub fn theta_at(&self, r: f64, t: f64) -> Result<f64, SolutionError> {
        let u = self.u(r, t)?;
        self.theta_from_u(u, r, t)
    }

    fn theta_from_u(&self, u: f64, r: f64, t: f64) -> Result<f64, SolutionError> {
        if u == 0.0 {
            return Ok(0.0);
        }
        if u > self.profile.u_max() {
            return Err(SolutionError::AboveRange {
                r,
                t,
                earliest_t: self.earliest_time(),
            });
        }
        Ok(self.profile.invert_kirchhoff(u)?)
    }
}

/// Largest admissible centre density not above `preferred` for which the
/// solution stays in range back to `t_min`.
pub fn center_density_for(
    profile: &DiffusivityProfile,
    preferred: f64,
    t_min: f64,
) -> Result<f64, SolutionError> {
    let a = profile.params().a();
    // a hair inside the range so the round trip through U⁻¹ cannot overshoot
    let limit = (profile.u_max() * (-a * t_min).exp()).min(profile.u_max()) * (1.0 - 1e-12);
    let fit = profile.invert_kirchhoff(limit)?;
    Ok(preferred.min(fit))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub t: f64,
    pub r: f64,
    pub u: f64,
    pub theta: f64,
}

/// Solution samples, row-major by time then radius.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfileTable {
    pub rows: Vec<TableRow>,
}

impl ProfileTable {
    /// CSV with header `t,r,u,theta`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,r,u,theta")?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{},{}",
                fmt17(row.t),
                fmt17(row.r),
                fmt17(row.u),
                fmt17(row.theta)
            )?;
        }
        Ok(())
    }

    /// Rows belonging to time `t`.
    pub fn at_time(&self, t: f64) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(move |row| row.t == t)
    }
}

/// Default number of radii per time in [`profile_table`].
pub const DEFAULT_RADII: usize = 257;

/// `(t, r, u, θ)` on a uniform radial grid over `[0, r₁]` for each time.
pub fn profile_table(
    sol: &ExactSolution,
    times: &[f64],
    n_radii: usize,
) -> Result<ProfileTable, SolutionError> {
    let radii = linspace(0.0, sol.domain_radius(), n_radii.max(2));
    let mut rows = Vec::with_capacity(times.len() * radii.len());
    for &t in times {
        for &r in &radii {
            let u = sol.u(r, t)?;
            let theta = sol.theta_from_u(u, r, t)?;
            rows.push(TableRow { t, r, u, theta });
        }
    }
    Ok(ProfileTable { rows })
}

/// Minimum reserve radius for which the extinguishing solution no longer
/// exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReserveDesign {
    pub kind: ReactionKind,
    #[serde(rename = "D0")]
    pub d0: f64,
    pub s: f64,
    pub theta1: Option<f64>,
    pub lambda1: f64,
    pub r_crit: Option<f64>,
    pub diameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// `λ₁√(D₀/s)` (Fisher), `λ₁√(D₀/(s|θ₁|))` (Fitzhugh–Nagumo with `θ₁ < 0`);
/// Huxley has no finite critical radius.
pub fn critical_radius(
    kind: ReactionKind,
    d0: f64,
    s: f64,
    theta1: Option<f64>,
) -> Result<ReserveDesign, SolutionError> {
    for (name, value) in [("D0", d0), ("s", s)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(SolutionError::InvalidInput { name, value });
        }
    }
    let lambda1 = first_bessel_zero();
    let (r_crit, note) = match kind {
        ReactionKind::Fisher => (Some(lambda1 * (d0 / s).sqrt()), None),
        ReactionKind::Huxley => (
            None,
            Some(
                "the extinguishing solution exists for every domain radius; \
                 no reserve size protects the population"
                    .to_string(),
            ),
        ),
        ReactionKind::FitzhughNagumo => {
            let t1 = theta1.ok_or(SolutionError::InvalidInput {
                name: "theta1",
                value: f64::NAN,
            })?;
            if !(t1 < 0.0) {
                return Err(SolutionError::NoProtectiveRadius(t1));
            }
            (Some(lambda1 * (d0 / (s * t1.abs())).sqrt()), None)
        }
    };
    Ok(ReserveDesign {
        kind,
        d0,
        s,
        theta1: if kind == ReactionKind::FitzhughNagumo {
            theta1
        } else {
            None
        },
        lambda1,
        r_crit,
        diameter: r_crit.map(|r| 2.0 * r),
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::j0;
    use crate::diffusivity::solve_profile;
    use approx::assert_relative_eq;

    fn fisher() -> ExactSolution {
        let m = ReactionModel::fisher(1.0).unwrap();
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let prof = solve_profile(&m, &p, 2.0, 1e-10).unwrap();
        ExactSolution::assemble(&m, &p, prof, Dimension::Two, 1.0).unwrap()
    }

    #[test]
    fn normalisation_and_boundary() {
        let sol = fisher();
        assert_relative_eq!(sol.theta_at(0.0, 0.0).unwrap(), 1.0, epsilon = 1e-12);
        let r1 = sol.domain_radius();
        for t in [-0.5, 0.0, 1.0, 7.0] {
            assert_eq!(sol.u(r1, t).unwrap(), 0.0);
            assert_eq!(sol.theta_at(r1, t).unwrap(), 0.0);
            let h = 1e-5;
            let u = |r| sol.u(r, t).unwrap();
            let d = (-3.0 * u(0.0) + 4.0 * u(h) - u(2.0 * h)) / (2.0 * h);
            assert!(d.abs() <= 1e-8 * u(0.0));
            assert_eq!(sol.u_r(0.0, t).unwrap(), 0.0);
        }
        assert!(matches!(sol.u(r1 * 1.01, 0.0), Err(SolutionError::OutOfDomain { .. })));
    }

    #[test]
    fn separable_in_time() {
        let sol = fisher();
        let a = sol.a();
        for i in 0..20 {
            let r = sol.domain_radius() * i as f64 / 20.0;
            let u0 = sol.u(r, 0.0).unwrap();
            for t in [0.3, 1.0, 2.5] {
                assert_relative_eq!(sol.u(r, t).unwrap(), u0 * (a * t).exp(), max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn density_decays_monotonically() {
        let sol = fisher();
        let times: Vec<f64> = [-0.4, 0.0, 1.5, 2.5].iter().map(|x| x / 1.5).collect();
        let table = profile_table(&sol, &times, 65).unwrap();
        for i in 0..64 {
            let col: Vec<f64> = (0..times.len())
                .map(|k| table.rows[k * 65 + i].theta)
                .collect();
            assert!(col.windows(2).all(|w| w[1] < w[0]), "radius index {i}");
        }
        assert!(table.at_time(times[2]).last().unwrap().theta == 0.0);
    }

    #[test]
    fn above_range_reports_earliest_time() {
        let sol = fisher();
        let t_bad = -1.5 / 1.5;
        match sol.theta_at(0.0, t_bad) {
            Err(SolutionError::AboveRange { earliest_t, .. }) => {
                assert!(earliest_t > t_bad);
                assert!(sol.theta_at(0.0, earliest_t + 1e-9).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn centre_density_fitting() {
        let sol = fisher();
        let t_min = -1.0;
        let c = center_density_for(sol.profile(), 1.0, t_min).unwrap();
        assert!(c < 1.0);
        let m = *sol.model();
        let p = *sol.params();
        let lowered =
            ExactSolution::assemble(&m, &p, sol.profile().clone(), Dimension::Two, c).unwrap();
        assert!(lowered.theta_at(0.0, t_min).is_ok());
        assert_eq!(center_density_for(sol.profile(), 1.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn assembly_errors() {
        let m = ReactionModel::fisher(1.0).unwrap();
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let prof = solve_profile(&m, &p, 2.0, 1e-8).unwrap();
        assert!(matches!(
            ExactSolution::assemble(&m, &p, prof.clone(), Dimension::Two, 2.5),
            Err(SolutionError::NormalizationOutOfRange { .. })
        ));
        let other = SymmetryParams::helmholtz(-1.0, 1.0).unwrap();
        assert!(matches!(
            ExactSolution::assemble(&m, &other, prof.clone(), Dimension::Two, 1.0),
            Err(SolutionError::ProfileMismatch)
        ));
        let grow = SymmetryParams::modified_helmholtz(1.0, 1.0).unwrap();
        assert!(matches!(
            ExactSolution::assemble(&m, &grow, prof, Dimension::Two, 1.0),
            Err(SolutionError::InadmissibleParams { .. })
        ));
    }

    #[test]
    fn reserve_examples() {
        let f = critical_radius(ReactionKind::Fisher, 100.0, 0.2, None).unwrap();
        assert!((f.diameter.unwrap() - 107.5).abs() < 1.0);
        let g = critical_radius(ReactionKind::FitzhughNagumo, 100.0, 0.2, Some(-0.4)).unwrap();
        assert!((g.diameter.unwrap() - 170.0).abs() < 0.5);
        let h = critical_radius(ReactionKind::Huxley, 100.0, 0.2, None).unwrap();
        assert!(h.r_crit.is_none() && h.note.is_some());
        assert_eq!(
            critical_radius(ReactionKind::FitzhughNagumo, 1.0, 1.0, Some(0.3)),
            Err(SolutionError::NoProtectiveRadius(0.3))
        );
        let json = serde_json::to_value(&f).unwrap();
        for key in ["kind", "D0", "s", "theta1", "lambda1", "r_crit", "diameter"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn critical_radius_homogeneity() {
        for c in [0.5, 2.0, 3.7] {
            let base = critical_radius(ReactionKind::Fisher, 4.0, 0.3, None).unwrap();
            let scaled = critical_radius(ReactionKind::Fisher, c * c * 4.0, 0.3, None).unwrap();
            assert_relative_eq!(
                scaled.r_crit.unwrap(),
                c * base.r_crit.unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn huxley_late_time_shape_vs_bessel() {
        let m = ReactionModel::huxley(1.0).unwrap();
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let prof = solve_profile(&m, &p, 1.0, 1e-10).unwrap();
        let sol = ExactSolution::assemble(&m, &p, prof, Dimension::Two, 1.0).unwrap();
        let dev = |abs_at: f64| {
            let t = abs_at / 1.5;
            let c = sol.theta_at(0.0, t).unwrap();
            (0..=64)
                .map(|i| {
                    let r = sol.domain_radius() * i as f64 / 64.0;
                    sol.theta_at(r, t).unwrap() / c - j0(r)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        };
        // U⁻¹ is concave where D increases, so the scaled density sits above
        // J₀ and relaxes onto it
        let (early, late) = (dev(1.0), dev(3.0));
        assert!(late > 0.0 && late < early, "{early:e} {late:e}");
        assert!(late < 1e-2);
    }
}
