//! Method-of-lines radial simulator for `u_t = D(θ(u))·(∇²u + R(θ(u)))`.
//!
//! The Laplacian is the conservative second-order finite-volume form on a
//! uniform grid `r_i = iΔr`:
//!
//! * interior: `[(i+½)^{N−1}(u_{i+1}−u_i) − (i−½)^{N−1}(u_i−u_{i−1})] / (i^{N−1}Δr²)`
//! * origin: `2N(u₁ − u₀)/Δr²` (symmetry, ghost node `u₋₁ = u₁`)
//!
//! Boundary values at `r = R` are algebraic for Dirichlet, Robin and the
//! nonlinear radiation condition (one-sided second-order `u_r`), and a
//! half cell for the diagnostic zero-flux condition. Time stepping is
//! classical RK4 with a fixed step.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::diffusivity::DiffusivityProfile;
use crate::numerics::{fmt17, linspace};
use crate::solution::ExactSolution;
use crate::spatial::Dimension;

/// Stability constant `C` in `dt ≤ C·Δr²/max D`.
pub const STABILITY_CONSTANT: f64 = 0.25;

const NEWTON_MAX_ITER: usize = 10;
const NEWTON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// `u(R) = 0`.
    Dirichlet,
    /// `−u_r = p·u` at `R`.
    Robin { p: f64 },
    /// `−u_r = H·u²` at `R`.
    NonlinearRadiation { h: f64 },
    /// `u_r = 0` at `R`; diagnostic.
    ZeroFlux,
}

impl BoundaryCondition {
    fn is_algebraic(self) -> bool {
        !matches!(self, BoundaryCondition::ZeroFlux)
    }

    fn validate(self) -> Result<(), VerifyError> {
        match self {
            BoundaryCondition::Robin { p } if !(p >= 0.0 && p.is_finite()) => Err(
                VerifyError::BcInconsistent(format!("Robin coefficient p = {p} must be >= 0")),
            ),
            BoundaryCondition::NonlinearRadiation { h } if !(h >= 0.0 && h.is_finite()) => Err(
                VerifyError::BcInconsistent(format!("radiation coefficient H = {h} must be >= 0")),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dim: Dimension,
    /// Outer radius `R` of the simulated domain.
    pub radius: f64,
    pub n_r: usize,
    /// Requested step; the run uses the largest step `≤ dt` that divides
    /// `t_end` into a multiple of `n_samples` steps.
    pub dt: f64,
    pub t_end: f64,
    pub bc: BoundaryCondition,
    /// Number of output intervals; `n_samples + 1` states are recorded.
    pub n_samples: usize,
    /// `false` drops the reaction term (diagnostic).
    pub reaction: bool,
}

impl SimConfig {
    /// Configuration at the stability-limited step for `profile`.
    pub fn stable(
        profile: &DiffusivityProfile,
        dim: Dimension,
        radius: f64,
        n_r: usize,
        t_end: f64,
        bc: BoundaryCondition,
    ) -> Self {
        Self {
            dim,
            radius,
            n_r,
            dt: Self::stable_dt(profile, radius, n_r),
            t_end,
            bc,
            n_samples: 1,
            reaction: true,
        }
    }

    /// `0.25·Δr²/max D` over the profile grid.
    pub fn stable_dt(profile: &DiffusivityProfile, radius: f64, n_r: usize) -> f64 {
        let dr = radius / (n_r.max(2) - 1) as f64;
        STABILITY_CONSTANT * dr * dr / profile.max_diffusivity()
    }

    pub fn spacing(&self) -> f64 {
        self.radius / (self.n_r - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(0.0, self.radius, self.n_r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub t: f64,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dim: Dimension,
    pub radius: f64,
    pub dr: f64,
    /// Step actually taken.
    pub dt: f64,
    pub steps: usize,
    pub r: Vec<f64>,
    pub states: Vec<SimState>,
}

impl Trajectory {
    /// Finite-volume weights `V_i` with `Σ V_i ≈ R^N/N`.
    pub fn cell_volumes(&self) -> Vec<f64> {
        cell_volumes(self.dim, self.dr, self.r.len())
    }

    /// `Σ V_i·values_i`, the discrete `∫ values·r^{N−1} dr`.
    pub fn integral(&self, values: &[f64]) -> f64 {
        self.cell_volumes()
            .iter()
            .zip(values)
            .map(|(v, x)| v * x)
            .sum()
    }

    /// CSV with header `t,r,u,theta`, row-major by time then radius.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,r,u,theta")?;
        for s in &self.states {
            for ((r, u), th) in self.r.iter().zip(&s.u).zip(&s.theta) {
                writeln!(w, "{},{},{},{}", fmt17(s.t), fmt17(*r), fmt17(*u), fmt17(*th))?;
            }
        }
        Ok(())
    }
}

fn cell_volumes(dim: Dimension, dr: f64, n: usize) -> Vec<f64> {
    let nd = dim.n() as i32;
    let nf = nd as f64;
    let m = n - 1;
    (0..n)
        .map(|i| {
            if i == 0 {
                (0.5 * dr).powi(nd) / nf
            } else if i == m {
                let r = i as f64 * dr;
                (r.powi(nd) - (r - 0.5 * dr).powi(nd)) / nf
            } else {
                (i as f64 * dr).powi(nd - 1) * dr
            }
        })
        .collect()
}

/// Positive root of `2ΔrH·x² + 3x − c = 0` by Newton's method from `c/3`.
///
/// This is the boundary value for `−u_r = H·u²` with the one-sided
/// difference `u_r ≈ (3u_M − 4u_{M−1} + u_{M−2})/(2Δr)` and
/// `c = 4u_{M−1} − u_{M−2}`.
pub fn radiation_boundary_value(c: f64, dr: f64, h: f64) -> f64 {
    let q = 2.0 * dr * h;
    let mut x = c / 3.0;
    if q == 0.0 {
        return x;
    }
    for _ in 0..NEWTON_MAX_ITER {
        let f = q * x * x + 3.0 * x - c;
        let step = f / (2.0 * q * x + 3.0);
        x -= step;
        if step.abs() <= NEWTON_TOL * x.abs() {
            break;
        }
    }
    x
}

struct Operator<'a> {
    profile: &'a DiffusivityProfile,
    bc: BoundaryCondition,
    reaction: bool,
    dr: f64,
    /// `(i+½)^{N−1}/(i^{N−1}Δr²)` and `(i−½)^{N−1}/(i^{N−1}Δr²)`.
    plus: Vec<f64>,
    minus: Vec<f64>,
    origin: f64,
    /// Zero-flux closure: `r_{M−½}^{N−1}/(Δr·V_M)`.
    outer: f64,
    u_max: f64,
}

impl<'a> Operator<'a> {
    fn new(profile: &'a DiffusivityProfile, cfg: &SimConfig) -> Self {
        let n = cfg.n_r;
        let dr = cfg.spacing();
        let e = cfg.dim.n() as i32 - 1;
        let inv = 1.0 / (dr * dr);
        let mut plus = vec![0.0; n];
        let mut minus = vec![0.0; n];
        for i in 1..n {
            let fi = i as f64;
            plus[i] = ((fi + 0.5) / fi).powi(e) * inv;
            minus[i] = ((fi - 0.5) / fi).powi(e) * inv;
        }
        let m = n - 1;
        let vm = cell_volumes(cfg.dim, dr, n)[m];
        let outer = ((m as f64 - 0.5) * dr).powi(e) / (dr * vm);
        Self {
            profile,
            bc: cfg.bc,
            reaction: cfg.reaction,
            dr,
            plus,
            minus,
            origin: 2.0 * cfg.dim.n() as f64 * inv,
            outer,
            u_max: profile.u_max(),
        }
    }

    fn apply_bc(&self, u: &mut [f64]) {
        let m = u.len() - 1;
        let c = 4.0 * u[m - 1] - u[m - 2];
        match self.bc {
            BoundaryCondition::Dirichlet => u[m] = 0.0,
            BoundaryCondition::Robin { p } => u[m] = c / (3.0 + 2.0 * p * self.dr),
            BoundaryCondition::NonlinearRadiation { h } => {
                u[m] = radiation_boundary_value(c, self.dr, h)
            }
            BoundaryCondition::ZeroFlux => {}
        }
    }

    fn theta(&self, u: f64, index: usize, t: f64) -> Result<f64, VerifyError> {
        if !(0.0..=self.u_max).contains(&u) {
            return Err(VerifyError::RangeExceeded {
                t,
                index,
                u,
                u_max: self.u_max,
            });
        }
        Ok(self.profile.invert_kirchhoff(u)?)
    }

    fn rhs(&self, u: &[f64], out: &mut [f64], t: f64) -> Result<(), VerifyError> {
        let n = u.len();
        let m = n - 1;
        let model = self.profile.model();
        for i in 0..n {
            if i == m && self.bc.is_algebraic() {
                out[i] = 0.0;
                continue;
            }
            let lap = if i == 0 {
                self.origin * (u[1] - u[0])
            } else if i == m {
                -self.outer * (u[m] - u[m - 1])
            } else {
                self.plus[i] * (u[i + 1] - u[i]) - self.minus[i] * (u[i] - u[i - 1])
            };
            let theta = self.theta(u[i], i, t)?;
            let d = self.profile.diffusivity_at(theta)?;
            let r = if self.reaction { model.eval(theta) } else { 0.0 };
            out[i] = d * (lap + r);
        }
        Ok(())
    }
}

/// Integrate from the densities `initial_theta` (one per grid node) to
/// `cfg.t_end`, recording `cfg.n_samples + 1` evenly spaced states.
pub fn fd_simulate(
    initial_theta: &[f64],
    profile: &DiffusivityProfile,
    cfg: &SimConfig,
) -> Result<Trajectory, VerifyError> {
    if cfg.n_r < 5 {
        return Err(VerifyError::GridTooSmall {
            name: "n_r",
            value: cfg.n_r,
            min: 5,
        });
    }
    if !(cfg.radius > 0.0 && cfg.radius.is_finite()) {
        return Err(VerifyError::InvalidConfig(format!("radius = {}", cfg.radius)));
    }
    if !(cfg.t_end >= 0.0 && cfg.t_end.is_finite() && cfg.dt > 0.0 && cfg.n_samples >= 1) {
        return Err(VerifyError::InvalidConfig(format!(
            "t_end = {}, dt = {}, n_samples = {}",
            cfg.t_end, cfg.dt, cfg.n_samples
        )));
    }
    cfg.bc.validate()?;
    let limit = SimConfig::stable_dt(profile, cfg.radius, cfg.n_r);
    if cfg.dt > limit * (1.0 + 1e-12) {
        return Err(VerifyError::StabilityViolation { dt: cfg.dt, limit });
    }
    if initial_theta.len() != cfg.n_r {
        return Err(VerifyError::GridMismatch(format!(
            "{} initial values for {} nodes",
            initial_theta.len(),
            cfg.n_r
        )));
    }
    let theta_max = profile.theta_max();
    let mut u = Vec::with_capacity(cfg.n_r);
    for (index, &value) in initial_theta.iter().enumerate() {
        if !(0.0..=theta_max).contains(&value) {
            return Err(VerifyError::InitialOutOfRange {
                index,
                value,
                theta_max,
            });
        }
        u.push(profile.kirchhoff_u(value)?);
    }

    let op = Operator::new(profile, cfg);
    op.apply_bc(&mut u);

    let per_sample = ((cfg.t_end / cfg.dt / cfg.n_samples as f64) - 1e-9).ceil().max(1.0) as usize;
    let steps = if cfg.t_end == 0.0 {
        0
    } else {
        per_sample * cfg.n_samples
    };
    let dt = if steps == 0 {
        0.0
    } else {
        cfg.t_end / steps as f64
    };

    let record = |u: &[f64], t: f64| -> Result<SimState, VerifyError> {
        let theta = u
            .iter()
            .enumerate()
            .map(|(i, &x)| op.theta(x, i, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimState {
            t,
            u: u.to_vec(),
            theta,
        })
    };

    let n = cfg.n_r;
    let mut states = vec![record(&u, 0.0)?];
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut stage = vec![0.0; n];
    for step in 0..steps {
        let t = cfg.t_end * step as f64 / steps as f64;
        op.rhs(&u, &mut k1, t)?;
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k1[i];
        }
        op.apply_bc(&mut stage);
        op.rhs(&stage, &mut k2, t + 0.5 * dt)?;
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k2[i];
        }
        op.apply_bc(&mut stage);
        op.rhs(&stage, &mut k3, t + 0.5 * dt)?;
        for i in 0..n {
            stage[i] = u[i] + dt * k3[i];
        }
        op.apply_bc(&mut stage);
        op.rhs(&stage, &mut k4, t + dt)?;
        for i in 0..n {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        op.apply_bc(&mut u);
        if (step + 1) % per_sample == 0 {
            let t_next = cfg.t_end * (step + 1) as f64 / steps as f64;
            states.push(record(&u, t_next)?);
        }
    }
    Ok(Trajectory {
        dim: cfg.dim,
        radius: cfg.radius,
        dr: cfg.spacing(),
        dt,
        steps,
        r: cfg.grid(),
        states,
    })
}

/// Error norms of a density field at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub t: f64,
    pub linf: f64,
    /// `√(Σ V_i e_i² / Σ V_i)`.
    pub l2: f64,
}

fn norms(t: f64, volumes: &[f64], diff: impl Iterator<Item = f64>) -> ErrorNorms {
    let mut linf = 0.0f64;
    let mut sum = 0.0;
    for (v, e) in volumes.iter().zip(diff) {
        linf = linf.max(e.abs());
        sum += v * e * e;
    }
    ErrorNorms {
        t,
        linf,
        l2: (sum / volumes.iter().sum::<f64>()).sqrt(),
    }
}

/// `θ_sim − θ_exact` at every recorded state. The simulated domain must lie
/// inside `[0, r₁]` and share the solution's dimension.
pub fn compare(traj: &Trajectory, sol: &ExactSolution) -> Result<Vec<ErrorNorms>, VerifyError> {
    if traj.dim != sol.mode().dim() {
        return Err(VerifyError::GridMismatch(format!(
            "trajectory in {} dimensions, solution in {}",
            traj.dim.n(),
            sol.mode().dim().n()
        )));
    }
    let r1 = sol.domain_radius();
    if traj.radius > r1 * (1.0 + 1e-12) {
        return Err(VerifyError::GridMismatch(format!(
            "trajectory radius {} exceeds solution domain {r1}",
            traj.radius
        )));
    }
    let volumes = traj.cell_volumes();
    traj.states
        .iter()
        .map(|s| {
            let exact = traj
                .r
                .iter()
                .map(|&r| sol.theta_at(r.min(r1), s.t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(norms(
                s.t,
                &volumes,
                s.theta.iter().zip(&exact).map(|(a, b)| a - b),
            ))
        })
        .collect()
}

/// Norms of `θ_a − θ_b` for two runs on the same grid and sample times.
pub fn compare_trajectories(a: &Trajectory, b: &Trajectory) -> Result<Vec<ErrorNorms>, VerifyError> {
    if a.dim != b.dim || a.r.len() != b.r.len() || (a.radius - b.radius).abs() > 1e-12 * a.radius {
        return Err(VerifyError::GridMismatch(format!(
            "grids differ: {} nodes on [0, {}] vs {} nodes on [0, {}]",
            a.r.len(),
            a.radius,
            b.r.len(),
            b.radius
        )));
    }
    if a.states.len() != b.states.len() {
        return Err(VerifyError::GridMismatch(format!(
            "{} vs {} recorded states",
            a.states.len(),
            b.states.len()
        )));
    }
    let volumes = a.cell_volumes();
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| {
            if (x.t - y.t).abs() > 1e-9 * x.t.abs().max(1.0) {
                return Err(VerifyError::GridMismatch(format!(
                    "sample times {} and {} differ",
                    x.t, y.t
                )));
            }
            Ok(norms(
                x.t,
                &volumes,
                x.theta.iter().zip(&y.theta).map(|(p, q)| p - q),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusivity::solve_profile;
    use crate::model::{ReactionModel, SymmetryParams};
    use crate::numerics::observed_order;
    use crate::spatial::{robin_coefficient, robin_radius};
    use approx::assert_relative_eq;

    fn fisher_solution() -> ExactSolution {
        let m = ReactionModel::fisher(1.0).unwrap();
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let prof = solve_profile(&m, &p, 2.0, 1e-10).unwrap();
        ExactSolution::assemble(&m, &p, prof, Dimension::Two, 1.0).unwrap()
    }

    fn seeded(sol: &ExactSolution, radius: f64, n_r: usize, t_end: f64, bc: BoundaryCondition) -> (Vec<f64>, SimConfig) {
        let cfg = SimConfig::stable(sol.profile(), Dimension::Two, radius, n_r, t_end, bc);
        let init = cfg
            .grid()
            .iter()
            .map(|&r| sol.theta_at(r.min(sol.domain_radius()), 0.0).unwrap())
            .collect();
        (init, cfg)
    }

    #[test]
    fn radiation_newton_matches_closed_form() {
        for &(c, dr, h) in &[(1.0f64, 0.01, 2.0), (3.7, 0.1, 0.5), (1e-6, 0.02, 10.0), (2.0, 0.05, 0.0)] {
            let closed = 2.0 * c / (3.0 + (9.0 + 8.0 * dr * h * c).sqrt());
            assert_relative_eq!(radiation_boundary_value(c, dr, h), closed, max_relative = 1e-14);
        }
    }

    #[test]
    fn zero_state_is_an_equilibrium() {
        let sol = fisher_solution();
        let cfg = SimConfig::stable(sol.profile(), Dimension::Two, 2.0, 33, 0.2, BoundaryCondition::Dirichlet);
        let traj = fd_simulate(&vec![0.0; 33], sol.profile(), &cfg).unwrap();
        assert!(traj.states.last().unwrap().theta.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_bad_setups() {
        let sol = fisher_solution();
        let mut cfg = SimConfig::stable(sol.profile(), Dimension::Two, 2.0, 33, 0.1, BoundaryCondition::Dirichlet);
        cfg.dt *= 1.5;
        assert!(matches!(
            fd_simulate(&vec![0.0; 33], sol.profile(), &cfg),
            Err(VerifyError::StabilityViolation { .. })
        ));
        cfg.dt /= 1.5;
        cfg.bc = BoundaryCondition::Robin { p: -1.0 };
        assert!(matches!(
            fd_simulate(&vec![0.0; 33], sol.profile(), &cfg),
            Err(VerifyError::BcInconsistent(_))
        ));
        cfg.bc = BoundaryCondition::Dirichlet;
        let mut init = vec![0.0; 33];
        init[3] = 2.5;
        assert!(matches!(
            fd_simulate(&init, sol.profile(), &cfg),
            Err(VerifyError::InitialOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn tracks_exact_solution_with_second_order_in_space() {
        let sol = fisher_solution();
        let r1 = sol.domain_radius();
        let t_end = 0.2;
        let mut errs = Vec::new();
        let mut hs = Vec::new();
        for n_r in [33, 65, 129] {
            let (init, cfg) = seeded(&sol, r1, n_r, t_end, BoundaryCondition::Dirichlet);
            let traj = fd_simulate(&init, sol.profile(), &cfg).unwrap();
            let e = compare(&traj, &sol).unwrap();
            assert!(e[0].linf < 1e-12);
            errs.push(e.last().unwrap().linf);
            hs.push(cfg.spacing());
        }
        let order = observed_order(&hs, &errs);
        assert!((1.8..2.3).contains(&order), "order {order}, errors {errs:?}");
    }

    #[test]
    fn fourth_order_in_time() {
        // Large-step runs against a fine-step reference on the same grid.
        let sol = fisher_solution();
        let r1 = sol.domain_radius();
        let (init, base) = seeded(&sol, r1, 17, 0.05, BoundaryCondition::Dirichlet);
        let run = |factor: f64| {
            let mut cfg = base;
            cfg.dt = base.dt * factor;
            fd_simulate(&init, sol.profile(), &cfg).unwrap()
        };
        let reference = run(1.0 / 16.0);
        let mut errs = Vec::new();
        let mut dts = Vec::new();
        for f in [1.0, 0.5, 0.25] {
            let traj = run(f);
            dts.push(traj.dt);
            errs.push(compare_trajectories(&traj, &reference).unwrap()[1].linf);
        }
        let order = observed_order(&dts, &errs);
        assert!(order > 3.5, "order {order}, errors {errs:?}");
    }

    #[test]
    fn zero_reaction_zero_flux_conserves_mass() {
        let m = ReactionModel::fisher(1.0).unwrap();
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let nonlinear = solve_profile(&m, &p, 2.0, 1e-10).unwrap();
        let constant = DiffusivityProfile::constant(m, p, 2.5, 2.0, 1001).unwrap();
        for dim in Dimension::ALL {
            for (profile, use_u) in [(&constant, true), (&nonlinear, false)] {
                let mut cfg = SimConfig::stable(profile, dim, 3.0, 49, 0.5, BoundaryCondition::ZeroFlux);
                cfg.reaction = false;
                cfg.n_samples = 4;
                let init: Vec<f64> = cfg
                    .grid()
                    .iter()
                    .map(|r| 0.2 + 0.7 * (-r * r).exp())
                    .collect();
                let traj = fd_simulate(&init, profile, &cfg).unwrap();
                let q = |s: &SimState| traj.integral(if use_u { &s.u } else { &s.theta });
                let start = q(&traj.states[0]);
                for s in &traj.states {
                    assert_relative_eq!(q(s), start, max_relative = 1e-8);
                }
                let first = &traj.states[0].theta;
                let last = &traj.states.last().unwrap().theta;
                assert!(last[0] < first[0], "diffusion flattens the bump");
            }
        }
    }

    #[test]
    fn robin_relocation_reproduces_exact_solution() {
        let sol = fisher_solution();
        let r2 = robin_radius(sol.mode(), 1.0).unwrap();
        let p = robin_coefficient(sol.mode(), r2);
        let (init, mut cfg) = seeded(&sol, r2, 129, 0.3, BoundaryCondition::Robin { p });
        cfg.n_samples = 3;
        let traj = fd_simulate(&init, sol.profile(), &cfg).unwrap();
        let e = compare(&traj, &sol).unwrap();
        assert!(e.last().unwrap().linf < 1e-4, "{e:?}");
        // the same run with a cull at r₂ departs from the exact solution
        let (init, cfg) = seeded(&sol, r2, 129, 0.3, BoundaryCondition::Dirichlet);
        let cut = fd_simulate(&init, sol.profile(), &cfg).unwrap();
        assert!(compare(&cut, &sol).unwrap().last().unwrap().linf > 1e-2);
    }

    #[test]
    fn radiation_boundary_run_stays_positive() {
        let sol = fisher_solution();
        let (init, cfg) = seeded(&sol, 2.0, 65, 0.5, BoundaryCondition::NonlinearRadiation { h: 1.0 });
        let traj = fd_simulate(&init, sol.profile(), &cfg).unwrap();
        let last = traj.states.last().unwrap();
        assert!(last.theta.iter().all(|&x| x > 0.0));
        let m = last.u.len() - 1;
        let ur = (3.0 * last.u[m] - 4.0 * last.u[m - 1] + last.u[m - 2]) / (2.0 * traj.dr);
        assert_relative_eq!(-ur, 1.0 * last.u[m] * last.u[m], max_relative = 1e-10);
    }

    #[test]
    fn comparison_rejects_mismatches() {
        let sol = fisher_solution();
        let (init, cfg) = seeded(&sol, 2.0, 33, 0.01, BoundaryCondition::Dirichlet);
        let a = fd_simulate(&init, sol.profile(), &cfg).unwrap();
        assert!(compare_trajectories(&a, &a).unwrap().iter().all(|e| e.linf == 0.0 && e.l2 == 0.0));
        let (init, cfg) = seeded(&sol, 2.0, 65, 0.01, BoundaryCondition::Dirichlet);
        let b = fd_simulate(&init, sol.profile(), &cfg).unwrap();
        assert!(matches!(compare_trajectories(&a, &b), Err(VerifyError::GridMismatch(_))));
        let mut wide = a.clone();
        wide.radius = 10.0;
        assert!(matches!(compare(&wide, &sol), Err(VerifyError::GridMismatch(_))));
    }
}
