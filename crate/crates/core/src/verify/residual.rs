use serde::{Deserialize, Serialize};

use super::{ResidualReport, VerifyError};
use crate::diffusivity::DiffusivityProfile;
use crate::model::SymmetryParams;
use crate::numerics::observed_order;
use crate::solution::ExactSolution;

const MIN_GRID: usize = 33;

/// Residual of `F(u)u_t − ∇²u − Q(u)` with the Laplacian taken analytically
/// and by fourth-order central differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeResidual {
    pub analytic: ResidualReport,
    pub fd: ResidualReport,
}

/// Sample the transformed PDE residual of `sol` on `n_r` radii in `[0, r₁]`
/// and `n_t` times in `[0, 2/|A|]`.
///
/// `u_t = A·u` is used exactly; `θ = U⁻¹(u)`, `F = 1/D(θ)`, `Q = R(θ)`. The
/// finite-difference Laplacian reads `u` through the even extension for
/// `r < 0` and the analytic mode beyond `r₁`.
pub fn pde_residual(sol: &ExactSolution, n_r: usize, n_t: usize) -> Result<PdeResidual, VerifyError> {
    for (name, value) in [("n_r", n_r), ("n_t", n_t)] {
        if value < MIN_GRID {
            return Err(VerifyError::GridTooSmall {
                name,
                value,
                min: MIN_GRID,
            });
        }
    }
    let a = sol.a();
    let kappa = sol.params().kappa();
    let model = sol.model();
    let profile = sol.profile();
    let mode = sol.mode();
    let n = mode.dim().n() as f64;
    let r1 = sol.domain_radius();
    let h = r1 / (n_r - 1) as f64;
    let t_end = 2.0 / a.abs();

    let mut analytic = Vec::with_capacity(n_r * n_t);
    let mut fd = Vec::with_capacity(n_r * n_t);
    for j in 0..n_t {
        let t = t_end * j as f64 / (n_t - 1) as f64;
        let decay = (a * t).exp();
        let w = |r: f64| decay * mode.phi(r);
        for i in 0..n_r {
            let r = if i == n_r - 1 { r1 } else { i as f64 * h };
            let u = sol.u(r, t)?;
            let theta = sol.theta_at(r, t)?;
            let d = profile.diffusivity_at(theta)?;
            let transport = a * u / d - model.eval(theta);
            analytic.push(transport + kappa * u);

            let (m2, m1, p1, p2) = (w(r - 2.0 * h), w(r - h), w(r + h), w(r + 2.0 * h));
            let w0 = w(r);
            let second = (-m2 + 16.0 * m1 - 30.0 * w0 + 16.0 * p1 - p2) / (12.0 * h * h);
            let lap = if i == 0 {
                n * second
            } else {
                let first = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
                second + (n - 1.0) / r * first
            };
            fd.push(transport - lap);
        }
    }
    let scale = (a.abs() * profile.u_max()).max(model.s());
    let mut analytic = ResidualReport::from_values("pde_analytic", n_r, Some(h), scale, &analytic);
    let mut fd = ResidualReport::from_values("pde_fd", n_r, Some(h), scale, &fd);
    analytic.samples = n_r * n_t;
    fd.samples = n_r * n_t;
    Ok(PdeResidual { analytic, fd })
}

/// Finite-difference residual across successively refined radial grids, with
/// the observed order of convergence. The returned report describes the
/// finest grid.
pub fn pde_residual_convergence(
    sol: &ExactSolution,
    grids: &[usize],
    n_t: usize,
) -> Result<(ResidualReport, Vec<PdeResidual>), VerifyError> {
    if grids.len() < 2 {
        return Err(VerifyError::InvalidConfig(
            "convergence needs at least two grids".to_string(),
        ));
    }
    let runs = grids
        .iter()
        .map(|&g| pde_residual(sol, g, n_t))
        .collect::<Result<Vec<_>, _>>()?;
    let spacings: Vec<f64> = runs.iter().map(|r| r.fd.dr.unwrap_or(f64::NAN)).collect();
    let errors: Vec<f64> = runs.iter().map(|r| r.fd.max_abs).collect();
    let mut report = runs.last().expect("non-empty").fd.clone();
    report.check = "pde_fd_convergence".to_string();
    report.order_estimate = Some(observed_order(&spacings, &errors));
    Ok((report, runs))
}

/// `R(θ) − A·U(θ)/D(θ) − κ·U(θ)` on the profile grid, measured against `s`.
pub fn relation_residual(profile: &DiffusivityProfile, params: &SymmetryParams) -> ResidualReport {
    let model = profile.model();
    let values: Vec<f64> = profile
        .theta_grid()
        .iter()
        .zip(profile.kirchhoff_values())
        .zip(profile.diffusivity_values())
        .map(|((&t, &u), &d)| model.eval(t) - params.a() * u / d - params.kappa() * u)
        .collect();
    ResidualReport::from_values("relation", profile.len(), None, model.s(), &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusivity::solve_profile;
    use crate::model::{ReactionModel, SymmetryParams};
    use crate::spatial::Dimension;

    fn setup(m: ReactionModel, theta_max: f64) -> ExactSolution {
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let prof = solve_profile(&m, &p, theta_max, 1e-10).unwrap();
        ExactSolution::assemble(&m, &p, prof, Dimension::Two, 1.0).unwrap()
    }

    #[test]
    fn analytic_residual_vanishes() {
        let cases = [
            (ReactionModel::fisher(1.0).unwrap(), 2.0),
            (ReactionModel::huxley(1.0).unwrap(), 1.0),
            (ReactionModel::fitzhugh_nagumo(0.5, -1.0).unwrap(), 1.0),
        ];
        for (m, tm) in cases {
            let res = pde_residual(&setup(m, tm), 65, 33).unwrap();
            assert!(res.analytic.within(1e-10), "{:?}", res.analytic);
        }
    }

    #[test]
    fn fd_residual_is_fourth_order() {
        let sol = setup(ReactionModel::fisher(1.0).unwrap(), 2.0);
        let (rep, runs) = pde_residual_convergence(&sol, &[65, 129, 257], 33).unwrap();
        let ratio = runs[0].fd.max_abs / runs[1].fd.max_abs;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
        assert!(rep.order_estimate.unwrap() >= 3.5, "{rep:?}");
    }

    #[test]
    fn detects_corrupted_profile() {
        let m = ReactionModel::fisher(1.0).unwrap();
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let good = solve_profile(&m, &p, 2.0, 1e-10).unwrap();
        let d: Vec<f64> = good.diffusivity_values().iter().map(|d| d * 1.01).collect();
        let bad = DiffusivityProfile::from_diffusivity(m, p, 2.0, d).unwrap();
        let sol = ExactSolution::assemble(&m, &p, bad, Dimension::Two, 1.0).unwrap();
        let res = pde_residual(&sol, 65, 33).unwrap();
        assert!(res.analytic.max_abs > 1e4 * 1e-10 * res.analytic.scale);
    }

    #[test]
    fn small_grids_refused() {
        let sol = setup(ReactionModel::fisher(1.0).unwrap(), 2.0);
        assert!(matches!(
            pde_residual(&sol, 17, 33),
            Err(VerifyError::GridTooSmall { .. })
        ));
    }

    #[test]
    fn relation_residuals() {
        let m = ReactionModel::huxley(1.0).unwrap();
        let p = SymmetryParams::helmholtz(-1.5, 1.0).unwrap();
        let prof = solve_profile(&m, &p, 1.0, 1e-10).unwrap();
        let rep = relation_residual(&prof, &p);
        assert!(rep.within(1e-8), "{rep:?}");
        let last = prof.len() - 1;
        let at_one = m.eval(1.0)
            - p.a() * prof.kirchhoff_values()[last] / prof.diffusivity_values()[last]
            - p.kappa() * prof.kirchhoff_values()[last];
        assert!(at_one.abs() < 1e-8);

        let constant = DiffusivityProfile::constant(m, p, 1.5, 1.0, 1001).unwrap();
        let rep = relation_residual(&constant, &p);
        assert!(rep.max_abs > 1e-3);
    }
}
