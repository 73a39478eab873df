use approx::assert_relative_eq;

use rdexact::diffusivity::{solve_profile, SolveOptions};
use rdexact::genetics::{genetics_report, GenotypeFitness};
use rdexact::model::{ReactionKind, ReactionModel, SymmetryParams};
use rdexact::solution::{critical_radius, profile_table, ExactSolution};
use rdexact::spatial::{first_bessel_zero, Dimension};
use rdexact::verify::pde_residual;

fn reference_params() -> SymmetryParams {
    SymmetryParams::helmholtz(-1.5, 1.0).unwrap()
}

fn build(m: ReactionModel, dim: Dimension) -> ExactSolution {
    let p = reference_params();
    let prof = solve_profile(&m, &p, SolveOptions::for_kind(m.kind()).theta_max, 1e-10).unwrap();
    ExactSolution::assemble(&m, &p, prof, dim, 0.8).unwrap()
}

#[test]
fn profile_csv_is_reproducible() {
    let m = ReactionModel::huxley(1.0).unwrap();
    let write = || {
        let prof = solve_profile(&m, &reference_params(), 1.0, 1e-10).unwrap();
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        buf
    };
    let first = write();
    assert!(first.starts_with(b"theta,U,D\n"));
    assert_eq!(first, write());
}

#[test]
fn every_dimension_solves_the_pde() {
    for dim in Dimension::ALL {
        for m in [
            ReactionModel::fisher(1.0).unwrap(),
            ReactionModel::fitzhugh_nagumo(0.5, -1.0).unwrap(),
        ] {
            let sol = build(m, dim);
            let res = pde_residual(&sol, 65, 33).unwrap();
            assert!(res.analytic.within(1e-10), "{dim:?} {:?}", res.analytic);
        }
    }
}

#[test]
fn domain_radius_by_dimension() {
    let m = ReactionModel::fisher(1.0).unwrap();
    let pi = std::f64::consts::PI;
    assert_relative_eq!(build(m, Dimension::One).domain_radius(), pi / 2.0, epsilon = 1e-12);
    assert_relative_eq!(
        build(m, Dimension::Two).domain_radius(),
        first_bessel_zero(),
        epsilon = 1e-12
    );
    assert_relative_eq!(build(m, Dimension::Three).domain_radius(), pi, epsilon = 1e-12);
}

#[test]
fn table_vanishes_on_the_cull_line() {
    let sol = build(ReactionModel::huxley(1.0).unwrap(), Dimension::Two);
    let table = profile_table(&sol, &[0.0, 0.2], 17).unwrap();
    assert_eq!(table.rows.len(), 34);
    for t in [0.0, 0.2] {
        let rows: Vec<_> = table.at_time(t).collect();
        assert_eq!(rows.last().unwrap().theta, 0.0);
        assert!(rows.windows(2).all(|w| w[1].theta <= w[0].theta));
    }
}

#[test]
fn genetics_and_reserve_agree_on_threshold_radius() {
    // s = 1, nu = 3, theta1 = -1
    let f = GenotypeFitness::new(3.0, 1.0, 0.0).unwrap();
    let report = genetics_report(&f, Some(100.0), None).unwrap();
    assert_eq!((report.s, report.nu, report.theta1), (1.0, 3.0, -1.0));
    let design =
        critical_radius(ReactionKind::FitzhughNagumo, 100.0, report.s, Some(report.theta1))
            .unwrap();
    assert_relative_eq!(report.r_crit.unwrap(), design.r_crit.unwrap(), max_relative = 1e-15);
}
