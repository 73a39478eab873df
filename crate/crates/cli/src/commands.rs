use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rdexact::diffusivity::{
    closed_form_iterate, picard_iterate, solve_profile_with, DiffusivityProfile, IterateLevel,
};
use rdexact::genetics::{genetics_report, GenotypeFitness};
use rdexact::model::{ReactionKind, ReactionModel, SymmetryParams};
use rdexact::solution::{
    center_density_for, critical_radius, profile_table, ExactSolution, DEFAULT_RADII,
};
use rdexact::spatial::{robin_coefficient, robin_radius};
use rdexact::verify::{
    compare, fd_simulate, pde_residual, pde_residual_convergence, relation_residual,
    BoundaryCondition, ErrorNorms, ResidualReport, SimConfig,
};

use crate::config::{CommonArgs, ConfigError, Format, RunConfig};
use crate::exit::ChecksFailed;
use crate::output::{self, json_number, Emitter, Table};

fn params_json(cfg: &RunConfig) -> Value {
    let p = cfg.anchors.params;
    json!({
        "model": cfg.model.kind().name(),
        "s": cfg.model.s(),
        "theta1": cfg.model.theta1(),
        "K": p.k(),
        "A": p.a(),
        "D0": cfg.anchors.d0,
        "D1": cfg.anchors.d1,
        "theta_max": cfg.solve.theta_max,
        "grid": cfg.solve.grid_points,
        "tol": cfg.solve.rtol,
    })
}

fn build_profile(cfg: &RunConfig) -> Result<DiffusivityProfile> {
    Ok(solve_profile_with(&cfg.model, &cfg.anchors.params, &cfg.solve)?)
}

pub fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

fn iterate_or_nan(model: &ReactionModel, params: &SymmetryParams, level: IterateLevel, t: f64) -> f64 {
    closed_form_iterate(model, params, level, t).unwrap_or(f64::NAN)
}

pub fn diffusivity(common: &CommonArgs) -> Result<()> {
    let cfg = RunConfig::resolve(common)?;
    let profile = build_profile(&cfg)?;
    let params = cfg.anchors.params;
    let levels = [IterateLevel::Zero, IterateLevel::One, IterateLevel::Two];
    let mut iterates = Table {
        columns: vec!["theta", "D_numeric", "D0", "D1", "D2"],
        rows: Vec::with_capacity(profile.len()),
    };
    let mut gaps = [0.0f64; 3];
    for (&t, &d) in profile.theta_grid().iter().zip(profile.diffusivity_values()) {
        let mut row = vec![t, d];
        for (gap, level) in gaps.iter_mut().zip(levels) {
            let v = iterate_or_nan(&cfg.model, &params, level, t);
            if t <= 1.0 && v.is_finite() {
                *gap = gap.max((v - d).abs());
            }
            row.push(v);
        }
        iterates.rows.push(row);
    }
    let profile_table = Table {
        columns: vec!["theta", "U", "D"],
        rows: profile
            .theta_grid()
            .iter()
            .zip(profile.kirchhoff_values())
            .zip(profile.diffusivity_values())
            .map(|((t, u), d)| vec![*t, *u, *d])
            .collect(),
    };
    let kind = cfg.model.kind().name();
    let mut out = Emitter::new(&cfg.out, cfg.format)?;
    out.table(&format!("{kind}_profile"), &profile_table)?;
    let data = out.table(&format!("{kind}_iterates"), &iterates)?;
    out.script(
        &format!("{kind}_diffusivity.gp"),
        &output::diffusivity_script(&data, kind),
    )?;
    let relation = relation_residual(&profile, &params);
    print_json(&json!({
        "command": "diffusivity",
        "params": params_json(&cfg),
        "U_max": profile.u_max(),
        "max_D": profile.max_diffusivity(),
        "max_gap_on_unit_interval": {
            "D0": json_number(gaps[0]),
            "D1": json_number(gaps[1]),
            "D2": json_number(gaps[2]),
        },
        "relation_residual": relation,
        "files": out.written(),
    }))
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Output times in units of |A|t
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub times: Option<Vec<f64>>,
    /// Preferred centre density at t = 0 (lowered if the earliest time needs it)
    #[arg(long)]
    pub center: Option<f64>,
    /// Radii per time on [0, r1]
    #[arg(long, default_value_t = DEFAULT_RADII)]
    pub radii: usize,
}

fn default_times(kind: ReactionKind) -> Vec<f64> {
    match kind {
        ReactionKind::Fisher => vec![-1.5, 0.0, 1.5, 2.5],
        _ => vec![0.0, 0.1, 0.2, 0.3],
    }
}

/// Assemble with the preferred centre density, lowered until the solution
/// stays tabulated back to `t_min`.
fn assemble(cfg: &RunConfig, preferred: f64, t_min: f64) -> Result<ExactSolution> {
    let profile = build_profile(cfg)?;
    let center = if t_min >= 0.0 && preferred <= profile.theta_max() {
        preferred
    } else {
        center_density_for(&profile, preferred, t_min.min(0.0))?
    };
    if center < preferred {
        eprintln!(
            "note: centre density lowered from {preferred} to {center} so that the solution \
             stays within the tabulated range at t = {t_min}"
        );
    }
    Ok(ExactSolution::assemble(
        &cfg.model,
        &cfg.anchors.params,
        profile,
        cfg.dim,
        center,
    )?)
}

pub fn solve(common: &CommonArgs, args: &SolveArgs) -> Result<()> {
    let cfg = RunConfig::resolve(common)?;
    let scaled = args
        .times
        .clone()
        .unwrap_or_else(|| default_times(cfg.model.kind()));
    if scaled.is_empty() || scaled.iter().any(|t| !t.is_finite()) {
        return Err(ConfigError::Invalid("--times needs finite values".into()).into());
    }
    let rate = cfg.anchors.params.a().abs();
    let times: Vec<f64> = scaled.iter().map(|t| t / rate).collect();
    let t_min = times.iter().copied().fold(f64::INFINITY, f64::min);
    let sol = assemble(&cfg, args.center.unwrap_or(1.0), t_min)?;
    let table = profile_table(&sol, &times, args.radii)?;
    let kind = cfg.model.kind().name();
    let mut out = Emitter::new(&cfg.out, cfg.format)?;
    let data = out.table(
        &format!("{kind}_solution"),
        &Table {
            columns: vec!["t", "r", "u", "theta"],
            rows: table.rows.iter().map(|r| vec![r.t, r.r, r.u, r.theta]).collect(),
        },
    )?;
    out.script(
        &format!("{kind}_profiles.gp"),
        &output::profiles_script(&data, kind, times.len()),
    )?;
    print_json(&json!({
        "command": "solve",
        "params": params_json(&cfg),
        "dim": cfg.dim.n(),
        "scaled_times": scaled,
        "times": times,
        "theta_center0": sol.theta_center0(),
        "domain_radius": sol.domain_radius(),
        "earliest_time": sol.earliest_time(),
        "files": out.written(),
    }))
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Radial nodes of the simulator cross-check
    #[arg(long, default_value_t = 65)]
    pub sim_grid: usize,
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    value: f64,
    /// `"<="` or `">="`.
    comparison: &'static str,
    bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ResidualReport>,
}

impl Check {
    fn at_most(name: &'static str, value: f64, bound: f64, report: Option<ResidualReport>) -> Self {
        Self {
            name,
            passed: value <= bound,
            value,
            comparison: "<=",
            bound,
            report,
        }
    }

    fn at_least(name: &'static str, value: f64, bound: f64, report: Option<ResidualReport>) -> Self {
        Self {
            passed: value >= bound,
            comparison: ">=",
            ..Self::at_most(name, value, bound, report)
        }
    }
}

fn verify_one(cfg: &RunConfig, sim_grid: usize) -> Result<Value> {
    let profile = build_profile(cfg)?;
    let params = cfg.anchors.params;
    let tol = cfg.solve.rtol;
    let mut checks = Vec::new();

    let relation = relation_residual(&profile, &params);
    checks.push(Check::at_most(
        "relation_residual",
        relation.max_abs / relation.scale,
        1e-8,
        Some(relation),
    ));

    let next = picard_iterate(&cfg.model, &params, &profile)?;
    let change = profile
        .diffusivity_values()
        .iter()
        .zip(next.diffusivity_values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    checks.push(Check::at_most(
        "fixed_point",
        change / (tol * profile.max_diffusivity()),
        10.0,
        None,
    ));

    let sol = assemble(cfg, 1.0, 0.0)?;
    let pde = pde_residual(&sol, 65, 33)?;
    checks.push(Check::at_most(
        "pde_residual_analytic",
        pde.analytic.max_abs / pde.analytic.scale,
        1e-10,
        Some(pde.analytic),
    ));
    let (conv, _) = pde_residual_convergence(&sol, &[65, 129, 257], 33)?;
    let order = conv.order_estimate.unwrap_or(f64::NAN);
    checks.push(Check::at_least("pde_residual_fd_order", order, 3.5, Some(conv)));

    let sim = SimConfig::stable(
        sol.profile(),
        cfg.dim,
        sol.domain_radius(),
        sim_grid,
        1.0 / params.a().abs(),
        BoundaryCondition::Dirichlet,
    );
    let initial = sim
        .grid()
        .iter()
        .map(|&r| sol.theta_at(r.min(sol.domain_radius()), 0.0))
        .collect::<Result<Vec<_>, _>>()?;
    let traj = fd_simulate(&initial, sol.profile(), &sim)?;
    let err = compare(&traj, &sol)?.last().map_or(f64::NAN, |n| n.linf);
    checks.push(Check::at_most("simulation_linf", err, 1e-3, None));

    let passed = checks.iter().all(|c| c.passed);
    Ok(json!({
        "params": params_json(cfg),
        "dim": cfg.dim.n(),
        "passed": passed,
        "checks": checks,
    }))
}

/// Default parameter sets swept when no model is named.
fn default_families(common: &CommonArgs) -> Vec<CommonArgs> {
    use crate::config::ModelArg;
    [ModelArg::Fisher, ModelArg::Huxley, ModelArg::Fhn]
        .into_iter()
        .map(|model| CommonArgs {
            model: Some(model),
            a: Some(-1.5),
            d0: None,
            s: None,
            theta1: None,
            ..common.clone()
        })
        .collect()
}

pub fn verify(common: &CommonArgs, args: &VerifyArgs) -> Result<()> {
    let runs = if common.model.is_some() {
        vec![common.clone()]
    } else {
        default_families(common)
    };
    let configs = runs
        .iter()
        .map(RunConfig::resolve)
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<Value>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|cfg| scope.spawn(move || verify_one(cfg, args.sim_grid)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    let families = results.into_iter().collect::<Result<Vec<_>>>()?;
    let failed: usize = families
        .iter()
        .flat_map(|f| f["checks"].as_array().into_iter().flatten())
        .filter(|c| c["passed"] == false)
        .count();
    let report = json!({
        "command": "verify",
        "passed": failed == 0,
        "families": families,
    });
    if let Some(dir) = &common.out {
        let mut out = Emitter::new(dir, Format::Json)?;
        out.json("verify.json", &report)?;
    }
    print_json(&report)?;
    if failed > 0 {
        return Err(ChecksFailed(failed).into());
    }
    Ok(())
}

pub fn reserve(common: &CommonArgs) -> Result<()> {
    let kind: ReactionKind = common
        .model
        .ok_or_else(|| ConfigError::Invalid("--model is required".into()))?
        .into();
    let d0 = common
        .d0
        .ok_or_else(|| ConfigError::Invalid("--D0 is required".into()))?;
    let s = common
        .s
        .ok_or_else(|| ConfigError::Invalid("--s is required".into()))?;
    let design = critical_radius(kind, d0, s, common.theta1)?;
    write_report(common.out.as_deref(), "reserve.json", &design)
}

#[derive(Debug, Clone, Args)]
pub struct GeneticsArgs {
    /// Fitnesses g11,g12,g22
    #[arg(long = "g", value_delimiter = ',', num_args = 1, required = true, allow_hyphen_values = true)]
    pub g: Vec<f64>,
    /// Radius of the managed region, for the containment verdict
    #[arg(long)]
    pub radius: Option<f64>,
}

pub fn genetics(common: &CommonArgs, args: &GeneticsArgs) -> Result<()> {
    let [g11, g12, g22] = args.g[..] else {
        return Err(ConfigError::Invalid(format!(
            "--g takes exactly three values, got {}",
            args.g.len()
        ))
        .into());
    };
    let f = GenotypeFitness::new(g11, g12, g22)?;
    let report = genetics_report(&f, common.d0, args.radius)?;
    write_report(common.out.as_deref(), "genetics.json", &report)
}

fn write_report<T: Serialize>(out: Option<&Path>, name: &str, value: &T) -> Result<()> {
    if let Some(dir) = out {
        Emitter::new(dir, Format::Json)?.json(name, value)?;
    }
    print_json(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    Dirichlet,
    Robin,
    Radiation,
    ZeroFlux,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "dirichlet")]
    pub bc: BcArg,
    /// Robin coefficient p in -u_r = p u (default: matched to --radius)
    #[arg(long)]
    pub p: Option<f64>,
    /// Radiation coefficient H in -u_r = H u^2; no default
    #[arg(long = "H")]
    pub h: Option<f64>,
    /// Outer radius (default: r1, or the Robin radius for --p)
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 129)]
    pub n_r: usize,
    /// End time in units of |A|t
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    /// Number of recorded output intervals
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long)]
    pub center: Option<f64>,
}

pub fn simulate(common: &CommonArgs, args: &SimulateArgs) -> Result<()> {
    let cfg = RunConfig::resolve(common)?;
    let sol = assemble(&cfg, args.center.unwrap_or(1.0), 0.0)?;
    let r1 = sol.domain_radius();
    let (bc, radius) = match args.bc {
        BcArg::Dirichlet => (BoundaryCondition::Dirichlet, args.radius.unwrap_or(r1)),
        BcArg::Robin => match (args.p, args.radius) {
            (Some(p), Some(r)) => (BoundaryCondition::Robin { p }, r),
            (Some(p), None) => (BoundaryCondition::Robin { p }, robin_radius(sol.mode(), p)?),
            (None, Some(r)) => (
                BoundaryCondition::Robin {
                    p: robin_coefficient(sol.mode(), r),
                },
                r,
            ),
            (None, None) => {
                return Err(ConfigError::Invalid("--bc robin needs --p or --radius".into()).into())
            }
        },
        BcArg::Radiation => {
            let h = args
                .h
                .ok_or_else(|| ConfigError::Invalid("--bc radiation needs --H".into()))?;
            (
                BoundaryCondition::NonlinearRadiation { h },
                args.radius.unwrap_or(r1),
            )
        }
        BcArg::ZeroFlux => (BoundaryCondition::ZeroFlux, args.radius.unwrap_or(r1)),
    };
    let rate = cfg.anchors.params.a().abs();
    let mut sim = SimConfig::stable(sol.profile(), cfg.dim, radius, args.n_r, args.t_end / rate, bc);
    sim.n_samples = args.samples;
    let initial = sim
        .grid()
        .iter()
        .map(|&r| sol.theta_at(r.min(r1), 0.0))
        .collect::<Result<Vec<_>, _>>()
        .context("initial condition is the exact solution at t = 0 and needs radius <= r1")?;
    let traj = fd_simulate(&initial, sol.profile(), &sim)?;
    // the exact solution satisfies Dirichlet at r1 and the matched Robin condition
    let matched = match bc {
        BoundaryCondition::Dirichlet => radius == r1,
        BoundaryCondition::Robin { p } => {
            (robin_coefficient(sol.mode(), radius) - p).abs() <= 1e-9 * p.max(1.0)
        }
        _ => false,
    };
    let errors: Option<Vec<ErrorNorms>> = if matched {
        Some(compare(&traj, &sol)?)
    } else {
        None
    };
    let kind = cfg.model.kind().name();
    let mut out = Emitter::new(&cfg.out, cfg.format)?;
    let data = out.table(
        &format!("{kind}_trajectory"),
        &Table {
            columns: vec!["t", "r", "u", "theta"],
            rows: traj
                .states
                .iter()
                .flat_map(|s| {
                    traj.r
                        .iter()
                        .zip(&s.u)
                        .zip(&s.theta)
                        .map(move |((r, u), th)| vec![s.t, *r, *u, *th])
                })
                .collect(),
        },
    )?;
    out.script(
        &format!("{kind}_trajectory.gp"),
        &output::profiles_script(&data, kind, traj.states.len()),
    )?;
    print_json(&json!({
        "command": "simulate",
        "params": params_json(&cfg),
        "dim": cfg.dim.n(),
        "boundary": bc,
        "radius": radius,
        "domain_radius": r1,
        "n_r": args.n_r,
        "dt": traj.dt,
        "steps": traj.steps,
        "errors_vs_exact": errors,
        "files": out.written(),
    }))
}
