//! Diploid fitness coefficients mapped onto the cubic reaction term.
//!
//! With fitnesses `g11, g12, g22` for genotypes carrying zero, one and two
//! copies of the invading allele:
//!
//! * `s = g11 − 2·g12 + g22`
//! * `ν = (g22 − g11)/(g22 − g12)`
//! * `θ₁ = 1/(2 − ν)`
//!
//! The raw constants are reported as computed; `ν = 2` coincides exactly
//! with `s = 0` (fitnesses in arithmetic progression) and is refused.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ReactionKind;
use crate::spatial::first_bessel_zero;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneticsError {
    #[error("g22 = g12 = {0}: nu is undefined")]
    UndefinedNu(f64),
    #[error("nu = 2 makes theta1 diverge (s = {s}, arithmetic progression: {arithmetic_progression})")]
    DegenerateNu { s: f64, arithmetic_progression: bool },
    #[error("fitness `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenotypeFitness {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl GenotypeFitness {
    pub fn new(g11: f64, g12: f64, g22: f64) -> Result<Self, GeneticsError> {
        for (name, value) in [("g11", g11), ("g12", g12), ("g22", g22)] {
            if !value.is_finite() {
                return Err(GeneticsError::NonFinite { name, value });
            }
        }
        Ok(Self { g11, g12, g22 })
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self {
            g11: self.g11 + c,
            g12: self.g12 + c,
            g22: self.g22 + c,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            g11: self.g11 * c,
            g12: self.g12 * c,
            g22: self.g22 * c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessMapping {
    pub s: f64,
    pub nu: f64,
    pub theta1: f64,
    /// Huxley when `θ₁ = 1` (totally recessive allele), otherwise
    /// Fitzhugh–Nagumo.
    pub family: ReactionKind,
}

pub fn map_fitness(f: &GenotypeFitness) -> Result<FitnessMapping, GeneticsError> {
    let s = f.g11 - 2.0 * f.g12 + f.g22;
    let den = f.g22 - f.g12;
    if den == 0.0 {
        return Err(GeneticsError::UndefinedNu(f.g22));
    }
    let nu = (f.g22 - f.g11) / den;
    if nu == 2.0 {
        return Err(GeneticsError::DegenerateNu {
            s,
            arithmetic_progression: f.g12 - f.g11 == f.g22 - f.g12,
        });
    }
    let theta1 = 1.0 / (2.0 - nu);
    let family = if theta1 == 1.0 {
        ReactionKind::Huxley
    } else {
        ReactionKind::FitzhughNagumo
    };
    Ok(FitnessMapping {
        s,
        nu,
        theta1,
        family,
    })
}

/// Whether the invading allele can be eliminated by culling at the boundary
/// of a region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Feasibility {
    /// `θ₁ < 0`: the extinguishing solution exists only on regions of radius
    /// below `r_crit` (unknown without `D(0)`). `removable` is set when a
    /// domain radius was supplied.
    RemovableWithin {
        r_crit: Option<f64>,
        removable: Option<bool>,
        verdict: String,
    },
    /// `θ₁ = 1`: the extinguishing solution exists for every radius.
    AlwaysRemovable { verdict: String },
    /// Other thresholds: the criterion `r < λ₁√(D(0)/(s|θ₁|))` with its value.
    Criterion { r_c: Option<f64>, verdict: String },
    /// `s ≤ 0`: no logistic reaction term.
    NotApplicable { verdict: String },
}

impl Feasibility {
    pub fn r_crit(&self) -> Option<f64> {
        match self {
            Feasibility::RemovableWithin { r_crit, .. } => *r_crit,
            Feasibility::Criterion { r_c, .. } => *r_c,
            _ => None,
        }
    }
}

/// Classify boundary-cull containment for the cubic source with constants
/// `(s, θ₁)` and diffusivity `D(0) = d0`.
pub fn containment_feasibility(
    s: f64,
    theta1: f64,
    d0: Option<f64>,
    domain_radius: Option<f64>,
) -> Feasibility {
    if !(s > 0.0) {
        return Feasibility::NotApplicable {
            verdict: format!("s = {s} is not positive; the reaction term is not logistic"),
        };
    }
    let r_c = d0
        .filter(|d| *d > 0.0)
        .map(|d| first_bessel_zero() * (d / (s * theta1.abs())).sqrt());
    if theta1 == 1.0 {
        return Feasibility::AlwaysRemovable {
            verdict: "totally recessive allele: the extinguishing solution exists no matter \
                      how large the region (r_c = infinity)"
                .to_string(),
        };
    }
    if theta1 < 0.0 {
        let r_crit = r_c;
        let removable = domain_radius.zip(r_crit).map(|(r, rc)| r < rc);
        let verdict = match removable {
            Some(true) => "removable: the region is smaller than the critical radius".to_string(),
            Some(false) => "removal cannot be achieved by actions taken at the boundary alone"
                .to_string(),
            None => "removable by boundary culling only if the region radius is below r_crit"
                .to_string(),
        };
        return Feasibility::RemovableWithin {
            r_crit,
            removable,
            verdict,
        };
    }
    Feasibility::Criterion {
        r_c,
        verdict: "extinguishing solution exists only if the radius is less than \
                  r_c = lambda1*sqrt(D(0)/(s|theta1|))"
            .to_string(),
    }
}

/// Combined mapping and feasibility, as emitted by the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneticsReport {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub s: f64,
    pub nu: f64,
    pub theta1: f64,
    pub family: ReactionKind,
    pub feasibility: Feasibility,
    pub r_crit: Option<f64>,
}

pub fn genetics_report(
    f: &GenotypeFitness,
    d0: Option<f64>,
    domain_radius: Option<f64>,
) -> Result<GeneticsReport, GeneticsError> {
    let m = map_fitness(f)?;
    let feasibility = containment_feasibility(m.s, m.theta1, d0, domain_radius);
    Ok(GeneticsReport {
        g11: f.g11,
        g12: f.g12,
        g22: f.g22,
        s: m.s,
        nu: m.nu,
        theta1: m.theta1,
        family: m.family,
        r_crit: feasibility.r_crit(),
        feasibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn g(a: f64, b: f64, c: f64) -> GenotypeFitness {
        GenotypeFitness::new(a, b, c).unwrap()
    }

    #[test]
    fn totally_recessive() {
        let m = map_fitness(&g(1.0, 1.0, 2.0)).unwrap();
        assert_eq!((m.s, m.nu, m.theta1), (1.0, 1.0, 1.0));
        assert_eq!(m.family, ReactionKind::Huxley);
        assert!(matches!(
            containment_feasibility(m.s, m.theta1, None, None),
            Feasibility::AlwaysRemovable { .. }
        ));
    }

    #[test]
    fn partial_dominance_values() {
        let m = map_fitness(&g(1.0, 1.2, 2.0)).unwrap();
        assert_relative_eq!(m.s, 0.6, max_relative = 1e-15);
        assert_relative_eq!(m.nu, 1.25, max_relative = 1e-15);
        assert_relative_eq!(m.theta1, 4.0 / 3.0, max_relative = 1e-15);
        assert_eq!(m.family, ReactionKind::FitzhughNagumo);
    }

    #[test]
    fn arithmetic_progression_is_degenerate() {
        assert_eq!(
            map_fitness(&g(1.0, 1.5, 2.0)),
            Err(GeneticsError::DegenerateNu {
                s: 0.0,
                arithmetic_progression: true
            })
        );
        assert_eq!(map_fitness(&g(1.0, 2.0, 2.0)), Err(GeneticsError::UndefinedNu(2.0)));
    }

    #[test]
    fn negative_threshold_radius() {
        let f = containment_feasibility(0.2, -0.4, Some(100.0), None);
        assert_relative_eq!(f.r_crit().unwrap(), 85.0, epsilon = 0.25);
        let big = containment_feasibility(0.2, -0.4, Some(100.0), Some(90.0));
        match big {
            Feasibility::RemovableWithin {
                removable, verdict, ..
            } => {
                assert_eq!(removable, Some(false));
                assert!(verdict.contains("boundary alone"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn report_json_fields() {
        let r = genetics_report(&g(1.0, 1.0, 2.0), Some(1.0), None).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "g11",
            "g12",
            "g22",
            "s",
            "nu",
            "theta1",
            "family",
            "feasibility",
            "r_crit",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["family"], "huxley");
        assert_eq!(v["feasibility"]["status"], "always_removable");
    }

    fn triple() -> impl Strategy<Value = GenotypeFitness> {
        (-1000i32..1000, -1000i32..1000, -1000i32..1000)
            .prop_filter("defined nu", |(a, b, c)| c != b && a - 2 * b + c != 0)
            .prop_map(|(a, b, c)| g(a as f64, b as f64, c as f64))
    }

    proptest! {
        #[test]
        fn shift_invariance(f in triple(), c in -1000i32..1000) {
            let a = map_fitness(&f).unwrap();
            let b = map_fitness(&f.shifted(c as f64)).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn scale_covariance(f in triple(), c in 1i32..1000) {
            let a = map_fitness(&f).unwrap();
            let b = map_fitness(&f.scaled(c as f64)).unwrap();
            prop_assert_eq!(b.s, c as f64 * a.s);
            prop_assert_eq!((b.nu, b.theta1, b.family), (a.nu, a.theta1, a.family));
        }

        #[test]
        fn unit_nu_iff_unit_threshold(f in triple()) {
            let m = map_fitness(&f).unwrap();
            prop_assert_eq!(m.nu == 1.0, m.theta1 == 1.0);
        }
    }
}
