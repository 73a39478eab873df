//! Closed forms of the first iterates `D₀, D₁, D₂` of the fixed-point map.
//!
//! Starting values: Fisher and Huxley start from `D(0)`, Fitzhugh–Nagumo from
//! `D(1) = −A/K²`. The Fisher `D₁` is written as `(|A|D₀/s)/(θ + K²D₀/s − 1)`,
//! which is the exact image of the constant `D₀` under the map for any `s`.

use super::DiffusivityError;
use crate::model::{ReactionKind, ReactionModel, SymmetryParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IterateLevel {
    Zero,
    One,
    Two,
}

impl TryFrom<u8> for IterateLevel {
    type Error = u8;

    fn try_from(v: u8) -> Result<Self, u8> {
        match v {
            0 => Ok(IterateLevel::Zero),
            1 => Ok(IterateLevel::One),
            2 => Ok(IterateLevel::Two),
            other => Err(other),
        }
    }
}

/// Evaluate iterate `level` at `theta`.
///
/// The level-2 forms are 0/0 at θ = 0; the one-sided limit is returned there.
pub fn closed_form_iterate(
    model: &ReactionModel,
    params: &SymmetryParams,
    level: IterateLevel,
    theta: f64,
) -> Result<f64, DiffusivityError> {
    let (a, k2, s) = (params.a(), params.kappa(), model.s());
    if !(k2 > 0.0 && a < 0.0) {
        return Err(DiffusivityError::Inadmissible { a, kappa: k2 });
    }
    let value = match model.kind() {
        ReactionKind::Fisher => fisher(a, k2, s, level, theta)?,
        ReactionKind::Huxley => huxley(a, k2, s, level, theta)?,
        ReactionKind::FitzhughNagumo => {
            let theta1 = model.theta1().expect("FHN carries θ₁");
            fhn(a, k2, s, theta1, level, theta)?
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DiffusivityError::DomainSingularity { theta })
    }
}

fn pole_check(den: f64, theta: f64) -> Result<(), DiffusivityError> {
    if den == 0.0 || !den.is_finite() {
        Err(DiffusivityError::DomainSingularity { theta })
    } else {
        Ok(())
    }
}

fn fisher(
    a: f64,
    k2: f64,
    s: f64,
    level: IterateLevel,
    theta: f64,
) -> Result<f64, DiffusivityError> {
    let d0 = (s - a) / k2;
    match level {
        IterateLevel::Zero => Ok(d0),
        IterateLevel::One => {
            let den = theta + k2 * d0 / s - 1.0;
            pole_check(den, theta)?;
            Ok(a.abs() * d0 / s / den)
        }
        IterateLevel::Two => {
            if theta == 0.0 {
                return Ok(d0);
            }
            let shift = k2 * d0 - s;
            let ratio = s * theta / shift;
            if !(1.0 + ratio > 0.0) {
                return Err(DiffusivityError::DomainSingularity { theta });
            }
            let log = ratio.ln_1p();
            let den = s * s * theta * (1.0 - theta) + k2 * a * d0 * log;
            pole_check(den, theta)?;
            Ok(-a * a * d0 * log / den)
        }
    }
}

fn huxley(
    a: f64,
    k2: f64,
    s: f64,
    level: IterateLevel,
    theta: f64,
) -> Result<f64, DiffusivityError> {
    let d0 = -a / k2;
    match level {
        IterateLevel::Zero => Ok(d0),
        IterateLevel::One => {
            let den = s * theta * (1.0 - theta) + a;
            pole_check(den, theta)?;
            Ok(-(a * a / k2) / den)
        }
        IterateLevel::Two => {
            // arctan form requires A/s + 1/4 < 0
            let disc = a / s + 0.25;
            if !(disc < 0.0) {
                return Err(DiffusivityError::WrongRegime(
                    "Huxley level 2 needs A/s + 1/4 < 0 (β > 0, no real pole of D₁)",
                ));
            }
            if theta == 0.0 {
                return Ok(d0);
            }
            let beta = disc.abs().sqrt();
            let t = ((theta - 0.5) / beta).atan() + (0.5 / beta).atan();
            let den = beta * s * s * theta * theta * (1.0 - theta) - a * a * t;
            pole_check(den, theta)?;
            Ok(a * a * a / k2 * t / den)
        }
    }
}

fn fhn(
    a: f64,
    k2: f64,
    s: f64,
    theta1: f64,
    level: IterateLevel,
    theta: f64,
) -> Result<f64, DiffusivityError> {
    let d_start = -a / k2;
    match level {
        IterateLevel::Zero => Ok(d_start),
        IterateLevel::One => {
            let p = theta * theta - (theta1 + 1.0) * theta + theta1 - a / s;
            pole_check(p, theta)?;
            Ok(a * a / (k2 * s) / p)
        }
        IterateLevel::Two => {
            let beta2 = -0.25 * theta1 * theta1 + 0.5 * theta1 - 0.25 - a / s;
            if !(beta2 > 0.0) {
                return Err(DiffusivityError::WrongRegime(
                    "Fitzhugh-Nagumo level 2 is only closed-form when P(θ) has complex roots",
                ));
            }
            let beta = beta2.sqrt();
            let c = 0.5 * (theta1 + 1.0);
            if theta == 0.0 {
                // T'(0) = β/(β² + c²); d/dθ of the cubic term at 0 is −βs²θ₁
                let dt0 = beta / (beta2 + c * c);
                let den = -beta * s * s * theta1 - a * a * dt0;
                pole_check(den, theta)?;
                return Ok(a * a * a / k2 * dt0 / den);
            }
            let t = ((theta - c) / beta).atan() + (c / beta).atan();
            let den = beta * s * s * theta * (1.0 - theta) * (theta - theta1) - a * a * t;
            pole_check(den, theta)?;
            Ok(a * a * a / k2 * t / den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p() -> SymmetryParams {
        SymmetryParams::helmholtz(-1.5, 1.0).unwrap()
    }

    #[test]
    fn fisher_values() {
        let m = ReactionModel::fisher(1.0).unwrap();
        assert_eq!(closed_form_iterate(&m, &p(), IterateLevel::Zero, 0.3).unwrap(), 2.5);
        assert_relative_eq!(
            closed_form_iterate(&m, &p(), IterateLevel::One, 0.5).unwrap(),
            1.875,
            max_relative = 1e-15
        );
        // mpmath, 30 digits
        assert_relative_eq!(
            closed_form_iterate(&m, &p(), IterateLevel::Two, 0.5).unwrap(),
            1.95245714725075144,
            max_relative = 1e-14
        );
    }

    #[test]
    fn huxley_values() {
        let m = ReactionModel::huxley(1.0).unwrap();
        assert_relative_eq!(
            closed_form_iterate(&m, &p(), IterateLevel::Two, 0.5).unwrap(),
            1.75994406506579646,
            max_relative = 1e-14
        );
        // removable point returns the anchored D(0)
        assert_eq!(closed_form_iterate(&m, &p(), IterateLevel::Two, 0.0).unwrap(), 1.5);
    }

    #[test]
    fn fhn_values() {
        let m = ReactionModel::fitzhugh_nagumo(0.5, -1.0).unwrap();
        assert_relative_eq!(
            closed_form_iterate(&m, &p(), IterateLevel::One, 1.0).unwrap(),
            1.5,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            closed_form_iterate(&m, &p(), IterateLevel::Two, 0.5).unwrap(),
            1.81464855166739636,
            max_relative = 1e-14
        );
        // every iterate keeps D(1) = −A/K²
        assert_relative_eq!(
            closed_form_iterate(&m, &p(), IterateLevel::Two, 1.0).unwrap(),
            1.5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn removable_points_are_continuous() {
        let cases = [
            ReactionModel::fisher(1.0).unwrap(),
            ReactionModel::huxley(1.0).unwrap(),
            ReactionModel::fitzhugh_nagumo(0.5, -1.0).unwrap(),
        ];
        for m in cases {
            let at0 = closed_form_iterate(&m, &p(), IterateLevel::Two, 0.0).unwrap();
            let near = closed_form_iterate(&m, &p(), IterateLevel::Two, 1e-7).unwrap();
            assert_relative_eq!(at0, near, max_relative = 1e-6);
        }
    }

    #[test]
    fn wrong_regimes_refused() {
        // θ₁ = −1, A/s = −1/4: β² = −3/4, P has real roots
        let m = ReactionModel::fitzhugh_nagumo(2.0, -1.0).unwrap();
        let q = SymmetryParams::helmholtz(-0.5, 1.0).unwrap();
        assert!(matches!(
            closed_form_iterate(&m, &q, IterateLevel::Two, 0.5),
            Err(DiffusivityError::WrongRegime(_))
        ));
        let h = ReactionModel::huxley(10.0).unwrap();
        assert!(matches!(
            closed_form_iterate(&h, &p(), IterateLevel::Two, 0.5),
            Err(DiffusivityError::WrongRegime(_))
        ));
    }

    #[test]
    fn poles_reported() {
        // Huxley D₁ pole where sθ(1−θ) + A = 0: s = 10, A = -1.5
        let h = ReactionModel::huxley(10.0).unwrap();
        let theta = 0.5 - (0.25 - 0.15f64).sqrt();
        let r = closed_form_iterate(&h, &p(), IterateLevel::One, theta);
        assert!(
            matches!(r, Err(DiffusivityError::DomainSingularity { .. }))
                || r.unwrap().abs() > 1e12
        );
    }
}
