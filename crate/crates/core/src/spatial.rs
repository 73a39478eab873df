//! Radial solutions of `∇²Φ + κΦ = 0` in one, two and three dimensions.
//!
//! Only `κ = K² > 0` modes are positive and bounded on a finite disc; the
//! `κ < 0` and `κ = 0` families are evaluated for diagnostics and carry an
//! inadmissible flag.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bessel;
use crate::model::{KappaSign, SymmetryParams};
use crate::numerics::bisect;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpatialError {
    #[error("Robin coefficient must be positive, got p = {0}")]
    NonPositiveP(f64),
    #[error("operation requires a kappa > 0 mode")]
    NotHelmholtz,
    #[error("spatial dimension must be 1, 2 or 3, got {0}")]
    InvalidDimension(u8),
    #[error("wavenumber must be positive and finite, got K = {0}")]
    InvalidWavenumber(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dimension {
    One,
    Two,
    Three,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::One, Dimension::Two, Dimension::Three];

    pub fn n(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

impl TryFrom<u8> for Dimension {
    type Error = SpatialError;

    fn try_from(n: u8) -> Result<Self, SpatialError> {
        match n {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(SpatialError::InvalidDimension(other)),
        }
    }
}

impl From<Dimension> for u8 {
    fn from(d: Dimension) -> u8 {
        d.n() as u8
    }
}

/// First positive zero of `J₀`, by bisection on `[2, 3]` to full precision.
pub fn first_bessel_zero() -> f64 {
    static LAMBDA1: OnceLock<f64> = OnceLock::new();
    *LAMBDA1.get_or_init(|| bisect(bessel::j0, 2.0, 3.0, 0.0).expect("J0 changes sign on [2, 3]"))
}

/// `Φ(r) = c·f(Kr) + b·g(Kr)`, the radially symmetric Helmholtz mode.
///
/// For `κ > 0` only the regular part `f` is used (`cos`, `J₀`, `sin x/x`).
/// For `κ < 0`, `f` is `cosh`, `I₀` or `sinh x/x` and `g` the second
/// solution (`sinh`, `K₀`, `cosh x/x`). For `κ = 0`, `Φ = c + b·g(r)` with
/// `g = r`, `ln r`, `1/r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialMode {
    dim: Dimension,
    class: KappaSign,
    k: f64,
    amplitude: f64,
    secondary: f64,
}

/// One evaluation of a mode, with its admissibility status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSample {
    pub r: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub admissible: bool,
}

impl RadialMode {
    /// `κ = K² > 0` with amplitude `c = Φ(0)`.
    pub fn helmholtz(dim: Dimension, k: f64, amplitude: f64) -> Result<Self, SpatialError> {
        check_k(k)?;
        Ok(Self {
            dim,
            class: KappaSign::Positive,
            k,
            amplitude,
            secondary: 0.0,
        })
    }

    /// `κ = −K² < 0`; diagnostic only.
    pub fn modified(
        dim: Dimension,
        k: f64,
        amplitude: f64,
        secondary: f64,
    ) -> Result<Self, SpatialError> {
        check_k(k)?;
        Ok(Self {
            dim,
            class: KappaSign::Negative,
            k,
            amplitude,
            secondary,
        })
    }

    /// `κ = 0`; diagnostic only.
    pub fn laplace(dim: Dimension, amplitude: f64, secondary: f64) -> Self {
        Self {
            dim,
            class: KappaSign::Zero,
            k: 0.0,
            amplitude,
            secondary,
        }
    }

    /// Mode matching the sign of `κ` in `params`.
    pub fn for_params(
        dim: Dimension,
        params: &SymmetryParams,
        amplitude: f64,
    ) -> Result<Self, SpatialError> {
        match params.kappa_sign() {
            KappaSign::Positive => Self::helmholtz(dim, params.k(), amplitude),
            KappaSign::Negative => Self::modified(dim, params.k(), amplitude, 0.0),
            KappaSign::Zero => Ok(Self::laplace(dim, amplitude, 0.0)),
        }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn class(&self) -> KappaSign {
        self.class
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kappa(&self) -> f64 {
        match self.class {
            KappaSign::Positive => self.k * self.k,
            KappaSign::Negative => -self.k * self.k,
            KappaSign::Zero => 0.0,
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn is_admissible(&self) -> bool {
        self.class == KappaSign::Positive
    }

    /// First zero `r₁` of a `κ > 0` mode: `π/(2K)`, `λ₁/K`, `π/K` for N = 1, 2, 3.
    pub fn domain_radius(&self) -> Option<f64> {
        if self.class != KappaSign::Positive {
            return None;
        }
        let x = match self.dim {
            Dimension::One => 0.5 * PI,
            Dimension::Two => first_bessel_zero(),
            Dimension::Three => PI,
        };
        Some(x / self.k)
    }

    /// `Φ(r)`. Negative `r` is read through the even extension.
    pub fn phi(&self, r: f64) -> f64 {
        self.derivs(r.abs())[0]
    }

    /// `Φ'(r)`, odd in `r`.
    pub fn phi_prime(&self, r: f64) -> f64 {
        let d = self.derivs(r.abs())[1];
        if r < 0.0 {
            -d
        } else {
            d
        }
    }

    /// `Φ''(r)` from analytic derivatives of the special functions.
    pub fn phi_second(&self, r: f64) -> f64 {
        self.derivs(r.abs())[2]
    }

    pub fn sample(&self, r: f64) -> ModeSample {
        let d = self.derivs(r.abs());
        ModeSample {
            r,
            phi: d[0],
            phi_prime: if r < 0.0 { -d[1] } else { d[1] },
            admissible: self.is_admissible(),
        }
    }

    /// `[Φ, Φ', Φ'']` at `r ≥ 0`.
    fn derivs(&self, r: f64) -> [f64; 3] {
        let (c, b, k) = (self.amplitude, self.secondary, self.k);
        match self.class {
            KappaSign::Positive => {
                let x = k * r;
                let f = match self.dim {
                    Dimension::One => [x.cos(), -x.sin(), -x.cos()],
                    Dimension::Two => [bessel::j0(x), -bessel::j1(x), bessel::j0_second(x)],
                    Dimension::Three => sinc_derivs(x, false),
                };
                [c * f[0], c * k * f[1], c * k * k * f[2]]
            }
            KappaSign::Negative => {
                let x = k * r;
                let (f, g) = match self.dim {
                    Dimension::One => (
                        [x.cosh(), x.sinh(), x.cosh()],
                        [x.sinh(), x.cosh(), x.sinh()],
                    ),
                    Dimension::Two => {
                        let (i0, i1) = (bessel::i0(x), bessel::i1(x));
                        let i0pp = if x == 0.0 { 0.5 } else { i0 - i1 / x };
                        let g = if b == 0.0 {
                            [0.0; 3]
                        } else {
                            let (k0, k1) = (bessel::k0(x), bessel::k1(x));
                            [k0, -k1, k0 + k1 / x]
                        };
                        ([i0, i1, i0pp], g)
                    }
                    Dimension::Three => {
                        let g = if b == 0.0 {
                            [0.0; 3]
                        } else {
                            over_x([x.cosh(), x.sinh(), x.cosh()], x)
                        };
                        (sinc_derivs(x, true), g)
                    }
                };
                [
                    c * f[0] + b * g[0],
                    k * (c * f[1] + b * g[1]),
                    k * k * (c * f[2] + b * g[2]),
                ]
            }
            KappaSign::Zero => {
                if b == 0.0 {
                    return [c, 0.0, 0.0];
                }
                match self.dim {
                    Dimension::One => [c + b * r, b, 0.0],
                    Dimension::Two => [c + b * r.ln(), b / r, -b / (r * r)],
                    Dimension::Three => [c + b / r, -b / (r * r), 2.0 * b / (r * r * r)],
                }
            }
        }
    }
}

fn check_k(k: f64) -> Result<(), SpatialError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(SpatialError::InvalidWavenumber(k))
    }
}

/// `[h, h', h'']` for `h(x) = g(x)/x` given `[g, g', g'']`.
fn over_x(g: [f64; 3], x: f64) -> [f64; 3] {
    let x2 = x * x;
    [
        g[0] / x,
        g[1] / x - g[0] / x2,
        g[2] / x - 2.0 * g[1] / x2 + 2.0 * g[0] / (x2 * x),
    ]
}

/// `sin x / x` (or `sinh x / x`) and its first two derivatives; power
/// series near the removable point.
fn sinc_derivs(x: f64, hyperbolic: bool) -> [f64; 3] {
    if x.abs() < 0.5 {
        let sign = if hyperbolic { 1.0 } else { -1.0 };
        // Σ σ^k x^{2k} / (2k+1)!
        let x2 = x * x;
        let mut out = [1.0, 0.0, 0.0];
        let mut coef = 1.0; // σ^k / (2k+1)!
        let mut xp = 1.0; // x^{2k-2}
        for k in 1..20 {
            let kf = k as f64;
            coef *= sign / ((2.0 * kf) * (2.0 * kf + 1.0));
            let twok = 2.0 * kf;
            out[2] += coef * twok * (twok - 1.0) * xp;
            out[1] += coef * twok * xp * x;
            xp *= x2;
            out[0] += coef * xp;
            if coef.abs() < 1e-30 {
                break;
            }
        }
        out
    } else if hyperbolic {
        over_x([x.sinh(), x.cosh(), x.sinh()], x)
    } else {
        over_x([x.sin(), x.cos(), -x.sin()], x)
    }
}

/// Radius `r₂ ∈ (0, r₁)` where `−Φ'(r₂)/Φ(r₂) = p`.
///
/// A Dirichlet cull at `r₁` is equivalent to the Robin condition
/// `−u_r = p·u` imposed at `r₂`. `−Φ'/Φ` rises from 0 at the origin to `+∞`
/// at `r₁`, so the root is unique.
pub fn robin_radius(mode: &RadialMode, p: f64) -> Result<f64, SpatialError> {
    let r1 = mode.domain_radius().ok_or(SpatialError::NotHelmholtz)?;
    if !(p > 0.0) {
        return Err(SpatialError::NonPositiveP(p));
    }
    let f = |r: f64| -mode.phi_prime(r) - p * mode.phi(r);
    Ok(bisect(f, 0.0, r1, 0.0).expect("-Φ' - pΦ changes sign on [0, r1]"))
}

/// `p = −Φ'(r)/Φ(r)`, the Robin coefficient that reproduces the mode at `r`.
pub fn robin_coefficient(mode: &RadialMode, r: f64) -> f64 {
    -mode.phi_prime(r) / mode.phi(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pos(n: u8, k: f64) -> RadialMode {
        RadialMode::helmholtz(Dimension::try_from(n).unwrap(), k, 1.0).unwrap()
    }

    #[test]
    fn lambda1() {
        let l = first_bessel_zero();
        assert_relative_eq!(l, 2.404825557695773, epsilon = 1e-13);
        assert!(bessel::j0(l).abs() < 1e-15);
        assert_relative_eq!(pos(2, 1.0).domain_radius().unwrap(), l);
    }

    #[test]
    fn example_values() {
        assert_eq!(pos(2, 1.0).phi(0.0), 1.0);
        assert!(pos(2, 1.0).phi(first_bessel_zero()).abs() < 1e-15);
        assert!(pos(3, 1.0).phi(PI).abs() < 1e-15);
        assert_eq!(pos(3, 1.0).phi(0.0), 1.0);
        assert_relative_eq!(pos(2, 1.0).phi(1.0), 0.7651976866, epsilon = 1e-10);
        assert!(pos(1, 2.0).phi(PI / 4.0).abs() < 1e-15);
        for n in 1..=3 {
            assert_eq!(pos(n, 1.3).phi_prime(0.0), 0.0);
        }
    }

    #[test]
    fn helmholtz_ode_residual() {
        let modes: Vec<RadialMode> = Dimension::ALL
            .iter()
            .flat_map(|&d| {
                [
                    RadialMode::helmholtz(d, 0.8, 1.7).unwrap(),
                    RadialMode::modified(d, 0.8, 1.7, 0.4).unwrap(),
                ]
            })
            .collect();
        for m in modes {
            let n = m.dim().n() as f64;
            let radii: Vec<f64> = (1..=100).map(|i| i as f64 * 0.04).collect();
            let max_phi = radii.iter().map(|&r| m.phi(r).abs()).fold(0.0, f64::max);
            for &r in &radii {
                let res = m.phi_second(r) + (n - 1.0) / r * m.phi_prime(r) + m.kappa() * m.phi(r);
                assert!(
                    res.abs() <= 1e-8 * m.kappa().abs() * max_phi,
                    "{:?} r={r} res={res}",
                    m
                );
                let h = 1e-5;
                let fd = (m.phi_prime(r + h) - m.phi_prime(r - h)) / (2.0 * h);
                assert_relative_eq!(m.phi_second(r), fd, epsilon = 1e-7 * max_phi, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn laplace_modes_are_harmonic() {
        for d in Dimension::ALL {
            let m = RadialMode::laplace(d, 1.0, 0.3);
            assert!(!m.sample(1.0).admissible);
            let n = d.n() as f64;
            for r in [0.5, 1.0, 2.0] {
                let res = m.phi_second(r) + (n - 1.0) / r * m.phi_prime(r);
                assert!(res.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn robin_coefficient_is_monotone() {
        for n in 1..=3 {
            let m = pos(n, 1.0);
            let r1 = m.domain_radius().unwrap();
            let mut prev = -1.0;
            for i in 1..1000 {
                let p = robin_coefficient(&m, r1 * i as f64 / 1000.0);
                assert!(p > prev, "N={n} i={i}");
                prev = p;
            }
        }
    }

    #[test]
    fn robin_radius_values() {
        let m = pos(2, 1.0);
        // J₁(r)/J₀(r) = 1, mpmath oracle
        assert_relative_eq!(robin_radius(&m, 1.0).unwrap(), 1.4346956508195629, epsilon = 1e-12);
        assert!(robin_radius(&m, 1e-9).unwrap() < 1e-4);
        let r1 = m.domain_radius().unwrap();
        assert!(r1 - robin_radius(&m, 1e9).unwrap() < 1e-8);
        assert_eq!(robin_radius(&m, 0.0), Err(SpatialError::NonPositiveP(0.0)));
        let q = RadialMode::modified(Dimension::Two, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(robin_radius(&q, 1.0), Err(SpatialError::NotHelmholtz));
    }

    #[test]
    fn modes_positive_inside_domain() {
        for n in 1..=3 {
            let m = pos(n, 0.7);
            let r1 = m.domain_radius().unwrap();
            for i in 0..500 {
                assert!(m.phi(r1 * i as f64 / 500.0) > 0.0);
            }
        }
    }
}
