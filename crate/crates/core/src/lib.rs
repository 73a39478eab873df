//! Exact solutions of nonlinear logistic reaction-diffusion equations
//!
//! ```text
//! θ_t = ∇·(D(θ)∇θ) + R(θ)
//! ```
//!
//! obtained by writing the equation for the Kirchhoff variable
//! `u = ∫₀^θ D`, which reduces to `u = e^{At}Φ(x)` with `∇²Φ + κΦ = 0`
//! whenever the diffusivity and reaction satisfy `R = A·u/D + κu`.
//!
//! Module map:
//!
//! * [`model`]: reaction families, symmetry parameters, admissibility;
//! * [`diffusivity`]: construction of the compatible `D(θ)` and `U(θ)`;
//! * [`spatial`]: radial Helmholtz modes and Bessel functions;
//! * [`solution`]: assembled exact solutions and reserve radii;
//! * [`genetics`]: fitness coefficients to reaction parameters;
//! * [`verify`]: PDE residuals and a method-of-lines simulator.

// `!(x > 0.0)` guards deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod diffusivity;
pub mod genetics;
pub mod model;
pub mod numerics;
pub mod ode;
pub mod solution;
pub mod spatial;
pub mod verify;

mod error;

pub use error::Error;
