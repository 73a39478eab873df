//! Adaptive Dormand–Prince 5(4) integrator for scalar ODEs with dense output.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    /// The right-hand side refused to evaluate and no smaller step helped.
    #[error("right-hand side undefined near x = {x}")]
    RhsFailure { x: f64 },
    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepUnderflow { x: f64, h: f64 },
    #[error("exceeded {0} steps")]
    TooManySteps(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output (Hairer & Wanner, DOPRI5 continuous extension)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrate `y' = f(x, y)` from `(x0, y0)` to `x_end > x0` and return the
/// solution at each of the increasing `outputs` (all within `[x0, x_end]`),
/// evaluated by the continuous extension of the accepted step covering it.
///
/// `f` returns `None` where it is undefined; the step is then rejected and
/// shrunk. If the failure persists down to the minimum step the error
/// carries the last accepted abscissa.
pub fn integrate_dense<F>(
    f: F,
    x0: f64,
    y0: f64,
    x_end: f64,
    outputs: &[f64],
    tol: Tolerances,
) -> Result<Vec<f64>, OdeError>
where
    F: Fn(f64, f64) -> Option<f64>,
{
    assert!(x_end > x0);
    debug_assert!(outputs.windows(2).all(|w| w[0] <= w[1]));
    let span = x_end - x0;
    let h_min = 16.0 * f64::EPSILON * x_end.abs().max(x0.abs()).max(span);
    let mut out = Vec::with_capacity(outputs.len());
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] <= x0 {
        out.push(y0);
        next_out += 1;
    }

    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, y).ok_or(OdeError::RhsFailure { x })?;
    let mut h = initial_step(&f, x, y, k1, span, &tol);
    let mut steps = 0usize;
    let mut rejected_rhs = false;

    while x < x_end {
        steps += 1;
        if steps > tol.max_steps {
            return Err(OdeError::TooManySteps(tol.max_steps));
        }
        if h < h_min {
            return Err(if rejected_rhs {
                OdeError::RhsFailure { x }
            } else {
                OdeError::StepUnderflow { x, h }
            });
        }
        let last = x + h >= x_end;
        if last {
            h = x_end - x;
        }
        let Some(stages) = stages(&f, x, y, h, k1) else {
            rejected_rhs = true;
            h *= 0.25;
            continue;
        };
        let Stages {
            k3,
            k4,
            k5,
            k6,
            k7,
            y_new,
        } = stages;
        let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let sc = tol.atol + tol.rtol * y.abs().max(y_new.abs());
        let err_norm = (err / sc).abs();

        if err_norm <= 1.0 {
            let x_new = if last { x_end } else { x + h };
            // dense output coefficients for [x, x_new]
            let ydiff = y_new - y;
            let bspl = h * k1 - ydiff;
            let r4 = ydiff - h * k7 - bspl;
            let r5 = h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7);
            while next_out < outputs.len() && outputs[next_out] <= x_new {
                let xo = outputs[next_out];
                let v = if xo == x_new {
                    y_new
                } else {
                    let th = (xo - x) / h;
                    let th1 = 1.0 - th;
                    y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5)))
                };
                out.push(v);
                next_out += 1;
            }
            x = x_new;
            y = y_new;
            k1 = k7;
            rejected_rhs = false;
            let fac = if err_norm == 0.0 {
                5.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            h *= (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    // outputs beyond x_end are a caller bug; anything left is at x_end
    while out.len() < outputs.len() {
        out.push(y);
    }
    Ok(out)
}

struct Stages {
    k3: f64,
    k4: f64,
    k5: f64,
    k6: f64,
    k7: f64,
    y_new: f64,
}

fn stages<F>(f: &F, x: f64, y: f64, h: f64, k1: f64) -> Option<Stages>
where
    F: Fn(f64, f64) -> Option<f64>,
{
    let k2 = f(x + C2 * h, y + h * A21 * k1)?;
    let k3 = f(x + C3 * h, y + h * (A31 * k1 + A32 * k2))?;
    let k4 = f(x + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
    let k5 = f(x + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))?;
    let k6 = f(
        x + h,
        y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
    )?;
    let y_new = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
    let k7 = f(x + h, y_new)?;
    if !(y_new.is_finite() && k7.is_finite()) {
        return None;
    }
    Some(Stages {
        k3,
        k4,
        k5,
        k6,
        k7,
        y_new,
    })
}

fn initial_step<F>(f: &F, x: f64, y: f64, k1: f64, span: f64, tol: &Tolerances) -> f64
where
    F: Fn(f64, f64) -> Option<f64>,
{
    let sc = tol.atol + tol.rtol * y.abs();
    let d0 = (y / sc).abs();
    let d1 = (k1 / sc).abs();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let d2 = f(x + h0, y + h0 * k1)
        .map(|k2| ((k2 - k1) / sc).abs() / h0)
        .unwrap_or(f64::INFINITY);
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * span)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_with_dense_output() {
        let outs: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let ys = integrate_dense(|_, y| Some(y), 0.0, 1.0, 2.0, &outs, Tolerances::default())
            .unwrap();
        for (x, y) in outs.iter().zip(&ys) {
            assert_relative_eq!(*y, x.exp(), max_relative = 1e-9);
        }
    }

    #[test]
    fn dense_output_between_steps_is_accurate() {
        // loose tolerance forces long steps; dense points fall inside them
        let tol = Tolerances {
            rtol: 1e-6,
            atol: 1e-9,
            ..Tolerances::default()
        };
        let outs: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let ys = integrate_dense(|x, _| Some(x.cos()), 0.0, 0.0, 10.0, &outs, tol).unwrap();
        let worst = outs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - x.sin()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-5, "worst dense error {worst}");
    }

    #[test]
    fn tightening_tolerance_reduces_error() {
        let run = |rtol: f64| {
            let tol = Tolerances {
                rtol,
                atol: rtol * 1e-2,
                ..Tolerances::default()
            };
            let y = integrate_dense(|x, y| Some(-2.0 * x * y), 0.0, 1.0, 3.0, &[3.0], tol)
                .unwrap()[0];
            (y - (-9.0f64).exp()).abs()
        };
        assert!(run(1e-10) < run(1e-5));
    }

    #[test]
    fn pole_is_reported() {
        // y' = y², y(0) = 1 blows up at x = 1; refuse |y| > 1e8
        let r = integrate_dense(
            |_, y| if y.abs() < 1e8 { Some(y * y) } else { None },
            0.0,
            1.0,
            2.0,
            &[2.0],
            Tolerances::default(),
        );
        match r {
            Err(OdeError::RhsFailure { x }) | Err(OdeError::StepUnderflow { x, .. }) => {
                assert!((x - 1.0).abs() < 1e-6, "stopped at {x}")
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
