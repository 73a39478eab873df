//! Bessel functions needed by the radial Helmholtz modes.
//!
//! `J₀`, `J₁`: power series for `|x| ≤ 8`, Miller backward recurrence
//! normalised by `J₀ + 2ΣJ₂ₖ = 1` for `8 < |x| ≤ 25`, Hankel asymptotic
//! expansion beyond. Absolute accuracy is ~1e-15 on `[0, 25]`.
//!
//! `I₀`, `I₁` by their (cancellation-free) power series; `K₀`, `K₁` by
//! trapezoidal quadrature of `∫₀^∞ exp(−x cosh t) cosh(νt) dt`, which
//! converges geometrically. The modified functions only serve diagnostic
//! `κ < 0` modes.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 8.0;
const RECURRENCE_LIMIT: f64 = 25.0;

/// Bessel function of the first kind, order 0.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        j0_series(ax)
    } else if ax <= RECURRENCE_LIMIT {
        miller(ax).0
    } else {
        hankel(0, ax)
    }
}

/// Bessel function of the first kind, order 1 (odd in `x`).
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        j1_series(ax)
    } else if ax <= RECURRENCE_LIMIT {
        miller(ax).1
    } else {
        hankel(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J₀''(x)`: term-by-term differentiated series near the origin,
/// `J₁(x)/x − J₀(x)` elsewhere.
pub fn j0_second(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        // d²/dx² Σ c_k x^{2k}, c_k = (−1)^k / (4^k (k!)²)
        let x2 = ax * ax;
        let mut term = -0.5;
        let mut sum = term;
        for k in 1..120 {
            let kf = k as f64;
            term *= -x2 / (4.0 * (kf + 1.0) * (kf + 1.0)) * (2.0 * kf + 2.0) * (2.0 * kf + 1.0)
                / (2.0 * kf * (2.0 * kf - 1.0));
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        j1(ax) / ax - j0(ax)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..120 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn j1_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..120 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// `(J₀(x), J₁(x))` by downward recurrence from a high even order.
fn miller(x: f64) -> (f64, f64) {
    let start = (x + 30.0 + 4.0 * x.sqrt()) as usize;
    let m = start + start % 2;
    let mut above = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=m).rev() {
        let below = 2.0 * k as f64 / x * cur - above; // J_{k-1}
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == 1 {
            j1 = cur;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e200 {
            cur *= 1e-200;
            above *= 1e-200;
            norm *= 1e-200;
            j1 *= 1e-200;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() > prev || a.abs() < 1e-17 {
            break;
        }
        prev = a.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
    }
    let chi = x - (0.5 * nu as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Modified Bessel function of the first kind, order 0.
pub fn i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..2000 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Modified Bessel function of the first kind, order 1.
pub fn i1(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..2000 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn k_integral(nu: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    let h = 0.05;
    let t_max = (745.0 / x).max(1.0).acosh() + 1.0;
    let n = (t_max / h).ceil() as usize;
    let mut sum = 0.5 * (-x).exp();
    for i in 1..=n {
        let t = i as f64 * h;
        sum += (-x * t.cosh()).exp() * (nu * t).cosh();
    }
    h * sum
}

/// Modified Bessel function of the second kind, order 0 (`x > 0`).
pub fn k0(x: f64) -> f64 {
    k_integral(0.0, x)
}

/// Modified Bessel function of the second kind, order 1 (`x > 0`).
pub fn k1(x: f64) -> f64 {
    k_integral(1.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// `Jₙ(x) = (1/π)∫₀^π cos(nτ − x sin τ) dτ`; the trapezoid rule on a
    /// periodic analytic integrand converges geometrically.
    fn bessel_integral(n: f64, x: f64) -> f64 {
        let m = 4000;
        let h = PI / m as f64;
        let f = |t: f64| (n * t - x * t.sin()).cos();
        let mut s = 0.5 * (f(0.0) + f(PI));
        for i in 1..m {
            s += f(i as f64 * h);
        }
        s * h / PI
    }

    #[test]
    fn known_values() {
        assert_eq!(j0(0.0), 1.0);
        assert_eq!(j1(0.0), 0.0);
        assert_relative_eq!(j0(1.0), 0.765197686557966551, epsilon = 1e-15);
        assert_relative_eq!(j1(1.0), 0.440050585744933516, epsilon = 1e-15);
        assert_relative_eq!(j0(10.0), -0.245935764451348335, epsilon = 1e-14);
        assert_relative_eq!(j0(30.0), -0.0863679835810403, epsilon = 1e-13);
        assert_relative_eq!(j1(-1.0), -0.440050585744933516, epsilon = 1e-15);
    }

    #[test]
    fn agrees_with_integral_representation() {
        for i in 0..=250 {
            let x = i as f64 * 0.12;
            assert_relative_eq!(j0(x), bessel_integral(0.0, x), epsilon = 1e-13);
            assert_relative_eq!(j1(x), bessel_integral(1.0, x), epsilon = 1e-13);
        }
    }

    #[test]
    fn branches_join_smoothly() {
        for &x in &[SERIES_LIMIT, RECURRENCE_LIMIT] {
            for dx in [-1e-9, 1e-9] {
                assert_relative_eq!(j0(x + dx), bessel_integral(0.0, x + dx), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn second_derivative_matches_differences() {
        // the series loses ~1e-14 to cancellation near x = 8, so keep h coarse
        let h = 1e-3;
        for &x in &[0.0, 0.3, 2.4, 7.5, 8.5, 12.0] {
            let fd = (j0(x + h) - 2.0 * j0(x) + j0(x - h)) / (h * h);
            assert_relative_eq!(j0_second(x), fd, epsilon = 1e-6);
        }
        assert_relative_eq!(j0_second(0.0), -0.5, epsilon = 1e-16);
    }

    #[test]
    fn modified_functions() {
        // Abramowitz & Stegun table 9.8 values
        assert_relative_eq!(i0(1.0), 1.266065877752008, max_relative = 1e-14);
        assert_relative_eq!(i1(1.0), 0.565159103992485, max_relative = 1e-14);
        assert_relative_eq!(k0(1.0), 0.421024438240708, max_relative = 1e-13);
        assert_relative_eq!(k1(1.0), 0.601907230197235, max_relative = 1e-13);
        assert_relative_eq!(k0(0.1), 2.427069024702017, max_relative = 1e-13);
        // Wronskian I₀K₁ + I₁K₀ = 1/x
        for &x in &[0.05, 0.7, 3.0, 11.0] {
            assert_relative_eq!(i0(x) * k1(x) + i1(x) * k0(x), 1.0 / x, max_relative = 1e-12);
        }
    }
}
