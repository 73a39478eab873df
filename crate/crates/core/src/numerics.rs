//! Small numerical kernels shared by the profile, solution and verification code.

/// Cumulative integral of uniformly spaced samples `f` with spacing `h`.
///
/// Even indices use composite Simpson from the origin. Odd indices `i ≥ 3`
/// use Simpson up to `i − 3` followed by the 3/8 rule on the last three
/// intervals. Index 1 uses the one-sided cubic rule
/// `h/24 (9f₀ + 19f₁ − 5f₂ + f₃)`. Every entry is fourth-order accurate.
///
/// Requires at least four samples.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "cumulative_simpson needs at least 4 samples, got {n}");
    let mut out = vec![0.0; n];
    out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    let mut even = 0.0;
    for i in (2..n).step_by(2) {
        even += h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        out[i] = even;
    }
    for i in (3..n).step_by(2) {
        let base = out[i - 3];
        out[i] = base + 3.0 * h / 8.0 * (f[i - 3] + 3.0 * f[i - 2] + 3.0 * f[i - 1] + f[i]);
    }
    out
}

/// Piecewise cubic Hermite interpolant on a strictly increasing grid.
///
/// Slopes are taken as given and then limited (Fritsch–Carlson) so the
/// interpolant is monotone wherever the data are.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneHermite {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneHermite {
    pub fn new(x: Vec<f64>, y: Vec<f64>, slopes: Vec<f64>) -> Self {
        assert_eq!(x.len(), y.len());
        assert_eq!(x.len(), slopes.len());
        assert!(x.len() >= 2);
        let mut m = slopes;
        for i in 0..x.len() - 1 {
            let delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            if delta == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
                continue;
            }
            let alpha = m[i] / delta;
            let beta = m[i + 1] / delta;
            if alpha < 0.0 {
                m[i] = 0.0;
            }
            if beta < 0.0 {
                m[i + 1] = 0.0;
            }
            let r2 = alpha * alpha + beta * beta;
            if r2 > 9.0 {
                let tau = 3.0 / r2.sqrt();
                m[i] = tau * alpha * delta;
                m[i + 1] = tau * beta * delta;
            }
        }
        Self { x, y, m }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Interval index `i` with `x[i] ≤ x < x[i+1]`, clamped to the last interval.
    fn interval(&self, x: f64) -> usize {
        let i = self.x.partition_point(|&xi| xi <= x);
        i.saturating_sub(1).min(self.x.len() - 2)
    }

    fn basis(&self, i: usize, t: f64) -> (f64, f64) {
        let h = self.x[i + 1] - self.x[i];
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.m[i] * h, self.m[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let slope = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        (value, slope)
    }

    /// Value at `x` (no range check; extrapolates the end cubics).
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let t = (x - self.x[i]) / (self.x[i + 1] - self.x[i]);
        self.basis(i, t).0
    }

    /// Solve `H(x) = y` for a monotone increasing interpolant, `y` within range.
    ///
    /// Safeguarded Newton inside the bracketing interval, stopping when the
    /// update falls below `tol` in `x`.
    pub fn invert_increasing(&self, y: f64, tol: f64) -> f64 {
        let n = self.y.len();
        if y <= self.y[0] {
            return self.x[0];
        }
        if y >= self.y[n - 1] {
            return self.x[n - 1];
        }
        let j = self.y.partition_point(|&yi| yi <= y);
        let i = j.saturating_sub(1).min(n - 2);
        if y == self.y[i] {
            return self.x[i];
        }
        let h = self.x[i + 1] - self.x[i];
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut t = (y - self.y[i]) / (self.y[i + 1] - self.y[i]);
        for _ in 0..100 {
            let (v, slope) = self.basis(i, t);
            let g = v - y;
            if g == 0.0 {
                break;
            }
            if g < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let newton = t - g / (slope * h);
            let next = if slope > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let step = (next - t).abs() * h;
            t = next;
            if step < tol || (hi - lo).abs() < f64::EPSILON {
                break;
            }
        }
        self.x[i] + t * h
    }
}

/// Local four-point Lagrange interpolation on a uniform grid starting at `x0`.
pub fn lagrange4_uniform(x0: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 4);
    let s = (x - x0) / h;
    let i = (s.floor() as isize).clamp(1, n as isize - 3) as usize;
    // nodes i-1, i, i+1, i+2 in local coordinate p = s - i
    let p = s - i as f64;
    let (f0, f1, f2, f3) = (values[i - 1], values[i], values[i + 1], values[i + 2]);
    let w0 = -p * (p - 1.0) * (p - 2.0) / 6.0;
    let w1 = (p + 1.0) * (p - 1.0) * (p - 2.0) / 2.0;
    let w2 = -(p + 1.0) * p * (p - 2.0) / 2.0;
    let w3 = (p + 1.0) * p * (p - 1.0) / 6.0;
    w0 * f0 + w1 * f1 + w2 * f2 + w3 * f3
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping at width `tol`.
///
/// Returns `None` when the endpoints do not bracket a root.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Least-squares slope of `log(error)` against `log(spacing)`.
pub fn observed_order(spacings: &[f64], errors: &[f64]) -> f64 {
    assert_eq!(spacings.len(), errors.len());
    let n = spacings.len() as f64;
    let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Uniform grid of `n` points on `[a, b]` with exact endpoints.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
        .collect()
}

/// 17 significant digits, scientific notation. Used for every emitted number.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
