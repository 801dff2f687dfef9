//! Monotone cubic (Fritsch–Carlson) interpolation on uniform knots.
//!
//! Used to resample fields under dilation `u(x) -> t^{N/2} u(tx)` without
//! introducing overshoots: the limiter keeps the interpolant monotone on
//! every monotone data segment, so nonnegative decaying profiles stay
//! nonnegative. Queries outside the knot range evaluate to zero, matching
//! the Dirichlet/decay convention of the grids.

/// Piecewise-cubic Hermite interpolant with limited derivatives.
pub struct MonotoneCubic {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// Build from uniform knots starting at `x0` with spacing `h > 0`.
    pub fn new(x0: f64, h: f64, y: &[f64]) -> MonotoneCubic {
        let n = y.len();
        assert!(n >= 2 && h > 0.0);
        let mut slope = vec![0.0; n - 1];
        for k in 0..n - 1 {
            slope[k] = (y[k + 1] - y[k]) / h;
        }
        let mut d = vec![0.0; n];
        d[0] = slope[0];
        d[n - 1] = slope[n - 2];
        for k in 1..n - 1 {
            d[k] = if slope[k - 1] * slope[k] > 0.0 {
                0.5 * (slope[k - 1] + slope[k])
            } else {
                0.0
            };
        }
        // Fritsch-Carlson limiter: pull derivatives into the disc of radius 3.
        for k in 0..n - 1 {
            if slope[k] == 0.0 {
                d[k] = 0.0;
                d[k + 1] = 0.0;
            } else {
                let alpha = d[k] / slope[k];
                let beta = d[k + 1] / slope[k];
                let s = alpha * alpha + beta * beta;
                if s > 9.0 {
                    let tau = 3.0 / s.sqrt();
                    d[k] = tau * alpha * slope[k];
                    d[k + 1] = tau * beta * slope[k];
                }
            }
        }
        MonotoneCubic { x0, h, y: y.to_vec(), d }
    }

    /// Evaluate; outside the knot range returns 0.
    pub fn eval_or_zero(&self, x: f64) -> f64 {
        let n = self.y.len();
        let t = (x - self.x0) / self.h;
        if t < 0.0 || t > (n - 1) as f64 {
            return 0.0;
        }
        let mut k = t.floor() as usize;
        if k >= n - 1 {
            k = n - 2;
        }
        let s = t - k as f64;
        if s == 0.0 {
            return self.y[k]; // knot hit: exact
        }
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * self.h * self.d[k] + h01 * self.y[k + 1] + h11 * self.h * self.d[k + 1]
    }
}
