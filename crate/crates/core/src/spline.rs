//! Cubic splines, used to read back sampled curves.

use nalgebra::Vector3;

use crate::curve::{check_domain, Curve};
use crate::error::{Error, Result};
use crate::jet::VecJet;

/// Interpolating cubic spline. End slopes come from a six-point one-sided
/// difference (not-a-knot ends below six knots), which keeps second
/// derivatives near the ends about as accurate as in the interior.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    /// Requires at least four strictly increasing knots.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 4 || y.len() != n {
            return Err(Error::InvalidCurve(format!(
                "spline needs at least 4 knots with matching values, got {n}"
            )));
        }
        if let Some(w) = x.windows(2).position(|w| w[1] <= w[0] || !w[1].is_finite()) {
            return Err(Error::InvalidCurve(format!(
                "spline knots must be strictly increasing (knot {})",
                w + 1
            )));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let m = if n >= END_POINTS {
            clamped(&x, &y, &h, &slope)
        } else {
            not_a_knot(&h, &slope)
        };
        Ok(CubicSpline { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    /// Value and derivatives up to third order at `t`.
    pub fn eval(&self, t: f64) -> [f64; 4] {
        let n = self.x.len();
        let i = self.x.partition_point(|&k| k <= t).clamp(1, n - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let (a, b) = (self.x[i + 1] - t, t - self.x[i]);
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let ci = self.y[i] / h - mi * h / 6.0;
        let cj = self.y[i + 1] / h - mj * h / 6.0;
        [
            mi * a * a * a / (6.0 * h) + mj * b * b * b / (6.0 * h) + ci * a + cj * b,
            -mi * a * a / (2.0 * h) + mj * b * b / (2.0 * h) - ci + cj,
            (mi * a + mj * b) / h,
            (mj - mi) / h,
        ]
    }
}

const END_POINTS: usize = 6;

/// Derivative at `x[0]` of the polynomial through the first `END_POINTS` knots.
fn end_slope(x: &[f64], y: &[f64]) -> f64 {
    let x0 = x[0];
    let mut out = 0.0;
    for j in 0..END_POINTS {
        let w = if j == 0 {
            (1..END_POINTS).map(|m| 1.0 / (x0 - x[m])).sum::<f64>()
        } else {
            let num: f64 = (1..END_POINTS).filter(|&m| m != j).map(|m| x0 - x[m]).product();
            let den: f64 = (0..END_POINTS).filter(|&m| m != j).map(|m| x[j] - x[m]).product();
            num / den
        };
        out += w * y[j];
    }
    out
}

fn clamped(x: &[f64], y: &[f64], h: &[f64], slope: &[f64]) -> Vec<f64> {
    let n = x.len();
    let d0 = end_slope(x, y);
    let rx: Vec<f64> = x.iter().rev().map(|t| -t).collect();
    let ry: Vec<f64> = y.iter().rev().copied().collect();
    let d1 = -end_slope(&rx, &ry);
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    diag[0] = 2.0 * h[0];
    sup[0] = h[0];
    rhs[0] = 6.0 * (slope[0] - d0);
    for i in 1..n - 1 {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
        rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
    }
    sub[n - 1] = h[n - 2];
    diag[n - 1] = 2.0 * h[n - 2];
    rhs[n - 1] = 6.0 * (d1 - slope[n - 2]);
    solve_tridiagonal(&sub, &diag, &sup, &rhs)
}

fn not_a_knot(h: &[f64], slope: &[f64]) -> Vec<f64> {
    let n = h.len() + 1;
    // unknowns M1..M_{n-2}; M0 and M_{n-1} eliminated
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for j in 0..k {
        let i = j + 1;
        sub[j] = h[i - 1];
        diag[j] = 2.0 * (h[i - 1] + h[i]);
        sup[j] = h[i];
        rhs[j] = 6.0 * (slope[i] - slope[i - 1]);
    }
    let (h0, h1) = (h[0], h[1]);
    let (hp, hl) = (h[n - 3], h[n - 2]);
    diag[0] += h0 * (h0 + h1) / h1;
    sup[0] -= h0 * h0 / h1;
    diag[k - 1] += hl * (hp + hl) / hp;
    sub[k - 1] -= hl * hl / hp;
    let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);
    let mut m = vec![0.0; n];
    m[1..n - 1].copy_from_slice(&inner);
    m[0] = ((h0 + h1) * m[1] - h0 * m[2]) / h1;
    m[n - 1] = ((hp + hl) * m[n - 2] - hl * m[n - 3]) / hp;
    m
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
    out
}

/// A space curve interpolated through samples by three cubic splines.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    comps: [CubicSpline; 3],
}

impl SampledCurve {
    pub fn new(params: &[f64], points: &[Vector3<f64>]) -> Result<Self> {
        let comp = |k: usize| CubicSpline::new(params.to_vec(), points.iter().map(|p| p[k]).collect());
        Ok(SampledCurve {
            comps: [comp(0)?, comp(1)?, comp(2)?],
        })
    }

    pub fn knots(&self) -> &[f64] {
        self.comps[0].knots()
    }
}

impl Curve for SampledCurve {
    fn domain(&self) -> (f64, f64) {
        self.comps[0].domain()
    }

    fn sample_count(&self) -> usize {
        self.comps[0].knots().len()
    }

    fn jet(&self, u: f64, order: usize) -> Result<VecJet> {
        if order > 3 {
            return Err(Error::InvalidCurve(format!(
                "sampled curves provide derivatives up to order 3, not {order}"
            )));
        }
        let u = check_domain(u, self.domain())?;
        let [x, y, z] = [0, 1, 2].map(|k| self.comps[k].eval(u));
        let derivs: Vec<Vector3<f64>> = (0..=order).map(|k| Vector3::new(x[k], y[k], z[k])).collect();
        Ok(VecJet::from_derivatives(&derivs))
    }

    fn grid(&self) -> Vec<f64> {
        self.knots().to_vec()
    }
}
