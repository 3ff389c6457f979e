//! Adaptive Simpson quadrature and monotone cumulative integrals.

use std::ops::{Add, Mul, Sub};

use nalgebra::Vector3;

use crate::exec::Execution;

/// Values that can be integrated: scalars and 3-vectors.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Vector3<f64> {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const MAX_DEPTH: u32 = 24;

/// Integrates `f` over `[a, b]` with adaptive Simpson's rule.
///
/// The local error target is `rel_tol * (b - a) * max|f|` over the first
/// three samples. Subintervals are always visited left to right, so the
/// summation order (and hence the rounding) is fixed.
pub fn adaptive_simpson<V, E, F>(f: &mut F, a: f64, b: f64, rel_tol: f64) -> Result<V, E>
where
    V: Integrand,
    F: FnMut(f64) -> Result<V, E>,
{
    if a == b {
        return Ok(f(a)? * 0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = simpson(a, b, fa, fm, fb);
    let scale = fa.magnitude().max(fm.magnitude()).max(fb.magnitude());
    let tol = rel_tol * (b - a).abs() * scale;
    refine(f, a, b, fa, fm, fb, whole, tol, 0)
}

fn simpson<V: Integrand>(a: f64, b: f64, fa: V, fm: V, fb: V) -> V {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn refine<V, E, F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: V,
    fm: V,
    fb: V,
    whole: V,
    tol: f64,
    depth: u32,
) -> Result<V, E>
where
    V: Integrand,
    F: FnMut(f64) -> Result<V, E>,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let sum = left + right;
    let delta = sum - whole;
    let floor = 4.0 * f64::EPSILON * sum.magnitude();
    if depth >= MAX_DEPTH || delta.magnitude() <= 15.0 * tol || tol <= floor {
        return Ok(sum + delta * (1.0 / 15.0));
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Relative tolerance used for all cumulative integrals.
pub const CUMULATIVE_TOL: f64 = 1e-12;

/// A nondecreasing function `F(u) = ∫_{u0}^{u} rate` tabulated on a uniform
/// grid, with the rate stored at each node.
///
/// Between nodes `F` is the cubic Hermite interpolant of the node values and
/// rates; the inverse solves that same interpolant, so `F(F⁻¹(v)) = v` to
/// rounding.
#[derive(Debug, Clone)]
pub struct CumulativeMap {
    start: f64,
    end: f64,
    step: f64,
    values: Vec<f64>,
    rates: Vec<f64>,
}

impl CumulativeMap {
    /// Tabulates the integral of `rate` on `intervals` equal steps of `[a, b]`.
    pub fn build<E, F>(exec: Execution, a: f64, b: f64, intervals: usize, rate: F) -> Result<Self, E>
    where
        E: Send,
        F: Fn(f64) -> Result<f64, E> + Sync + Send,
    {
        assert!(intervals >= 1 && b > a);
        let step = (b - a) / intervals as f64;
        let node = |i: usize| if i == intervals { b } else { a + step * i as f64 };
        let rates = exec.try_map(intervals + 1, |i| rate(node(i)))?;
        let pieces = exec.try_map(intervals, |i| {
            adaptive_simpson(&mut |u| rate(u), node(i), node(i + 1), CUMULATIVE_TOL)
        })?;
        let mut values = Vec::with_capacity(intervals + 1);
        let mut acc = 0.0;
        values.push(acc);
        for p in pieces {
            acc += p;
            values.push(acc);
        }
        Ok(CumulativeMap {
            start: a,
            end: b,
            step,
            values,
            rates,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.start, self.node(self.values.len() - 1))
    }

    pub fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.values.len() {
            self.end
        } else {
            self.start + self.step * i as f64
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.node(i))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    fn locate(&self, u: f64) -> (usize, f64) {
        let last = self.values.len() - 2;
        let x = (u - self.start) / self.step;
        let i = (x.floor().max(0.0) as usize).min(last);
        (i, (x - i as f64).clamp(0.0, 1.0))
    }

    fn hermite(&self, i: usize, t: f64) -> (f64, f64) {
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        let (r0, r1) = (self.rates[i] * self.step, self.rates[i + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * f0
            + (t3 - 2.0 * t2 + t) * r0
            + (-2.0 * t3 + 3.0 * t2) * f1
            + (t3 - t2) * r1;
        let slope = ((6.0 * t2 - 6.0 * t) * (f0 - f1)
            + (3.0 * t2 - 4.0 * t + 1.0) * r0
            + (3.0 * t2 - 2.0 * t) * r1)
            / self.step;
        (value, slope)
    }

    pub fn value_at(&self, u: f64) -> f64 {
        let (i, t) = self.locate(u);
        self.hermite(i, t).0
    }

    pub fn rate_at(&self, u: f64) -> f64 {
        let (i, t) = self.locate(u);
        self.hermite(i, t).1
    }

    /// Inverse map: the parameter `u` with `value_at(u) = v`. Values outside
    /// the tabulated range are clamped.
    pub fn param_at(&self, v: f64) -> f64 {
        let total = self.total();
        if v <= 0.0 {
            return self.start;
        }
        if v >= total {
            return self.node(self.values.len() - 1);
        }
        let i = self.values.partition_point(|&x| x <= v).saturating_sub(1);
        let i = i.min(self.values.len() - 2);
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        if v == f0 || f1 <= f0 {
            return self.node(i);
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut t = (v - f0) / (f1 - f0);
        for _ in 0..100 {
            let (h, dh) = self.hermite(i, t);
            let g = h - v;
            if g.abs() <= 2.0 * f64::EPSILON * v.abs().max(1.0) {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let newton = t - g / (dh * self.step);
            t = if dh > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON {
                break;
            }
        }
        self.start + self.step * (i as f64 + t)
    }
}
