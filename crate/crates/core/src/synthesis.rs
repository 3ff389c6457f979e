//! Construction of new members of a similarity family.
//!
//! Given a reference surface `β` with frame `{q, h, a}` along its striction
//! curve, a transformation `λ(s_β) > 0` and an angle `θ(s_α)`, the surface
//!
//! ```text
//! s_α = ∫ λ ds_β,   q_α(s_α) = q_β(s_β),
//! α(s_α) = anchor + ∫ (cos θ q + sin θ a) ds_α
//! ```
//!
//! has `α` as its (unit-speed) striction curve and is similar to `β` with
//! transformation `λ`.

use std::sync::Arc;

use nalgebra::Vector3;

use crate::curve::{uniform_grid, Curve, Normalized};
use crate::exec::Execution;
use crate::expr::Expr;
use crate::frame::{frenet_frame, StructureFunction};
use crate::ode::{integrate_with_drift, Frame};
use crate::quadrature::{adaptive_simpson, CumulativeMap, CUMULATIVE_TOL};
use crate::spline::SampledCurve;
use crate::surface::RuledSurface;
use crate::{Error, Result};

/// Default number of output samples. Readers differentiate cubic splines,
/// whose second derivatives are only second-order accurate; at this density
/// the curvatures of an output stay within a few `1e-6` (relative) of their
/// targets on the built-in surfaces.
pub const DEFAULT_OUTPUT_SAMPLES: usize = 16384;

/// A surface given by samples of its striction curve `c(s)` and unit
/// director `q(s)` over strictly increasing arc length `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSurface {
    pub s: Vec<f64>,
    pub c: Vec<Vector3<f64>>,
    pub q: Vec<Vector3<f64>>,
}

impl SampledSurface {
    pub fn new(s: Vec<f64>, c: Vec<Vector3<f64>>, q: Vec<Vector3<f64>>) -> Result<Self> {
        if s.len() != c.len() || s.len() != q.len() {
            return Err(Error::InvalidArgument("sample columns differ in length".into()));
        }
        if s.len() < 4 {
            return Err(Error::InvalidArgument("a sampled surface needs at least four rows".into()));
        }
        if let Some(i) = (1..s.len()).find(|&i| !(s[i] > s[i - 1])) {
            return Err(Error::InvalidArgument(format!("arc length is not increasing at row {i}")));
        }
        Ok(SampledSurface { s, c, q })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Interpolates both curves by cubic splines in `s`; the director is
    /// renormalized pointwise.
    pub fn to_surface(&self, name: impl Into<String>) -> Result<RuledSurface> {
        let base: Arc<dyn Curve> = Arc::new(SampledCurve::new(&self.s, &self.c)?);
        let q: Arc<dyn Curve> = Arc::new(SampledCurve::new(&self.s, &self.q)?);
        RuledSurface::from_curves(name, base, Arc::new(Normalized::new(q)))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SynthesisOptions {
    pub samples: usize,
    pub exec: Execution,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            samples: DEFAULT_OUTPUT_SAMPLES,
            exec: Execution::default(),
        }
    }
}

/// Builds the similar surface for `lambda` (an expression in `s_β`, written
/// with the variable `u`) and `theta` (an expression in `s_α`), sampled
/// uniformly in `s_α`.
pub fn synthesize_similar(
    beta: &RuledSurface,
    lambda: &Expr,
    theta: &Expr,
    anchor: Vector3<f64>,
    opts: &SynthesisOptions,
) -> Result<SampledSurface> {
    let n = opts.samples;
    if n < 4 {
        return Err(Error::InvalidArgument("need at least four output samples".into()));
    }
    let exec = opts.exec;
    let field = frenet_frame(beta)?;
    let total_beta = field.total_length();
    let lam = |s: f64| lambda.eval(s).map_err(Error::eval(s));
    let probe = uniform_grid((0.0, total_beta), 4 * n);
    let values = exec.try_map(probe.len(), |i| lam(probe[i]))?;
    if let Some(i) = values.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::NonPositiveLambda {
            at: probe[i],
            value: values[i],
        });
    }
    let map = CumulativeMap::build(exec, 0.0, total_beta, n - 1, |s| {
        let v = lam(s)?;
        if !(v > 0.0) {
            return Err(Error::NonPositiveLambda { at: s, value: v });
        }
        Ok(v)
    })?;
    let total_alpha = map.total();
    let grid = uniform_grid((0.0, total_alpha), n);
    let tangent = |sa: f64| -> Result<Vector3<f64>> {
        let th = theta.eval(sa).map_err(Error::eval(sa))?;
        let fr = field.at_s(map.param_at(sa))?;
        Ok(fr.q * th.cos() + fr.a * th.sin())
    };
    let pieces = exec.try_map(n - 1, |k| adaptive_simpson(&mut |x| tangent(x), grid[k], grid[k + 1], CUMULATIVE_TOL))?;
    let q = exec.try_map(n, |k| Ok::<_, Error>(field.at_s(map.param_at(grid[k]))?.q))?;
    let mut c = Vec::with_capacity(n);
    let mut acc = anchor;
    c.push(acc);
    for p in pieces {
        acc += p;
        c.push(acc);
    }
    SampledSurface::new(grid, c, q)
}

/// Builds a surface directly from a structure function: integrates the
/// frame system in `φ` from `initial`, with constant `k1` (so `s = φ / k1`)
/// and constant tangent angle `theta`.
pub fn synthesize_from_structure(
    f: &StructureFunction,
    initial: Frame,
    anchor: Vector3<f64>,
    k1: f64,
    theta: f64,
    samples: usize,
) -> Result<SampledSurface> {
    if !(k1 > 0.0) {
        return Err(Error::InvalidArgument(format!("k1 must be positive, got {k1}")));
    }
    if samples < 4 {
        return Err(Error::InvalidArgument("need at least four output samples".into()));
    }
    let (ct, st) = (theta.cos(), theta.sin());
    let tr = integrate_with_drift(f, initial, anchor, (0.0, f.total()), samples - 1, |_, fr| {
        (fr[0] * ct + fr[2] * st) / k1
    })?;
    SampledSurface::new(
        tr.phi.iter().map(|p| p / k1).collect(),
        tr.points,
        tr.frames.iter().map(|fr| fr[0]).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::surface::{classify, distribution_parameter, SurfaceKind};
    use crate::parse_expression;
    use std::f64::consts::SQRT_2;

    fn expr(t: &str) -> Expr {
        parse_expression(t).unwrap()
    }

    #[test]
    fn reproduces_similar_helicoid() {
        let out = synthesize_similar(
            &presets::helicoid(),
            &expr("2^(1/2)"),
            &expr("3*pi/4"),
            Vector3::new(0.0, 1.0, 0.0),
            &Default::default(),
        )
        .unwrap();
        for k in 0..out.len() {
            let t = out.s[k] / SQRT_2;
            assert!((out.c[k] - Vector3::new(-t.sin(), t.cos(), t)).norm() < 1e-9);
            assert!((out.q[k] - Vector3::new(t.cos(), t.sin(), 0.0)).norm() < 1e-9);
        }
        assert!((out.s.last().unwrap() - 2.0 * std::f64::consts::PI * SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn zero_angle_is_developable() {
        let out = synthesize_similar(
            &presets::helicoid(),
            &expr("1"),
            &expr("0"),
            Vector3::new(0.0, -1.0, 0.0),
            &Default::default(),
        )
        .unwrap();
        let n = out.to_surface("flat").unwrap();
        let class = classify(&n).unwrap();
        assert_eq!(class.kind, SurfaceKind::Developable, "{class:?}");
        for u in n.grid().into_iter().step_by(97) {
            assert!(distribution_parameter(&n, u).unwrap().abs() <= 1e-8);
        }
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let r = synthesize_similar(&presets::helicoid(), &expr("-1"), &expr("0"), Vector3::zeros(), &Default::default());
        assert!(matches!(r, Err(Error::NonPositiveLambda { .. })));
        let r = synthesize_similar(&presets::helicoid(), &expr("u - 1"), &expr("0"), Vector3::zeros(), &Default::default());
        assert!(matches!(r, Err(Error::NonPositiveLambda { .. })));
    }

    #[test]
    fn from_structure_matches_hyperboloid_data() {
        let f = StructureFunction::constant(1.0, std::f64::consts::PI, 16).unwrap();
        let init = [Vector3::x(), Vector3::y(), Vector3::z()];
        let out = synthesize_from_structure(&f, init, Vector3::zeros(), 0.5, 0.3, DEFAULT_OUTPUT_SAMPLES).unwrap();
        let n = out.to_surface("built").unwrap();
        let field = frenet_frame(&n).unwrap();
        for x in field.samples().iter().step_by(29) {
            assert!((x.k1 - 0.5).abs() < 1e-6, "{x:?}");
            assert!((x.k2 - 0.5).abs() < 1e-5, "{x:?}");
            assert!((x.tangent_angle() - 0.3).abs() < 1e-6);
        }
    }
}
