//! The moving frame `{q, h, a}` of a ruled surface along its striction
//! curve, the curvatures `k1`, `k2` and the total-curvature parameter `phi`.
//!
//! All derivatives are taken in the surface parameter `u` (exactly, through
//! jets) and converted to striction arc length `s` by dividing by `ds/du`:
//!
//! ```text
//! k1 = |q'| / |c'|      h = q' / |q'|      a = q × h
//! k2 = det(q, q', q'') / (|q'|² |c'|)
//! ```
//!
//! `k2` keeps its sign so that `dq/ds = k1 h`, `dh/ds = -k1 q + k2 a`,
//! `da/ds = -k2 h` hold as written.

use nalgebra::Vector3;

use crate::curve::{arc_length_map, uniform_grid, ArcLengthMap, Curve, QUADRATURE_REFINE};
use crate::quadrature::CumulativeMap;
use crate::spline::CubicSpline;
use crate::surface::{RuledSurface, StrictionCurve};
use crate::{Error, Result, DEFAULT_RESOLUTION, EPS_K, EPS_SPEED};

/// Frame data at one point of the striction curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample {
    /// Arc length of the striction curve from the domain start.
    pub s: f64,
    pub u: f64,
    pub c: Vector3<f64>,
    /// Unit tangent of the striction curve.
    pub t: Vector3<f64>,
    pub q: Vector3<f64>,
    pub h: Vector3<f64>,
    pub a: Vector3<f64>,
    pub k1: f64,
    pub k2: f64,
    /// `∫ k1 ds`, the arc length of the spherical image of the rulings.
    pub phi: f64,
    /// `∫ k2 ds`.
    pub psi3: f64,
}

impl FrameSample {
    /// Largest deviation of `{q, h, a}` from a right-handed orthonormal
    /// triple.
    pub fn orthonormality_residual(&self) -> f64 {
        [
            self.q.dot(&self.h).abs(),
            self.q.dot(&self.a).abs(),
            self.h.dot(&self.a).abs(),
            (self.q.norm() - 1.0).abs(),
            (self.h.norm() - 1.0).abs(),
            (self.a.norm() - 1.0).abs(),
            (self.a - self.q.cross(&self.h)).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `k2 / k1`, when `k1` is above [`EPS_K`].
    pub fn structure(&self) -> Option<f64> {
        (self.k1 >= EPS_K).then(|| self.k2 / self.k1)
    }

    /// Angle of the striction tangent in the `(q, a)` plane.
    pub fn tangent_angle(&self) -> f64 {
        self.t.dot(&self.a).atan2(self.t.dot(&self.q))
    }
}

/// Frame quantities at `u`; `h`, `a`, `k2` are `None` where `k1 < EPS_K`.
struct Local {
    c: Vector3<f64>,
    t: Vector3<f64>,
    q: Vector3<f64>,
    k1: f64,
    rest: Option<(Vector3<f64>, Vector3<f64>, f64)>,
}

fn local(surface: &RuledSurface, striction: &StrictionCurve, u: f64) -> Result<Local> {
    let c = striction.jet(u, 1)?;
    let speed = c.at(1).norm();
    if !(speed >= EPS_SPEED) {
        return Err(Error::Irregular { u, speed });
    }
    let q = surface.director().jet(u, 2)?;
    let (q0, q1, q2) = (q.value(), q.at(1), q.at(2));
    let w = q1.norm();
    let k1 = w / speed;
    let rest = (k1 >= EPS_K).then(|| {
        let h = q1 / w;
        let k2 = q0.cross(&q1).dot(&q2) / (w * w * speed);
        (h, q0.cross(&h), k2)
    });
    Ok(Local {
        c: c.value(),
        t: c.at(1) / speed,
        q: q0,
        k1,
        rest,
    })
}

/// Frame samples on a uniform grid of striction arc length, with exact
/// re-evaluation at any `u`, `s` or `phi`.
#[derive(Debug, Clone)]
pub struct FrameField {
    surface: RuledSurface,
    striction: StrictionCurve,
    arc: ArcLengthMap,
    phi: CumulativeMap,
    psi: CumulativeMap,
    samples: Vec<FrameSample>,
}

impl FrameField {
    pub fn surface(&self) -> &RuledSurface {
        &self.surface
    }

    pub fn striction_curve(&self) -> &StrictionCurve {
        &self.striction
    }

    pub fn arc_length(&self) -> &ArcLengthMap {
        &self.arc
    }

    pub fn samples(&self) -> &[FrameSample] {
        &self.samples
    }

    /// Length `S` of the striction curve.
    pub fn total_length(&self) -> f64 {
        self.arc.total_length()
    }

    /// Total curvature `Φ = φ(S)`.
    pub fn total_curvature(&self) -> f64 {
        self.phi.total()
    }

    pub fn total_psi(&self) -> f64 {
        self.psi.total()
    }

    pub fn s_at_u(&self, u: f64) -> f64 {
        self.arc.s_at(u)
    }

    pub fn u_at_s(&self, s: f64) -> f64 {
        self.arc.u_at(s)
    }

    pub fn phi_at_u(&self, u: f64) -> f64 {
        self.phi.value_at(u)
    }

    pub fn u_at_phi(&self, phi: f64) -> f64 {
        self.phi.param_at(phi)
    }

    pub fn phi_at_s(&self, s: f64) -> f64 {
        self.phi.value_at(self.arc.u_at(s))
    }

    pub fn s_at_phi(&self, phi: f64) -> f64 {
        self.arc.s_at(self.phi.param_at(phi))
    }

    /// `dφ/ds` at `u` from the tabulated maps rather than from `k1`.
    pub fn map_k1(&self, u: f64) -> f64 {
        self.phi.rate_at(u) / self.arc.speed_at(u)
    }

    fn sample_with(&self, u: f64, s: f64, phi: f64) -> Result<FrameSample> {
        let l = local(&self.surface, &self.striction, u)?;
        let Some((h, a, k2)) = l.rest else {
            return Err(Error::CurvatureGap {
                gaps: vec![(s, s)],
                partial: Box::default(),
            });
        };
        Ok(FrameSample {
            s,
            u,
            c: l.c,
            t: l.t,
            q: l.q,
            h,
            a,
            k1: l.k1,
            k2,
            phi,
            psi3: self.psi.value_at(u),
        })
    }

    pub fn at_u(&self, u: f64) -> Result<FrameSample> {
        self.sample_with(u, self.arc.s_at(u), self.phi.value_at(u))
    }

    pub fn at_s(&self, s: f64) -> Result<FrameSample> {
        let u = self.arc.u_at(s);
        self.sample_with(u, s, self.phi.value_at(u))
    }

    pub fn at_phi(&self, phi: f64) -> Result<FrameSample> {
        let u = self.phi.param_at(phi);
        self.sample_with(u, self.arc.s_at(u), phi)
    }
}

/// Computes the frame field on the surface's own sample count.
pub fn frenet_frame(n: &RuledSurface) -> Result<FrameField> {
    frenet_frame_with(n, n.sample_count())
}

/// Computes the frame field with `samples` nodes, uniform in striction arc
/// length.
///
/// Where `k1 < EPS_K` the central normal is undefined; the result is then
/// [`Error::CurvatureGap`] carrying the defined samples and the `s`
/// intervals of the gaps.
pub fn frenet_frame_with(n: &RuledSurface, samples: usize) -> Result<FrameField> {
    if samples < 2 {
        return Err(Error::InvalidArgument("a frame needs at least two samples".into()));
    }
    if n.is_cylindrical()? {
        return Err(Error::Cylindrical { u: n.domain().0 });
    }
    let exec = n.execution();
    let striction = n.striction_curve();
    let arc = arc_length_map(&striction, exec)?;
    let (u0, u1) = n.domain();
    let intervals = QUADRATURE_REFINE * (n.sample_count().max(2) - 1);
    let director = n.director();
    let phi = CumulativeMap::build(exec, u0, u1, intervals, |u| Ok::<_, Error>(director.derivative(u, 1)?.norm()))?;
    let psi = CumulativeMap::build(exec, u0, u1, intervals, |u| {
        let q = director.jet(u, 2)?;
        let w2 = q.at(1).norm_squared();
        Ok::<_, Error>(if w2.sqrt() >= EPS_SPEED {
            q.value().cross(&q.at(1)).dot(&q.at(2)) / w2
        } else {
            0.0
        })
    })?;
    let s_grid = uniform_grid((0.0, arc.total_length()), samples);
    let locals = exec.try_map(samples, |i| {
        let u = if i == 0 {
            u0
        } else if i + 1 == samples {
            u1
        } else {
            arc.u_at(s_grid[i])
        };
        local(n, &striction, u).map(|l| (u, l))
    })?;
    let mut partial = Vec::with_capacity(samples);
    let mut gaps: Vec<(f64, f64)> = Vec::new();
    let mut in_gap = false;
    for (i, (u, l)) in locals.into_iter().enumerate() {
        let s = s_grid[i];
        match l.rest {
            Some((h, a, k2)) => {
                in_gap = false;
                partial.push(Some(FrameSample {
                    s,
                    u,
                    c: l.c,
                    t: l.t,
                    q: l.q,
                    h,
                    a,
                    k1: l.k1,
                    k2,
                    phi: phi.value_at(u),
                    psi3: psi.value_at(u),
                }));
            }
            None => {
                match gaps.last_mut() {
                    Some(g) if in_gap => g.1 = s,
                    _ => gaps.push((s, s)),
                }
                in_gap = true;
                partial.push(None);
            }
        }
    }
    if !gaps.is_empty() {
        return Err(Error::CurvatureGap {
            gaps,
            partial: Box::new(partial),
        });
    }
    Ok(FrameField {
        surface: n.clone(),
        striction,
        arc,
        phi,
        psi,
        samples: partial.into_iter().flatten().collect(),
    })
}

/// The map `s ↦ φ(s) = ∫ k1 ds` and its inverse.
#[derive(Debug, Clone)]
pub struct TotalCurvature {
    arc: ArcLengthMap,
    phi: CumulativeMap,
}

impl TotalCurvature {
    pub fn total(&self) -> f64 {
        self.phi.total()
    }

    pub fn phi_at(&self, s: f64) -> f64 {
        self.phi.value_at(self.arc.u_at(s))
    }

    pub fn s_at(&self, phi: f64) -> f64 {
        self.arc.s_at(self.phi.param_at(phi))
    }
}

pub fn total_curvature(f: &FrameField) -> Result<TotalCurvature> {
    if !(f.total_curvature() > 0.0) {
        return Err(Error::Cylindrical { u: f.surface.domain().0 });
    }
    Ok(TotalCurvature {
        arc: f.arc.clone(),
        phi: f.phi.clone(),
    })
}

/// `f(φ) = k2 / k1` sampled on a uniform grid of `[0, Φ]`, interpolated by
/// a cubic spline in between.
#[derive(Debug, Clone)]
pub struct StructureFunction {
    spline: CubicSpline,
    values: Vec<f64>,
}

impl StructureFunction {
    /// Interpolates `values` given at strictly increasing `phi` nodes
    /// (at least four).
    pub fn new(phi: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let spline = CubicSpline::new(phi, values.clone())?;
        Ok(StructureFunction { spline, values })
    }

    /// Samples `f` on `n` uniform nodes of `[0, total]`.
    pub fn from_fn(total: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let phi = uniform_grid((0.0, total), n);
        let values = phi.iter().map(|&p| f(p)).collect();
        Self::new(phi, values)
    }

    pub fn constant(value: f64, total: f64, n: usize) -> Result<Self> {
        Self::from_fn(total, n, |_| value)
    }

    pub fn total(&self) -> f64 {
        self.spline.domain().1
    }

    pub fn phi(&self) -> &[f64] {
        self.spline.knots()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Interpolated value; `phi` is clamped to the sampled range.
    pub fn eval(&self, phi: f64) -> f64 {
        let (a, b) = self.spline.domain();
        self.spline.eval(phi.clamp(a, b))[0]
    }

    pub fn derivative(&self, phi: f64) -> f64 {
        let (a, b) = self.spline.domain();
        self.spline.eval(phi.clamp(a, b))[1]
    }

    /// Largest `|f|` over the nodes.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Smallest `|f|` over the nodes.
    pub fn min_abs(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }
}

pub fn structure_function(f: &FrameField) -> Result<StructureFunction> {
    structure_function_with(f, DEFAULT_RESOLUTION)
}

/// Samples `k2 / k1` at `resolution` uniform nodes of `[0, Φ]`, re-evaluating
/// the frame exactly at each node.
pub fn structure_function_with(f: &FrameField, resolution: usize) -> Result<StructureFunction> {
    if resolution < 4 {
        return Err(Error::InvalidArgument("structure function needs at least 4 nodes".into()));
    }
    let total = f.total_curvature();
    if !(total > 0.0) {
        return Err(Error::Cylindrical { u: f.surface.domain().0 });
    }
    let grid = uniform_grid((0.0, total), resolution);
    let exec = f.surface.execution();
    let values = exec.map(resolution, |j| f.at_phi(grid[j]).map(|s| s.k2 / s.k1));
    let mut out = Vec::with_capacity(resolution);
    for (j, v) in values.into_iter().enumerate() {
        match v {
            Ok(v) => out.push(v),
            Err(Error::CurvatureGap { .. }) => {
                let lo = grid[j.saturating_sub(1)];
                let hi = grid[(j + 1).min(resolution - 1)];
                return Err(Error::Inapplicable(format!(
                    "k1 below {EPS_K:e} for phi in [{lo}, {hi}]"
                )));
            }
            Err(e) => return Err(e),
        }
    }
    StructureFunction::new(grid, out)
}

/// Tangent angle `θ(s)` of the striction curve in the `(q, a)` plane.
#[derive(Debug, Clone)]
pub struct TangentAngle {
    pub s: Vec<f64>,
    pub theta: Vec<f64>,
    /// `max |<T, h>|`, zero for an exact striction curve.
    pub striction_residual: f64,
}

/// Largest tolerated `|<T, h>|` in [`tangent_angle`].
pub const STRICTION_TOL: f64 = 1e-6;

pub fn tangent_angle(f: &FrameField) -> Result<TangentAngle> {
    let mut residual: f64 = 0.0;
    for smp in &f.samples {
        let r = smp.t.dot(&smp.h).abs();
        if r > STRICTION_TOL {
            return Err(Error::InconsistentStriction { s: smp.s, residual: r });
        }
        residual = residual.max(r);
    }
    Ok(TangentAngle {
        s: f.samples.iter().map(|x| x.s).collect(),
        theta: f.samples.iter().map(FrameSample::tangent_angle).collect(),
        striction_residual: residual,
    })
}

/// Maximal Frenet-equation residuals along `s`, relative to `max(k1 + |k2|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetResiduals {
    pub q: f64,
    pub h: f64,
    pub a: f64,
}

impl FrenetResiduals {
    pub fn max(&self) -> f64 {
        self.q.max(self.h).max(self.a)
    }
}

/// Five-point central derivative on a uniform grid.
pub(crate) fn central5(v: &[Vector3<f64>], i: usize, step: f64) -> Vector3<f64> {
    (v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]) / (12.0 * step)
}

/// Compares five-point finite differences of the sampled frame with the
/// right-hand sides `k1 h`, `-k1 q + k2 a`, `-k2 h` at interior samples.
pub fn frenet_residuals(f: &FrameField) -> Result<FrenetResiduals> {
    let smp = &f.samples;
    let n = smp.len();
    if n < 5 {
        return Err(Error::InvalidArgument("need at least five samples".into()));
    }
    let step = f.total_length() / (n - 1) as f64;
    let q: Vec<_> = smp.iter().map(|x| x.q).collect();
    let h: Vec<_> = smp.iter().map(|x| x.h).collect();
    let a: Vec<_> = smp.iter().map(|x| x.a).collect();
    let scale = smp.iter().map(|x| x.k1 + x.k2.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut r = FrenetResiduals { q: 0.0, h: 0.0, a: 0.0 };
    for i in 2..n - 2 {
        let x = &smp[i];
        r.q = r.q.max((central5(&q, i, step) - x.h * x.k1).norm() / scale);
        r.h = r.h.max((central5(&h, i, step) + x.q * x.k1 - x.a * x.k2).norm() / scale);
        r.a = r.a.max((central5(&a, i, step) + x.h * x.k2).norm() / scale);
    }
    Ok(r)
}

/// `max |dq/dφ - h|` by five-point differences on `resolution` uniform
/// `φ` nodes.
pub fn phi_rate_residual(f: &FrameField, resolution: usize) -> Result<f64> {
    if resolution < 5 {
        return Err(Error::InvalidArgument("need at least five nodes".into()));
    }
    let grid = uniform_grid((0.0, f.total_curvature()), resolution);
    let samples = f.surface.execution().try_map(resolution, |j| f.at_phi(grid[j]))?;
    let q: Vec<_> = samples.iter().map(|x| x.q).collect();
    let step = grid[1] - grid[0];
    Ok((2..resolution - 2)
        .map(|i| (central5(&q, i, step) - samples[i].h).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::quadrature::adaptive_simpson;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    #[test]
    fn helicoid_frame() {
        let f = frenet_frame(&presets::helicoid()).unwrap();
        assert_eq!(f.samples().len(), 512);
        for x in f.samples() {
            let s = x.s;
            assert!((x.q - Vector3::new(s.cos(), s.sin(), 0.0)).norm() < 1e-12);
            assert!((x.h - Vector3::new(-s.sin(), s.cos(), 0.0)).norm() < 1e-12);
            assert!((x.a - Vector3::z()).norm() < 1e-15);
            assert!((x.k1 - 1.0).abs() < 1e-14 && x.k2.abs() < 1e-14);
            assert!((x.phi - s).abs() < 1e-12);
            assert!(x.orthonormality_residual() < 1e-14);
        }
    }

    #[test]
    fn similar_helicoid_frame() {
        let f = frenet_frame(&presets::similar_helicoid()).unwrap();
        for x in f.samples() {
            let t = x.s / SQRT_2;
            assert!((x.q - Vector3::new(t.cos(), t.sin(), 0.0)).norm() < 1e-12);
            assert!((x.h - Vector3::new(-t.sin(), t.cos(), 0.0)).norm() < 1e-12);
            assert!((x.k1 - FRAC_1_SQRT_2).abs() < 1e-14 && x.k2.abs() < 1e-14);
            assert!((x.phi - t).abs() < 1e-12);
            assert!((x.tangent_angle() - 0.75 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperboloid_frame() {
        let f = frenet_frame(&presets::hyperboloid()).unwrap();
        for x in f.samples() {
            // striction curve is the unit circle, traversed at unit speed
            let u = x.s;
            assert!((x.c - Vector3::new(u.cos(), u.sin(), 0.0)).norm() < 1e-12);
            let q = Vector3::new(-u.sin(), u.cos(), 1.0) * FRAC_1_SQRT_2;
            let h = Vector3::new(-u.cos(), -u.sin(), 0.0);
            assert!((x.q - q).norm() < 1e-12 && (x.h - h).norm() < 1e-12);
            assert!((x.a - q.cross(&h)).norm() < 1e-12);
            assert!((x.k1 - FRAC_1_SQRT_2).abs() < 1e-14);
            assert!((x.k2 - FRAC_1_SQRT_2).abs() < 1e-14);
            assert!((x.structure().unwrap() - 1.0).abs() < 1e-13);
            assert!((x.tangent_angle() + 0.25 * PI).abs() < 1e-12);
        }
        let sf = structure_function(&f).unwrap();
        assert!(sf.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn total_curvature_matches_one_shot_quadrature() {
        for n in [presets::hyperboloid(), presets::by_name("conoid").unwrap()] {
            let f = frenet_frame(&n).unwrap();
            let (a, b) = n.domain();
            let d = n.director();
            let mut rate = |u: f64| d.derivative(u, 1).map(|v| v.norm());
            let once = adaptive_simpson(&mut rate, a, b, 1e-13).unwrap();
            assert!((f.total_curvature() - once).abs() < 1e-10 * once);
            let tc = total_curvature(&f).unwrap();
            for x in f.samples().iter().step_by(17) {
                assert!((tc.phi_at(x.s) - x.phi).abs() < 1e-10);
                assert!((tc.s_at(x.phi) - x.s).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn conoid_curvature_and_length() {
        let f = frenet_frame(&presets::by_name("conoid").unwrap()).unwrap();
        assert!((f.total_curvature() - 8.0).abs() < 1e-10);
        for x in f.samples() {
            assert!((x.k1 - 2.0 * x.u).abs() < 1e-12, "{x:?}");
            assert_eq!(x.k2, 0.0);
        }
    }

    #[test]
    fn tangent_developable_angle() {
        let f = frenet_frame(&presets::tangent_developable()).unwrap();
        let th = tangent_angle(&f).unwrap();
        assert!(th.theta.iter().all(|t| t.abs() < 1e-12));
        for x in f.samples() {
            assert!((x.k1 - 0.5).abs() < 1e-13 && (x.k2 - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn frenet_equations_hold() {
        for n in [presets::helicoid(), presets::hyperboloid(), presets::by_name("offset-hyperboloid").unwrap()] {
            let f = frenet_frame(&n).unwrap();
            let r = frenet_residuals(&f).unwrap();
            assert!(r.max() < 1e-5, "{}: {r:?}", n.name());
            assert!(phi_rate_residual(&f, 512).unwrap() < 1e-5);
        }
    }

    #[test]
    fn at_phi_round_trip() {
        let f = frenet_frame(&presets::by_name("offset-hyperboloid").unwrap()).unwrap();
        for x in f.samples().iter().step_by(31) {
            let y = f.at_phi(x.phi).unwrap();
            assert!((y.u - x.u).abs() < 1e-9 && (y.q - x.q).norm() < 1e-9);
            let z = f.at_s(x.s).unwrap();
            assert!((z.u - x.u).abs() < 1e-12);
        }
    }

    #[test]
    fn cylinder_has_no_frame() {
        assert!(matches!(frenet_frame(&presets::cylinder()), Err(Error::Cylindrical { .. })));
    }
}
