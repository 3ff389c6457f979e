//! Ruled surfaces `r(u, v) = f(u) + v q(u)` and their pointwise invariants.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;

use crate::curve::{arc_length_map, check_domain, uniform_grid, ArcLengthMap, Curve, CurveSpec, Normalized};
use crate::exec::Execution;
use crate::frame::frenet_frame;
use crate::jet::VecJet;
use crate::{Error, Result, EPS_K, EPS_SPEED, TOL_CONOID, TOL_DEV, TORSAL_TOL};

/// Tolerance on `|q| - 1` for directors that are not renormalized.
pub const UNIT_TOL: f64 = 1e-12;

/// A ruled surface with base curve `f` and unit director `q` on a common
/// parameter interval.
#[derive(Clone)]
pub struct RuledSurface {
    name: String,
    base: Arc<dyn Curve>,
    director: Arc<dyn Curve>,
    samples: usize,
    exec: Execution,
}

impl fmt::Debug for RuledSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuledSurface")
            .field("name", &self.name)
            .field("base", &self.base)
            .field("director", &self.director)
            .field("samples", &self.samples)
            .finish()
    }
}

impl RuledSurface {
    /// Builds a surface from analytic base and director curves.
    ///
    /// With `normalize_director` the director is divided by its norm
    /// pointwise (derivatives included); otherwise it must already be unit
    /// length within [`UNIT_TOL`] on the sampling grid.
    pub fn new(name: impl Into<String>, base: CurveSpec, director: CurveSpec, normalize_director: bool) -> Result<Self> {
        if base.domain() != director.domain() {
            return Err(Error::InvalidCurve(format!(
                "base domain {:?} differs from director domain {:?}",
                base.domain(),
                director.domain()
            )));
        }
        let director: Arc<dyn Curve> = if normalize_director {
            Arc::new(Normalized::new(Arc::new(director)))
        } else {
            Arc::new(director)
        };
        Self::from_curves(name, Arc::new(base), director)
    }

    /// Builds a surface from arbitrary curves; the director must be unit.
    pub fn from_curves(name: impl Into<String>, base: Arc<dyn Curve>, director: Arc<dyn Curve>) -> Result<Self> {
        if base.domain() != director.domain() {
            return Err(Error::InvalidCurve("base and director domains differ".into()));
        }
        let surface = RuledSurface {
            name: name.into(),
            samples: base.sample_count(),
            base,
            director,
            exec: Execution::default(),
        };
        for u in surface.grid() {
            let norm = surface.director.point(u)?.norm();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitDirector { u, norm });
            }
            surface.base.point(u)?;
        }
        Ok(surface)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.base.domain()
    }

    pub fn sample_count(&self) -> usize {
        self.samples
    }

    pub fn with_sample_count(mut self, samples: usize) -> Result<Self> {
        if samples < crate::curve::MIN_SAMPLES {
            return Err(Error::InvalidCurve(format!("sample count {samples} is too small")));
        }
        self.samples = samples;
        Ok(self)
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Uniform parameter grid with [`RuledSurface::sample_count`] nodes.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.domain(), self.samples)
    }

    pub fn base(&self) -> &Arc<dyn Curve> {
        &self.base
    }

    pub fn director(&self) -> &Arc<dyn Curve> {
        &self.director
    }

    fn check(&self, u: f64) -> Result<f64> {
        check_domain(u, self.domain())
    }

    /// `(f', q, q')` at `u`.
    fn first_order(&self, u: f64) -> Result<(Vector3<f64>, Vector3<f64>, Vector3<f64>)> {
        let f = self.base.jet(u, 1)?;
        let q = self.director.jet(u, 1)?;
        Ok((f.at(1), q.value(), q.at(1)))
    }

    /// `det(f', q, q')` at `u`.
    pub fn torsality(&self, u: f64) -> Result<f64> {
        let (fd, q, qd) = self.first_order(self.check(u)?)?;
        Ok(fd.dot(&q.cross(&qd)))
    }

    /// The striction curve of this surface as a curve in its own right.
    pub fn striction_curve(&self) -> StrictionCurve {
        StrictionCurve {
            surface: self.clone(),
        }
    }

    /// Largest `|q'|` over the sampling grid.
    pub fn max_director_speed(&self) -> Result<f64> {
        let speeds = self
            .exec
            .try_map(self.samples, |i| Ok::<_, Error>(self.director.derivative(self.node(i), 1)?.norm()))?;
        Ok(speeds.into_iter().fold(0.0, f64::max))
    }

    pub fn is_cylindrical(&self) -> Result<bool> {
        Ok(self.max_director_speed()? <= EPS_SPEED)
    }

    fn node(&self, i: usize) -> f64 {
        let (a, b) = self.domain();
        if i + 1 == self.samples {
            b
        } else {
            a + (b - a) * i as f64 / (self.samples - 1) as f64
        }
    }
}

/// `f(u) + v q(u)`.
pub fn evaluate_surface(n: &RuledSurface, u: f64, v: f64) -> Result<Vector3<f64>> {
    let u = n.check(u)?;
    Ok(n.base.point(u)? + n.director.point(u)? * v)
}

/// Unit surface normal `((f' + v q') × q) / |(f' + v q') × q|`.
pub fn unit_normal(n: &RuledSurface, u: f64, v: f64) -> Result<Vector3<f64>> {
    let (fd, q, qd) = n.first_order(n.check(u)?)?;
    let m = (fd + qd * v).cross(&q);
    let len = m.norm();
    if !(len >= EPS_SPEED) {
        return Err(Error::SingularPoint { u, v });
    }
    Ok(m / len)
}

/// Central tangent `(q × q') / |q'|`, the limit of the unit normal along the
/// ruling as `v → -∞` (and its negative as `v → +∞`).
pub fn asymptotic_normal(n: &RuledSurface, u: f64) -> Result<Vector3<f64>> {
    let q = n.director.jet(n.check(u)?, 1)?;
    let qd = q.at(1);
    let speed = qd.norm();
    if !(speed >= EPS_SPEED) {
        return Err(Error::Cylindrical { u });
    }
    Ok(q.value().cross(&qd) / speed)
}

/// Distribution parameter `det(f', q, q') / <q', q'>`.
pub fn distribution_parameter(n: &RuledSurface, u: f64) -> Result<f64> {
    let (fd, q, qd) = n.first_order(n.check(u)?)?;
    let qq = qd.norm_squared();
    if !(qq.sqrt() >= EPS_SPEED) {
        return Err(Error::Cylindrical { u });
    }
    Ok(fd.dot(&q.cross(&qd)) / qq)
}

/// Strictional distance `v0 = -<q', f'> / <q', q'>`.
pub fn strictional_distance(n: &RuledSurface, u: f64) -> Result<f64> {
    let (fd, _, qd) = n.first_order(n.check(u)?)?;
    let qq = qd.norm_squared();
    if !(qq.sqrt() >= EPS_SPEED) {
        return Err(Error::Cylindrical { u });
    }
    Ok(-qd.dot(&fd) / qq)
}

/// The striction curve `c(u) = f(u) + v0(u) q(u)`; its derivatives are
/// propagated exactly from those of `f` and `q`.
#[derive(Debug, Clone)]
pub struct StrictionCurve {
    surface: RuledSurface,
}

impl StrictionCurve {
    pub fn surface(&self) -> &RuledSurface {
        &self.surface
    }
}

impl Curve for StrictionCurve {
    fn domain(&self) -> (f64, f64) {
        self.surface.domain()
    }

    fn sample_count(&self) -> usize {
        self.surface.samples
    }

    fn jet(&self, u: f64, order: usize) -> Result<VecJet> {
        let f = self.surface.base.jet(u, order + 1)?;
        let q = self.surface.director.jet(u, order + 1)?;
        let qd = q.derivative();
        let den = qd.dot(&qd);
        if !(den.value().sqrt() >= EPS_SPEED) {
            return Err(Error::Cylindrical { u });
        }
        let v0 = -qd.dot(&f.derivative()).div(&den);
        let c = f + q.scale(&v0);
        if c.order() < order {
            return Err(Error::InvalidCurve(format!(
                "striction derivative of order {order} is not available"
            )));
        }
        Ok(c.truncate(order))
    }
}

/// One sample of the striction curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictionSample {
    pub u: f64,
    /// `c(u) = f(u) + v0 q(u)`.
    pub point: Vector3<f64>,
    pub v0: f64,
    /// Distribution parameter at `u`.
    pub d: f64,
}

/// Striction samples on the surface grid together with the arc-length map
/// of the striction curve.
#[derive(Debug, Clone)]
pub struct Striction {
    pub samples: Vec<StrictionSample>,
    pub curve: StrictionCurve,
    pub arc_length: ArcLengthMap,
}

/// Samples the striction curve and builds its arc-length map.
///
/// Fails on cylindrical surfaces (no central points) and on singular
/// striction curves, naming the offending parameter.
pub fn striction(n: &RuledSurface) -> Result<Striction> {
    if n.is_cylindrical()? {
        return Err(Error::Cylindrical { u: n.domain().0 });
    }
    let grid = n.grid();
    let samples = n.exec.try_map(grid.len(), |i| {
        let u = grid[i];
        let (fd, q, qd) = n.first_order(u)?;
        let qq = qd.norm_squared();
        if !(qq.sqrt() >= EPS_SPEED) {
            return Err(Error::Cylindrical { u });
        }
        let v0 = -qd.dot(&fd) / qq;
        let point = n.base.point(u)? + q * v0;
        Ok(StrictionSample {
            u,
            point,
            v0,
            d: fd.dot(&q.cross(&qd)) / qq,
        })
    })?;
    let curve = n.striction_curve();
    let arc_length = arc_length_map(&curve, n.exec)?;
    Ok(Striction {
        samples,
        curve,
        arc_length,
    })
}

/// Parameters of torsal rulings (zeros of the distribution parameter).
///
/// Sign changes of `det(f', q, q')` between grid nodes are refined by
/// bisection until `|d| <= 1e-10`; grid nodes where `|d|` is already below
/// that threshold are reported as they are, which covers tangential zeros
/// and surfaces that are torsal everywhere.
pub fn torsal_rulings(n: &RuledSurface) -> Result<Vec<f64>> {
    if n.is_cylindrical()? {
        return Err(Error::Cylindrical { u: n.domain().0 });
    }
    let grid = n.grid();
    let d = n.exec.try_map(grid.len(), |i| distribution_parameter(n, grid[i]))?;
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if d[i].abs() <= TORSAL_TOL {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && d[i + 1].abs() > TORSAL_TOL && d[i].signum() != d[i + 1].signum() {
            roots.push(bisect_torsal(n, grid[i], grid[i + 1], d[i])?);
        }
    }
    Ok(roots)
}

fn bisect_torsal(n: &RuledSurface, mut lo: f64, mut hi: f64, d_lo: f64) -> Result<f64> {
    let sign_lo = d_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let dm = distribution_parameter(n, mid)?;
        if dm.abs() <= TORSAL_TOL || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if dm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Cylindrical,
    Developable,
    Skew,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceKind::Cylindrical => "cylindrical",
            SurfaceKind::Developable => "developable",
            SurfaceKind::Skew => "skew",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceClass {
    pub kind: SurfaceKind,
    /// `k1 > 0` and `k2 ≡ 0`; only set when the frame is computable.
    pub conoid: bool,
    pub max_abs_d: f64,
    pub max_director_speed: f64,
}

/// Thresholds used by [`classify_with`].
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub tol_dev: f64,
    pub tol_conoid: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol_dev: TOL_DEV,
            tol_conoid: TOL_CONOID,
        }
    }
}

pub fn classify(n: &RuledSurface) -> Result<SurfaceClass> {
    classify_with(n, ClassifyOptions::default())
}

/// Cylindrical when `max |q'| <= EPS_SPEED`, else developable when
/// `max |d| <= tol_dev`, else skew.
pub fn classify_with(n: &RuledSurface, opts: ClassifyOptions) -> Result<SurfaceClass> {
    let max_speed = n.max_director_speed()?;
    if max_speed <= EPS_SPEED {
        return Ok(SurfaceClass {
            kind: SurfaceKind::Cylindrical,
            conoid: false,
            max_abs_d: 0.0,
            max_director_speed: max_speed,
        });
    }
    let grid = n.grid();
    let d = n.exec.try_map(grid.len(), |i| {
        let (fd, q, qd) = n.first_order(grid[i])?;
        let qq = qd.norm_squared();
        // isolated stationary rulings carry no distribution parameter
        Ok::<_, Error>(if qq.sqrt() >= EPS_SPEED {
            fd.dot(&q.cross(&qd)).abs() / qq
        } else {
            0.0
        })
    })?;
    let max_abs_d = d.into_iter().fold(0.0, f64::max);
    let kind = if max_abs_d <= opts.tol_dev {
        SurfaceKind::Developable
    } else {
        SurfaceKind::Skew
    };
    let conoid = match frenet_frame(n) {
        Ok(frame) => frame
            .samples()
            .iter()
            .all(|s| s.k1 >= EPS_K && s.k2.abs() <= opts.tol_conoid),
        Err(_) => false,
    };
    Ok(SurfaceClass {
        kind,
        conoid,
        max_abs_d,
        max_director_speed: max_speed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use std::f64::consts::PI;

    fn close(a: Vector3<f64>, b: Vector3<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn helicoid_evaluation_and_normal() {
        let h = presets::helicoid();
        for &u in &[0.0, 0.7, 2.0, 5.5] {
            for &v in &[-1.5, 0.0, 2.0] {
                let p = evaluate_surface(&h, u, v).unwrap();
                assert!(close(p, Vector3::new(v * u.cos(), v * u.sin(), u), 1e-15));
            }
            let m = unit_normal(&h, u, 0.0).unwrap();
            assert!(close(m, Vector3::new(-u.sin(), u.cos(), 0.0), 1e-15));
            let a = asymptotic_normal(&h, u).unwrap();
            assert!(close(a, Vector3::new(0.0, 0.0, 1.0), 1e-15));
            assert!((distribution_parameter(&h, u).unwrap() - 1.0).abs() < 1e-15);
            assert!(strictional_distance(&h, u).unwrap().abs() < 1e-15);
        }
        assert!(matches!(evaluate_surface(&h, -1.0, 0.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn normal_limits_and_tangency() {
        for n in [presets::helicoid(), presets::hyperboloid(), presets::similar_helicoid()] {
            for u in n.grid().into_iter().step_by(37) {
                let a = asymptotic_normal(&n, u).unwrap();
                let up = unit_normal(&n, u, 1e6).unwrap();
                let down = unit_normal(&n, u, -1e6).unwrap();
                assert!((up + a).norm() < 1e-5 && (down - a).norm() < 1e-5);
                let q = n.director().point(u).unwrap();
                for v in [-3.0, 0.5, 4.0] {
                    assert!(unit_normal(&n, u, v).unwrap().dot(&q).abs() < 1e-14);
                }
                let v0 = strictional_distance(&n, u).unwrap();
                assert!(unit_normal(&n, u, v0).unwrap().dot(&a).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn striction_of_helicoids() {
        let s = striction(&presets::helicoid()).unwrap();
        for smp in &s.samples {
            assert!(smp.v0.abs() < 1e-15);
            assert!(close(smp.point, Vector3::new(0.0, 0.0, smp.u), 1e-15));
            assert!((smp.d - 1.0).abs() < 1e-14);
        }
        assert!((s.arc_length.total_length() - 2.0 * PI).abs() < 1e-12);

        let s = striction(&presets::similar_helicoid()).unwrap();
        let r = 2f64.sqrt();
        for smp in &s.samples {
            let t = smp.u / r;
            assert!(smp.v0.abs() < 1e-14);
            assert!(close(smp.point, Vector3::new(-t.sin(), t.cos(), t), 1e-14));
            assert!((smp.d - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn striction_samples_are_central() {
        let n = presets::by_name("offset-hyperboloid").unwrap();
        let s = striction(&n).unwrap();
        for smp in &s.samples {
            let q = n.director().jet(smp.u, 1).unwrap();
            let c_dot = s.curve.derivative(smp.u, 1).unwrap();
            assert!(q.at(1).dot(&c_dot).abs() < 1e-12);
            let f = n.base().point(smp.u).unwrap();
            assert_eq!(smp.point, f + q.value() * smp.v0);
        }
    }

    #[test]
    fn cylinder_errors() {
        let c = presets::cylinder();
        assert!(matches!(striction(&c), Err(Error::Cylindrical { .. })));
        assert!(matches!(asymptotic_normal(&c, 0.1), Err(Error::Cylindrical { .. })));
        assert!(matches!(distribution_parameter(&c, 0.1), Err(Error::Cylindrical { .. })));
        assert!(torsal_rulings(&c).is_err());
        assert_eq!(classify(&c).unwrap().kind, SurfaceKind::Cylindrical);
    }

    #[test]
    fn classification() {
        let h = classify(&presets::helicoid()).unwrap();
        assert_eq!(h.kind, SurfaceKind::Skew);
        assert!(h.conoid);
        let t = classify(&presets::tangent_developable()).unwrap();
        assert_eq!(t.kind, SurfaceKind::Developable);
        assert!(!t.conoid);
        let y = classify(&presets::hyperboloid()).unwrap();
        assert_eq!(y.kind, SurfaceKind::Skew);
        assert!(!y.conoid);
    }

    #[test]
    fn torsal_ruling_search() {
        assert!(torsal_rulings(&presets::helicoid()).unwrap().is_empty());
        let td = presets::tangent_developable();
        assert_eq!(torsal_rulings(&td).unwrap(), td.grid());
    }

    #[test]
    fn rejects_non_unit_director() {
        let base = CurveSpec::parse("0", "0", "u", 0.0, 1.0, 16).unwrap();
        let dir = CurveSpec::parse("2*cos(u)", "2*sin(u)", "0", 0.0, 1.0, 16).unwrap();
        assert!(matches!(
            RuledSurface::new("x", base.clone(), dir.clone(), false),
            Err(Error::NonUnitDirector { .. })
        ));
        let n = RuledSurface::new("x", base, dir, true).unwrap();
        assert!((n.director().point(0.3).unwrap().norm() - 1.0).abs() < 1e-15);
    }
}
