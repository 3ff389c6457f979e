//! Space curves: the [`Curve`] trait, analytic [`CurveSpec`]s and
//! arc-length maps.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;

use crate::exec::Execution;
use crate::expr::{differentiate, parse_expression, Expr};
use crate::jet::{VecJet, MAX_ORDER};
use crate::quadrature::CumulativeMap;
use crate::{Error, Result, EPS_SPEED};

/// A parametrized curve that can report derivatives at any parameter in its
/// domain.
pub trait Curve: Send + Sync + fmt::Debug {
    fn domain(&self) -> (f64, f64);

    /// Number of nodes in the sampling grid.
    fn sample_count(&self) -> usize;

    /// Derivatives `0..=order` at `u`.
    fn jet(&self, u: f64, order: usize) -> Result<VecJet>;

    /// Sampling grid. Uniform unless the curve has its own knots.
    fn grid(&self) -> Vec<f64> {
        uniform_grid(self.domain(), self.sample_count())
    }

    fn point(&self, u: f64) -> Result<Vector3<f64>> {
        Ok(self.jet(u, 0)?.value())
    }

    fn derivative(&self, u: f64, order: usize) -> Result<Vector3<f64>> {
        Ok(self.jet(u, order)?.at(order))
    }
}

pub(crate) fn uniform_grid((a, b): (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Accepts `u` within rounding of the domain and clamps it.
pub(crate) fn check_domain(u: f64, (min, max): (f64, f64)) -> Result<f64> {
    let slack = 1e-12 * (max - min).abs().max(1.0);
    if u.is_nan() || u < min - slack || u > max + slack {
        return Err(Error::OutOfDomain { u, min, max });
    }
    Ok(u.clamp(min, max))
}

/// Minimum number of samples for a curve.
pub const MIN_SAMPLES: usize = 16;

/// An analytic space curve `u ↦ (x(u), y(u), z(u))` on `[u_min, u_max]`.
#[derive(Clone)]
pub struct CurveSpec {
    /// `derivs[k]` holds the k-th derivative of each component.
    derivs: Arc<Vec<[Expr; 3]>>,
    u_min: f64,
    u_max: f64,
    sample_count: usize,
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.derivs[0];
        write!(
            f,
            "CurveSpec({x}, {y}, {z}; u in [{}, {}], {} samples)",
            self.u_min, self.u_max, self.sample_count
        )
    }
}

impl CurveSpec {
    pub fn new(components: [Expr; 3], u_min: f64, u_max: f64, sample_count: usize) -> Result<Self> {
        if !(u_min.is_finite() && u_max.is_finite() && u_min < u_max) {
            return Err(Error::InvalidCurve(format!(
                "domain [{u_min}, {u_max}] must be finite with u_min < u_max"
            )));
        }
        if sample_count < MIN_SAMPLES {
            return Err(Error::InvalidCurve(format!(
                "sample_count must be at least {MIN_SAMPLES}, got {sample_count}"
            )));
        }
        let mut derivs = vec![components];
        for k in 1..=MAX_ORDER {
            let prev = &derivs[k - 1];
            derivs.push([0, 1, 2].map(|i| differentiate(&prev[i], 1)));
        }
        let spec = CurveSpec {
            derivs: Arc::new(derivs),
            u_min,
            u_max,
            sample_count,
        };
        for u in spec.grid() {
            spec.jet(u, 0)?;
        }
        Ok(spec)
    }

    /// Parses the three component expressions.
    pub fn parse(x: &str, y: &str, z: &str, u_min: f64, u_max: f64, sample_count: usize) -> Result<Self> {
        let comps = [parse_expression(x)?, parse_expression(y)?, parse_expression(z)?];
        Self::new(comps, u_min, u_max, sample_count)
    }

    pub fn components(&self) -> &[Expr; 3] {
        &self.derivs[0]
    }

    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn with_sample_count(&self, sample_count: usize) -> Result<Self> {
        if sample_count < MIN_SAMPLES {
            return Err(Error::InvalidCurve(format!(
                "sample_count must be at least {MIN_SAMPLES}, got {sample_count}"
            )));
        }
        Ok(CurveSpec {
            sample_count,
            ..self.clone()
        })
    }

    fn eval_order(&self, u: f64, k: usize) -> Result<Vector3<f64>> {
        let extra;
        let comps = if k <= MAX_ORDER {
            &self.derivs[k]
        } else {
            extra = [0, 1, 2].map(|i| differentiate(&self.derivs[MAX_ORDER][i], k - MAX_ORDER));
            &extra
        };
        let mut v = Vector3::zeros();
        for i in 0..3 {
            v[i] = comps[i].eval(u).map_err(Error::eval(u))?;
        }
        Ok(v)
    }
}

impl Curve for CurveSpec {
    fn domain(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    fn sample_count(&self) -> usize {
        self.sample_count
    }

    fn jet(&self, u: f64, order: usize) -> Result<VecJet> {
        let u = check_domain(u, self.domain())?;
        let order = order.min(MAX_ORDER);
        let derivs = (0..=order)
            .map(|k| self.eval_order(u, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(VecJet::from_derivatives(&derivs))
    }
}

/// The `order`-th derivative vector of an analytic curve at `u`.
pub fn evaluate_curve(c: &CurveSpec, u: f64, order: usize) -> Result<Vector3<f64>> {
    let u = check_domain(u, c.domain())?;
    c.eval_order(u, order)
}

/// `c(u) / |c(u)|`, with derivatives of the normalization carried exactly.
#[derive(Debug, Clone)]
pub struct Normalized {
    inner: Arc<dyn Curve>,
}

impl Normalized {
    pub fn new(inner: Arc<dyn Curve>) -> Self {
        Normalized { inner }
    }
}

impl Curve for Normalized {
    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }

    fn sample_count(&self) -> usize {
        self.inner.sample_count()
    }

    fn jet(&self, u: f64, order: usize) -> Result<VecJet> {
        let raw = self.inner.jet(u, order)?;
        let norm = raw.value().norm();
        if !(norm > 0.0) {
            return Err(Error::NonUnitDirector { u, norm });
        }
        Ok(raw.normalized())
    }

    fn grid(&self) -> Vec<f64> {
        self.inner.grid()
    }
}

/// Refinement of the curve's sampling grid used for cumulative integrals.
pub(crate) const QUADRATURE_REFINE: usize = 4;

/// Arc length `s(u)` of a regular curve and its inverse `u(s)`.
#[derive(Debug, Clone)]
pub struct ArcLengthMap {
    map: CumulativeMap,
}

impl ArcLengthMap {
    pub fn total_length(&self) -> f64 {
        self.map.total()
    }

    pub fn s_at(&self, u: f64) -> f64 {
        self.map.value_at(u)
    }

    pub fn u_at(&self, s: f64) -> f64 {
        self.map.param_at(s)
    }

    pub fn speed_at(&self, u: f64) -> f64 {
        self.map.rate_at(u)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.map.domain()
    }

    pub fn cumulative(&self) -> &CumulativeMap {
        &self.map
    }
}

/// Builds the arc-length map of `c` by composite adaptive Simpson
/// quadrature of `|c'|`, failing with [`Error::Irregular`] where the speed
/// drops below [`EPS_SPEED`].
pub fn arc_length_map(c: &dyn Curve, exec: Execution) -> Result<ArcLengthMap> {
    let map = cumulative_with_regularity(c, exec, |u| Ok(c.derivative(u, 1)?.norm()))?;
    Ok(ArcLengthMap { map })
}

/// Tabulates `∫ rate du` over the curve's domain and checks that `rate`
/// stays above [`EPS_SPEED`], including dips between grid nodes.
pub(crate) fn cumulative_with_regularity<F>(c: &dyn Curve, exec: Execution, rate: F) -> Result<CumulativeMap>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    let (a, b) = c.domain();
    let intervals = QUADRATURE_REFINE * (c.sample_count().max(2) - 1);
    let map = CumulativeMap::build(exec, a, b, intervals, &rate)?;
    let rates = map.rates();
    if let Some(i) = rates.iter().position(|r| !(*r >= EPS_SPEED)) {
        return Err(Error::Irregular {
            u: map.node(i),
            speed: rates[i],
        });
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    for i in 1..rates.len() - 1 {
        // a zero of the rate between nodes shows up as a pronounced local
        // minimum at the nearest node
        if rates[i] <= rates[i - 1] && rates[i] <= rates[i + 1] && rates[i] < 0.1 * mean {
            let (u, r) = golden_min(&rate, map.node(i - 1), map.node(i + 1))?;
            if r < EPS_SPEED {
                return Err(Error::Irregular { u, speed: r });
            }
        }
    }
    Ok(map)
}

fn golden_min<F>(f: &F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn evaluates_helicoid_curves() {
        let base = CurveSpec::parse("0", "0", "u", 0.0, 2.0 * PI, 64).unwrap();
        let dir = CurveSpec::parse("cos(u)", "sin(u)", "0", 0.0, 2.0 * PI, 64).unwrap();
        assert_eq!(evaluate_curve(&base, 1.3, 1).unwrap(), Vector3::new(0.0, 0.0, 1.0));
        assert_eq!(evaluate_curve(&dir, 0.0, 1).unwrap(), Vector3::new(0.0, 1.0, 0.0));
        assert_eq!(evaluate_curve(&dir, 0.5, 0).unwrap(), Vector3::new(0.5f64.cos(), 0.5f64.sin(), 0.0));
        assert_eq!(evaluate_curve(&dir, 0.0, 6).unwrap(), Vector3::new(-1.0, 0.0, 0.0));
        assert!(matches!(evaluate_curve(&dir, 7.0, 0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn validates_construction() {
        assert!(CurveSpec::parse("u", "0", "0", 1.0, 1.0, 32).is_err());
        assert!(CurveSpec::parse("u", "0", "0", 0.0, 1.0, 8).is_err());
        assert!(matches!(
            CurveSpec::parse("log(u)", "0", "0", -1.0, 1.0, 32),
            Err(Error::Eval { .. })
        ));
    }

    #[test]
    fn helix_length() {
        let helix = CurveSpec::parse("cos(u)", "sin(u)", "u", 0.0, 2.0 * PI, 64).unwrap();
        let map = arc_length_map(&helix, Execution::Sequential).unwrap();
        let expected = 2.0 * PI * 2f64.sqrt();
        assert!((map.total_length() - expected).abs() < 1e-12 * expected);
        for k in 0..=200 {
            let u = 2.0 * PI * k as f64 / 200.0;
            assert!((map.s_at(u) - 2f64.sqrt() * u).abs() < 1e-10);
        }
    }

    #[test]
    fn line_is_unit_speed() {
        let line = CurveSpec::parse("0", "0", "u", 0.0, 1.0, 16).unwrap();
        let map = arc_length_map(&line, Execution::Sequential).unwrap();
        assert!((map.total_length() - 1.0).abs() < 1e-15);
        assert!((map.s_at(0.37) - 0.37).abs() < 1e-15);
    }

    #[test]
    fn cusp_is_irregular() {
        let cusp = CurveSpec::parse("u^3", "0", "0", -1.0, 1.0, 16).unwrap();
        match arc_length_map(&cusp, Execution::Sequential) {
            Err(Error::Irregular { u, .. }) => assert!(u.abs() < 1e-4, "u = {u}"),
            other => panic!("expected irregular, got {other:?}"),
        }
    }

    #[test]
    fn normalized_director() {
        let raw = CurveSpec::parse("-sin(u)", "cos(u)", "1", 0.0, 1.0, 16).unwrap();
        let q = Normalized::new(Arc::new(raw));
        let j = q.jet(0.4, 2).unwrap();
        assert!((j.value().norm() - 1.0).abs() < 1e-15);
        assert!(j.value().dot(&j.at(1)).abs() < 1e-15);
        let expect = Vector3::new(-0.4f64.cos(), -0.4f64.sin(), 0.0) / 2f64.sqrt();
        assert!((j.at(1) - expect).norm() < 1e-15);
    }
}
