//! The frame system in the total-curvature parameter,
//!
//! ```text
//! dq/dφ = h,   dh/dφ = -q + f a,   da/dφ = -f h,
//! ```
//!
//! and the third-order equation it implies for the rulings alone.

use nalgebra::Vector3;

use crate::curve::uniform_grid;
use crate::frame::{FrameField, StructureFunction};
use crate::quadrature::Integrand;
use crate::{Error, Result, EPS_F};

/// An ordered frame `[q, h, a]`.
pub type Frame = [Vector3<f64>; 3];

/// Largest tolerated deviation of an initial frame from orthonormality.
pub const FRAME_TOL: f64 = 1e-10;
/// Endpoint change below which step doubling stops.
pub const STEP_TOL: f64 = 1e-8;
const MAX_SUBSTEPS: usize = 1 << 14;

/// Output of [`integrate_frame_ode`] on a uniform `φ` grid.
#[derive(Debug, Clone)]
pub struct FrameTrajectory {
    pub phi: Vec<f64>,
    pub frames: Vec<Frame>,
    /// Integrated curve when a drift was supplied.
    pub points: Vec<Vector3<f64>>,
    /// Integrator steps per output interval.
    pub substeps: usize,
}

impl FrameTrajectory {
    pub fn q(&self) -> Vec<Vector3<f64>> {
        self.frames.iter().map(|f| f[0]).collect()
    }

    pub fn a(&self) -> Vec<Vector3<f64>> {
        self.frames.iter().map(|f| f[2]).collect()
    }

    /// Largest orthonormality defect over the trajectory.
    pub fn orthonormality_drift(&self) -> f64 {
        self.frames.iter().map(frame_defect).fold(0.0, f64::max)
    }
}

pub fn frame_defect(f: &Frame) -> f64 {
    let [q, h, a] = f;
    [
        q.dot(h).abs(),
        q.dot(a).abs(),
        h.dot(a).abs(),
        (q.norm() - 1.0).abs(),
        (h.norm() - 1.0).abs(),
        (a.norm() - 1.0).abs(),
        (a - q.cross(h)).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Modified Gram–Schmidt in the order `q, h, a`.
fn reproject(f: &mut Frame) {
    let [q, h, a] = f;
    *q = q.normalize();
    *h -= *q * q.dot(h);
    *h = h.normalize();
    *a -= *q * q.dot(a);
    *a -= *h * h.dot(a);
    *a = a.normalize();
}

type State = (Frame, Vector3<f64>);

fn rate<D>(f: &StructureFunction, drift: &D, phi: f64, (fr, _): &State) -> State
where
    D: Fn(f64, &Frame) -> Vector3<f64>,
{
    let k = f.eval(phi);
    let [q, h, a] = fr;
    ([*h, -q + a * k, -h * k], drift(phi, fr))
}

fn axpy(x: &State, k: &State, t: f64) -> State {
    let (f, p) = x;
    let (df, dp) = k;
    ([f[0] + df[0] * t, f[1] + df[1] * t, f[2] + df[2] * t], p + dp * t)
}

fn rk4_step<D>(f: &StructureFunction, drift: &D, phi: f64, dt: f64, x: &State) -> State
where
    D: Fn(f64, &Frame) -> Vector3<f64>,
{
    let k1 = rate(f, drift, phi, x);
    let k2 = rate(f, drift, phi + 0.5 * dt, &axpy(x, &k1, 0.5 * dt));
    let k3 = rate(f, drift, phi + 0.5 * dt, &axpy(x, &k2, 0.5 * dt));
    let k4 = rate(f, drift, phi + dt, &axpy(x, &k3, dt));
    let mut out = *x;
    for (i, slot) in out.0.iter_mut().enumerate() {
        *slot += (k1.0[i] + k2.0[i] * 2.0 + k3.0[i] * 2.0 + k4.0[i]) * (dt / 6.0);
    }
    out.1 += (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (dt / 6.0);
    reproject(&mut out.0);
    out
}

fn run<D>(f: &StructureFunction, drift: &D, start: State, grid: &[f64], substeps: usize) -> Vec<State>
where
    D: Fn(f64, &Frame) -> Vector3<f64>,
{
    let mut out = Vec::with_capacity(grid.len());
    let mut x = start;
    out.push(x);
    for w in grid.windows(2) {
        let dt = (w[1] - w[0]) / substeps as f64;
        for k in 0..substeps {
            x = rk4_step(f, drift, w[0] + dt * k as f64, dt, &x);
        }
        out.push(x);
    }
    out
}

fn state_distance(a: &State, b: &State) -> f64 {
    (0..3)
        .map(|i| (a.0[i] - b.0[i]).norm())
        .fold((a.1 - b.1).norm(), f64::max)
}

/// Integrates the frame system over `phi_range` with RK4 and per-step
/// re-orthonormalization, reporting the frame at `output + 1` uniform
/// nodes. The number of steps per output interval is doubled until the end
/// state changes by at most [`STEP_TOL`].
pub fn integrate_frame_ode(
    f: &StructureFunction,
    initial: Frame,
    phi_range: (f64, f64),
    output: usize,
) -> Result<FrameTrajectory> {
    integrate_with_drift(f, initial, Vector3::zeros(), phi_range, output, |_, _| Vector3::zeros())
}

/// As [`integrate_frame_ode`], additionally integrating a point with
/// `dp/dφ = drift(φ, frame)` from `origin`.
pub fn integrate_with_drift<D>(
    f: &StructureFunction,
    initial: Frame,
    origin: Vector3<f64>,
    (phi0, phi1): (f64, f64),
    output: usize,
    drift: D,
) -> Result<FrameTrajectory>
where
    D: Fn(f64, &Frame) -> Vector3<f64>,
{
    let defect = frame_defect(&initial);
    if !(defect <= FRAME_TOL) {
        return Err(Error::InvalidFrame(defect));
    }
    if output == 0 || !(phi1 >= phi0) {
        return Err(Error::InvalidArgument(format!(
            "need a nondecreasing range and at least one output interval, got [{phi0}, {phi1}] with {output}"
        )));
    }
    let start = (initial, origin);
    if phi1 == phi0 {
        return Ok(FrameTrajectory {
            phi: vec![phi0; output + 1],
            frames: vec![initial; output + 1],
            points: vec![origin; output + 1],
            substeps: 0,
        });
    }
    let grid = uniform_grid((phi0, phi1), output + 1);
    let mut substeps = 1;
    let mut best = run(f, &drift, start, &grid, substeps);
    while substeps < MAX_SUBSTEPS {
        let finer = run(f, &drift, start, &grid, substeps * 2);
        substeps *= 2;
        let change = state_distance(best.last().unwrap(), finer.last().unwrap());
        best = finer;
        if change <= STEP_TOL {
            break;
        }
    }
    Ok(FrameTrajectory {
        phi: grid,
        frames: best.iter().map(|s| s.0).collect(),
        points: best.iter().map(|s| s.1).collect(),
        substeps,
    })
}

/// Finite-difference stencils for [`ruling_residual_samples`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Three-point central differences, second order.
    #[default]
    Second,
    /// Five-point central differences, fourth order.
    Fourth,
}

impl Stencil {
    fn reach(self) -> usize {
        match self {
            Stencil::Second => 1,
            Stencil::Fourth => 2,
        }
    }

    fn d1<V: Integrand>(self, v: &[V], j: usize, h: f64) -> V {
        match self {
            Stencil::Second => (v[j + 1] - v[j - 1]) * (0.5 / h),
            Stencil::Fourth => (v[j - 2] - v[j - 1] * 8.0 + v[j + 1] * 8.0 - v[j + 2]) * (1.0 / (12.0 * h)),
        }
    }

    fn d2<V: Integrand>(self, v: &[V], j: usize, h: f64) -> V {
        match self {
            Stencil::Second => (v[j + 1] - v[j] * 2.0 + v[j - 1]) * (1.0 / (h * h)),
            Stencil::Fourth => {
                (v[j - 1] * 16.0 + v[j + 1] * 16.0 - v[j - 2] - v[j + 2] - v[j] * 30.0) * (1.0 / (12.0 * h * h))
            }
        }
    }
}

/// Residual of the third-order ruling equation
///
/// ```text
/// d/dφ (q''/f) + ((1 + f²)/f) q' - (f'/f²) q = 0
/// ```
///
/// on the measured frame, by second-order central differences on
/// `resolution` uniform `φ` nodes. Inapplicable where `|f| < EPS_F`.
pub fn ruling_ode_residual(field: &FrameField, resolution: usize) -> Result<f64> {
    ruling_ode_residual_with(field, resolution, Stencil::Second)
}

pub fn ruling_ode_residual_with(field: &FrameField, resolution: usize, stencil: Stencil) -> Result<f64> {
    if resolution < 4 * stencil.reach() + 3 {
        return Err(Error::InvalidArgument(format!("too few nodes: {resolution}")));
    }
    let grid = uniform_grid((0.0, field.total_curvature()), resolution);
    let exec = field.surface().execution();
    let samples = exec.try_map(resolution, |j| field.at_phi(grid[j]))?;
    let q: Vec<_> = samples.iter().map(|s| s.q).collect();
    let f: Vec<_> = samples.iter().map(|s| s.k2 / s.k1).collect();
    ruling_residual_samples(grid[1] - grid[0], &q, &f, stencil)
}

/// The ruling-equation residual on raw samples `q_j`, `f_j` with uniform
/// spacing `step`; the maximum is over nodes where all stencils fit.
pub fn ruling_residual_samples(step: f64, q: &[Vector3<f64>], f: &[f64], stencil: Stencil) -> Result<f64> {
    let n = q.len();
    assert_eq!(n, f.len());
    let r = stencil.reach();
    if n < 4 * r + 3 {
        return Err(Error::InvalidArgument(format!("too few nodes: {n}")));
    }
    if let Some(j) = f.iter().position(|v| !(v.abs() >= EPS_F)) {
        return Err(Error::Inapplicable(format!(
            "structure function {} below {EPS_F:e} at node {j}; the third-order ruling equation divides by it",
            f[j]
        )));
    }
    let g: Vec<Vector3<f64>> = (0..n)
        .map(|j| {
            if j < r || j + r >= n {
                Vector3::zeros()
            } else {
                stencil.d2(q, j, step) / f[j]
            }
        })
        .collect();
    let mut worst: f64 = 0.0;
    for j in 2 * r..n - 2 * r {
        let fj = f[j];
        let res = stencil.d1(&g, j, step) + stencil.d1(q, j, step) * ((1.0 + fj * fj) / fj)
            - q[j] * (stencil.d1(f, j, step) / (fj * fj));
        worst = worst.max(res.norm());
    }
    Ok(worst)
}

/// Recovers `a = (q'' + q) / f` from rulings sampled on a uniform grid of
/// `[0, f.total()]`, with fourth-order differences (one-sided near the
/// ends).
pub fn reconstruct_a(q: &[Vector3<f64>], f: &StructureFunction) -> Result<Vec<Vector3<f64>>> {
    let n = q.len();
    if n < 6 {
        return Err(Error::InvalidArgument("need at least six samples".into()));
    }
    let grid = uniform_grid((0.0, f.total()), n);
    let fv: Vec<f64> = grid.iter().map(|&p| f.eval(p)).collect();
    if let Some(j) = fv.iter().position(|v| !(v.abs() >= EPS_F)) {
        return Err(Error::Inapplicable(format!(
            "structure function {} below {EPS_F:e} at phi = {}",
            fv[j], grid[j]
        )));
    }
    let h2 = (grid[1] - grid[0]).powi(2);
    const END0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    const END1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    let one_sided = |w: &[f64; 6], at: &dyn Fn(usize) -> Vector3<f64>| {
        (0..6).fold(Vector3::zeros(), |acc, k| acc + at(k) * w[k]) / (12.0 * h2)
    };
    Ok((0..n)
        .map(|j| {
            let qdd = match j {
                0 => one_sided(&END0, &|k| q[k]),
                1 => one_sided(&END1, &|k| q[k]),
                _ if j + 1 == n => one_sided(&END0, &|k| q[n - 1 - k]),
                _ if j + 2 == n => one_sided(&END1, &|k| q[n - 1 - k]),
                _ => Stencil::Fourth.d2(q, j, 1.0) / h2,
            };
            (qdd + q[j]) / fv[j]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{frenet_frame, structure_function};
    use crate::presets;
    use std::f64::consts::FRAC_PI_2;

    fn identity() -> Frame {
        [Vector3::x(), Vector3::y(), Vector3::z()]
    }

    #[test]
    fn flat_structure_is_a_rotation() {
        let f = StructureFunction::constant(0.0, FRAC_PI_2, 16).unwrap();
        let tr = integrate_frame_ode(&f, identity(), (0.0, FRAC_PI_2), 64).unwrap();
        for (p, fr) in tr.phi.iter().zip(&tr.frames) {
            assert!((fr[0] - Vector3::new(p.cos(), p.sin(), 0.0)).norm() < 1e-9);
            assert!((fr[2] - Vector3::z()).norm() < 1e-14);
        }
        assert!(tr.orthonormality_drift() < 1e-9);
    }

    #[test]
    fn zero_length_range() {
        let f = StructureFunction::constant(1.0, 1.0, 16).unwrap();
        let tr = integrate_frame_ode(&f, identity(), (0.5, 0.5), 8).unwrap();
        assert!(tr.frames.iter().all(|fr| *fr == identity()));
    }

    #[test]
    fn rejects_non_orthonormal_start() {
        let f = StructureFunction::constant(1.0, 1.0, 16).unwrap();
        let bad = [Vector3::x(), Vector3::new(0.1, 1.0, 0.0), Vector3::z()];
        assert!(matches!(integrate_frame_ode(&f, bad, (0.0, 1.0), 8), Err(Error::InvalidFrame(_))));
    }

    #[test]
    fn synthetic_trajectory_satisfies_ruling_equation() {
        let total = 4.0;
        let f = StructureFunction::constant(1.0, total, 16).unwrap();
        let tr = integrate_frame_ode(&f, identity(), (0.0, total), 512).unwrap();
        let fv = vec![1.0; tr.phi.len()];
        let step = tr.phi[1] - tr.phi[0];
        let r = ruling_residual_samples(step, &tr.q(), &fv, Stencil::Fourth).unwrap();
        assert!(r < 1e-6, "{r}");
        let coarse = ruling_residual_samples(step, &tr.q(), &fv, Stencil::Second).unwrap();
        assert!(coarse < 1e-4, "{coarse}");
        let a = reconstruct_a(&tr.q(), &f).unwrap();
        let worst = a.iter().zip(tr.a()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn helicoid_reconstruction() {
        let field = frenet_frame(&presets::helicoid()).unwrap();
        let sf = structure_function(&field).unwrap();
        let s0 = &field.samples()[0];
        let tr = integrate_frame_ode(&sf, [s0.q, s0.h, s0.a], (0.0, sf.total()), 256).unwrap();
        for (p, fr) in tr.phi.iter().zip(&tr.frames) {
            assert!((fr[0] - field.at_phi(*p).unwrap().q).norm() < 1e-6);
        }
        assert!(matches!(ruling_ode_residual(&field, 512), Err(Error::Inapplicable(_))));
        assert!(reconstruct_a(&tr.q(), &sf).is_err());
    }
}
