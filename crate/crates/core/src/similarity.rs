//! Similarity of ruled surfaces (and of curves) under a variable
//! transformation of arc length.
//!
//! Two surfaces are compared on a common grid of the total-curvature
//! parameter `φ`, anchored at `φ = 0` at the start of each domain. Argument
//! order is `(reference, candidate)`; the recovered transformation is
//! `λ = ds_candidate / ds_reference = k1_reference / k1_candidate`.

use std::fmt;

use nalgebra::{Matrix3, Vector3};

use crate::curve::{arc_length_map, uniform_grid, Curve, QUADRATURE_REFINE};
use crate::exec::Execution;
use crate::frame::{frenet_frame, structure_function_with, FrameField, FrameSample, StructureFunction};
use crate::procrustes::{proper_rotation, rotation_between};
use crate::quadrature::CumulativeMap;
use crate::surface::{classify, RuledSurface, SurfaceKind};
use crate::{Error, Result, DEFAULT_RESOLUTION, DEFAULT_TOL, EPS_K, EPS_SPEED};

/// Tolerance on constant directors in the exact cylindrical check.
pub const CYLINDER_TOL: f64 = 1e-8;
/// Number of offset candidates per side in the offset search.
pub const OFFSET_STEPS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Rulings must coincide as vectors.
    #[default]
    Exact,
    /// Rulings must coincide after one proper rotation.
    Rotation,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Rotation => "rotation",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "rotation" | "up_to_rotation" => Ok(Mode::Rotation),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimilarityOptions {
    pub mode: Mode,
    pub tol: f64,
    /// Nodes of the common `φ` grid.
    pub resolution: usize,
    /// Search for a shift of `φ` between the two surfaces.
    pub offset_search: bool,
    pub exec: Execution,
}

impl Default for SimilarityOptions {
    fn default() -> Self {
        SimilarityOptions {
            mode: Mode::Exact,
            tol: DEFAULT_TOL,
            resolution: DEFAULT_RESOLUTION,
            offset_search: false,
            exec: Execution::default(),
        }
    }
}

impl SimilarityOptions {
    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.resolution < 4 {
            return Err(Error::InvalidArgument("resolution must be at least 4".into()));
        }
        Ok(())
    }
}

/// What a report compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    Surfaces,
    Curves,
    Cylinders,
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subject::Surfaces => "surfaces",
            Subject::Curves => "curves",
            Subject::Cylinders => "cylinders",
        })
    }
}

/// Supremum deviations over the common grid. Fields that do not apply to
/// the subject are `None`; for curves `ruling_sup` measures unit tangents.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Deviations {
    pub structure_fn_sup: Option<f64>,
    pub ruling_sup: f64,
    pub central_normal_sup: Option<f64>,
    pub asymptotic_sup: Option<f64>,
}

impl Deviations {
    pub fn max(&self) -> f64 {
        [self.structure_fn_sup, Some(self.ruling_sup), self.central_normal_sup, self.asymptotic_sup]
            .into_iter()
            .flatten()
            .fold(0.0, f64::max)
    }
}

/// One matched pair of arc lengths with the local rate `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSample {
    pub s_beta: f64,
    pub s_alpha: f64,
    pub lambda: f64,
}

/// The matched arc lengths `s_α(s_β)` with `λ = ds_α/ds_β`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableTransformation {
    pub samples: Vec<LambdaSample>,
    /// `max |λ_map - λ| / λ` where `λ_map` differentiates the tabulated
    /// arc-length and total-curvature maps.
    pub map_discrepancy: f64,
}

impl VariableTransformation {
    pub fn min(&self) -> f64 {
        self.samples.iter().map(|x| x.lambda).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().map(|x| x.lambda).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Mean of the sampled `λ`, summed in order.
    pub fn mean(&self) -> f64 {
        self.samples.iter().map(|x| x.lambda).sum::<f64>() / self.samples.len() as f64
    }

    /// `λ` at `s_beta` by linear interpolation between samples.
    pub fn lambda_at(&self, s_beta: f64) -> f64 {
        let smp = &self.samples;
        let i = smp.partition_point(|x| x.s_beta <= s_beta).clamp(1, smp.len() - 1);
        let (a, b) = (&smp[i - 1], &smp[i]);
        if b.s_beta == a.s_beta {
            return a.lambda;
        }
        let t = ((s_beta - a.s_beta) / (b.s_beta - a.s_beta)).clamp(0.0, 1.0);
        a.lambda + t * (b.lambda - a.lambda)
    }
}

#[derive(Debug, Clone)]
pub struct SimilarityReport {
    pub verdict: bool,
    pub subject: Subject,
    pub mode: Mode,
    pub tol: f64,
    /// `None` where the transformation is unconstrained (cylinders).
    pub lambda: Option<VariableTransformation>,
    /// Proper rotation applied to the candidate; identity in exact mode.
    pub rotation: Matrix3<f64>,
    pub deviations: Deviations,
    /// Length of the compared `φ` (or `σ`) interval.
    pub phi_overlap: f64,
    /// Shift added to the candidate's `φ`; negative values shift the
    /// reference instead.
    pub phi_offset: f64,
    /// `max |k2_β / k2_α - λ| / λ` over nodes where both `|k2| ≥ EPS_K`.
    pub k2_ratio_dev: Option<f64>,
}

/// Matched frame samples of two surfaces on a common `φ` grid.
struct Matched {
    reference: Vec<FrameSample>,
    candidate: Vec<FrameSample>,
    overlap: f64,
}

fn overlap_for(total_ref: f64, total_cand: f64, offset: f64) -> f64 {
    if offset >= 0.0 {
        total_ref.min(total_cand - offset)
    } else {
        (total_ref + offset).min(total_cand)
    }
}

fn match_frames(beta: &FrameField, alpha: &FrameField, offset: f64, opts: &SimilarityOptions) -> Result<Matched> {
    let overlap = overlap_for(beta.total_curvature(), alpha.total_curvature(), offset);
    if !(overlap > EPS_SPEED) {
        return Err(Error::EmptyOverlap);
    }
    let (shift_ref, shift_cand) = if offset >= 0.0 { (0.0, offset) } else { (-offset, 0.0) };
    let grid = uniform_grid((0.0, overlap), opts.resolution);
    let n = grid.len();
    let pairs = opts.exec.try_map(n, |j| {
        let b = beta.at_phi(grid[j] + shift_ref)?;
        let a = alpha.at_phi(grid[j] + shift_cand)?;
        Ok::<_, Error>((b, a))
    })?;
    let (reference, candidate) = pairs.into_iter().unzip();
    Ok(Matched {
        reference,
        candidate,
        overlap,
    })
}

fn sup<T>(items: impl Iterator<Item = T>, f: impl Fn(T) -> f64) -> f64 {
    items.map(f).fold(0.0, f64::max)
}

fn alignment(mode: Mode, from: &[Vector3<f64>], to: &[Vector3<f64>]) -> Matrix3<f64> {
    match mode {
        Mode::Exact => Matrix3::identity(),
        Mode::Rotation => proper_rotation(from, to),
    }
}

fn structure_gap(k1: f64) -> Error {
    Error::Inapplicable(format!("k1 = {k1:e} is below {EPS_K:e}; the structure function is undefined"))
}

fn compare_matched(beta: &FrameField, alpha: &FrameField, m: &Matched, offset: f64, opts: &SimilarityOptions) -> Result<SimilarityReport> {
    let pairs = || m.reference.iter().zip(&m.candidate);
    let mut structure_fn_sup: f64 = 0.0;
    for (b, a) in pairs() {
        let fb = b.structure().ok_or_else(|| structure_gap(b.k1))?;
        let fa = a.structure().ok_or_else(|| structure_gap(a.k1))?;
        structure_fn_sup = structure_fn_sup.max((fa - fb).abs());
    }
    let rotation = {
        let mut from = Vec::with_capacity(3 * m.candidate.len());
        let mut to = Vec::with_capacity(from.capacity());
        for (b, a) in pairs() {
            from.extend([a.q, a.h, a.a]);
            to.extend([b.q, b.h, b.a]);
        }
        alignment(opts.mode, &from, &to)
    };
    let deviations = Deviations {
        structure_fn_sup: Some(structure_fn_sup),
        ruling_sup: sup(pairs(), |(b, a)| (rotation * a.q - b.q).norm()),
        central_normal_sup: Some(sup(pairs(), |(b, a)| (rotation * a.h - b.h).norm())),
        asymptotic_sup: Some(sup(pairs(), |(b, a)| (rotation * a.a - b.a).norm())),
    };
    let samples: Vec<LambdaSample> = pairs()
        .map(|(b, a)| LambdaSample {
            s_beta: b.s,
            s_alpha: a.s,
            lambda: b.k1 / a.k1,
        })
        .collect();
    let map_discrepancy = sup(pairs().zip(&samples), |((b, a), l)| {
        let from_maps = beta.map_k1(b.u) / alpha.map_k1(a.u);
        (from_maps - l.lambda).abs() / l.lambda
    });
    let mut k2_ratio_dev: Option<f64> = None;
    for ((b, a), l) in pairs().zip(&samples) {
        if b.k2.abs() >= EPS_K && a.k2.abs() >= EPS_K {
            let dev = (b.k2 / a.k2 - l.lambda).abs() / l.lambda;
            k2_ratio_dev = Some(k2_ratio_dev.map_or(dev, |d| d.max(dev)));
        }
    }
    Ok(SimilarityReport {
        verdict: deviations.max() <= opts.tol,
        subject: Subject::Surfaces,
        mode: opts.mode,
        tol: opts.tol,
        lambda: Some(VariableTransformation {
            samples,
            map_discrepancy,
        }),
        rotation,
        deviations,
        phi_overlap: m.overlap,
        phi_offset: offset,
        k2_ratio_dev,
    })
}

/// Picks the `φ` shift minimizing the structure-function deviation, trying
/// shifts of `k Φ / OFFSET_STEPS` on either side while at least half of
/// the shorter range still overlaps. Ties go to the smallest shift.
fn search_offset(beta: &FrameField, alpha: &FrameField, opts: &SimilarityOptions) -> Result<f64> {
    let coarse = (opts.resolution / 4).max(64);
    let (fb, fa) = opts.exec.join(
        || structure_function_with(beta, 2 * opts.resolution),
        || structure_function_with(alpha, 2 * opts.resolution),
    );
    let (fb, fa) = (fb?, fa?);
    let (tb, ta) = (fb.total(), fa.total());
    let shortest = tb.min(ta);
    let mut candidates = vec![0.0];
    for k in 1..OFFSET_STEPS {
        candidates.push(k as f64 * ta / OFFSET_STEPS as f64);
        candidates.push(-(k as f64) * tb / OFFSET_STEPS as f64);
    }
    candidates.retain(|&o| overlap_for(tb, ta, o) >= 0.5 * shortest);
    let cost = |o: f64| structure_distance(&fb, &fa, o, coarse);
    let costs = opts.exec.map(candidates.len(), |i| cost(candidates[i]));
    let floor = costs.iter().copied().fold(f64::INFINITY, f64::min);
    // near-ties go to the smallest shift, so a constant structure function
    // yields no offset at all
    let slack = floor + 1e-9;
    let best = candidates
        .iter()
        .zip(&costs)
        .filter(|(_, &c)| c <= slack)
        .map(|(&o, _)| o)
        .fold(f64::INFINITY, |acc, o| if o.abs() < acc.abs() { o } else { acc });
    if floor <= 1e-9 {
        return Ok(best);
    }
    let step = tb.max(ta) / OFFSET_STEPS as f64;
    let fine = |o: f64| structure_mean_square(&fb, &fa, o, 2 * opts.resolution);
    let mut lo = (best - step).max(-tb + 0.5 * shortest);
    let mut hi = (best + step).min(ta - 0.5 * shortest);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
    let (mut f1, mut f2) = (fine(x1), fine(x2));
    while hi - lo > 1e-12 * (1.0 + best.abs()) {
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - g * (hi - lo);
            f1 = fine(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + g * (hi - lo);
            f2 = fine(x2);
        }
    }
    let refined = 0.5 * (lo + hi);
    Ok(if fine(refined) <= fine(best) { refined } else { best })
}

fn structure_mean_square(fb: &StructureFunction, fa: &StructureFunction, offset: f64, n: usize) -> f64 {
    let overlap = overlap_for(fb.total(), fa.total(), offset);
    let (sb, sa) = if offset >= 0.0 { (0.0, offset) } else { (-offset, 0.0) };
    let grid = uniform_grid((0.0, overlap), n);
    grid.iter().map(|p| (fb.eval(p + sb) - fa.eval(p + sa)).powi(2)).sum::<f64>() / grid.len() as f64
}

fn structure_distance(fb: &StructureFunction, fa: &StructureFunction, offset: f64, n: usize) -> f64 {
    let overlap = overlap_for(fb.total(), fa.total(), offset);
    let (sb, sa) = if offset >= 0.0 { (0.0, offset) } else { (-offset, 0.0) };
    uniform_grid((0.0, overlap), n)
        .into_iter()
        .map(|p| (fb.eval(p + sb) - fa.eval(p + sa)).abs())
        .fold(0.0, f64::max)
}

/// Compares two frame fields.
pub fn compare_frames(beta: &FrameField, alpha: &FrameField, opts: &SimilarityOptions) -> Result<SimilarityReport> {
    opts.check()?;
    let offset = if opts.offset_search {
        search_offset(beta, alpha, opts)?
    } else {
        0.0
    };
    let m = match_frames(beta, alpha, offset, opts)?;
    compare_matched(beta, alpha, &m, offset, opts)
}

/// Decides whether `candidate` is similar to `reference`.
///
/// Cylindrical pairs are routed to [`cylindrical_family_check`]; a
/// cylindrical surface paired with a non-cylindrical one is an error.
pub fn check_similar_surfaces(
    reference: &RuledSurface,
    candidate: &RuledSurface,
    opts: &SimilarityOptions,
) -> Result<SimilarityReport> {
    opts.check()?;
    match (reference.is_cylindrical()?, candidate.is_cylindrical()?) {
        (true, true) => return cylindrical_family_check(reference, candidate, opts.mode),
        (false, false) => {}
        _ => return Err(Error::MixedKinds),
    }
    let (fb, fa) = opts.exec.join(|| frenet_frame(reference), || frenet_frame(candidate));
    compare_frames(&fb?, &fa?, opts)
}

/// The transformation `s_α(s_β)` matching equal total curvature, with
/// `λ = k1_β / k1_α`, on `resolution` nodes of the overlap.
pub fn lambda_from_curvatures(
    reference: &FrameField,
    candidate: &FrameField,
    resolution: usize,
) -> Result<VariableTransformation> {
    let opts = SimilarityOptions {
        resolution,
        ..Default::default()
    };
    let m = match_frames(reference, candidate, 0.0, &opts)?;
    let report = compare_matched(reference, candidate, &m, 0.0, &opts)?;
    Ok(report.lambda.expect("surface reports carry a transformation"))
}

/// Curve data for the tangent comparison: arc length, spherical arc length
/// of the tangent indicatrix, and unit tangents.
struct Indicatrix<'a> {
    curve: &'a dyn Curve,
    arc: crate::curve::ArcLengthMap,
    sigma: CumulativeMap,
}

fn curvature_rate(c: &dyn Curve, u: f64) -> Result<(f64, f64)> {
    let j = c.jet(u, 2)?;
    let (d1, d2) = (j.at(1), j.at(2));
    let speed = d1.norm();
    // |dT/du| = |c' × c''| / |c'|²
    Ok((d1.cross(&d2).norm() / (speed * speed), speed))
}

fn indicatrix<'a>(c: &'a dyn Curve, exec: Execution) -> Result<Indicatrix<'a>> {
    let arc = arc_length_map(c, exec)?;
    let (a, b) = c.domain();
    let intervals = QUADRATURE_REFINE * (c.sample_count().max(2) - 1);
    let sigma = CumulativeMap::build(exec, a, b, intervals, |u| curvature_rate(c, u).map(|r| r.0))?;
    let rates = sigma.rates();
    let flat: Vec<usize> = (0..rates.len())
        .filter(|&i| rates[i] < EPS_K * arc.speed_at(sigma.node(i)))
        .collect();
    if let (Some(&first), Some(&last)) = (flat.first(), flat.last()) {
        return Err(Error::Inapplicable(format!(
            "zero curvature (straight segment) for u in [{}, {}]; the tangent indicatrix stalls",
            sigma.node(first),
            sigma.node(last)
        )));
    }
    Ok(Indicatrix { curve: c, arc, sigma })
}

impl Indicatrix<'_> {
    fn at_sigma(&self, sigma: f64) -> Result<(f64, Vector3<f64>, f64)> {
        let u = self.sigma.param_at(sigma);
        let (kappa_speed, speed) = curvature_rate(self.curve, u)?;
        let t = self.curve.derivative(u, 1)? / speed;
        Ok((self.arc.s_at(u), t, kappa_speed / speed))
    }
}

/// Decides whether `candidate` is similar to `reference` as curves: unit
/// tangents coincide at equal spherical arc length of the tangent
/// indicatrix. The transformation is `λ = κ_reference / κ_candidate`.
pub fn check_similar_curves(reference: &dyn Curve, candidate: &dyn Curve, opts: &SimilarityOptions) -> Result<SimilarityReport> {
    opts.check()?;
    let (ib, ia) = opts.exec.join(|| indicatrix(reference, opts.exec), || indicatrix(candidate, opts.exec));
    let (ib, ia) = (ib?, ia?);
    let overlap = ib.sigma.total().min(ia.sigma.total());
    if !(overlap > EPS_SPEED) {
        return Err(Error::EmptyOverlap);
    }
    let grid = uniform_grid((0.0, overlap), opts.resolution);
    let pairs = opts
        .exec
        .try_map(grid.len(), |j| Ok::<_, Error>((ib.at_sigma(grid[j])?, ia.at_sigma(grid[j])?)))?;
    let from: Vec<_> = pairs.iter().map(|(_, a)| a.1).collect();
    let to: Vec<_> = pairs.iter().map(|(b, _)| b.1).collect();
    let rotation = alignment(opts.mode, &from, &to);
    let ruling_sup = sup(from.iter().zip(&to), |(a, b)| (rotation * a - b).norm());
    let samples = pairs
        .iter()
        .map(|(b, a)| LambdaSample {
            s_beta: b.0,
            s_alpha: a.0,
            lambda: b.2 / a.2,
        })
        .collect();
    Ok(SimilarityReport {
        verdict: ruling_sup <= opts.tol,
        subject: Subject::Curves,
        mode: opts.mode,
        tol: opts.tol,
        lambda: Some(VariableTransformation {
            samples,
            map_discrepancy: 0.0,
        }),
        rotation,
        deviations: Deviations {
            ruling_sup,
            ..Default::default()
        },
        phi_overlap: overlap,
        phi_offset: 0.0,
        k2_ratio_dev: None,
    })
}

/// Surface and striction-curve verdicts for a pair of developable surfaces.
#[derive(Debug, Clone)]
pub struct DevelopablePair {
    pub surfaces_similar: bool,
    pub striction_curves_similar: bool,
    pub consistent: bool,
    pub surfaces: SimilarityReport,
    pub curves: SimilarityReport,
}

/// Compares two developable surfaces both as surfaces and through their
/// striction curves; for developables the two verdicts should agree.
pub fn check_developable_pair(
    reference: &RuledSurface,
    candidate: &RuledSurface,
    opts: &SimilarityOptions,
) -> Result<DevelopablePair> {
    for n in [reference, candidate] {
        if classify(n)?.kind != SurfaceKind::Developable {
            return Err(Error::NotDevelopable(n.name().to_string()));
        }
    }
    let surfaces = check_similar_surfaces(reference, candidate, opts)?;
    let (cb, ca) = (reference.striction_curve(), candidate.striction_curve());
    let curves = check_similar_curves(&cb, &ca, opts)?;
    Ok(DevelopablePair {
        surfaces_similar: surfaces.verdict,
        striction_curves_similar: curves.verdict,
        consistent: surfaces.verdict == curves.verdict,
        surfaces,
        curves,
    })
}

/// Similarity of two cylindrical surfaces. Exact mode compares the constant
/// directors; in rotation mode any two cylinders are similar. `λ` is left
/// undefined.
pub fn cylindrical_family_check(reference: &RuledSurface, candidate: &RuledSurface, mode: Mode) -> Result<SimilarityReport> {
    match (reference.is_cylindrical()?, candidate.is_cylindrical()?) {
        (true, true) => {}
        (false, false) => return Err(Error::NotCylindrical(reference.name().to_string())),
        _ => return Err(Error::MixedKinds),
    }
    let qb = reference.director().point(reference.domain().0)?;
    let qa = candidate.director().point(candidate.domain().0)?;
    let rotation = match mode {
        Mode::Exact => Matrix3::identity(),
        Mode::Rotation => rotation_between(&qa, &qb),
    };
    let ruling_sup = (rotation * qa - qb).norm();
    let verdict = match mode {
        Mode::Exact => ruling_sup <= CYLINDER_TOL,
        Mode::Rotation => true,
    };
    Ok(SimilarityReport {
        verdict,
        subject: Subject::Cylinders,
        mode,
        tol: CYLINDER_TOL,
        lambda: None,
        rotation,
        deviations: Deviations {
            ruling_sup,
            ..Default::default()
        },
        phi_overlap: 0.0,
        phi_offset: 0.0,
        k2_ratio_dev: None,
    })
}

/// Similarity of two conoids, compared up to rotation.
pub fn conoid_family_check(reference: &RuledSurface, candidate: &RuledSurface, tol: f64) -> Result<SimilarityReport> {
    for n in [reference, candidate] {
        if !classify(n)?.conoid {
            return Err(Error::NotConoid(n.name().to_string()));
        }
    }
    let opts = SimilarityOptions::default().with_mode(Mode::Rotation).with_tol(tol);
    check_similar_surfaces(reference, candidate, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::CurveSpec;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn helicoid_pair_is_similar() {
        let r = check_similar_surfaces(&presets::helicoid(), &presets::similar_helicoid(), &Default::default()).unwrap();
        assert!(r.verdict, "{r:?}");
        let l = r.lambda.unwrap();
        assert!((l.min() - SQRT_2).abs() < 1e-9 && (l.max() - SQRT_2).abs() < 1e-9);
        assert!(l.map_discrepancy < 1e-6);
        for x in &l.samples {
            assert!((x.s_alpha - SQRT_2 * x.s_beta).abs() < 1e-8);
        }
        assert_eq!(r.rotation, Matrix3::identity());
    }

    #[test]
    fn helicoid_and_hyperboloid_differ() {
        let r = check_similar_surfaces(&presets::helicoid(), &presets::hyperboloid(), &Default::default()).unwrap();
        assert!(!r.verdict);
        assert!((r.deviations.structure_fn_sup.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reflexive() {
        for name in ["hyperboloid", "offset-hyperboloid", "conoid"] {
            let n = presets::by_name(name).unwrap();
            for mode in [Mode::Exact, Mode::Rotation] {
                let r = check_similar_surfaces(&n, &n, &SimilarityOptions::default().with_mode(mode)).unwrap();
                assert!(r.verdict, "{name} {mode}");
                let l = r.lambda.unwrap();
                assert!((l.min() - 1.0).abs() < 1e-12 && (l.max() - 1.0).abs() < 1e-12);
                assert!((r.rotation - Matrix3::identity()).abs().max() < 1e-10);
            }
        }
    }

    #[test]
    fn slowed_director_gives_lambda_three() {
        let fb = frenet_frame(&presets::helicoid()).unwrap();
        let fa = frenet_frame(&presets::by_name("slow-helicoid").unwrap()).unwrap();
        let l = lambda_from_curvatures(&fb, &fa, 256).unwrap();
        assert!((l.min() - 3.0).abs() < 1e-9 && (l.max() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn conoids_match_up_to_rotation() {
        let h = presets::helicoid();
        let c = presets::by_name("conoid").unwrap();
        let r = conoid_family_check(&h, &c, 1e-4).unwrap();
        assert!(r.verdict, "{r:?}");
        let exact = check_similar_surfaces(&h, &c, &Default::default()).unwrap();
        assert!(!exact.verdict);
        assert!(matches!(conoid_family_check(&h, &presets::hyperboloid(), 1e-4), Err(Error::NotConoid(_))));
    }

    #[test]
    fn cylinders() {
        let a = presets::cylinder();
        let base = CurveSpec::parse("cos(u)", "sin(u)", "0", 0.0, 2.0 * PI, 64).unwrap();
        let dir = CurveSpec::parse("1", "0", "0", 0.0, 2.0 * PI, 64).unwrap();
        let b = RuledSurface::new("x-cylinder", base, dir, false).unwrap();
        assert!(cylindrical_family_check(&a, &a, Mode::Exact).unwrap().verdict);
        assert!(!cylindrical_family_check(&a, &b, Mode::Exact).unwrap().verdict);
        let r = cylindrical_family_check(&a, &b, Mode::Rotation).unwrap();
        assert!(r.verdict && r.lambda.is_none());
        assert!(matches!(
            check_similar_surfaces(&a, &presets::helicoid(), &Default::default()),
            Err(Error::MixedKinds)
        ));
    }

    #[test]
    fn helix_curves() {
        let h1 = CurveSpec::parse("cos(u)", "sin(u)", "u", 0.0, 2.0 * PI, 256).unwrap();
        let h2 = CurveSpec::parse("2*cos(u)", "2*sin(u)", "2*u", 0.0, 2.0 * PI, 256).unwrap();
        let r = check_similar_curves(&h1, &h2, &Default::default()).unwrap();
        assert!(r.verdict);
        let l = r.lambda.unwrap();
        assert!((l.min() - 2.0).abs() < 1e-9 && (l.max() - 2.0).abs() < 1e-9);
        let line = CurveSpec::parse("0", "0", "u", 0.0, 1.0, 64).unwrap();
        assert!(matches!(check_similar_curves(&line, &h1, &Default::default()), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn offset_search_finds_shift() {
        // one surface, entered one radian later
        let dir = ["-sin(u)", "cos(u)", "1 + 0.5*cos(u)"];
        let make = |name: &str, a: f64| {
            let base = CurveSpec::parse("1.5*cos(u)", "sin(u)", "0.3*u", a, 2.0 * PI, 512).unwrap();
            let q = CurveSpec::parse(dir[0], dir[1], dir[2], a, 2.0 * PI, 512).unwrap();
            RuledSurface::new(name, base, q, true).unwrap()
        };
        let (b, a) = (make("early", 0.0), make("late", 1.0));
        let plain = check_similar_surfaces(&b, &a, &Default::default()).unwrap();
        assert!(!plain.verdict);
        let opts = SimilarityOptions {
            offset_search: true,
            ..Default::default()
        };
        let r = check_similar_surfaces(&b, &a, &opts).unwrap();
        let field = frenet_frame(&b).unwrap();
        let expected = -field.phi_at_u(1.0);
        assert!((r.phi_offset - expected).abs() < 1e-6, "{} vs {expected}", r.phi_offset);
        assert!(r.verdict, "{r:?}");
        let l = r.lambda.unwrap();
        assert!((l.min() - 1.0).abs() < 1e-4 && (l.max() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn offset_search_keeps_zero_for_constant_structure() {
        let b = presets::hyperboloid();
        let opts = SimilarityOptions {
            offset_search: true,
            ..Default::default()
        };
        let r = check_similar_surfaces(&b, &b, &opts).unwrap();
        assert_eq!(r.phi_offset, 0.0);
        assert!(r.verdict);
    }
}
