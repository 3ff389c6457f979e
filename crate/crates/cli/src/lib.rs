//! Subcommands of the `ruled` tool.
//!
//! Each `cmd_*` function writes its human-readable output to `out` and
//! returns a [`Status`]; errors map to exit code 2.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use ruled_core::frame::{frenet_frame, structure_function, FrameField};
use ruled_core::io::{
    format_report, read_sampled_surface, sig7, write_frame_csv, write_lambda_csv, write_obj, write_profile_csv,
    write_sampled_surface, write_striction_csv, SurfaceDefinition,
};
use ruled_core::mesh::mesh_surface;
use ruled_core::ode::{integrate_frame_ode, ruling_ode_residual};
use ruled_core::similarity::check_similar_surfaces;
use ruled_core::surface::{classify_with, distribution_parameter, striction, torsal_rulings, ClassifyOptions, SurfaceKind};
use ruled_core::synthesis::{synthesize_similar, SynthesisOptions};
use ruled_core::{parse_expression, presets, Error, RuledSurface, SimilarityOptions, Vector3};

pub type Result<T> = anyhow::Result<T>;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Not similar, or a demo quantity did not match.
    Negative,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Negative => 1,
        }
    }
}

pub const EXIT_ERROR: u8 = 2;

/// Prefix selecting a built-in surface, as in `preset:helicoid`.
pub const PRESET_PREFIX: &str = "preset:";

/// Loads a surface from `preset:NAME`, a sampled-surface `.csv` file or a
/// surface definition file. `samples` overrides the grid size.
pub fn load_surface(source: &str, samples: Option<usize>) -> Result<RuledSurface> {
    let n = if let Some(name) = source.strip_prefix(PRESET_PREFIX) {
        presets::by_name(name).ok_or_else(|| {
            anyhow!("unknown preset `{name}`; available: {}", presets::NAMES.join(", "))
        })?
    } else {
        let path = Path::new(source);
        let with_path = |e: Error| match e {
            Error::Format { line, msg } => anyhow!("{}:{line}: {msg}", path.display()),
            other => anyhow!("{}: {other}", path.display()),
        };
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("sampled");
            read_sampled_surface(file).and_then(|s| s.to_surface(stem)).map_err(with_path)?
        } else {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            SurfaceDefinition::parse(&text).and_then(|d| d.build()).map_err(with_path)?
        }
    };
    match samples {
        Some(k) => Ok(n.with_sample_count(k)?),
        None => Ok(n),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// One value when all entries agree to display precision, else a range.
fn span(values: impl Iterator<Item = f64>) -> String {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return "n/a".into();
    }
    if hi - lo <= 5e-7 * hi.abs().max(lo.abs()).max(1.0) {
        sig7(0.5 * (lo + hi))
    } else {
        format!("{} .. {}", sig7(lo), sig7(hi))
    }
}

pub struct AnalyzeOptions<'a> {
    pub prefix: Option<&'a Path>,
    pub tol_dev: Option<f64>,
}

/// Classification, torsal rulings and frame summary; with a prefix, also
/// the striction, frame and `d(u)` tables and the summary as files.
pub fn cmd_analyze(n: &RuledSurface, opts: &AnalyzeOptions, out: &mut dyn Write) -> Result<Status> {
    let mut copts = ClassifyOptions::default();
    if let Some(t) = opts.tol_dev {
        copts.tol_dev = t;
    }
    let class = classify_with(n, copts)?;
    let (u0, u1) = n.domain();
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
    line("surface", n.name().to_string());
    line("domain", format!("[{}, {}]", sig7(u0), sig7(u1)));
    line("samples", n.sample_count().to_string());
    if class.kind == SurfaceKind::Cylindrical {
        line("class", "cylindrical; striction undefined".into());
        out.write_all(s.as_bytes())?;
        if let Some(p) = opts.prefix {
            create(&with_suffix(p, ".summary.txt"))?.write_all(s.as_bytes())?;
        }
        return Ok(Status::Success);
    }
    let kind = if class.conoid { format!("{}, conoid", class.kind) } else { class.kind.to_string() };
    line("class", kind);
    line("max_abs_d", sig7(class.max_abs_d));
    let torsal = torsal_rulings(n)?;
    line(
        "torsal_rulings",
        match torsal.len() {
            0 => "none".into(),
            k if k > 8 => format!("{k} (all rulings)"),
            _ => torsal.iter().map(|&u| sig7(u)).collect::<Vec<_>>().join(" "),
        },
    );
    let st = striction(n)?;
    line("striction_length", sig7(st.arc_length.total_length()));
    let field = match frenet_frame(n) {
        Ok(f) => {
            let x = f.samples();
            line("total_curvature", sig7(f.total_curvature()));
            line("k1", span(x.iter().map(|x| x.k1)));
            line("k2", span(x.iter().map(|x| x.k2)));
            line("structure_function", span(x.iter().filter_map(|x| x.structure())));
            Some(f)
        }
        Err(Error::CurvatureGap { gaps, .. }) => {
            line("frame", format!("undefined on {} interval(s) where k1 vanishes", gaps.len()));
            None
        }
        Err(e) => return Err(e.into()),
    };
    out.write_all(s.as_bytes())?;
    if let Some(p) = opts.prefix {
        write_striction_csv(create(&with_suffix(p, ".striction.csv"))?, &st.samples)?;
        let profile = n
            .grid()
            .into_iter()
            .map(|u| Ok((u, distribution_parameter(n, u)?)))
            .collect::<ruled_core::Result<Vec<_>>>()?;
        write_profile_csv(create(&with_suffix(p, ".d.csv"))?, &profile)?;
        if let Some(f) = &field {
            write_frame_csv(create(&with_suffix(p, ".frame.csv"))?, f)?;
        }
        create(&with_suffix(p, ".summary.txt"))?.write_all(s.as_bytes())?;
    }
    Ok(Status::Success)
}

/// Compares `reference` (β) with `candidate` (α) and prints the report.
pub fn cmd_compare(
    reference: &RuledSurface,
    candidate: &RuledSurface,
    opts: &SimilarityOptions,
    lambda_csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Status> {
    let report = check_similar_surfaces(reference, candidate, opts)?;
    out.write_all(format_report(&report).as_bytes())?;
    if let (Some(p), Some(l)) = (lambda_csv, &report.lambda) {
        write_lambda_csv(create(p)?, l)?;
    }
    Ok(if report.verdict { Status::Success } else { Status::Negative })
}

/// Parses `x,y,z`.
pub fn parse_point(text: &str) -> Result<Vector3<f64>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected `x,y,z`, got `{text}`");
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = parse_expression(p)
            .map_err(|e| anyhow!("`{p}`: {e}"))?
            .eval(0.0)
            .map_err(|e| anyhow!("`{p}`: {e}"))?;
    }
    Ok(Vector3::from(v))
}

/// Writes the sampled surface similar to `beta` under `lambda` and `theta`
/// to `output`, or to `out` when no path is given.
pub fn cmd_synthesize(
    beta: &RuledSurface,
    lambda: &str,
    theta: &str,
    anchor: Vector3<f64>,
    samples: Option<usize>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Status> {
    let lambda = parse_expression(lambda).map_err(|e| anyhow!("lambda `{lambda}`: {e}"))?;
    let theta = parse_expression(theta).map_err(|e| anyhow!("theta `{theta}`: {e}"))?;
    let mut opts = SynthesisOptions::default();
    if let Some(k) = samples {
        opts.samples = k;
    }
    let sampled = synthesize_similar(beta, &lambda, &theta, anchor, &opts)?;
    match output {
        Some(p) => {
            write_sampled_surface(create(p)?, &sampled)?;
            writeln!(out, "rows = {}", sampled.len())?;
            writeln!(out, "length = {}", sig7(*sampled.s.last().unwrap()))?;
        }
        None => write_sampled_surface(&mut *out, &sampled)?,
    }
    Ok(Status::Success)
}

/// Triangulates `[u0, u1] x [v_min, v_max]` on an `nu x nv` grid.
pub fn cmd_mesh(
    n: &RuledSurface,
    v_min: f64,
    v_max: f64,
    nu: usize,
    nv: usize,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Status> {
    let mesh = mesh_surface(n, v_min, v_max, nu, nv)?;
    match output {
        Some(p) => {
            write_obj(create(p)?, &mesh, n.name())?;
            writeln!(out, "vertices = {}", mesh.vertices.len())?;
            writeln!(out, "triangles = {}", mesh.triangles.len())?;
        }
        None => write_obj(&mut *out, &mesh, n.name())?,
    }
    Ok(Status::Success)
}

/// Result of integrating the frame system from the measured structure
/// function and comparing with the measured frame.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub ruling_deviation: f64,
    pub asymptotic_deviation: f64,
    /// `Err` carries the reason the third-order equation does not apply.
    pub ruling_equation_residual: std::result::Result<f64, String>,
}

pub fn reconstruct(n: &RuledSurface, resolution: usize) -> Result<Reconstruction> {
    let field = frenet_frame(n)?;
    reconstruct_field(&field, resolution)
}

fn reconstruct_field(field: &FrameField, resolution: usize) -> Result<Reconstruction> {
    let f = structure_function(field)?;
    let x0 = &field.samples()[0];
    let tr = integrate_frame_ode(&f, [x0.q, x0.h, x0.a], (0.0, field.total_curvature()), resolution - 1)?;
    let mut ruling: f64 = 0.0;
    let mut asym: f64 = 0.0;
    for (phi, fr) in tr.phi.iter().zip(&tr.frames) {
        let x = field.at_phi(*phi)?;
        ruling = ruling.max((fr[0] - x.q).norm());
        asym = asym.max((fr[2] - x.a).norm());
    }
    let residual = match ruling_ode_residual(field, resolution) {
        Ok(r) => Ok(r),
        Err(Error::Inapplicable(msg)) => Err(msg),
        Err(e) => return Err(e.into()),
    };
    Ok(Reconstruction {
        ruling_deviation: ruling,
        asymptotic_deviation: asym,
        ruling_equation_residual: residual,
    })
}

pub fn cmd_reconstruct(n: &RuledSurface, resolution: usize, out: &mut dyn Write) -> Result<Status> {
    let r = reconstruct(n, resolution)?;
    writeln!(out, "surface = {}", n.name())?;
    writeln!(out, "resolution = {resolution}")?;
    writeln!(out, "ruling_deviation = {:e}", r.ruling_deviation)?;
    writeln!(out, "asymptotic_deviation = {:e}", r.asymptotic_deviation)?;
    match &r.ruling_equation_residual {
        Ok(v) => writeln!(out, "ruling_equation_residual = {v:e}")?,
        Err(why) => writeln!(out, "ruling_equation_residual = inapplicable ({why})")?,
    }
    Ok(Status::Success)
}

/// Values computed by the helicoid demo.
#[derive(Debug, Clone)]
pub struct DemoValues {
    pub k1_beta: f64,
    pub k2_beta: f64,
    pub k1_alpha: f64,
    pub k2_alpha: f64,
    pub lambda: f64,
    /// Sup-norm distance of the computed frames from the closed forms.
    pub frame_error_beta: f64,
    pub frame_error_alpha: f64,
    /// Worst pointwise deviation of `k1`, `k2` and `lambda` from their
    /// expected constants.
    pub worst: [(&'static str, f64); 5],
    pub verdict: bool,
}

pub const DEMO_TOL: f64 = 1e-6;

/// Sup-norm distance of `{q, h, a}` from `(cos ωs, sin ωs, 0)`,
/// `(-sin ωs, cos ωs, 0)`, `(0, 0, 1)`.
fn helicoid_frame_error(field: &FrameField, omega: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for x in field.samples() {
        let (s, c) = (omega * x.s).sin_cos();
        let q = Vector3::new(c, s, 0.0);
        let h = Vector3::new(-s, c, 0.0);
        let a = Vector3::z();
        worst = worst.max((x.q - q).norm()).max((x.h - h).norm()).max((x.a - a).norm());
    }
    worst
}

pub fn demo_values() -> Result<DemoValues> {
    let beta = presets::helicoid();
    let alpha = presets::similar_helicoid();
    let (fb, fa) = (frenet_frame(&beta)?, frenet_frame(&alpha)?);
    let dev = |f: &FrameField, k: fn(&ruled_core::FrameSample) -> f64, want: f64| {
        f.samples().iter().map(|x| (k(x) - want).abs()).fold(0.0, f64::max)
    };
    let mean = |f: &FrameField, k: fn(&ruled_core::FrameSample) -> f64| {
        f.samples().iter().map(k).sum::<f64>() / f.samples().len() as f64
    };
    let r = check_similar_surfaces(&beta, &alpha, &SimilarityOptions::default())?;
    let l = r.lambda.as_ref().ok_or_else(|| anyhow!("no transformation recovered"))?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let lambda_dev = (l.min() - sqrt2).abs().max((l.max() - sqrt2).abs());
    Ok(DemoValues {
        k1_beta: mean(&fb, |x| x.k1),
        k2_beta: mean(&fb, |x| x.k2),
        k1_alpha: mean(&fa, |x| x.k1),
        k2_alpha: mean(&fa, |x| x.k2),
        lambda: l.mean(),
        frame_error_beta: helicoid_frame_error(&fb, 1.0),
        frame_error_alpha: helicoid_frame_error(&fa, 1.0 / sqrt2),
        worst: [
            ("k1_beta", dev(&fb, |x| x.k1, 1.0)),
            ("k2_beta", dev(&fb, |x| x.k2, 0.0)),
            ("k1_alpha", dev(&fa, |x| x.k1, 1.0 / sqrt2)),
            ("k2_alpha", dev(&fa, |x| x.k2, 0.0)),
            ("lambda", lambda_dev),
        ],
        verdict: r.verdict,
    })
}

/// Reproduces the helicoid example: curvatures of both surfaces, the
/// transformation `λ = √2`, frame closed forms, and both meshes plus the
/// comparison report written to `dir`.
pub fn cmd_demo(dir: &Path, out: &mut dyn Write) -> Result<Status> {
    let v = demo_values()?;
    writeln!(out, "k1_beta = {}, k2_beta = {}", sig7(v.k1_beta), sig7(v.k2_beta))?;
    writeln!(out, "k1_alpha = {}, k2_alpha = {}", sig7(v.k1_alpha), sig7(v.k2_alpha))?;
    writeln!(out, "lambda = {:.7}", v.lambda)?;
    writeln!(out, "frame_error_beta = {:e}", v.frame_error_beta)?;
    writeln!(out, "frame_error_alpha = {:e}", v.frame_error_alpha)?;

    let beta = presets::helicoid();
    let alpha = presets::similar_helicoid();
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for n in [&beta, &alpha] {
        let mesh = mesh_surface(n, -2.0, 2.0, 64, 16)?;
        let path = dir.join(format!("{}.obj", n.name()));
        write_obj(create(&path)?, &mesh, n.name())?;
        writeln!(out, "wrote {}", path.display())?;
    }
    let report = check_similar_surfaces(&beta, &alpha, &SimilarityOptions::default())?;
    let path = dir.join("report.txt");
    create(&path)?.write_all(format_report(&report).as_bytes())?;
    writeln!(out, "wrote {}", path.display())?;

    let mut failed = Vec::new();
    for (name, d) in v.worst {
        if !(d <= DEMO_TOL) {
            failed.push(format!("{name} deviates by {d:e}"));
        }
    }
    for (name, d) in [("frame_beta", v.frame_error_beta), ("frame_alpha", v.frame_error_alpha)] {
        if !(d <= DEMO_TOL) {
            failed.push(format!("{name} deviates by {d:e}"));
        }
    }
    if !v.verdict {
        failed.push("surfaces not reported similar".into());
    }
    if failed.is_empty() {
        writeln!(out, "all values match within {DEMO_TOL:e}")?;
        Ok(Status::Success)
    } else {
        for f in &failed {
            writeln!(out, "mismatch: {f}")?;
        }
        Ok(Status::Negative)
    }
}
