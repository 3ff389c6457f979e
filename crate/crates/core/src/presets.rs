//! Built-in surfaces addressable by name.

use crate::curve::CurveSpec;
use crate::surface::RuledSurface;
use crate::DEFAULT_SAMPLES;

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 8] = [
    "helicoid",
    "similar-helicoid",
    "cylinder",
    "hyperboloid",
    "tangent-developable",
    "slow-helicoid",
    "conoid",
    "offset-hyperboloid",
];

struct Def {
    base: [&'static str; 3],
    director: [&'static str; 3],
    domain: (&'static str, &'static str),
    normalize: bool,
}

fn def(name: &str) -> Option<Def> {
    let d = |base, director, domain, normalize| Some(Def {
        base,
        director,
        domain,
        normalize,
    });
    match name {
        "helicoid" => d(["0", "0", "u"], ["cos(u)", "sin(u)", "0"], ("0", "2*pi"), false),
        "similar-helicoid" => d(
            ["-sin(u/sqrt(2))", "cos(u/sqrt(2))", "u/sqrt(2)"],
            ["cos(u/sqrt(2))", "sin(u/sqrt(2))", "0"],
            ("0", "2*pi*sqrt(2)"),
            false,
        ),
        "cylinder" => d(["cos(u)", "sin(u)", "0"], ["0", "0", "1"], ("0", "2*pi"), false),
        "hyperboloid" => d(["cos(u)", "sin(u)", "0"], ["-sin(u)", "cos(u)", "1"], ("0", "2*pi"), true),
        "tangent-developable" => d(["cos(u)", "sin(u)", "u"], ["-sin(u)", "cos(u)", "1"], ("0", "2*pi"), true),
        "slow-helicoid" => d(["0", "0", "u"], ["cos(u/3)", "sin(u/3)", "0"], ("0", "2*pi"), false),
        "conoid" => d(["0", "0", "u"], ["cos(u^2)", "sin(u^2)", "0"], ("1", "3"), false),
        "offset-hyperboloid" => d(
            ["1.5*cos(u)", "sin(u)", "0.3*u"],
            ["-sin(u)", "cos(u)", "1"],
            ("0", "2*pi"),
            true,
        ),
        _ => None,
    }
}

/// Builds a preset with `samples` grid nodes.
pub fn by_name_with(name: &str, samples: usize) -> Option<RuledSurface> {
    let def = def(name)?;
    let bound = |t: &str| crate::parse_expression(t).ok()?.eval(0.0).ok();
    let (a, b) = (bound(def.domain.0)?, bound(def.domain.1)?);
    let [bx, by, bz] = def.base;
    let [dx, dy, dz] = def.director;
    let base = CurveSpec::parse(bx, by, bz, a, b, samples).ok()?;
    let director = CurveSpec::parse(dx, dy, dz, a, b, samples).ok()?;
    RuledSurface::new(name, base, director, def.normalize).ok()
}

pub fn by_name(name: &str) -> Option<RuledSurface> {
    by_name_with(name, DEFAULT_SAMPLES)
}

fn preset(name: &str) -> RuledSurface {
    by_name(name).expect("built-in presets are valid")
}

/// `(0, 0, u) + v (cos u, sin u, 0)` on `[0, 2π]`.
pub fn helicoid() -> RuledSurface {
    preset("helicoid")
}

/// `(-sin(s/√2), cos(s/√2), s/√2) + v (cos(s/√2), sin(s/√2), 0)` on
/// `[0, 2π√2]`, similar to the helicoid with `λ = √2`.
pub fn similar_helicoid() -> RuledSurface {
    preset("similar-helicoid")
}

/// Circular cylinder with constant director `(0, 0, 1)`.
pub fn cylinder() -> RuledSurface {
    preset("cylinder")
}

/// `(cos u, sin u, 0) + v (-sin u, cos u, 1)/√2`, with `k1 = k2 = 1/√2`.
pub fn hyperboloid() -> RuledSurface {
    preset("hyperboloid")
}

/// Tangent developable of the helix `(cos u, sin u, u)`.
pub fn tangent_developable() -> RuledSurface {
    preset("tangent-developable")
}
