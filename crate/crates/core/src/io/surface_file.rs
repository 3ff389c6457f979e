//! Surface definition files.
//!
//! ```text
//! # helicoid
//! [surface]
//! name = helicoid
//! u_min = 0
//! u_max = 2*pi
//! samples = 512
//! normalize = false
//!
//! [base]
//! x = 0
//! y = 0
//! z = u
//!
//! [director]
//! x = cos(u)
//! y = sin(u)
//! z = 0
//! ```
//!
//! `u_min` and `u_max` are constant expressions. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;

use crate::curve::CurveSpec;
use crate::expr::parse_expression;
use crate::surface::RuledSurface;
use crate::{Error, Result, DEFAULT_SAMPLES};

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDefinition {
    pub name: String,
    pub u_min: String,
    pub u_max: String,
    pub samples: usize,
    pub normalize: bool,
    pub base: [String; 3],
    pub director: [String; 3],
    /// Line of each section header, for error context.
    lines: [usize; 3],
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Surface,
    Base,
    Director,
}

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

impl SurfaceDefinition {
    pub fn new(name: &str, domain: (&str, &str), base: [&str; 3], director: [&str; 3], normalize: bool) -> Self {
        SurfaceDefinition {
            name: name.to_string(),
            u_min: domain.0.to_string(),
            u_max: domain.1.to_string(),
            samples: DEFAULT_SAMPLES,
            normalize,
            base: base.map(str::to_string),
            director: director.map(str::to_string),
            lines: [0; 3],
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut section = Section::None;
        let mut surface: [Option<(String, usize)>; 5] = Default::default();
        let mut base: [Option<(String, usize)>; 3] = Default::default();
        let mut director: [Option<(String, usize)>; 3] = Default::default();
        let mut lines = [0; 3];
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return Err(format_err(line, "unterminated section header"));
                };
                section = match name.trim() {
                    "surface" => Section::Surface,
                    "base" => Section::Base,
                    "director" => Section::Director,
                    other => return Err(format_err(line, format!("unknown section [{other}]"))),
                };
                let slot = match section {
                    Section::Surface => 0,
                    Section::Base => 1,
                    _ => 2,
                };
                if lines[slot] != 0 {
                    return Err(format_err(line, format!("duplicate section {trimmed}")));
                }
                lines[slot] = line;
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(format_err(line, "expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(format_err(line, format!("empty value for `{key}`")));
            }
            let slot = match section {
                Section::None => return Err(format_err(line, "key outside of any section")),
                Section::Surface => ["name", "u_min", "u_max", "samples", "normalize"]
                    .iter()
                    .position(|k| *k == key)
                    .map(|i| &mut surface[i]),
                Section::Base => ["x", "y", "z"].iter().position(|k| *k == key).map(|i| &mut base[i]),
                Section::Director => ["x", "y", "z"].iter().position(|k| *k == key).map(|i| &mut director[i]),
            };
            let Some(slot) = slot else {
                return Err(format_err(line, format!("unknown key `{key}`")));
            };
            if slot.is_some() {
                return Err(format_err(line, format!("duplicate key `{key}`")));
            }
            *slot = Some((value.to_string(), line));
        }
        let eof = last_line.max(1);
        let required = |v: &Option<(String, usize)>, what: &str| -> Result<(String, usize)> {
            v.clone().ok_or_else(|| format_err(eof, format!("missing {what}")))
        };
        let [name, u_min, u_max, samples, normalize] = surface;
        let name = name.map_or_else(|| "surface".to_string(), |v| v.0);
        let u_min = required(&u_min, "u_min in [surface]")?;
        let u_max = required(&u_max, "u_max in [surface]")?;
        let samples = match samples {
            None => DEFAULT_SAMPLES,
            Some((v, line)) => v
                .parse()
                .map_err(|_| format_err(line, format!("samples must be a positive integer, got `{v}`")))?,
        };
        let normalize = match normalize {
            None => false,
            Some((v, line)) => match v.as_str() {
                "true" => true,
                "false" => false,
                _ => return Err(format_err(line, format!("normalize must be true or false, got `{v}`"))),
            },
        };
        let comps = |arr: &[Option<(String, usize)>; 3], sec: &str| -> Result<[(String, usize); 3]> {
            let get = |i: usize, k: &str| required(&arr[i], &format!("{k} in [{sec}]"));
            Ok([get(0, "x")?, get(1, "y")?, get(2, "z")?])
        };
        let base = comps(&base, "base")?;
        let director = comps(&director, "director")?;
        // expressions are checked here so errors carry their line
        for (text, line) in base.iter().chain(&director).chain([&u_min, &u_max]) {
            parse_expression(text).map_err(|e| format_err(*line, format!("`{text}`: {e}")))?;
        }
        for (text, line) in [&u_min, &u_max] {
            if !parse_expression(text).unwrap().is_constant() {
                return Err(format_err(*line, format!("domain bound `{text}` must not depend on u")));
            }
        }
        Ok(SurfaceDefinition {
            name,
            u_min: u_min.0,
            u_max: u_max.0,
            samples,
            normalize,
            base: base.map(|v| v.0),
            director: director.map(|v| v.0),
            lines,
        })
    }

    /// Evaluated domain bounds.
    pub fn domain(&self) -> Result<(f64, f64)> {
        let bound = |t: &str| -> Result<f64> {
            let e = parse_expression(t).map_err(|e| format_err(self.lines[0], format!("`{t}`: {e}")))?;
            e.eval(0.0).map_err(|e| format_err(self.lines[0], format!("`{t}`: {e}")))
        };
        Ok((bound(&self.u_min)?, bound(&self.u_max)?))
    }

    pub fn build(&self) -> Result<RuledSurface> {
        let (a, b) = self.domain()?;
        let curve = |c: &[String; 3], line: usize| {
            CurveSpec::parse(&c[0], &c[1], &c[2], a, b, self.samples).map_err(|e| format_err(line, e.to_string()))
        };
        let base = curve(&self.base, self.lines[1])?;
        let director = curve(&self.director, self.lines[2])?;
        RuledSurface::new(self.name.clone(), base, director, self.normalize)
            .map_err(|e| format_err(self.lines[2], e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[surface]");
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "u_min = {}", self.u_min);
        let _ = writeln!(out, "u_max = {}", self.u_max);
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "normalize = {}", self.normalize);
        for (title, c) in [("base", &self.base), ("director", &self.director)] {
            let _ = writeln!(out, "\n[{title}]");
            for (k, v) in ["x", "y", "z"].iter().zip(c) {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }
}

/// Parses and builds a surface from definition text.
pub fn parse_surface_file(text: &str) -> Result<RuledSurface> {
    SurfaceDefinition::parse(text)?.build()
}
