//! Text formats: surface definitions, CSV tables, OBJ meshes and reports.
//!
//! CSV numbers are written with 17 significant digits so every value
//! survives a round trip exactly.

mod obj;
mod report;
mod surface_file;

use std::io::{Read, Write};

use nalgebra::Vector3;

use crate::frame::FrameField;
use crate::similarity::VariableTransformation;
use crate::surface::StrictionSample;
use crate::synthesis::SampledSurface;
use crate::{Error, Result};

pub use obj::{read_obj, write_obj, ObjData};
pub use report::{format_report, num, parse_key_values, sig7};
pub use surface_file::{parse_surface_file, SurfaceDefinition};

pub const SAMPLED_SURFACE_HEADER: [&str; 7] = ["s", "cx", "cy", "cz", "qx", "qy", "qz"];
pub const FRAME_HEADER: [&str; 17] = [
    "s", "u", "phi", "cx", "cy", "cz", "qx", "qy", "qz", "hx", "hy", "hz", "ax", "ay", "az", "k1", "k2",
];
pub const STRICTION_HEADER: [&str; 6] = ["u", "v0", "cx", "cy", "cz", "d"];
pub const PROFILE_HEADER: [&str; 2] = ["u", "d"];
pub const LAMBDA_HEADER: [&str; 3] = ["s_beta", "s_alpha", "lambda"];

/// 17 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a header and rows of numbers.
pub fn write_table<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.write_record(row.iter().map(|&x| fmt_num(x)))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a numeric table whose header must equal `header`.
pub fn read_table<R: Read>(r: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(r);
    let found = rdr.headers()?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Format {
            line: 1,
            msg: format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(Error::Format {
                line,
                msg: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::Format {
                    line,
                    msg: format!("`{f}` is not a finite number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn v3(row: &[f64], at: usize) -> Vector3<f64> {
    Vector3::new(row[at], row[at + 1], row[at + 2])
}

pub fn write_sampled_surface<W: Write>(w: W, n: &SampledSurface) -> Result<()> {
    let rows = (0..n.len()).map(|k| {
        let (c, q) = (n.c[k], n.q[k]);
        vec![n.s[k], c.x, c.y, c.z, q.x, q.y, q.z]
    });
    write_table(w, &SAMPLED_SURFACE_HEADER, rows)
}

pub fn read_sampled_surface<R: Read>(r: R) -> Result<SampledSurface> {
    let rows = read_table(r, &SAMPLED_SURFACE_HEADER)?;
    SampledSurface::new(
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| v3(r, 1)).collect(),
        rows.iter().map(|r| v3(r, 4)).collect(),
    )
}

pub fn write_frame_csv<W: Write>(w: W, f: &FrameField) -> Result<()> {
    let rows = f.samples().iter().map(|x| {
        let mut row = vec![x.s, x.u, x.phi];
        for v in [x.c, x.q, x.h, x.a] {
            row.extend(v.iter());
        }
        row.extend([x.k1, x.k2]);
        row
    });
    write_table(w, &FRAME_HEADER, rows)
}

pub fn write_striction_csv<W: Write>(w: W, samples: &[StrictionSample]) -> Result<()> {
    let rows = samples
        .iter()
        .map(|x| vec![x.u, x.v0, x.point.x, x.point.y, x.point.z, x.d]);
    write_table(w, &STRICTION_HEADER, rows)
}

pub fn write_profile_csv<W: Write>(w: W, profile: &[(f64, f64)]) -> Result<()> {
    write_table(w, &PROFILE_HEADER, profile.iter().map(|&(u, d)| vec![u, d]))
}

pub fn write_lambda_csv<W: Write>(w: W, t: &VariableTransformation) -> Result<()> {
    write_table(w, &LAMBDA_HEADER, t.samples.iter().map(|x| vec![x.s_beta, x.s_alpha, x.lambda]))
}
