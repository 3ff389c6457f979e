use std::fmt::Write as _;

use crate::similarity::SimilarityReport;

/// Seven significant digits; magnitudes below `1e-12` print as zero.
pub fn sig7(x: f64) -> String {
    if x.abs() < 1e-12 {
        return format!("{:.6}", 0.0);
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..7).contains(&exp) {
        return format!("{x:.6e}");
    }
    let decimals = (6 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Shortest text that reads back to `x`; scientific outside `[1e-5, 1e16)`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), num)
}

/// Flat `key = value` text. Numbers use the shortest representation that
/// reads back to the same value.
pub fn format_report(r: &SimilarityReport) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("verdict", if r.verdict { "similar" } else { "not similar" }.to_string());
    kv("subject", r.subject.to_string());
    kv("mode", r.mode.to_string());
    kv("tol", num(r.tol));
    match &r.lambda {
        Some(l) => {
            kv("lambda", num(l.mean()));
            kv("lambda_min", num(l.min()));
            kv("lambda_max", num(l.max()));
            kv("lambda_map_discrepancy", num(l.map_discrepancy));
        }
        None => kv("lambda", "undefined".to_string()),
    }
    kv("k2_ratio_dev", opt(r.k2_ratio_dev));
    kv("phi_overlap", num(r.phi_overlap));
    kv("phi_offset", num(r.phi_offset));
    kv("structure_fn_sup", opt(r.deviations.structure_fn_sup));
    kv("ruling_sup", num(r.deviations.ruling_sup));
    kv("central_normal_sup", opt(r.deviations.central_normal_sup));
    kv("asymptotic_sup", opt(r.deviations.asymptotic_sup));
    let rot: Vec<String> = r.rotation.transpose().iter().map(|x| num(*x)).collect();
    kv("rotation", rot.join(" "));
    out
}

/// Splits `key = value` lines, skipping blanks and `#` comments.
pub fn parse_key_values(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
