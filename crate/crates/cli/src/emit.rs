//! Deterministic emitters: fixed float formatting, CSV and JSON writers.
//!
//! Floats are rounded to 12 significant digits and printed in the shortest
//! form that round-trips that value, so identical runs produce byte-identical
//! files on every platform.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use jcm_core::observables::TimeSeries;
use jcm_core::phase_space::PhaseSpaceGrid;

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Shortest round-trip representation capped at 12 significant digits.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string(); // collapses -0.0 as well
    }
    debug_assert!(x.is_finite(), "refusing to format {x}");
    let rounded: f64 = format!("{:.11e}", x).parse().expect("exponential form parses");
    format!("{}", rounded)
}

fn write_file(path: &Path, contents: &str) -> Result<(), EmitError> {
    let io = |source| EmitError::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(contents.as_bytes()).map_err(io)?;
    Ok(())
}

/// `lambda_t,value` CSV for one series.
pub fn emit_series_csv(series: &TimeSeries, path: &Path) -> Result<(), EmitError> {
    let mut out = String::with_capacity(32 * (series.len() + 1));
    out.push_str("lambda_t,value\n");
    for (t, v) in series.times().iter().zip(series.values()) {
        let _ = writeln!(out, "{},{}", fmt_sig12(*t), fmt_sig12(*v));
    }
    write_file(path, &out)
}

/// Series as a JSON object with `label`, `lambda_t`, `values` arrays.
pub fn emit_series_json(series: &TimeSeries, path: &Path) -> Result<(), EmitError> {
    let object = serde_json::json!({
        "label": series.label(),
        "lambda_t": series.times().iter().map(|t| fmt_sig12(*t)).collect::<Vec<_>>(),
        "values": series.values().iter().map(|v| fmt_sig12(*v)).collect::<Vec<_>>(),
    });
    write_file(path, &format!("{:#}\n", object))
}

/// Long-form `re,im,value` CSV, re-major order.
pub fn emit_grid_csv(grid: &PhaseSpaceGrid, path: &Path) -> Result<(), EmitError> {
    let mut out = String::with_capacity(24 * grid.values().len());
    out.push_str("re,im,value\n");
    for (i, re) in grid.re_axis().iter().enumerate() {
        for (j, im) in grid.im_axis().iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_sig12(*re),
                fmt_sig12(*im),
                fmt_sig12(grid.value(i, j))
            );
        }
    }
    write_file(path, &out)
}

/// Grid as a JSON envelope carrying the axes and the value matrix.
pub fn emit_grid_json(grid: &PhaseSpaceGrid, label: &str, path: &Path) -> Result<(), EmitError> {
    let values: Vec<Vec<String>> = (0..grid.re_axis().len())
        .map(|i| (0..grid.im_axis().len()).map(|j| fmt_sig12(grid.value(i, j))).collect())
        .collect();
    let object = serde_json::json!({
        "label": label,
        "re_axis": grid.re_axis().iter().map(|v| fmt_sig12(*v)).collect::<Vec<_>>(),
        "im_axis": grid.im_axis().iter().map(|v| fmt_sig12(*v)).collect::<Vec<_>>(),
        "values": values,
    });
    write_file(path, &format!("{:#}\n", object))
}

/// `n,probability` CSV for a photon-number distribution.
pub fn emit_distribution_csv(dist: &[f64], path: &Path) -> Result<(), EmitError> {
    let mut out = String::with_capacity(16 * (dist.len() + 1));
    out.push_str("n,probability\n");
    for (n, p) in dist.iter().enumerate() {
        let _ = writeln!(out, "{},{}", n, fmt_sig12(*p));
    }
    write_file(path, &out)
}
