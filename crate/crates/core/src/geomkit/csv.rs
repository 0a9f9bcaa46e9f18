//! CSV import/export for sampled fields.
//!
//! Complex fields use the header `t,theta,re,im`, real fields
//! `t,theta,value`; rows run row-major over the grid and floats carry 17
//! significant digits so round-trips are bit-faithful.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{AnnulusSpec, Chart, ComplexField, GeomError, RealField};

pub fn real_field_to_csv(field: &RealField) -> String {
    let sh = field.shape();
    let mut out = String::with_capacity(sh.len() * 48);
    out.push_str("t,theta,value\n");
    for i in 0..sh.n0 {
        for j in 0..sh.n1 {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e}",
                sh.x0(i),
                sh.x1(j),
                field.at(i, j)
            );
        }
    }
    out
}

pub fn complex_field_to_csv(field: &ComplexField) -> String {
    let sh = field.shape();
    let mut out = String::with_capacity(sh.len() * 64);
    out.push_str("t,theta,re,im\n");
    for i in 0..sh.n0 {
        for j in 0..sh.n1 {
            let v = field.at(i, j);
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                sh.x0(i),
                sh.x1(j),
                v.re,
                v.im
            );
        }
    }
    out
}

pub fn write_real_csv(path: &Path, field: &RealField) -> Result<(), GeomError> {
    std::fs::write(path, real_field_to_csv(field)).map_err(|e| GeomError::Io(e.to_string()))
}

pub fn write_complex_csv(path: &Path, field: &ComplexField) -> Result<(), GeomError> {
    std::fs::write(path, complex_field_to_csv(field)).map_err(|e| GeomError::Io(e.to_string()))
}

fn parse_rows(text: &str, cols: usize) -> Result<Vec<Vec<f64>>, GeomError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 || line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != cols {
            return Err(GeomError::Csv(format!(
                "line {}: expected {} columns, got {}",
                lineno + 1,
                cols,
                parts.len()
            )));
        }
        let mut row = Vec::with_capacity(cols);
        for p in parts {
            row.push(
                p.trim()
                    .parse::<f64>()
                    .map_err(|e| GeomError::Csv(format!("line {}: {e}", lineno + 1)))?,
            );
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reconstruct the annulus grid from sorted unique coordinates.
fn infer_annulus(rows: &[Vec<f64>]) -> Result<Chart, GeomError> {
    let mut ts: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("non-finite t"));
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut thetas: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    thetas.sort_by(|a, b| a.partial_cmp(b).expect("non-finite theta"));
    thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let (n_r, n_theta) = (ts.len(), thetas.len());
    if n_r * n_theta != rows.len() {
        return Err(GeomError::Csv(format!(
            "grid is not rectangular: {} x {} != {} rows",
            n_r,
            n_theta,
            rows.len()
        )));
    }
    let r_outer = ts[n_r - 1].exp();
    let spec = AnnulusSpec::new(r_outer, n_r, n_theta)?;
    // sanity: uniform spacing
    let h_t = spec.h_t();
    for (i, &t) in ts.iter().enumerate() {
        if (t - i as f64 * h_t).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(GeomError::Csv("non-uniform t spacing".into()));
        }
    }
    Ok(Chart::Annulus(spec))
}

pub fn read_real_csv(path: &Path) -> Result<RealField, GeomError> {
    let text = std::fs::read_to_string(path).map_err(|e| GeomError::Io(e.to_string()))?;
    real_field_from_csv(&text)
}

pub fn real_field_from_csv(text: &str) -> Result<RealField, GeomError> {
    let rows = parse_rows(text, 3)?;
    let chart = infer_annulus(&rows)?;
    let sh = chart.shape();
    let mut values = vec![0.0; sh.len()];
    let (h0, h1) = (sh.h0, sh.h1);
    for row in &rows {
        let i = (row[0] / h0).round() as usize;
        let j = (row[1] / h1).round() as usize;
        values[sh.idx(i, j)] = row[2];
    }
    RealField::new(chart, values)
}

pub fn complex_field_from_csv(text: &str) -> Result<ComplexField, GeomError> {
    let rows = parse_rows(text, 4)?;
    let chart = infer_annulus(&rows)?;
    let sh = chart.shape();
    let mut values = vec![Complex64::default(); sh.len()];
    for row in &rows {
        let i = (row[0] / sh.h0).round() as usize;
        let j = (row[1] / sh.h1).round() as usize;
        values[sh.idx(i, j)] = Complex64::new(row[2], row[3]);
    }
    ComplexField::new(chart, values)
}

pub fn read_complex_csv(path: &Path) -> Result<ComplexField, GeomError> {
    let text = std::fs::read_to_string(path).map_err(|e| GeomError::Io(e.to_string()))?;
    complex_field_from_csv(&text)
}
