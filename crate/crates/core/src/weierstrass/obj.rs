//! Wavefront OBJ export/import for surface patches.
//!
//! Quad faces come from grid cells; a structured comment carries the chart
//! so a patch can be reconstructed from its own mesh file.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Vector3;
use num_complex::Complex64;

use super::SurfacePatch;
use crate::geomkit::{AnnulusSpec, Chart, GeomError, SlabSpec};
use crate::numerics::FdOrder;

pub fn patch_to_obj_string(patch: &SurfacePatch) -> String {
    let sh = patch.shape();
    let mut out = String::with_capacity(sh.len() * 96);
    match &patch.chart {
        Chart::Annulus(a) => {
            let _ = writeln!(
                out,
                "# fbma patch chart=annulus R={:.16e} eps={:.16e} n_r={} n_theta={}",
                a.r_outer, a.epsilon, a.n_r, a.n_theta
            );
        }
        Chart::Slab(s) => {
            let _ = writeln!(
                out,
                "# fbma patch chart=slab R={:.16e} n_im={} n_re={} copies={}",
                s.r_outer, s.n_im, s.n_re, s.copies
            );
        }
    }
    for p in &patch.positions {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2]);
    }
    for n in &patch.normals {
        let _ = writeln!(out, "vn {:.16e} {:.16e} {:.16e}", n[0], n[1], n[2]);
    }
    let quad = |out: &mut String, a: usize, b: usize, c: usize, d: usize| {
        let _ = writeln!(
            out,
            "f {}//{} {}//{} {}//{} {}//{}",
            a + 1,
            a + 1,
            b + 1,
            b + 1,
            c + 1,
            c + 1,
            d + 1,
            d + 1
        );
    };
    for i in 0..sh.n0 - 1 {
        let j_end = if sh.periodic1 { sh.n1 } else { sh.n1 - 1 };
        for j in 0..j_end {
            let jn = (j + 1) % sh.n1;
            quad(
                &mut out,
                sh.idx(i, j),
                sh.idx(i + 1, j),
                sh.idx(i + 1, jn),
                sh.idx(i, jn),
            );
        }
    }
    out
}

pub fn write_obj(path: &Path, patch: &SurfacePatch) -> Result<(), GeomError> {
    std::fs::write(path, patch_to_obj_string(patch)).map_err(|e| GeomError::Io(e.to_string()))
}

fn parse_chart_comment(line: &str) -> Result<Chart, GeomError> {
    let mut kv = std::collections::HashMap::new();
    for tok in line.split_whitespace() {
        if let Some((k, v)) = tok.split_once('=') {
            kv.insert(k.to_string(), v.to_string());
        }
    }
    let get = |k: &str| -> Result<&String, GeomError> {
        kv.get(k)
            .ok_or_else(|| GeomError::Csv(format!("obj chart comment missing `{k}`")))
    };
    let parse_f = |s: &str| -> Result<f64, GeomError> {
        s.parse::<f64>().map_err(|e| GeomError::Csv(e.to_string()))
    };
    let parse_u = |s: &str| -> Result<usize, GeomError> {
        s.parse::<usize>().map_err(|e| GeomError::Csv(e.to_string()))
    };
    match get("chart")?.as_str() {
        "annulus" => {
            let spec = AnnulusSpec::with_epsilon(
                parse_f(get("R")?)?,
                parse_f(get("eps")?)?,
                parse_u(get("n_r")?)?,
                parse_u(get("n_theta")?)?,
            )?;
            Ok(Chart::Annulus(spec))
        }
        "slab" => {
            let spec = SlabSpec::with_copies(
                parse_f(get("R")?)?,
                parse_u(get("n_im")?)?,
                parse_u(get("n_re")?)?,
                parse_u(get("copies")?)?,
            )?;
            Ok(Chart::Slab(spec))
        }
        other => Err(GeomError::Csv(format!("unknown chart kind `{other}`"))),
    }
}

/// Rebuild a patch from an OBJ produced by [`patch_to_obj_string`].
///
/// λ is re-measured from the embedded tangents and the Hopf coefficient is
/// left zero; importers that need it run the Hopf extraction afterwards.
pub fn patch_from_obj_str(text: &str) -> Result<SurfacePatch, GeomError> {
    let mut chart: Option<Chart> = None;
    let mut positions = Vec::new();
    let mut normals = Vec::new();
    for line in text.lines() {
        if line.starts_with("# fbma patch ") {
            chart = Some(parse_chart_comment(line)?);
        } else if let Some(rest) = line.strip_prefix("v ") {
            positions.push(parse_vec3(rest)?);
        } else if let Some(rest) = line.strip_prefix("vn ") {
            normals.push(parse_vec3(rest)?);
        }
    }
    let chart = chart.ok_or_else(|| GeomError::Csv("missing fbma chart comment".into()))?;
    if positions.len() != chart.len() || normals.len() != chart.len() {
        return Err(GeomError::ShapeMismatch {
            expected: chart.len(),
            got: positions.len(),
        });
    }
    let mut patch = SurfacePatch {
        chart,
        positions,
        normals,
        lambda: Vec::new(),
        hopf: vec![Complex64::default(); 0],
        closure_defect: 0.0,
    };
    patch.lambda = patch.empirical_lambda(FdOrder::Four);
    patch.hopf = vec![Complex64::default(); patch.positions.len()];
    Ok(patch)
}

pub fn read_obj(path: &Path) -> Result<SurfacePatch, GeomError> {
    let text = std::fs::read_to_string(path).map_err(|e| GeomError::Io(e.to_string()))?;
    patch_from_obj_str(&text)
}

fn parse_vec3(s: &str) -> Result<Vector3<f64>, GeomError> {
    let mut it = s.split_whitespace();
    let mut v = Vector3::zeros();
    for k in 0..3 {
        let tok = it
            .next()
            .ok_or_else(|| GeomError::Csv("short vertex line".into()))?;
        v[k] = tok.parse().map_err(|e: std::num::ParseFloatError| {
            GeomError::Csv(e.to_string())
        })?;
    }
    Ok(v)
}
