//! SVG frames of the spinning polygon in the normalized frame, with the two
//! conics, optional contact polygon, centroid marker and accumulated
//! centroid trace. Output is byte-deterministic for identical inputs.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use nalgebra::Point2;
use poncelet_core::{center_of_mass, tangency_polygon, CenterKind, Polygon, PonceletFamily};

use crate::error::CliError;

fn c(x: f64) -> String {
    format!("{x:.9}")
}

fn path_of(polygon: &Polygon, class: &str, stroke: &str) -> String {
    let mut d = String::new();
    for (i, v) in polygon.vertices().iter().enumerate() {
        d.push_str(if i == 0 { "M " } else { " L " });
        d.push_str(&format!("{} {}", c(v.x), c(v.y)));
    }
    d.push_str(" Z");
    format!("<path class=\"{class}\" d=\"{d}\" stroke=\"{stroke}\" fill=\"none\"/>\n")
}

fn frame_svg(
    family: &PonceletFamily,
    t: f64,
    trace: &[Point2<f64>],
    trace_kind: Option<CenterKind>,
    draw_contact: bool,
) -> Result<String, CliError> {
    let polygon = family.normalized_polygon(t)?;
    let inner = family.inner_normalized().params()?;

    let mut svg = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-1.2 -1.2 2.4 2.4\" width=\"720\" height=\"720\">\n",
    );
    svg.push_str("<g transform=\"scale(1,-1)\" stroke-width=\"0.006\">\n");
    svg.push_str(
        "<circle class=\"outer\" cx=\"0\" cy=\"0\" r=\"1\" stroke=\"#303030\" fill=\"none\"/>\n",
    );
    svg.push_str(&format!(
        "<ellipse class=\"inner\" cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" transform=\"rotate({} {} {})\" stroke=\"#808080\" fill=\"none\"/>\n",
        c(inner.center.x),
        c(inner.center.y),
        c(inner.semi_axes.0),
        c(inner.semi_axes.1),
        c(inner.tilt.to_degrees()),
        c(inner.center.x),
        c(inner.center.y),
    ));
    svg.push_str(&path_of(&polygon, "polygon", "#1f5fbf"));
    if draw_contact {
        let contact = tangency_polygon(&polygon, family.inner_normalized())?;
        svg.push_str(&path_of(&contact, "contact", "#bf7a1f"));
    }
    for p in trace {
        svg.push_str(&format!(
            "<circle class=\"trace\" cx=\"{}\" cy=\"{}\" r=\"0.008\" fill=\"#101010\" stroke=\"none\"/>\n",
            c(p.x),
            c(p.y),
        ));
    }
    if let Some(kind) = trace_kind {
        let center = center_of_mass(&polygon, kind)?;
        svg.push_str(&format!(
            "<circle class=\"centroid\" cx=\"{}\" cy=\"{}\" r=\"0.015\" fill=\"#bf1f1f\" stroke=\"none\"/>\n",
            c(center.x),
            c(center.y),
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

/// One SVG per frame at t_f = 2 pi f / frames; the trace accumulates the
/// chosen centroid over frames 0..=f.
pub fn render_frames(
    family: &PonceletFamily,
    frames: u32,
    out_dir: &Path,
    trace_kind: Option<CenterKind>,
    draw_contact: bool,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut trace: Vec<Point2<f64>> = Vec::new();
    let mut written = Vec::with_capacity(frames as usize);
    for f in 0..frames {
        let t = TAU * f64::from(f) / f64::from(frames);
        if let Some(kind) = trace_kind {
            let polygon = family.normalized_polygon(t)?;
            trace.push(center_of_mass(&polygon, kind)?);
        }
        let svg = frame_svg(family, t, &trace, trace_kind, draw_contact)?;
        let path = out_dir.join(format!("frame_{f:04}.svg"));
        std::fs::write(&path, svg).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}
