//! Deterministic text output: floats at 17 significant digits (exact
//! round-trips at double precision), locus CSV/JSON, and report tables.

use poncelet_core::{CenterKind, CircleFit, LocusSample, VerificationReport};

/// 17 significant digits; parses back to the identical f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Verdict attached to a locus fit, matching the check semantics of the
/// verify suites.
pub fn locus_verdict(kind: CenterKind, fit: &CircleFit, tol_fit: f64, circle_pair: bool) -> String {
    match kind {
        CenterKind::Edges => {
            if fit.max_residual > 1e3 * tol_fit {
                "non-circular (expected)".to_string()
            } else if circle_pair {
                "circular (circle-pair special case)".to_string()
            } else {
                "circular (unexpected for cm1)".to_string()
            }
        }
        _ => {
            if fit.max_residual < tol_fit {
                "circular".to_string()
            } else {
                "non-circular".to_string()
            }
        }
    }
}

pub fn locus_csv(samples: &[LocusSample], fit: &CircleFit, verdict: &str) -> String {
    let mut s = String::from("t,x,y,x_world,y_world\n");
    for sample in samples {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(sample.t),
            fmt_f64(sample.point.x),
            fmt_f64(sample.point.y),
            fmt_f64(sample.point_world.x),
            fmt_f64(sample.point_world.y),
        ));
    }
    s.push_str(&fit_block(fit, verdict, "# "));
    s
}

fn fit_block(fit: &CircleFit, verdict: &str, prefix: &str) -> String {
    format!(
        "{prefix}fit u = {} v = {} radius = {} rms_residual = {} max_residual = {} refined = {}\n{prefix}verdict {verdict}\n",
        fmt_f64(fit.center.x),
        fmt_f64(fit.center.y),
        fmt_f64(fit.radius),
        fmt_f64(fit.rms_residual),
        fmt_f64(fit.max_residual),
        fit.refined,
    )
}

pub fn locus_json(samples: &[LocusSample], fit: &CircleFit, verdict: &str) -> String {
    let mut s = String::from("{\n  \"samples\": [\n");
    for (i, sample) in samples.iter().enumerate() {
        s.push_str(&format!(
            "    {{\"t\": {}, \"x\": {}, \"y\": {}, \"x_world\": {}, \"y_world\": {}}}{}\n",
            fmt_f64(sample.t),
            fmt_f64(sample.point.x),
            fmt_f64(sample.point.y),
            fmt_f64(sample.point_world.x),
            fmt_f64(sample.point_world.y),
            if i + 1 < samples.len() { "," } else { "" },
        ));
    }
    s.push_str("  ],\n");
    s.push_str(&format!(
        "  \"fit\": {{\"u\": {}, \"v\": {}, \"radius\": {}, \"rms_residual\": {}, \"max_residual\": {}, \"refined\": {}}},\n",
        fmt_f64(fit.center.x),
        fmt_f64(fit.center.y),
        fmt_f64(fit.radius),
        fmt_f64(fit.rms_residual),
        fmt_f64(fit.max_residual),
        fit.refined,
    ));
    s.push_str(&format!("  \"verdict\": \"{verdict}\"\n}}\n"));
    s
}

pub fn report_json(reports: &[VerificationReport]) -> String {
    let mut s = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        s.push_str(&format!(
            "  {{\"check\": \"{}\", \"measured\": {}, \"tolerance\": {}, \"pass\": {}}}{}\n",
            r.check_name,
            fmt_f64(r.measured),
            fmt_f64(r.tolerance),
            r.pass,
            if i + 1 < reports.len() { "," } else { "" },
        ));
    }
    s.push_str("]\n");
    s
}

pub fn report_table(reports: &[VerificationReport]) -> String {
    let mut s = format!(
        "{:<52} {:>12} {:>10} {:>6}  context\n",
        "check", "measured", "tolerance", "pass"
    );
    for r in reports {
        let tol = if r.tolerance == f64::MAX {
            "-".to_string()
        } else {
            format!("{:.1e}", r.tolerance)
        };
        s.push_str(&format!(
            "{:<52} {:>12.3e} {:>10} {:>6}  {}\n",
            r.check_name,
            r.measured,
            tol,
            if r.pass { "ok" } else { "FAIL" },
            r.context,
        ));
    }
    s
}
