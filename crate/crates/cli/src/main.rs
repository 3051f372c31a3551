//! Command-line harness: solve Poncelet families between nested ellipses,
//! trace centroid loci, run the verification suites, and render SVG frames.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config error,
//! 3 numerical failure.

mod config;
mod error;
mod family_io;
mod output;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::Point2;
use poncelet_core::{
    fit_circle, sample_locus, verify_dual_contact, verify_locus_circle, verify_measure_invariance,
    verify_porism, verify_weill_point, CenterKind, Conic, EllipseTemplate, FreeParameter,
    PonceletFamily, VerificationReport,
};

use config::{FreeKind, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "porism",
    version,
    about = "Poncelet polygon families between nested ellipses: solve, trace centroid loci, verify, render"
)]
struct Cli {
    /// Seed for randomized starting angles (porism suite).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Closure-scale tolerance: porism defects, Weill spread, dual-contact
    /// tangency.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_closure: f64,

    /// Fit-scale tolerance: locus circle-fit residuals, measure invariance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_fit: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the free parameter of a config (or certify a fixed pair) and
    /// write the family as JSON.
    Find {
        #[arg(long)]
        config: PathBuf,
        /// Output path; defaults to the config's `out` or family.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a centroid locus over the family and fit a circle in the
    /// normalized frame. Writes CSV (or JSON when --out ends in .json).
    Locus {
        #[arg(long)]
        family: PathBuf,
        /// cm0 (vertices), cm1 (edges) or cm2 (lamina).
        #[arg(long)]
        kind: String,
        /// Use the contact polygon instead of the Poncelet polygon.
        #[arg(long)]
        contact: bool,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run verification suites against a certified family.
    Verify {
        #[arg(long)]
        family: PathBuf,
        /// porism | main | weill | dual | measure | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Optional report JSON path (the human table always goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render SVG frames of the spinning polygon in the normalized frame.
    Render {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        frames: u32,
        #[arg(long)]
        out_dir: PathBuf,
        /// Trace a centroid across frames: cm0 | cm1 | cm2.
        #[arg(long)]
        trace: Option<String>,
        /// Also draw the contact polygon.
        #[arg(long)]
        contact: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Find { config, out } => cmd_find(&config, out.as_deref()),
        Command::Locus {
            family,
            kind,
            contact,
            samples,
            out,
        } => cmd_locus(&family, &kind, contact, samples, &out, cli.tol_fit),
        Command::Verify {
            family,
            suite,
            samples,
            out,
        } => cmd_verify(
            &family,
            &suite,
            samples,
            out.as_deref(),
            cli.seed,
            cli.tol_closure,
            cli.tol_fit,
        ),
        Command::Render {
            family,
            frames,
            out_dir,
            trace,
            contact,
        } => cmd_render(&family, frames, &out_dir, trace.as_deref(), contact),
    }
}

fn parse_kind(kind: &str) -> Result<CenterKind, CliError> {
    CenterKind::parse(kind).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown center kind '{kind}' (expected cm0, cm1 or cm2)"
        ))
    })
}

fn outer_conic(config: &RunConfig) -> Result<Conic, CliError> {
    Ok(Conic::from_ellipse(
        Point2::new(config.outer.center.0, config.outer.center.1),
        config.outer.axes,
        config.outer.tilt,
    )?)
}

fn cmd_find(config_path: &Path, out_flag: Option<&Path>) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(config_path).map_err(|source| CliError::Io {
        path: config_path.to_path_buf(),
        source,
    })?;
    let config = RunConfig::parse(&text)?;
    let outer = outer_conic(&config)?;

    let family = match config.free {
        Some(free) => {
            let template = EllipseTemplate {
                center: Point2::new(config.inner.center.0, config.inner.center.1),
                semi_axes: config.inner.axes,
                tilt: config.inner.tilt,
                free: match free {
                    FreeKind::Radius => FreeParameter::Radius,
                    FreeKind::Offset => FreeParameter::CenterOffset,
                },
            };
            poncelet_core::find_periodic_family(&outer, &template, config.n, config.k)?
        }
        None => {
            let inner = Conic::from_ellipse(
                Point2::new(config.inner.center.0, config.inner.center.1),
                config.inner.axes,
                config.inner.tilt,
            )?;
            PonceletFamily::certify(outer, inner, config.n, config.k)?
        }
    };

    let out_path = out_flag
        .map(Path::to_path_buf)
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("family.json"));
    std::fs::write(&out_path, family_io::family_to_json(&family)).map_err(|source| {
        CliError::Io {
            path: out_path.clone(),
            source,
        }
    })?;
    println!(
        "family (n, k) = ({}, {}), rho = {:.12}, closure defect = {:.3e} -> {}",
        family.n(),
        family.k(),
        family.rho(),
        family.closure_defect(),
        out_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_locus(
    family_path: &Path,
    kind: &str,
    contact: bool,
    samples: usize,
    out: &Path,
    tol_fit: f64,
) -> Result<ExitCode, CliError> {
    let kind = parse_kind(kind)?;
    let family = family_io::load_family(family_path)?;
    let locus = sample_locus(&family, kind, samples, contact)?;
    let points: Vec<Point2<f64>> = locus.iter().map(|s| s.point).collect();
    let fit = fit_circle(&points)?;
    let circle_pair = family
        .inner_normalized()
        .params()
        .map(|p| p.is_circle(1e-9))
        .unwrap_or(false);
    let verdict = output::locus_verdict(kind, &fit, tol_fit, circle_pair);
    let text = if out.extension().is_some_and(|e| e == "json") {
        output::locus_json(&locus, &fit, &verdict)
    } else {
        output::locus_csv(&locus, &fit, &verdict)
    };
    std::fs::write(out, text).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    println!(
        "{} locus{}: {} samples, fit radius {:.9}, max residual {:.3e} ({verdict}) -> {}",
        kind.label(),
        if contact { " (contact polygon)" } else { "" },
        locus.len(),
        fit.radius,
        fit.max_residual,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    family_path: &Path,
    suite: &str,
    samples: usize,
    out: Option<&Path>,
    seed: u64,
    tol_closure: f64,
    tol_fit: f64,
) -> Result<ExitCode, CliError> {
    let family = family_io::load_family(family_path)?;
    let mut reports: Vec<VerificationReport> = Vec::new();

    let run_porism = |reports: &mut Vec<VerificationReport>| -> Result<(), CliError> {
        reports.push(verify_porism(&family, 32, seed, tol_closure)?);
        Ok(())
    };
    let run_main = |reports: &mut Vec<VerificationReport>| -> Result<(), CliError> {
        for kind in [CenterKind::Vertices, CenterKind::Lamina, CenterKind::Edges] {
            reports.push(verify_locus_circle(&family, kind, samples, tol_fit)?.report);
        }
        Ok(())
    };
    let run_weill = |reports: &mut Vec<VerificationReport>| -> Result<(), CliError> {
        reports.push(verify_weill_point(&family, samples, tol_closure)?.report);
        Ok(())
    };
    let run_dual = |reports: &mut Vec<VerificationReport>| -> Result<(), CliError> {
        reports.push(verify_dual_contact(&family, samples.min(64), tol_closure)?.report);
        Ok(())
    };
    let run_measure = |reports: &mut Vec<VerificationReport>| -> Result<(), CliError> {
        reports.push(verify_measure_invariance(&family, 100, tol_fit)?);
        Ok(())
    };

    match suite {
        "porism" => run_porism(&mut reports)?,
        "main" => run_main(&mut reports)?,
        "weill" => run_weill(&mut reports)?,
        "dual" => run_dual(&mut reports)?,
        "measure" => run_measure(&mut reports)?,
        "all" => {
            run_porism(&mut reports)?;
            run_main(&mut reports)?;
            run_weill(&mut reports)?;
            run_dual(&mut reports)?;
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite '{other}' (expected porism, main, weill, dual, measure or all)"
            )))
        }
    }

    print!("{}", output::report_table(&reports));
    if let Some(path) = out {
        std::fs::write(path, output::report_json(&reports)).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let all_pass = reports.iter().all(|r| r.pass);
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_render(
    family_path: &Path,
    frames: u32,
    out_dir: &Path,
    trace: Option<&str>,
    contact: bool,
) -> Result<ExitCode, CliError> {
    if frames == 0 {
        return Err(CliError::Usage("--frames must be at least 1".into()));
    }
    let trace_kind = trace.map(parse_kind).transpose()?;
    let family = family_io::load_family(family_path)?;
    let written = render::render_frames(&family, frames, out_dir, trace_kind, contact)?;
    println!("wrote {} frame(s) to {}", written.len(), out_dir.display());
    Ok(ExitCode::SUCCESS)
}
