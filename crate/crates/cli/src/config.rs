//! Run configuration: flat `key = value` text with [outer]/[inner]/[run]
//! sections. Hand-editable and diff-friendly; numbers are emitted with 17
//! significant digits so emit-then-parse round-trips exactly.

use std::collections::BTreeMap;

use crate::error::CliError;
use crate::output::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct EllipseSpec {
    pub center: (f64, f64),
    pub axes: (f64, f64),
    pub tilt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeKind {
    Radius,
    Offset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub outer: EllipseSpec,
    pub inner: EllipseSpec,
    pub free: Option<FreeKind>,
    pub n: u32,
    pub k: u32,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<String>,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

#[derive(Default)]
struct EllipseBuilder {
    center: Option<(f64, f64)>,
    axes: Option<(f64, f64)>,
    tilt: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let mut section = String::new();
        let mut outer = EllipseBuilder::default();
        let mut inner = EllipseBuilder::default();
        let mut free = None;
        let mut n = None;
        let mut k = None;
        let mut samples = None;
        let mut seed = None;
        let mut out = None;
        let mut tolerances = BTreeMap::new();

        let config_err = |line: usize, message: String| CliError::Config {
            line: Some(line),
            message,
        };

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(config_err(
                        lineno,
                        format!("malformed section header '{line}'"),
                    ));
                }
                let name = &line[1..line.len() - 1];
                match name {
                    "outer" | "inner" | "run" => section = name.to_string(),
                    other => {
                        return Err(config_err(
                            lineno,
                            format!(
                                "unknown section '[{other}]' (expected [outer], [inner] or [run])"
                            ),
                        ))
                    }
                }
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_err(
                    lineno,
                    format!("expected 'key = value', got '{line}'"),
                ));
            };
            let key = key.trim();
            let value = value.trim();

            let parse_f64 = |v: &str, field: &str| -> Result<f64, CliError> {
                v.parse::<f64>().map_err(|_| {
                    config_err(
                        lineno,
                        format!("field '{field}' expects a number, got '{v}'"),
                    )
                })
            };
            let parse_pair = |v: &str, field: &str| -> Result<(f64, f64), CliError> {
                let parts: Vec<&str> = v.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(config_err(
                        lineno,
                        format!("field '{field}' expects two comma-separated numbers, got '{v}'"),
                    ));
                }
                Ok((parse_f64(parts[0], field)?, parse_f64(parts[1], field)?))
            };

            match section.as_str() {
                "outer" | "inner" => {
                    let builder = if section == "outer" {
                        &mut outer
                    } else {
                        &mut inner
                    };
                    match key {
                        "center" => builder.center = Some(parse_pair(value, key)?),
                        "axes" => builder.axes = Some(parse_pair(value, key)?),
                        "radius" => {
                            let r = parse_f64(value, key)?;
                            builder.axes = Some((r, r));
                        }
                        "tilt" => builder.tilt = Some(parse_f64(value, key)?),
                        "free" if section == "inner" => {
                            free = Some(match value {
                                "radius" => FreeKind::Radius,
                                "offset" => FreeKind::Offset,
                                other => return Err(config_err(
                                    lineno,
                                    format!(
                                        "field 'free' expects 'radius' or 'offset', got '{other}'"
                                    ),
                                )),
                            });
                        }
                        other => {
                            return Err(config_err(
                                lineno,
                                format!("unknown field '{other}' in [{section}]"),
                            ))
                        }
                    }
                }
                "run" => match key {
                    "n" => {
                        n = Some(value.parse::<u32>().map_err(|_| {
                            config_err(
                                lineno,
                                format!("field 'n' expects an integer, got '{value}'"),
                            )
                        })?)
                    }
                    "k" => {
                        k = Some(value.parse::<u32>().map_err(|_| {
                            config_err(
                                lineno,
                                format!("field 'k' expects an integer, got '{value}'"),
                            )
                        })?)
                    }
                    "samples" => {
                        samples = Some(value.parse::<usize>().map_err(|_| {
                            config_err(
                                lineno,
                                format!("field 'samples' expects an integer, got '{value}'"),
                            )
                        })?)
                    }
                    "seed" => {
                        seed = Some(value.parse::<u64>().map_err(|_| {
                            config_err(
                                lineno,
                                format!("field 'seed' expects an integer, got '{value}'"),
                            )
                        })?)
                    }
                    "out" => out = Some(value.to_string()),
                    other if other.starts_with("tol_") => {
                        tolerances.insert(other.to_string(), parse_f64(value, other)?);
                    }
                    other => {
                        return Err(config_err(
                            lineno,
                            format!("unknown field '{other}' in [run]"),
                        ))
                    }
                },
                "" => {
                    return Err(config_err(
                        lineno,
                        format!("field '{key}' appears before any section header"),
                    ))
                }
                _ => unreachable!(),
            }
        }

        let missing = |field: &str, section: &str| CliError::Config {
            line: None,
            message: format!("missing field '{field}' in [{section}]"),
        };
        let finish = |b: EllipseBuilder, section: &str| -> Result<EllipseSpec, CliError> {
            Ok(EllipseSpec {
                center: b.center.unwrap_or((0.0, 0.0)),
                axes: b.axes.ok_or_else(|| missing("axes (or radius)", section))?,
                tilt: b.tilt.unwrap_or(0.0),
            })
        };

        let n = n.ok_or_else(|| missing("n", "run"))?;
        let k = k.unwrap_or(1);
        if n < 3 {
            return Err(CliError::Config {
                line: None,
                message: format!("field 'n' must be at least 3, got {n}"),
            });
        }
        if k == 0 || gcd(n, k) != 1 {
            return Err(CliError::Config {
                line: None,
                message: format!("fields n = {n}, k = {k} must be coprime with k >= 1"),
            });
        }
        tolerances.entry("tol_closure".into()).or_insert(1e-8);
        tolerances.entry("tol_fit".into()).or_insert(1e-6);

        Ok(RunConfig {
            outer: finish(outer, "outer")?,
            inner: finish(inner, "inner")?,
            free,
            n,
            k,
            samples: samples.unwrap_or(256),
            seed: seed.unwrap_or(0),
            tolerances,
            out,
        })
    }

    /// Inverse of `parse`; emit-then-parse yields an equal config.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn emit(&self) -> String {
        let mut s = String::new();
        let pair = |(a, b): (f64, f64)| format!("{}, {}", fmt_f64(a), fmt_f64(b));
        s.push_str("[outer]\n");
        s.push_str(&format!("center = {}\n", pair(self.outer.center)));
        s.push_str(&format!("axes = {}\n", pair(self.outer.axes)));
        s.push_str(&format!("tilt = {}\n", fmt_f64(self.outer.tilt)));
        s.push_str("\n[inner]\n");
        s.push_str(&format!("center = {}\n", pair(self.inner.center)));
        s.push_str(&format!("axes = {}\n", pair(self.inner.axes)));
        s.push_str(&format!("tilt = {}\n", fmt_f64(self.inner.tilt)));
        if let Some(free) = self.free {
            s.push_str(&format!(
                "free = {}\n",
                match free {
                    FreeKind::Radius => "radius",
                    FreeKind::Offset => "offset",
                }
            ));
        }
        s.push_str("\n[run]\n");
        s.push_str(&format!("n = {}\n", self.n));
        s.push_str(&format!("k = {}\n", self.k));
        s.push_str(&format!("samples = {}\n", self.samples));
        s.push_str(&format!("seed = {}\n", self.seed));
        for (name, value) in &self.tolerances {
            s.push_str(&format!("{name} = {}\n", fmt_f64(*value)));
        }
        if let Some(out) = &self.out {
            s.push_str(&format!("out = {out}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunConfig {
        RunConfig {
            outer: EllipseSpec {
                center: (0.0, 0.0),
                axes: (1.0, 1.0),
                tilt: 0.0,
            },
            inner: EllipseSpec {
                center: (0.2, 0.0),
                axes: (0.4, 0.4),
                tilt: 0.0,
            },
            free: Some(FreeKind::Radius),
            n: 5,
            k: 1,
            samples: 256,
            seed: 0,
            tolerances: BTreeMap::from([
                ("tol_closure".to_string(), 1e-8),
                ("tol_fit".to_string(), 1e-6),
            ]),
            out: Some("family.json".into()),
        }
    }

    #[test]
    fn emit_parse_round_trip() {
        let config = sample();
        let parsed = RunConfig::parse(&config.emit()).unwrap();
        assert_eq!(config, parsed);
        assert_eq!(config.emit(), parsed.emit());
    }

    #[test]
    fn radius_shorthand() {
        let text = "[outer]\nradius = 1.0\n[inner]\nradius = 0.5\n[run]\nn = 3\n";
        let config = RunConfig::parse(text).unwrap();
        assert_eq!(config.inner.axes, (0.5, 0.5));
        assert_eq!(config.k, 1);
        assert_eq!(config.samples, 256);
        assert_eq!(config.tolerances["tol_closure"], 1e-8);
    }

    #[test]
    fn missing_n_names_the_field() {
        let text = "[outer]\nradius = 1.0\n[inner]\nradius = 0.5\n[run]\nk = 1\n";
        let err = RunConfig::parse(text).unwrap_err();
        assert!(err.to_string().contains("'n'"), "{err}");
    }

    #[test]
    fn unknown_field_is_rejected_with_line() {
        let text = "[outer]\nradius = 1.0\nbogus = 3\n";
        let err = RunConfig::parse(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# heading\n[outer]\nradius = 1.0 # unit circle\n\n[inner]\nradius = 0.4\n[run]\nn = 3\n";
        assert!(RunConfig::parse(text).is_ok());
    }
}
