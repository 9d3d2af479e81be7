//! Run configuration: a TOML file with fixed section and key names.
//!
//! ```toml
//! [source.direct]          # or [source.purification]
//! p_a = 0.7
//! gamma = [0.3, 0.0]       # complex numbers are [magnitude, phase_radians]
//!
//! [source.purification]
//! c_a = [0.83666, 0.0]
//! c_b = [0.54772, 0.0]
//! m = [[1.0, 0.0]]         # environment states, one complex entry each
//! n = [[1.0, 0.0]]
//!
//! [geometry]
//! wavelength = 1.0         # or k = 6.283...
//! r_a = [0.0, 0.0, 0.0]
//! r_b = [0.5, 0.0, 0.0]
//! r_hat = [1.0, 0.0, 0.0]
//! phi_a = 0.0
//! phi_b = 0.0
//!
//! [modes]
//! eps_a = [[1.0, 0.0], [0.0, 0.0]]
//! eps_b = [[0.8, 0.0], [0.6, 0.0]]
//!
//! [scan]
//! theta = [0.0, 0.1, ...]  # explicit angle grid (radians)
//!
//! [simulation]
//! angles = 64
//! mean_total = 1e5
//! seed = 42
//!
//! [sweep]
//! p_a = 0.5
//! mixing = [0.0, 0.5, 1.0]
//! ```

use std::ops::Range;
use std::path::{Path, PathBuf};

use duality_core::{
    trace_out, Complex64, DualityError, EmissionGeometry, ModeConfig, Purification, SourceState,
};
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;

type Polar = [f64; 2];

fn polar([mag, phase]: Polar) -> Complex64 {
    Complex64::from_polar(mag, phase)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    source: Spanned<RawSource>,
    geometry: Option<Spanned<RawGeometry>>,
    modes: Option<Spanned<RawModes>>,
    scan: Option<Spanned<RawScan>>,
    simulation: Option<Spanned<RawSimulation>>,
    sweep: Option<Spanned<RawSweep>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    purification: Option<Spanned<RawPurification>>,
    direct: Option<Spanned<RawDirect>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPurification {
    c_a: Polar,
    c_b: Polar,
    m: Vec<Polar>,
    n: Vec<Polar>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDirect {
    p_a: f64,
    p_b: Option<f64>,
    #[serde(default)]
    gamma: Polar,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    k: Option<f64>,
    wavelength: Option<f64>,
    r_a: [f64; 3],
    r_b: [f64; 3],
    r_hat: [f64; 3],
    #[serde(default)]
    phi_a: f64,
    #[serde(default)]
    phi_b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModes {
    eps_a: [Polar; 2],
    eps_b: [Polar; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    theta: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    angles: Option<usize>,
    mean_total: f64,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    p_a: f64,
    #[serde(default)]
    mixing: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Purification,
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub angles: Option<usize>,
    pub mean_total: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub p_a: f64,
    pub mixing: Vec<f64>,
}

/// Validated configuration. Every physical invariant has been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: SourceState,
    pub source_kind: SourceKind,
    pub geometry: Option<EmissionGeometry>,
    pub modes: Option<ModeConfig>,
    pub scan: Option<Vec<f64>>,
    pub simulation: Option<Simulation>,
    pub sweep: Option<Sweep>,
}

/// Maps byte offsets to `path:line:col`.
struct Locator<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Locator<'_> {
    fn at(&self, span: Range<usize>) -> String {
        let upto = &self.text[..span.start.min(self.text.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.len() - upto.rfind('\n').map_or(0, |i| i + 1) + 1;
        format!("{}:{line}:{col}", self.path.display())
    }

    fn validation(&self, span: Range<usize>, source: DualityError) -> CliError {
        CliError::Validation {
            location: self.at(span),
            source,
        }
    }

    fn config(&self, span: Range<usize>, message: impl Into<String>) -> CliError {
        CliError::Config {
            path: PathBuf::from(self.at(span)),
            message: message.into(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(path, &text)
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config {
            path: path.to_owned(),
            message: e.to_string().trim_end().to_owned(),
        })?;
        let loc = Locator { path, text };

        let source_span = raw.source.span();
        let src = raw.source.into_inner();
        let (source, source_kind) = match (src.purification, src.direct) {
            (Some(p), None) => {
                let span = p.span();
                let p = p.into_inner();
                let state = Purification::new(
                    polar(p.c_a),
                    polar(p.c_b),
                    p.m.into_iter().map(polar).collect(),
                    p.n.into_iter().map(polar).collect(),
                )
                .and_then(|p| trace_out(&p))
                .map_err(|e| loc.validation(span, e))?;
                (state, SourceKind::Purification)
            }
            (None, Some(d)) => {
                let span = d.span();
                let d = d.into_inner();
                let p_b = d.p_b.unwrap_or(1.0 - d.p_a);
                let state = SourceState::new(d.p_a, p_b, polar(d.gamma))
                    .map_err(|e| loc.validation(span, e))?;
                (state, SourceKind::Direct)
            }
            (Some(_), Some(_)) => {
                return Err(loc.config(
                    source_span,
                    "[source] must contain exactly one of `purification` or `direct`, found both",
                ))
            }
            (None, None) => return Err(loc.config(
                source_span,
                "[source] must contain exactly one of `purification` or `direct`, found neither",
            )),
        };

        let geometry = match raw.geometry {
            None => None,
            Some(g) => {
                let span = g.span();
                let g = g.into_inner();
                let built = match (g.k, g.wavelength) {
                    (Some(k), None) => {
                        EmissionGeometry::new(k, g.r_a, g.r_b, g.r_hat, g.phi_a, g.phi_b)
                    }
                    (None, Some(l)) => EmissionGeometry::from_wavelength(
                        l, g.r_a, g.r_b, g.r_hat, g.phi_a, g.phi_b,
                    ),
                    _ => {
                        return Err(
                            loc.config(span, "[geometry] needs exactly one of `k` or `wavelength`")
                        )
                    }
                };
                Some(built.map_err(|e| loc.validation(span, e))?)
            }
        };

        let modes = match raw.modes {
            None => None,
            Some(m) => {
                let span = m.span();
                let m = m.into_inner();
                let modes = ModeConfig::new(m.eps_a.map(polar), m.eps_b.map(polar))
                    .map_err(|e| loc.validation(span, e))?;
                Some(modes)
            }
        };

        let scan = match raw.scan {
            None => None,
            Some(s) => {
                let span = s.span();
                let theta = s.into_inner().theta;
                if theta.iter().any(|t| !t.is_finite()) || theta.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(loc.validation(
                        span,
                        DualityError::InvalidGrid(
                            "[scan] theta must be finite and strictly increasing".into(),
                        ),
                    ));
                }
                Some(theta)
            }
        };

        let simulation = match raw.simulation {
            None => None,
            Some(s) => {
                let span = s.span();
                let s = s.into_inner();
                if !(s.mean_total.is_finite() && s.mean_total > 0.0) {
                    return Err(loc.config(
                        span,
                        format!(
                            "[simulation] mean_total must be positive, got {}",
                            s.mean_total
                        ),
                    ));
                }
                if s.angles.is_some_and(|n| n == 0) {
                    return Err(loc.config(span, "[simulation] angles must be positive"));
                }
                Some(Simulation {
                    angles: s.angles,
                    mean_total: s.mean_total,
                    seed: s.seed,
                })
            }
        };

        let sweep = match raw.sweep {
            None => None,
            Some(s) => {
                let span = s.span();
                let s = s.into_inner();
                let bad = |name, value| DualityError::OutOfRange {
                    name,
                    value,
                    range: "[0, 1]",
                };
                if !(0.0..=1.0).contains(&s.p_a) {
                    return Err(loc.validation(span, bad("p_a", s.p_a)));
                }
                if let Some(&m) = s.mixing.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                    return Err(loc.validation(span, bad("mixing", m)));
                }
                Some(Sweep {
                    p_a: s.p_a,
                    mixing: s.mixing,
                })
            }
        };

        Ok(RunConfig {
            source,
            source_kind,
            geometry,
            modes,
            scan,
            simulation,
            sweep,
        })
    }
}
