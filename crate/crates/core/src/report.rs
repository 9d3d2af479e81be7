//! Duality reports: `V² + D² = μ_S²` in scalar and polarized form, purity
//! sweeps and the right-triangle picture.

use crate::emission::ModeConfig;
use crate::error::{DualityError, Result};
use crate::fringes::{analytic_visibility, distinguishability};
use crate::source_state::{mixed_family, purity, SourceState};
use crate::stokes::{polarization_visibilities, DEFAULT_STOKES_GRID};

/// Which visibility a report uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    /// Ordinary fringe visibility `V = 2|γ|`.
    Scalar,
    /// Total modulated visibility `V_P` from a Stokes sweep.
    Polarized,
}

impl ReportMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReportMode::Scalar => "scalar",
            ReportMode::Polarized => "polarized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub visibility: f64,
    pub distinguishability: f64,
    pub purity: f64,
    /// Signed `V² + D² - μ_S²`.
    pub residual: f64,
    pub mode: ReportMode,
}

impl DualityReport {
    fn assemble(visibility: f64, distinguishability: f64, purity: f64, mode: ReportMode) -> Self {
        let residual =
            visibility * visibility + distinguishability * distinguishability - purity * purity;
        Self {
            visibility,
            distinguishability,
            purity,
            residual,
            mode,
        }
    }
}

/// Report for `state`; with `modes`, the visibility is `V_P` from a
/// [`DEFAULT_STOKES_GRID`]-point sweep.
pub fn duality_report(state: &SourceState, modes: Option<&ModeConfig>) -> Result<DualityReport> {
    duality_report_with_grid(state, modes, DEFAULT_STOKES_GRID)
}

pub fn duality_report_with_grid(
    state: &SourceState,
    modes: Option<&ModeConfig>,
    grid_points: usize,
) -> Result<DualityReport> {
    let d = distinguishability(state);
    let mu = purity(state);
    match modes {
        None => Ok(DualityReport::assemble(
            analytic_visibility(state, 1.0)?,
            d,
            mu,
            ReportMode::Scalar,
        )),
        Some(m) => {
            let v = polarization_visibilities(state, m, grid_points)?;
            Ok(DualityReport::assemble(
                v.v_total,
                d,
                mu,
                ReportMode::Polarized,
            ))
        }
    }
}

/// One report per mixing value along `γ = mixing · sqrt(p_a p_b)`.
pub fn purity_sweep(
    p_a: f64,
    mixing_values: &[f64],
    modes: Option<&ModeConfig>,
) -> Result<Vec<DualityReport>> {
    mixing_values
        .iter()
        .map(|&mixing| duality_report(&mixed_family(p_a, mixing, 0.0)?, modes))
        .collect()
}

/// Right triangle inscribed in the circle whose diameter is the purity.
///
/// The hypotenuse runs from `(0, 0)` to `(μ_S, 0)`; the apex sits at
/// `(D²/μ_S, V·D/μ_S)`, so the leg from the origin has length `D` and the
/// leg to `(μ_S, 0)` has length `V`. Reflecting across the x-axis gives the
/// second triangle of the same picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeometry {
    pub hypotenuse: f64,
    pub leg_v: f64,
    pub leg_d: f64,
    pub apex: [f64; 2],
}

impl TriangleGeometry {
    /// Distance of the apex from the centre minus the radius.
    pub fn circle_deviation(&self) -> f64 {
        let r = 0.5 * self.hypotenuse;
        (self.apex[0] - r).hypot(self.apex[1]) - r
    }
}

/// Residual allowed before a report no longer defines a triangle.
pub const TRIANGLE_RESIDUAL_TOL: f64 = 1e-9;

pub fn triangle(report: &DualityReport) -> Result<TriangleGeometry> {
    if !(report.residual.abs() <= TRIANGLE_RESIDUAL_TOL) {
        return Err(DualityError::ResidualTooLarge {
            residual: report.residual,
        });
    }
    let (v, d) = (report.visibility, report.distinguishability);
    // take the hypotenuse from the legs so the geometry is exact
    let h = v.hypot(d);
    if h == 0.0 {
        return Ok(TriangleGeometry {
            hypotenuse: 0.0,
            leg_v: 0.0,
            leg_d: 0.0,
            apex: [0.0, 0.0],
        });
    }
    Ok(TriangleGeometry {
        hypotenuse: h,
        leg_v: v,
        leg_d: d,
        apex: [d * d / h, v * d / h],
    })
}
