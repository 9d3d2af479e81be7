//! Wave-particle duality of a photon emitted by one of two entangled
//! two-level atoms.
//!
//! The source is a (possibly mixed) two-atom state
//! `ρ = [[p_a, γ], [γ*, p_b]]` in the basis `|e_A g_B⟩, |g_A e_B⟩`. Everything
//! the photon shows about itself derives from it:
//!
//! * visibility `V = 2|γ|` of the single-photon fringe,
//! * distinguishability `D = |p_a - p_b|` of the two emission paths,
//! * normalized purity `μ_S = sqrt(2 Tr ρ² - 1)` of the source,
//!
//! tied together by `V² + D² = μ_S²`. When the two atoms emit into different
//! polarization (or other internal) modes, the ordinary visibility drops but
//! the total modulated visibility `V_P` built from Stokes-parameter fringes
//! restores the same identity.
//!
//! Modules:
//! * [`source_state`]: purifications, partial trace, purity.
//! * [`emission`]: geometry to relative phase, closed-form detection rates.
//! * [`fringes`]: visibility and distinguishability, analytic and from counts.
//! * [`stokes`]: coherency matrix, Stokes parameters, polarization visibilities.
//! * [`report`]: duality reports, purity sweeps, triangle geometry.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod emission;
pub mod error;
pub mod fringes;
pub mod report;
pub mod source_state;
pub mod stokes;
mod tolerance;

pub use num_complex::Complex64;

pub use emission::{
    detection_rate, detection_rate_polarized, relative_phase, EmissionGeometry, ModeConfig,
};
pub use error::{DualityError, Result};
pub use fringes::{
    analytic_visibility, distinguishability, estimate_distinguishability, estimate_visibility,
    numeric_visibility, simulate_counts, uniform_angles, CountData, Estimate, FringeFit,
    FringeScan,
};
pub use report::{
    duality_report, purity_sweep, triangle, DualityReport, ReportMode, TriangleGeometry,
};
pub use source_state::{
    duality_sum_identity, mixed_family, purity, trace_out, IdentityForms, Purification, SourceState,
};
pub use stokes::{
    coherency, polarization_visibilities, stokes_params, CoherencyMatrix, StokesParams,
    StokesVisibilities, DEFAULT_STOKES_GRID,
};
pub use tolerance::{EXACT_TOL, RENORM_TOL};
