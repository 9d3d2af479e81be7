//! Two-mode coherence: coherency matrix, Stokes parameters and the
//! polarization visibilities `V_0..V_3` with their total `V_P`.
//!
//! The same machinery applies to any pair of internal modes living in an
//! effective two-dimensional space, not only polarization.

use num_complex::Complex64;

use crate::emission::ModeConfig;
use crate::error::{DualityError, Result};
use crate::fringes::uniform_angles;
use crate::source_state::SourceState;
use crate::tolerance::EXACT_TOL;

/// Default θ grid for Stokes sweeps.
pub const DEFAULT_STOKES_GRID: usize = 4096;
/// Coarsest grid accepted by [`polarization_visibilities`].
pub const MIN_STOKES_GRID: usize = 256;

type M2 = [[Complex64; 2]; 2];

/// 2×2 Hermitian positive semidefinite second-order correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherencyMatrix(M2);

impl CoherencyMatrix {
    pub fn new(j: M2) -> Result<Self> {
        let deviation = (j[0][1] - j[1][0].conj())
            .norm()
            .max(j[0][0].im.abs())
            .max(j[1][1].im.abs());
        if !(deviation <= EXACT_TOL) {
            return Err(DualityError::NotHermitian { deviation });
        }
        let m = Self(j);
        let (lo, _) = m.eigenvalues();
        if lo < -EXACT_TOL {
            return Err(DualityError::NotPositive { min_eigenvalue: lo });
        }
        Ok(m)
    }

    pub fn entries(&self) -> &M2 {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0].re + self.0[1][1].re
    }

    /// Eigenvalues `(min, max)` of the Hermitian matrix.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let mean = 0.5 * (a + d);
        let r = (0.5 * (a - d)).hypot(self.0[0][1].norm());
        (mean - r, mean + r)
    }
}

fn outer(u: &[Complex64; 2], v: &[Complex64; 2]) -> M2 {
    [
        [u[0] * v[0].conj(), u[0] * v[1].conj()],
        [u[1] * v[0].conj(), u[1] * v[1].conj()],
    ]
}

/// `J(θ) = p_a |a⟩⟨a| + p_b |b⟩⟨b| + γ e^{iθ} |b⟩⟨a| + γ* e^{-iθ} |a⟩⟨b|`
/// for modes `a = eps_a`, `b = eps_b`. Its trace is the polarized detection
/// rate.
pub fn coherency(state: &SourceState, modes: &ModeConfig, theta: f64) -> CoherencyMatrix {
    let (a, b) = (modes.eps_a(), modes.eps_b());
    let aa = outer(&a, &a);
    let bb = outer(&b, &b);
    let ba = outer(&b, &a);
    let ab = outer(&a, &b);
    let g = state.gamma() * Complex64::from_polar(1.0, theta);
    let mut j = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            j[r][c] = aa[r][c] * state.p_a()
                + bb[r][c] * state.p_b()
                + g * ba[r][c]
                + g.conj() * ab[r][c];
        }
    }
    // symmetrize rounding so the result is exactly Hermitian
    j[0][0].im = 0.0;
    j[1][1].im = 0.0;
    let off = 0.5 * (j[0][1] + j[1][0].conj());
    j[0][1] = off;
    j[1][0] = off.conj();
    CoherencyMatrix(j)
}

/// Stokes parameters `(S0, S1, S2, S3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesParams {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesParams {
    pub fn as_array(&self) -> [f64; 4] {
        [self.s0, self.s1, self.s2, self.s3]
    }

    /// `S0² - (S1² + S2² + S3²)`, nonnegative for a physical field.
    pub fn polarization_gap(&self) -> f64 {
        self.s0 * self.s0 - (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3)
    }
}

/// `S0 = J11 + J22`, `S1 = J11 - J22`, `S2 = 2 Re J12`, `S3 = -2 Im J12`.
pub fn stokes_params(j: &CoherencyMatrix) -> StokesParams {
    let m = j.entries();
    StokesParams {
        s0: m[0][0].re + m[1][1].re,
        s1: m[0][0].re - m[1][1].re,
        s2: 2.0 * m[0][1].re,
        s3: -2.0 * m[0][1].im,
    }
}

/// Fringe visibilities of each Stokes parameter and their total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVisibilities {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    /// `sqrt(½ Σ V_j²)`
    pub v_total: f64,
}

impl StokesVisibilities {
    pub fn from_components(v: [f64; 4]) -> Self {
        let v_total = (0.5 * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        Self {
            v0: v[0],
            v1: v[1],
            v2: v[2],
            v3: v[3],
            v_total,
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.v0, self.v1, self.v2, self.v3]
    }
}

/// Stokes parameters over `n` uniform angles in `[0, 2π)`.
pub fn stokes_sweep(state: &SourceState, modes: &ModeConfig, n: usize) -> Vec<(f64, StokesParams)> {
    uniform_angles(n)
        .into_iter()
        .map(|t| (t, stokes_params(&coherency(state, modes, t))))
        .collect()
}

/// `V_j = (S_j^max - S_j^min) / (S_0^max + S_0^min)` over a dense θ grid
/// (extrema refined by local parabolic interpolation), and `V_P = sqrt(½ Σ V_j²)`.
///
/// Modes are used as given; the individual `V_1..V_3` depend on the basis
/// (use [`ModeConfig::to_canonical`] for the canonical split) while `V_0` and
/// `V_P` do not.
pub fn polarization_visibilities(
    state: &SourceState,
    modes: &ModeConfig,
    grid_points: usize,
) -> Result<StokesVisibilities> {
    if grid_points < MIN_STOKES_GRID {
        return Err(DualityError::TooFewAngles {
            required: MIN_STOKES_GRID,
            got: grid_points,
        });
    }
    let sweep = stokes_sweep(state, modes, grid_points);
    let mut max = [0.0; 4];
    let mut min = [0.0; 4];
    for k in 0..4 {
        let values: Vec<f64> = sweep.iter().map(|(_, p)| p.as_array()[k]).collect();
        (min[k], max[k]) = periodic_extrema(&values);
    }
    let denom = max[0] + min[0];
    if denom <= 0.0 {
        return Err(DualityError::DegenerateScan);
    }
    let v = std::array::from_fn(|k| (max[k] - min[k]) / denom);
    Ok(StokesVisibilities::from_components(v))
}

/// Min and max of a smooth periodic function sampled on a uniform grid.
///
/// Each grid extremum is refined by the vertex of the parabola through it and
/// its two neighbours, which takes the error from O(h²) to O(h⁴).
fn periodic_extrema(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let refine = |i: usize| {
        let (l, c, r) = (values[(i + n - 1) % n], values[i], values[(i + 1) % n]);
        let curvature = l - 2.0 * c + r;
        if curvature == 0.0 {
            c
        } else {
            c - (r - l) * (r - l) / (8.0 * curvature)
        }
    };
    let mut imax = 0;
    let mut imin = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[imax] {
            imax = i;
        }
        if *v < values[imin] {
            imin = i;
        }
    }
    let hi = refine(imax).max(values[imax]);
    let lo = refine(imin).min(values[imin]);
    (lo, hi)
}
