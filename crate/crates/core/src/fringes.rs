//! Visibility and distinguishability: closed forms, dense sweeps, and
//! estimators from simulated photon counts.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::emission::{detection_rate, detection_rate_polarized, ModeConfig};
use crate::error::{DualityError, Result};
use crate::source_state::SourceState;

/// Minimum grid for [`numeric_visibility`].
pub const MIN_SCAN_POINTS: usize = 64;
/// Minimum number of angles for simulation and fitting.
pub const MIN_COUNT_ANGLES: usize = 8;

/// `n` uniform angles over `[0, 2π)`.
pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

fn validate_angles(angles: &[f64], min: usize) -> Result<()> {
    if angles.len() < min {
        return Err(DualityError::TooFewAngles {
            required: min,
            got: angles.len(),
        });
    }
    if angles.iter().any(|t| !t.is_finite()) {
        return Err(DualityError::InvalidGrid("non-finite angle".into()));
    }
    if angles.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DualityError::InvalidGrid(
            "angles must be strictly increasing".into(),
        ));
    }
    let span = angles[angles.len() - 1] - angles[0];
    if span >= TAU {
        return Err(DualityError::InvalidGrid(format!(
            "angles span {span} rad, more than one period"
        )));
    }
    Ok(())
}

/// Detection rates tabulated over one period of the relative phase.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    angles: Vec<f64>,
    rates: Vec<f64>,
}

impl FringeScan {
    pub fn new(angles: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if angles.len() != rates.len() {
            return Err(DualityError::InvalidGrid(format!(
                "{} angles but {} rates",
                angles.len(),
                rates.len()
            )));
        }
        validate_angles(&angles, 4)?;
        if rates.iter().any(|r| !r.is_finite()) {
            return Err(DualityError::InvalidGrid("non-finite rate".into()));
        }
        Ok(Self { angles, rates })
    }

    /// Tabulates `rate(θ)` on the given angles.
    pub fn sample(angles: Vec<f64>, rate: impl Fn(f64) -> f64) -> Result<Self> {
        let rates = angles.iter().map(|&t| rate(t)).collect();
        Self::new(angles, rates)
    }

    /// Scalar fringe of `state` on `n` uniform angles.
    pub fn of_state(state: &SourceState, n: usize) -> Result<Self> {
        Self::sample(uniform_angles(n), |t| detection_rate(state, t))
    }

    /// Polarized fringe of `state` on `n` uniform angles.
    pub fn of_state_polarized(state: &SourceState, modes: &ModeConfig, n: usize) -> Result<Self> {
        Self::sample(uniform_angles(n), |t| {
            detection_rate_polarized(state, modes, t)
        })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Closed-form visibility `2|γ| |η|`.
pub fn analytic_visibility(state: &SourceState, eta_mag: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta_mag) {
        return Err(DualityError::OutOfRange {
            name: "|eta|",
            value: eta_mag,
            range: "[0, 1]",
        });
    }
    Ok(2.0 * state.gamma().norm() * eta_mag)
}

/// `(max - min) / (max + min)` over the scan.
pub fn numeric_visibility(scan: &FringeScan) -> Result<f64> {
    if scan.len() < MIN_SCAN_POINTS {
        return Err(DualityError::TooFewAngles {
            required: MIN_SCAN_POINTS,
            got: scan.len(),
        });
    }
    let max = scan.rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = scan.rates.iter().copied().fold(f64::INFINITY, f64::min);
    let denom = max + min;
    if denom <= 0.0 {
        return Err(DualityError::DegenerateScan);
    }
    Ok((max - min) / denom)
}

/// `D = |p_a - p_b|`.
pub fn distinguishability(state: &SourceState) -> f64 {
    (state.p_a() - state.p_b()).abs()
}

/// One simulated fringe scan plus which-path tallies.
#[derive(Debug, Clone, PartialEq)]
pub struct CountData {
    pub angles: Vec<f64>,
    pub counts: Vec<u64>,
    pub which_path_counts: Option<(u64, u64)>,
    pub seed: u64,
}

impl CountData {
    pub fn new(
        angles: &[f64],
        counts: Vec<u64>,
        which_path_counts: Option<(u64, u64)>,
        seed: u64,
    ) -> Result<Self> {
        if angles.len() != counts.len() {
            return Err(DualityError::InvalidGrid(format!(
                "{} angles but {} counts",
                angles.len(),
                counts.len()
            )));
        }
        if angles.iter().any(|t| !t.is_finite()) {
            return Err(DualityError::InvalidGrid("non-finite angle".into()));
        }
        Ok(Self {
            angles: angles.to_vec(),
            counts,
            which_path_counts,
            seed,
        })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Simulates a point-by-point fringe scan.
///
/// Counts at `θ_i` are Poisson with mean `mean_total · p_D(θ_i) / Σ_j p_D(θ_j)`;
/// which-path tallies are binomial over the total count with success
/// probability `p_a`. Output is a pure function of the arguments and `seed`.
pub fn simulate_counts(
    state: &SourceState,
    modes: Option<&ModeConfig>,
    angles: &[f64],
    mean_total: f64,
    seed: u64,
) -> Result<CountData> {
    validate_angles(angles, MIN_COUNT_ANGLES)?;
    if !(mean_total.is_finite() && mean_total > 0.0) {
        return Err(DualityError::OutOfRange {
            name: "mean_total",
            value: mean_total,
            range: "(0, inf)",
        });
    }
    let rates: Vec<f64> = angles
        .iter()
        .map(|&t| {
            match modes {
                Some(m) => detection_rate_polarized(state, m, t),
                None => detection_rate(state, t),
            }
            .max(0.0)
        })
        .collect();
    let norm: f64 = rates.iter().sum();
    if norm <= 0.0 {
        return Err(DualityError::DegenerateScan);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts: Vec<u64> = rates
        .iter()
        .map(|r| {
            let mean = mean_total * r / norm;
            if mean > 0.0 {
                // mean is finite and positive, so construction cannot fail
                Poisson::new(mean)
                    .expect("valid Poisson mean")
                    .sample(&mut rng) as u64
            } else {
                0
            }
        })
        .collect();
    let total: u64 = counts.iter().sum();
    let n_a = Binomial::new(total, state.p_a().clamp(0.0, 1.0))
        .expect("valid binomial parameters")
        .sample(&mut rng);
    CountData::new(angles, counts, Some((n_a, total - n_a)), seed)
}

/// Point estimate with a standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Least-squares fit of `a + b cos θ + c sin θ` with Poisson-weighted
/// (sandwich) parameter covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub covariance: Matrix3<f64>,
}

impl FringeFit {
    pub fn fit(angles: &[f64], counts: &[f64]) -> Result<Self> {
        if angles.len() != counts.len() {
            return Err(DualityError::InvalidGrid(format!(
                "{} angles but {} counts",
                angles.len(),
                counts.len()
            )));
        }
        if angles.len() < 3 {
            return Err(DualityError::SingularFit);
        }
        let rows: Vec<Vector3<f64>> = angles
            .iter()
            .map(|t| Vector3::new(1.0, t.cos(), t.sin()))
            .collect();
        let mut gram = Matrix3::zeros();
        let mut rhs = Vector3::zeros();
        for (x, &y) in rows.iter().zip(counts) {
            gram += x * x.transpose();
            rhs += x * y;
        }
        let eig = gram.symmetric_eigen().eigenvalues;
        let (lo, hi) = (eig.min(), eig.max());
        if !(hi > 0.0) || lo <= hi * 1e-12 {
            return Err(DualityError::SingularFit);
        }
        let inv = gram.try_inverse().ok_or(DualityError::SingularFit)?;
        let beta = inv * rhs;
        let (a, b, c) = (beta[0], beta[1], beta[2]);

        // Poisson variance = expected count, taken from the fitted model.
        let mut meat = Matrix3::zeros();
        for x in &rows {
            let var = x.dot(&beta).max(0.0);
            meat += x * x.transpose() * var;
        }
        let covariance = inv * meat * inv;
        Ok(Self {
            a,
            b,
            c,
            covariance,
        })
    }

    /// Fringe amplitude `sqrt(b² + c²)`.
    pub fn amplitude(&self) -> f64 {
        self.b.hypot(self.c)
    }

    /// `V̂ = sqrt(b² + c²) / a` with first-order propagated error.
    pub fn visibility(&self) -> Result<Estimate> {
        let a = self.a;
        if !(a > 0.0) {
            return Err(DualityError::UnphysicalFit { a });
        }
        let r = self.amplitude();
        let v = r / a;
        let cov = &self.covariance;
        let var = if r > 0.0 {
            let g = Vector3::new(-v / a, self.b / (a * r), self.c / (a * r));
            (g.transpose() * cov * g)[(0, 0)]
        } else {
            (cov[(1, 1)] + cov[(2, 2)]) / (a * a)
        };
        Ok(Estimate {
            estimate: v,
            stderr: var.max(0.0).sqrt(),
        })
    }
}

/// Visibility from counts via [`FringeFit`].
pub fn estimate_visibility(data: &CountData) -> Result<Estimate> {
    let angles = &data.angles;
    if angles.len() < MIN_COUNT_ANGLES {
        return Err(DualityError::TooFewAngles {
            required: MIN_COUNT_ANGLES,
            got: angles.len(),
        });
    }
    if data.total() == 0 {
        return Err(DualityError::UnphysicalFit { a: 0.0 });
    }
    let counts: Vec<f64> = data.counts.iter().map(|&n| n as f64).collect();
    FringeFit::fit(angles, &counts)?.visibility()
}

/// `D̂ = |n_a - n_b| / (n_a + n_b)` with binomial standard error.
pub fn estimate_distinguishability(data: &CountData) -> Result<Estimate> {
    match data.which_path_counts {
        Some((n_a, n_b)) if n_a + n_b > 0 => Ok(which_path_estimate(n_a, n_b)),
        _ => Err(DualityError::MissingWhichPath),
    }
}

pub(crate) fn which_path_estimate(n_a: u64, n_b: u64) -> Estimate {
    let total = (n_a + n_b) as f64;
    let p = n_a as f64 / total;
    Estimate {
        estimate: (n_a as f64 - n_b as f64).abs() / total,
        stderr: 2.0 * (p * (1.0 - p) / total).sqrt(),
    }
}
