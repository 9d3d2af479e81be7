//! The two-atom source: purifications, the reduced density matrix and its
//! purity.
//!
//! A [`Purification`] is the pure state
//! `c_a |e_A g_B⟩|m⟩ + c_b |g_A e_B⟩|n⟩` on atoms plus environment. Tracing
//! out the environment leaves the [`SourceState`]
//! `ρ = [[p_a, γ], [γ*, p_b]]` with `γ = c_a c_b* ⟨n|m⟩`.

use num_complex::Complex64;

use crate::error::{DualityError, Result};
use crate::tolerance::{check, renorm_warning, Check, EXACT_TOL};

/// Pure atom-plus-environment state whose partial trace is a [`SourceState`].
#[derive(Debug, Clone, PartialEq)]
pub struct Purification {
    c_a: Complex64,
    c_b: Complex64,
    m: Vec<Complex64>,
    n: Vec<Complex64>,
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub(crate) fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn normalized_vector(what: &'static str, mut v: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let ns = norm_sq(&v);
    match check(ns.sqrt() - 1.0) {
        Check::Exact => Ok(v),
        Check::Renormalize => {
            renorm_warning(what, ns.sqrt() - 1.0);
            let scale = ns.sqrt().recip();
            v.iter_mut().for_each(|z| *z *= scale);
            Ok(v)
        }
        Check::Reject => Err(DualityError::NotNormalized { what, norm_sq: ns }),
    }
}

impl Purification {
    /// Validates and builds a purification. Amplitudes and environment
    /// vectors within 1e-9 of unit norm are renormalized.
    pub fn new(
        c_a: Complex64,
        c_b: Complex64,
        m: Vec<Complex64>,
        n: Vec<Complex64>,
    ) -> Result<Self> {
        if m.len() != n.len() {
            return Err(DualityError::DimensionMismatch {
                m: m.len(),
                n: n.len(),
            });
        }
        if m.is_empty() {
            return Err(DualityError::EmptyEnvironment);
        }
        let amps = normalized_vector("amplitudes (c_a, c_b)", vec![c_a, c_b])?;
        let m = normalized_vector("environment state |m⟩", m)?;
        let n = normalized_vector("environment state |n⟩", n)?;
        Ok(Self {
            c_a: amps[0],
            c_b: amps[1],
            m,
            n,
        })
    }

    pub fn c_a(&self) -> Complex64 {
        self.c_a
    }

    pub fn c_b(&self) -> Complex64 {
        self.c_b
    }

    pub fn m(&self) -> &[Complex64] {
        &self.m
    }

    pub fn n(&self) -> &[Complex64] {
        &self.n
    }

    pub fn env_dim(&self) -> usize {
        self.m.len()
    }
}

/// Reduced two-atom density matrix `[[p_a, γ], [γ*, p_b]]` in the basis
/// `|e_A g_B⟩, |g_A e_B⟩`.
///
/// Construction enforces unit trace, nonnegative populations and the
/// Cauchy-Schwarz bound `|γ| ≤ sqrt(p_a p_b)`, which together make the
/// matrix a valid state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceState {
    p_a: f64,
    p_b: f64,
    gamma: Complex64,
}

impl SourceState {
    pub fn new(p_a: f64, p_b: f64, gamma: Complex64) -> Result<Self> {
        let invalid = || DualityError::InvalidPopulations { p_a, p_b };
        if !(p_a.is_finite() && p_b.is_finite() && gamma.re.is_finite() && gamma.im.is_finite()) {
            return Err(invalid());
        }
        if p_a < -EXACT_TOL || p_b < -EXACT_TOL {
            return Err(invalid());
        }
        let (mut p_a, mut p_b) = (p_a.max(0.0), p_b.max(0.0));
        match check(p_a + p_b - 1.0) {
            Check::Exact => {}
            Check::Renormalize => {
                renorm_warning("populations p_a + p_b", p_a + p_b - 1.0);
                let total = p_a + p_b;
                p_a /= total;
                p_b /= total;
            }
            Check::Reject => return Err(invalid()),
        }

        let bound = (p_a * p_b).sqrt();
        let mut gamma = gamma;
        let excess = gamma.norm() - bound;
        if excess > EXACT_TOL {
            match check(excess) {
                Check::Renormalize => {
                    renorm_warning("|gamma| above sqrt(p_a p_b)", excess);
                    gamma = Complex64::from_polar(bound, gamma.arg());
                }
                _ => {
                    return Err(DualityError::CauchySchwarz {
                        gamma_abs: gamma.norm(),
                        bound,
                    })
                }
            }
        }
        Ok(Self { p_a, p_b, gamma })
    }

    /// State with `p_b = 1 - p_a`.
    pub fn from_population(p_a: f64, gamma: Complex64) -> Result<Self> {
        Self::new(p_a, 1.0 - p_a, gamma)
    }

    /// `p_a = p_b = 1/2`, `γ = 0`.
    pub fn maximally_mixed() -> Self {
        Self {
            p_a: 0.5,
            p_b: 0.5,
            gamma: Complex64::new(0.0, 0.0),
        }
    }

    pub fn p_a(&self) -> f64 {
        self.p_a
    }

    pub fn p_b(&self) -> f64 {
        self.p_b
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    /// Phase `φ` of `γ = |γ| e^{iφ}`.
    pub fn phase(&self) -> f64 {
        self.gamma.arg()
    }

    /// Density matrix, row-major.
    pub fn density_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.p_a, 0.0), self.gamma],
            [self.gamma.conj(), Complex64::new(self.p_b, 0.0)],
        ]
    }

    pub fn determinant(&self) -> f64 {
        self.p_a * self.p_b - self.gamma.norm_sqr()
    }

    /// `Tr ρ² = p_a² + p_b² + 2|γ|²`.
    pub fn trace_rho_sq(&self) -> f64 {
        self.p_a * self.p_a + self.p_b * self.p_b + 2.0 * self.gamma.norm_sqr()
    }

    /// Whether `|γ|` saturates the Cauchy-Schwarz bound.
    pub fn is_pure(&self) -> bool {
        self.determinant().abs() <= EXACT_TOL
    }
}

/// Reduced state of a purification: `p_a = |c_a|²`, `p_b = |c_b|²`,
/// `γ = c_a c_b* ⟨n|m⟩`.
pub fn trace_out(purification: &Purification) -> Result<SourceState> {
    let Purification { c_a, c_b, m, n } = purification;
    let gamma = c_a * c_b.conj() * inner(n, m);
    SourceState::new(c_a.norm_sqr(), c_b.norm_sqr(), gamma)
}

/// Normalized purity `μ_S = sqrt(2 Tr ρ² - 1)`, in `[0, 1]`.
pub fn purity(state: &SourceState) -> f64 {
    (2.0 * state.trace_rho_sq() - 1.0).clamp(0.0, 1.0).sqrt()
}

/// The three equal forms of `V² + D²` for a source state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityForms {
    /// `(p_a - p_b)² + 4|γ|²`
    pub lhs: f64,
    /// `1 - 4 det ρ`
    pub det_form: f64,
    /// `2 Tr ρ² - 1`
    pub trace_form: f64,
}

impl IdentityForms {
    pub fn max_spread(&self) -> f64 {
        let v = [self.lhs, self.det_form, self.trace_form];
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

pub fn duality_sum_identity(state: &SourceState) -> IdentityForms {
    let d = state.p_a - state.p_b;
    IdentityForms {
        lhs: d * d + 4.0 * state.gamma.norm_sqr(),
        det_form: 1.0 - 4.0 * state.determinant(),
        trace_form: 2.0 * state.trace_rho_sq() - 1.0,
    }
}

/// Sweep family `γ = mixing · sqrt(p_a p_b) · e^{i phase}`.
///
/// `mixing = 1` is pure, `mixing = 0` fully dephased.
pub fn mixed_family(p_a: f64, mixing: f64, phase: f64) -> Result<SourceState> {
    if !(0.0..=1.0).contains(&p_a) {
        return Err(DualityError::OutOfRange {
            name: "p_a",
            value: p_a,
            range: "[0, 1]",
        });
    }
    if !(0.0..=1.0).contains(&mixing) {
        return Err(DualityError::OutOfRange {
            name: "mixing",
            value: mixing,
            range: "[0, 1]",
        });
    }
    if !phase.is_finite() {
        return Err(DualityError::OutOfRange {
            name: "phase",
            value: phase,
            range: "finite radians",
        });
    }
    let p_b = 1.0 - p_a;
    let gamma = Complex64::from_polar(mixing * (p_a * p_b).sqrt(), phase);
    SourceState::new(p_a, p_b, gamma)
}
