//! From emitter geometry to the relative phase, and closed-form
//! single-photon detection rates.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{DualityError, Result};
use crate::source_state::{inner, SourceState};
use crate::tolerance::{check, renorm_warning, Check};

type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Reduce an angle to `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// Positions of the two atoms, detector direction, wavenumber and initial
/// atomic phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionGeometry {
    k: f64,
    r_a: Vec3,
    r_b: Vec3,
    r_hat: Vec3,
    phi_a: f64,
    phi_b: f64,
}

impl EmissionGeometry {
    pub fn new(k: f64, r_a: Vec3, r_b: Vec3, r_hat: Vec3, phi_a: f64, phi_b: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(DualityError::OutOfRange {
                name: "k",
                value: k,
                range: "(0, inf)",
            });
        }
        let finite = r_a.iter().chain(&r_b).chain(&r_hat).all(|x| x.is_finite())
            && phi_a.is_finite()
            && phi_b.is_finite();
        if !finite {
            return Err(DualityError::OutOfRange {
                name: "geometry",
                value: f64::NAN,
                range: "finite coordinates and phases",
            });
        }
        let norm = dot(&r_hat, &r_hat).sqrt();
        let r_hat = match check(norm - 1.0) {
            Check::Exact => r_hat,
            Check::Renormalize => {
                renorm_warning("detector direction r_hat", norm - 1.0);
                r_hat.map(|x| x / norm)
            }
            Check::Reject => {
                return Err(DualityError::NotNormalized {
                    what: "detector direction r_hat",
                    norm_sq: norm * norm,
                })
            }
        };
        Ok(Self {
            k,
            r_a,
            r_b,
            r_hat,
            phi_a,
            phi_b,
        })
    }

    /// Same as [`EmissionGeometry::new`] with `k = 2π / wavelength`.
    pub fn from_wavelength(
        wavelength: f64,
        r_a: Vec3,
        r_b: Vec3,
        r_hat: Vec3,
        phi_a: f64,
        phi_b: f64,
    ) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(DualityError::OutOfRange {
                name: "wavelength",
                value: wavelength,
                range: "(0, inf)",
            });
        }
        Self::new(TAU / wavelength, r_a, r_b, r_hat, phi_a, phi_b)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn r_a(&self) -> Vec3 {
        self.r_a
    }

    pub fn r_b(&self) -> Vec3 {
        self.r_b
    }

    pub fn r_hat(&self) -> Vec3 {
        self.r_hat
    }

    pub fn phi_a(&self) -> f64 {
        self.phi_a
    }

    pub fn phi_b(&self) -> f64 {
        self.phi_b
    }
}

/// `θ = k r̂·(R_B - R_A) + φ_B - φ_A`, wrapped to `(-π, π]`.
pub fn relative_phase(geom: &EmissionGeometry) -> f64 {
    let baseline = [
        geom.r_b[0] - geom.r_a[0],
        geom.r_b[1] - geom.r_a[1],
        geom.r_b[2] - geom.r_a[2],
    ];
    wrap_phase(geom.k * dot(&geom.r_hat, &baseline) + geom.phi_b - geom.phi_a)
}

/// Emission modes of the two atoms in an effective two-dimensional internal
/// space (polarization, or any grouped set of internal degrees of freedom).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeConfig {
    eps_a: [Complex64; 2],
    eps_b: [Complex64; 2],
}

fn unit_mode(what: &'static str, v: [Complex64; 2]) -> Result<[Complex64; 2]> {
    let ns = v[0].norm_sqr() + v[1].norm_sqr();
    let norm = ns.sqrt();
    match check(norm - 1.0) {
        Check::Exact => Ok(v),
        Check::Renormalize => {
            renorm_warning(what, norm - 1.0);
            Ok(v.map(|z| z / norm))
        }
        Check::Reject => Err(DualityError::NotNormalized { what, norm_sq: ns }),
    }
}

impl ModeConfig {
    pub fn new(eps_a: [Complex64; 2], eps_b: [Complex64; 2]) -> Result<Self> {
        Ok(Self {
            eps_a: unit_mode("mode eps_a", eps_a)?,
            eps_b: unit_mode("mode eps_b", eps_b)?,
        })
    }

    /// Both atoms emit into the same mode (`η = 1`).
    pub fn identical() -> Self {
        let e = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        Self { eps_a: e, eps_b: e }
    }

    /// Canonical pair `eps_a = (1, 0)`,
    /// `eps_b = (η, sqrt(1 - |η|²) e^{iχ})`.
    pub fn canonical(eta: Complex64, chi: f64) -> Result<Self> {
        let mag = eta.norm();
        if !(mag <= 1.0 + crate::tolerance::RENORM_TOL) || !chi.is_finite() {
            return Err(DualityError::OutOfRange {
                name: "|eta|",
                value: mag,
                range: "[0, 1]",
            });
        }
        let eta = if mag > 1.0 { eta / mag } else { eta };
        let rest = (1.0 - eta.norm_sqr()).max(0.0).sqrt();
        Ok(Self {
            eps_a: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            eps_b: [eta, Complex64::from_polar(rest, chi)],
        })
    }

    pub fn eps_a(&self) -> [Complex64; 2] {
        self.eps_a
    }

    pub fn eps_b(&self) -> [Complex64; 2] {
        self.eps_b
    }

    /// `η = ⟨eps_a|eps_b⟩ = |η| e^{iΔ}`.
    pub fn overlap(&self) -> Complex64 {
        inner(&self.eps_a, &self.eps_b)
    }

    /// Applies the same 2×2 matrix (row-major) to both modes.
    pub fn transformed(&self, u: &[[Complex64; 2]; 2]) -> Result<Self> {
        let apply = |v: [Complex64; 2]| {
            [
                u[0][0] * v[0] + u[0][1] * v[1],
                u[1][0] * v[0] + u[1][1] * v[1],
            ]
        };
        Self::new(apply(self.eps_a), apply(self.eps_b))
    }

    /// The unitary `[[a1*, a2*], [-a2, a1]]` that maps `eps_a` to `(1, 0)`.
    pub fn canonicalizing_unitary(&self) -> [[Complex64; 2]; 2] {
        let [a1, a2] = self.eps_a;
        [[a1.conj(), a2.conj()], [-a2, a1]]
    }

    /// Rotates the pair into the canonical basis, where
    /// `eps_a = (1, 0)` and `eps_b = (η, sqrt(1 - |η|²) e^{iχ})`. The overlap
    /// is unchanged; `χ` is whatever residual phase the rotation leaves.
    pub fn to_canonical(&self) -> Self {
        let u = self.canonicalizing_unitary();
        // unitary maps unit vectors to unit vectors, so no re-validation
        let apply = |v: [Complex64; 2]| {
            [
                u[0][0] * v[0] + u[0][1] * v[1],
                u[1][0] * v[0] + u[1][1] * v[1],
            ]
        };
        let mut eps_b = apply(self.eps_b);
        eps_b[0] = self.overlap();
        Self {
            eps_a: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            eps_b,
        }
    }

    /// Residual phase `χ` of the second component of `eps_b` in canonical form.
    pub fn residual_phase(&self) -> f64 {
        self.to_canonical().eps_b[1].arg()
    }
}

/// Relative detection rate `p_a + p_b + 2|γ| cos(θ + φ)`.
///
/// This is an unnormalized intensity in `[1 - 2|γ|, 1 + 2|γ|]`, not a
/// probability; its mean over a period is 1.
pub fn detection_rate(state: &SourceState, theta: f64) -> f64 {
    let g = state.gamma();
    state.p_a() + state.p_b() + 2.0 * g.norm() * (theta + g.arg()).cos()
}

/// Relative detection rate with emission modes:
/// `p_a + p_b + 2|γη| cos(θ + φ + Δ)`, `η = ⟨eps_a|eps_b⟩ = |η| e^{iΔ}`.
pub fn detection_rate_polarized(state: &SourceState, modes: &ModeConfig, theta: f64) -> f64 {
    let ge = state.gamma() * modes.overlap();
    state.p_a() + state.p_b() + 2.0 * ge.norm() * (theta + ge.arg()).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn relative_phase_examples() {
        let g = EmissionGeometry::new(
            3.0,
            [1.0, 2.0, 3.0],
            [1.0, 2.0, 3.0],
            [0.0, 0.0, 1.0],
            0.4,
            0.4,
        )
        .unwrap();
        assert_eq!(relative_phase(&g), 0.0);

        let g = EmissionGeometry::from_wavelength(
            1.0,
            [0.0; 3],
            [0.5, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            0.0,
            0.0,
        )
        .unwrap();
        assert_abs_diff_eq!(relative_phase(&g), PI, epsilon = 1e-12);

        let g = EmissionGeometry::new(5.0, [0.0; 3], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.1, 0.4)
            .unwrap();
        assert_abs_diff_eq!(relative_phase(&g), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_abs_diff_eq!(wrap_phase(-PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(7.0), 7.0 - TAU, epsilon = 1e-15);
    }

    #[test]
    fn geometry_validation() {
        assert!(matches!(
            EmissionGeometry::new(1.0, [0.0; 3], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], 0.0, 0.0),
            Err(DualityError::NotNormalized { .. })
        ));
        assert!(EmissionGeometry::new(0.0, [0.0; 3], [0.0; 3], [1.0, 0.0, 0.0], 0.0, 0.0).is_err());
        assert!(EmissionGeometry::from_wavelength(
            -1.0,
            [0.0; 3],
            [0.0; 3],
            [1.0, 0.0, 0.0],
            0.0,
            0.0
        )
        .is_err());
    }

    #[test]
    fn detection_rate_examples() {
        let flat = SourceState::new(0.7, 0.3, c(0.0, 0.0)).unwrap();
        for i in 0..16 {
            assert_eq!(detection_rate(&flat, i as f64 * 0.4), 1.0);
        }
        let pure = SourceState::new(0.5, 0.5, c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(detection_rate(&pure, 0.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(detection_rate(&pure, PI), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polarized_rate_examples() {
        let s = SourceState::new(0.5, 0.5, Complex64::from_polar(0.5, 0.7)).unwrap();
        let same = ModeConfig::identical();
        for i in 0..32 {
            let t = i as f64 * 0.2;
            assert_abs_diff_eq!(
                detection_rate_polarized(&s, &same, t),
                detection_rate(&s, t),
                epsilon = 1e-15
            );
        }
        let orth = ModeConfig::new([c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(orth.overlap(), c(0.0, 0.0));
        assert_abs_diff_eq!(
            detection_rate_polarized(&s, &orth, 1.3),
            1.0,
            epsilon = 1e-15
        );

        let s = SourceState::new(0.5, 0.5, c(0.5, 0.0)).unwrap();
        let m = ModeConfig::canonical(c(0.8, 0.0), 0.0).unwrap();
        assert_abs_diff_eq!(detection_rate_polarized(&s, &m, 0.0), 1.8, epsilon = 1e-12);
    }

    #[test]
    fn canonical_form_preserves_overlap() {
        let s = 0.5f64.sqrt();
        let m = ModeConfig::new([c(s, 0.0), c(0.0, s)], [c(0.6, 0.0), c(0.0, -0.8)]).unwrap();
        let can = m.to_canonical();
        assert_abs_diff_eq!((can.overlap() - m.overlap()).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(can.eps_a(), [c(1.0, 0.0), c(0.0, 0.0)]);
        let b = can.eps_b();
        assert_abs_diff_eq!(b[0].norm_sqr() + b[1].norm_sqr(), 1.0, epsilon = 1e-14);

        let chi = 0.9;
        let m = ModeConfig::canonical(Complex64::from_polar(0.3, 1.0), chi).unwrap();
        assert_abs_diff_eq!(m.residual_phase(), chi, epsilon = 1e-14);
    }

    #[test]
    fn mode_validation() {
        assert!(ModeConfig::new([c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(ModeConfig::canonical(c(1.5, 0.0), 0.0).is_err());
    }
}
