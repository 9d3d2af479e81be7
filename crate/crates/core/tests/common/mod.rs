#![allow(dead_code)]

use duality_core::{mixed_family, Complex64, ModeConfig, Purification, SourceState};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_purification<R: Rng>(rng: &mut R, max_dim: usize) -> Purification {
    let dim = rng.random_range(1..=max_dim);
    let amps = random_unit_vector(rng, 2);
    let m = random_unit_vector(rng, dim);
    let n = random_unit_vector(rng, dim);
    Purification::new(amps[0], amps[1], m, n).expect("random purification is valid")
}

pub fn random_state<R: Rng>(rng: &mut R) -> SourceState {
    let p_a = rng.random::<f64>();
    let mixing = rng.random::<f64>();
    let phase = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    mixed_family(p_a, mixing, phase).expect("random state is valid")
}

pub fn random_modes<R: Rng>(rng: &mut R) -> ModeConfig {
    let a = random_unit_vector(rng, 2);
    let b = random_unit_vector(rng, 2);
    ModeConfig::new([a[0], a[1]], [b[0], b[1]]).expect("random modes are valid")
}

/// Canonical-basis modes with the given overlap magnitude and random phases.
pub fn random_canonical_modes<R: Rng>(rng: &mut R, eta_mag: f64) -> ModeConfig {
    let delta = rng.random_range(-3.0..3.0);
    let chi = rng.random_range(-3.0..3.0);
    ModeConfig::canonical(Complex64::from_polar(eta_mag, delta), chi).expect("canonical modes")
}

/// Random 2×2 unitary from a normalized column pair.
pub fn random_unitary<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let u = random_unit_vector(rng, 2);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    [[u[0], -u[1].conj() * phase], [u[1], u[0].conj() * phase]]
}
