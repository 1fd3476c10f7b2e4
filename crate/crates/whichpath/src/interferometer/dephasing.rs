//! Gaussian dephasing of the path coherence, before the detector stage.
//!
//! Random phases written onto one arm before interference multiply the a-b
//! coherence block by the ensemble average of e^{i xi}; for xi ~ N(0, sigma^2)
//! that average is e^{-sigma^2/2}. Both the closed-form channel and a
//! finite-sample Monte Carlo ensemble are provided; the latter must converge
//! to the former at the 1/sqrt(n) rate.

use num_complex::Complex64;

use super::chain::{ChainState, Stage};
use crate::rng::normal_at;
use crate::statevec::{density_from, Component, DensityMatrix, Slit, Subsystem};
use crate::{Result, SimError};

fn slit_of(label: &crate::statevec::BasisLabel) -> Slit {
    match label.component_for(Subsystem::DiffractedRay) {
        Some(Component::Ray { slit, .. }) => slit,
        _ => unreachable!("diffracted labels carry ray components"),
    }
}

/// Scale the a-row/b-column coherence block by `factor` (and the mirror block
/// by its conjugate).
fn dephase_with_factor(cs: &ChainState, factor: Complex64) -> Result<DensityMatrix> {
    cs.require_stage(Stage::Diffracted)?;
    let rho = density_from(cs.state())?;
    let basis = rho.basis().clone();
    let mut m = rho.matrix().clone();
    for (i, li) in basis.labels().iter().enumerate() {
        for (j, lj) in basis.labels().iter().enumerate() {
            match (slit_of(li), slit_of(lj)) {
                (Slit::A, Slit::B) => m[(i, j)] *= factor.conj(),
                (Slit::B, Slit::A) => m[(i, j)] *= factor,
                _ => {}
            }
        }
    }
    DensityMatrix::new(basis, m)
}

/// Closed-form Gaussian dephasing channel at the diffracted stage.
pub fn apply_dephasing(cs: &ChainState, sigma: f64) -> Result<DensityMatrix> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(SimError::NegativeSigma(sigma));
    }
    let factor = Complex64::new((-sigma * sigma / 2.0).exp(), 0.0);
    dephase_with_factor(cs, factor)
}

/// Average of e^{i xi} over `n` explicit draws xi ~ N(0, sigma^2).
pub fn gaussian_phase_average(sigma: f64, n: u64, seed: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let xi = sigma * normal_at(seed, k, 0);
        acc += Complex64::from_polar(1.0, xi);
    }
    acc / n as f64
}

/// Monte Carlo dephasing: the exact ensemble average of |psi_xi><psi_xi| over
/// `n` phase draws. Only the coherence block depends on xi, so the average
/// factors through the empirical mean of e^{i xi}.
pub fn apply_dephasing_monte_carlo(
    cs: &ChainState,
    sigma: f64,
    n: u64,
    seed: u64,
) -> Result<DensityMatrix> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(SimError::NegativeSigma(sigma));
    }
    if n == 0 {
        return Err(SimError::InsufficientData(
            "monte carlo dephasing needs n >= 1 draws".into(),
        ));
    }
    let factor = gaussian_phase_average(sigma, n, seed);
    dephase_with_factor(cs, factor)
}
