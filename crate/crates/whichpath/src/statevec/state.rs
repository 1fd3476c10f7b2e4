//! State vectors over labeled bases.

use ndarray::Array1;
use num_complex::Complex64;

use super::label::{Basis, BasisLabel};
use crate::{Result, SimError};

/// Complex amplitudes over a labeled, ordered orthonormal basis.
#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Basis,
    amps: Array1<Complex64>,
}

impl StateVector {
    pub fn new(basis: Basis, amps: Array1<Complex64>) -> Self {
        assert_eq!(basis.len(), amps.len(), "amplitude/basis length mismatch");
        Self { basis, amps }
    }

    /// Basis ket |label> within `basis`.
    pub fn basis_ket(basis: Basis, label: &BasisLabel) -> Self {
        let i = basis
            .index_of(label)
            .unwrap_or_else(|| panic!("label {label} not in basis"));
        let mut amps = Array1::zeros(basis.len());
        amps[i] = Complex64::new(1.0, 0.0);
        Self { basis, amps }
    }

    /// Zero vector on `basis`.
    pub fn zero(basis: Basis) -> Self {
        let amps = Array1::zeros(basis.len());
        Self { basis, amps }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amps(&self) -> &Array1<Complex64> {
        &self.amps
    }

    pub fn amp(&self, label: &BasisLabel) -> Complex64 {
        match self.basis.index_of(label) {
            Some(i) => self.amps[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Rescale to unit norm. Errors on (numerically) zero vectors.
    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(SimError::ZeroProbability { prob: 0.0 });
        }
        Ok(StateVector {
            basis: self.basis.clone(),
            amps: self.amps.mapv(|a| a / n),
        })
    }

    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let n2 = self.norm_sq();
        if (n2 - 1.0).abs() > tol {
            return Err(SimError::NotNormalized { norm_sq: n2 });
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex64) -> StateVector {
        StateVector {
            basis: self.basis.clone(),
            amps: self.amps.mapv(|a| a * c),
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        check_same_basis(&self.basis, &other.basis)?;
        Ok(StateVector {
            basis: self.basis.clone(),
            amps: &self.amps + &other.amps,
        })
    }

    /// Drop basis labels whose amplitude magnitude is at most `eps`.
    ///
    /// Useful after a projective collapse, where most amplitudes are exact
    /// zeros and the surviving support is the physically relevant subspace.
    pub fn restrict_to_support(&self, eps: f64) -> StateVector {
        let mut labels = Vec::new();
        let mut amps = Vec::new();
        for (i, label) in self.basis.labels().iter().enumerate() {
            if self.amps[i].norm() > eps {
                labels.push(label.clone());
                amps.push(self.amps[i]);
            }
        }
        StateVector {
            basis: Basis::new(labels),
            amps: Array1::from(amps),
        }
    }
}

/// First label where two bases disagree, as an error.
pub(crate) fn check_same_basis(a: &Basis, b: &Basis) -> Result<()> {
    if a.len() != b.len() {
        return Err(SimError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for (i, (la, lb)) in a.labels().iter().zip(b.labels()).enumerate() {
        if la != lb {
            return Err(SimError::BasisMismatch {
                index: i,
                expected: la.clone(),
                found: lb.clone(),
            });
        }
    }
    Ok(())
}

/// Tensor product of two states over disjoint subsystems.
///
/// The output basis is the ordered product (kept in canonical label order);
/// the amplitude on a merged label is the product of factor amplitudes.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let basis = a.basis.tensor(&b.basis)?;
    let mut amps = Array1::zeros(basis.len());
    for (i, la) in a.basis.labels().iter().enumerate() {
        for (j, lb) in b.basis.labels().iter().enumerate() {
            let merged = la.merge(lb)?;
            let k = basis.index_of(&merged).expect("product label in basis");
            amps[k] = a.amps[i] * b.amps[j];
        }
    }
    Ok(StateVector::new(basis, amps))
}

/// Inner product <a|b> over identical bases (conjugate-linear in `a`).
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_same_basis(&a.basis, &b.basis)?;
    Ok(a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}
