//! Linear maps between labeled bases, and the isometry check.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::label::Basis;
use super::state::{check_same_basis, StateVector};
use crate::Result;

/// Complex matrix with explicit input and output basis labels.
#[derive(Clone, Debug)]
pub struct LinearMap {
    in_basis: Basis,
    out_basis: Basis,
    /// out_dim x in_dim
    matrix: Array2<Complex64>,
}

/// Result of checking V†V = I.
#[derive(Clone, Copy, Debug)]
pub struct IsometryReport {
    /// max |(V†V - I)_ij|
    pub gram_defect: f64,
    pub passes: bool,
}

impl LinearMap {
    pub fn new(in_basis: Basis, out_basis: Basis, matrix: Array2<Complex64>) -> Self {
        assert_eq!(matrix.nrows(), out_basis.len(), "row/out-basis mismatch");
        assert_eq!(matrix.ncols(), in_basis.len(), "column/in-basis mismatch");
        Self {
            in_basis,
            out_basis,
            matrix,
        }
    }

    /// Build column-by-column: `column(j)` is the image of the j-th input ket.
    pub fn from_columns<F>(in_basis: Basis, out_basis: Basis, mut column: F) -> Self
    where
        F: FnMut(usize) -> Array1<Complex64>,
    {
        let mut matrix = Array2::zeros((out_basis.len(), in_basis.len()));
        for j in 0..in_basis.len() {
            let col = column(j);
            assert_eq!(col.len(), out_basis.len());
            for i in 0..out_basis.len() {
                matrix[(i, j)] = col[i];
            }
        }
        Self::new(in_basis, out_basis, matrix)
    }

    pub fn identity(basis: Basis) -> Self {
        let n = basis.len();
        let mut matrix = Array2::zeros((n, n));
        for i in 0..n {
            matrix[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Self::new(basis.clone(), basis, matrix)
    }

    pub fn in_basis(&self) -> &Basis {
        &self.in_basis
    }

    pub fn out_basis(&self) -> &Basis {
        &self.out_basis
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// self ∘ other (apply `other` first). Requires other.out_basis == self.in_basis.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        check_same_basis(&self.in_basis, &other.out_basis)?;
        Ok(LinearMap {
            in_basis: other.in_basis.clone(),
            out_basis: self.out_basis.clone(),
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    /// Kronecker product over disjoint subsystems, following the canonical
    /// label order of the product bases.
    pub fn tensor(&self, other: &LinearMap) -> Result<LinearMap> {
        let in_basis = self.in_basis.tensor(&other.in_basis)?;
        let out_basis = self.out_basis.tensor(&other.out_basis)?;
        let mut matrix = Array2::zeros((out_basis.len(), in_basis.len()));
        for (j1, lj1) in self.in_basis.labels().iter().enumerate() {
            for (j2, lj2) in other.in_basis.labels().iter().enumerate() {
                let jc = in_basis.index_of(&lj1.merge(lj2)?).expect("product label");
                for (i1, li1) in self.out_basis.labels().iter().enumerate() {
                    for (i2, li2) in other.out_basis.labels().iter().enumerate() {
                        let ic = out_basis.index_of(&li1.merge(li2)?).expect("product label");
                        matrix[(ic, jc)] = self.matrix[(i1, j1)] * other.matrix[(i2, j2)];
                    }
                }
            }
        }
        Ok(LinearMap::new(in_basis, out_basis, matrix))
    }

    pub fn adjoint(&self) -> LinearMap {
        LinearMap {
            in_basis: self.out_basis.clone(),
            out_basis: self.in_basis.clone(),
            matrix: self.matrix.t().mapv(|z| z.conj()),
        }
    }
}

/// Apply `m` to `s`. The state's basis must equal `m.in_basis` label-for-label.
pub fn apply_map(m: &LinearMap, s: &StateVector) -> Result<StateVector> {
    check_same_basis(&m.in_basis, s.basis())?;
    let amps = m.matrix.dot(s.amps());
    Ok(StateVector::new(m.out_basis.clone(), amps))
}

/// Gram defect of V†V against the identity on the input basis.
///
/// A map that sends two orthonormal inputs to the same output ray shows up
/// here as an off-diagonal Gram entry of modulus 1: the executable form of
/// "not reversible, hence cannot be unitary".
pub fn is_isometry(m: &LinearMap, tol: f64) -> IsometryReport {
    let k = m.in_basis.len();
    let mut defect = 0.0f64;
    for i in 0..k {
        let ci = m.matrix.column(i);
        for j in i..k {
            let cj = m.matrix.column(j);
            let g: Complex64 = ci.iter().zip(cj.iter()).map(|(x, y)| x.conj() * y).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            let d = (g - target).norm();
            if d > defect {
                defect = d;
            }
        }
    }
    IsometryReport {
        gram_defect: defect,
        passes: defect <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::label::{Component, Slit};
    use crate::statevec::state::inner;
    use crate::SimError;

    #[test]
    fn identity_map_preserves_state() {
        let b = Basis::diffracted(3);
        let id = LinearMap::identity(b.clone());
        let s = StateVector::basis_ket(
            b,
            &Component::Ray {
                slit: Slit::B,
                element: 1,
            }
            .into(),
        );
        let t = apply_map(&id, &s).unwrap();
        assert_eq!(inner(&s, &t).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn apply_names_first_mismatched_label() {
        let m = LinearMap::identity(Basis::path());
        let s = StateVector::zero(Basis::position(2));
        match apply_map(&m, &s) {
            Err(SimError::BasisMismatch {
                index, expected, ..
            }) => {
                assert_eq!(index, 0);
                assert_eq!(expected.to_string(), "Path:a");
            }
            other => panic!("expected BasisMismatch, got {other:?}"),
        }
    }

    #[test]
    fn identity_is_isometry_and_defect_zero() {
        let rep = is_isometry(&LinearMap::identity(Basis::position(5)), 1e-12);
        assert_eq!(rep.gram_defect, 0.0);
        assert!(rep.passes);
    }

    #[test]
    fn zero_dimensional_map_passes_trivially() {
        let empty = Basis::new(vec![]);
        let m = LinearMap::new(empty.clone(), empty, Array2::zeros((0, 0)));
        assert!(is_isometry(&m, 1e-12).passes);
    }

    #[test]
    fn compose_checks_inner_bases() {
        let a = LinearMap::identity(Basis::path());
        let b = LinearMap::identity(Basis::position(2));
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let a = LinearMap::identity(Basis::path());
        let b = LinearMap::identity(Basis::click_idle());
        let t = a.tensor(&b).unwrap();
        assert!(is_isometry(&t, 0.0).passes);
        assert_eq!(t.in_basis().len(), 2);
    }
}
