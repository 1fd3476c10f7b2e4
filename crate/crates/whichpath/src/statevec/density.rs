//! Density matrices: pure-state promotion, mixtures, partial traces.
//!
//! Needed for the dephasing channel and for marginal statistics; everything
//! else in the chain stays in pure state vectors.

use ndarray::Array2;
use num_complex::Complex64;

use super::label::{Basis, BasisLabel, Subsystem};
use super::map::LinearMap;
use super::state::{check_same_basis, StateVector};
use crate::{Result, SimError};

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    basis: Basis,
    /// dim x dim, Hermitian, trace 1
    matrix: Array2<Complex64>,
}

impl DensityMatrix {
    /// Wrap a raw matrix after checking Hermiticity and unit trace.
    pub fn new(basis: Basis, matrix: Array2<Complex64>) -> Result<Self> {
        assert_eq!(matrix.nrows(), basis.len());
        assert_eq!(matrix.ncols(), basis.len());
        let rho = Self { basis, matrix };
        rho.check_valid(1e-12)?;
        Ok(rho)
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(basis: Basis, matrix: Array2<Complex64>) -> Self {
        Self { basis, matrix }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut d = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let e = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                if e > d {
                    d = e;
                }
            }
        }
        d
    }

    fn check_valid(&self, tol: f64) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > tol {
            return Err(SimError::InvalidDistribution(format!(
                "density matrix not Hermitian: defect {h}"
            )));
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > tol || t.im.abs() > tol {
            return Err(SimError::InvalidDistribution(format!(
                "density matrix trace {t} != 1"
            )));
        }
        Ok(())
    }

    /// True iff all eigenvalues exceed `-shift`, decided by attempting a
    /// Cholesky factorization of rho + shift*I.
    pub fn is_positive_semidefinite(&self, shift: f64) -> bool {
        let n = self.dim();
        let mut a = self.matrix.clone();
        for i in 0..n {
            a[(i, i)] += Complex64::new(shift, 0.0);
        }
        // in-place complex Cholesky; fails on a non-positive pivot
        for k in 0..n {
            let mut pivot = a[(k, k)].re;
            for j in 0..k {
                pivot -= a[(k, j)].norm_sqr();
            }
            if pivot <= 0.0 {
                return false;
            }
            let d = pivot.sqrt();
            a[(k, k)] = Complex64::new(d, 0.0);
            for i in (k + 1)..n {
                let mut v = a[(i, k)];
                for j in 0..k {
                    v -= a[(i, j)] * a[(k, j)].conj();
                }
                a[(i, k)] = v / d;
            }
        }
        true
    }

    /// Renormalize the trace to 1 (after a trace-decreasing map).
    pub fn trace_normalized(&self) -> Result<DensityMatrix> {
        let t = self.trace().re;
        if t < 1e-300 {
            return Err(SimError::ZeroProbability { prob: t });
        }
        Ok(DensityMatrix {
            basis: self.basis.clone(),
            matrix: self.matrix.mapv(|z| z / t),
        })
    }
}

/// rho = |s><s| for a normalized state.
pub fn density_from(s: &StateVector) -> Result<DensityMatrix> {
    s.check_normalized(1e-12)?;
    let n = s.dim();
    let mut matrix = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            matrix[(i, j)] = s.amps()[i] * s.amps()[j].conj();
        }
    }
    Ok(DensityMatrix {
        basis: s.basis().clone(),
        matrix,
    })
}

/// Convex mixture of density matrices on one basis.
pub fn mix(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    let (w0, first) = parts
        .first()
        .ok_or_else(|| SimError::InvalidMixture("empty mixture".into()))?;
    let mut total = 0.0;
    let mut matrix = Array2::zeros((first.dim(), first.dim()));
    let _ = w0;
    for (w, rho) in parts {
        if *w < 0.0 {
            return Err(SimError::InvalidMixture(format!("negative weight {w}")));
        }
        check_same_basis(&first.basis, &rho.basis)?;
        total += w;
        matrix = matrix + rho.matrix.mapv(|z| z * *w);
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(SimError::InvalidMixture(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    Ok(DensityMatrix {
        basis: first.basis.clone(),
        matrix,
    })
}

/// rho' = M rho M†.
pub fn apply_map_density(m: &LinearMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_same_basis(m.in_basis(), &rho.basis)?;
    let mr = m.matrix().dot(&rho.matrix);
    let matrix = mr.dot(&m.matrix().t().mapv(|z| z.conj()));
    Ok(DensityMatrix {
        basis: m.out_basis().clone(),
        matrix,
    })
}

/// Trace out every subsystem not in `keep`.
///
/// The kept marginal is defined over the distinct projections of the basis
/// labels onto `keep`; entries accumulate over matching traced-out parts.
pub fn partial_trace(rho: &DensityMatrix, keep: &[Subsystem]) -> Result<DensityMatrix> {
    let present = rho.basis.subsystems();
    if keep.is_empty() || !keep.iter().all(|s| present.contains(s)) {
        return Err(SimError::InvalidFactor(keep.to_vec()));
    }
    let traced: Vec<Subsystem> = present
        .iter()
        .copied()
        .filter(|s| !keep.contains(s))
        .collect();

    let kept_parts: Vec<BasisLabel> = rho.basis.labels().iter().map(|l| l.project(keep)).collect();
    let traced_parts: Vec<BasisLabel> = rho
        .basis
        .labels()
        .iter()
        .map(|l| l.project(&traced))
        .collect();

    let mut out_labels = kept_parts.clone();
    out_labels.sort();
    out_labels.dedup();
    let out_basis = Basis::new(out_labels);

    let mut matrix = Array2::zeros((out_basis.len(), out_basis.len()));
    for (i, _) in rho.basis.labels().iter().enumerate() {
        let oi = out_basis.index_of(&kept_parts[i]).expect("projected label");
        for (j, _) in rho.basis.labels().iter().enumerate() {
            if traced_parts[i] != traced_parts[j] {
                continue;
            }
            let oj = out_basis.index_of(&kept_parts[j]).expect("projected label");
            matrix[(oi, oj)] += rho.matrix[(i, j)];
        }
    }
    Ok(DensityMatrix {
        basis: out_basis,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::label::{ClickTag, Component, Slit};
    use crate::statevec::state::tensor;
    use ndarray::Array1;

    fn path_state(aa: Complex64, ab: Complex64) -> StateVector {
        StateVector::new(Basis::path(), Array1::from(vec![aa, ab]))
    }

    #[test]
    fn pure_density_of_path_a_is_diag_1_0() {
        let s = path_state(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let rho = density_from(&s).unwrap();
        assert_eq!(rho.matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(rho.matrix()[(1, 1)], Complex64::new(0.0, 0.0));
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        assert!(rho.is_positive_semidefinite(1e-10));
    }

    #[test]
    fn density_from_rejects_unnormalized() {
        let s = path_state(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(matches!(
            density_from(&s),
            Err(SimError::NotNormalized { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state_is_product_of_marginals() {
        let r = 1.0 / 2f64.sqrt();
        let p = path_state(Complex64::new(r, 0.0), Complex64::new(0.0, r));
        let c = StateVector::basis_ket(
            Basis::click_idle(),
            &Component::Click(ClickTag::Idle).into(),
        );
        let joint = density_from(&tensor(&p, &c).unwrap()).unwrap();
        let marg = partial_trace(&joint, &[Subsystem::Path]).unwrap();
        let direct = density_from(&p).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((marg.matrix()[(i, j)] - direct.matrix()[(i, j)]).norm() < 1e-14);
            }
        }
        // trace and Hermiticity preserved
        assert!((marg.trace().re - 1.0).abs() < 1e-14);
        assert!(marg.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_missing_subsystem() {
        let s = path_state(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let rho = density_from(&s).unwrap();
        assert!(matches!(
            partial_trace(&rho, &[Subsystem::Internal]),
            Err(SimError::InvalidFactor(_))
        ));
        assert!(partial_trace(&rho, &[]).is_err());
    }

    #[test]
    fn mixture_preserves_trace_and_hermiticity() {
        let sa = path_state(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let sb = path_state(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let rho = mix(&[
            (0.25, density_from(&sa).unwrap()),
            (0.75, density_from(&sb).unwrap()),
        ])
        .unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        assert_eq!(rho.hermiticity_defect(), 0.0);
        assert!(rho.is_positive_semidefinite(1e-10));
    }

    #[test]
    fn mixture_rejects_bad_weights() {
        let s = path_state(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let rho = density_from(&s).unwrap();
        assert!(mix(&[(0.5, rho.clone())]).is_err());
        assert!(mix(&[(-0.5, rho.clone()), (1.5, rho)]).is_err());
    }

    #[test]
    fn cholesky_psd_check_detects_negative_eigenvalue() {
        // diag(1.5, -0.5) has trace 1, Hermitian, but is not PSD
        let mut m = Array2::zeros((2, 2));
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        let rho = DensityMatrix::new_unchecked(Basis::path(), m);
        assert!(!rho.is_positive_semidefinite(1e-10));
        assert!(rho.is_positive_semidefinite(0.6));
    }

    #[test]
    fn slit_component_order_is_stable() {
        // guard: Path basis order (a then b) backs the 2x2 index assumptions above
        assert_eq!(
            Basis::path().label(0),
            &BasisLabel::single(Component::Path(Slit::A))
        );
    }
}
