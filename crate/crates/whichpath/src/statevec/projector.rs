//! Complete families of orthogonal projectors and Born-rule measurement.

use std::fmt;

use ndarray::Array1;
use num_complex::Complex64;

use super::density::DensityMatrix;
use super::label::{Basis, ClickTag, Subsystem};
use super::state::{check_same_basis, StateVector};
use crate::rng::CounterRng;
use crate::{Result, SimError};

/// Label attached to a measurement outcome.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MeasureOutcome {
    /// No click (detector still idle).
    Idle,
    /// Click at element `j`.
    Fired(usize),
    /// Internal mode A (slit-a record in the exact chain).
    ModeA,
    /// Internal mode B.
    ModeB,
    /// Rotated internal basis, (|A> + e^{i phi}|B>)/sqrt(2).
    Plus,
    /// Rotated internal basis, (|A> - e^{i phi}|B>)/sqrt(2).
    Minus,
}

impl fmt::Display for MeasureOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureOutcome::Idle => write!(f, "idle"),
            MeasureOutcome::Fired(j) => write!(f, "fired(x{j})"),
            MeasureOutcome::ModeA => write!(f, "A"),
            MeasureOutcome::ModeB => write!(f, "B"),
            MeasureOutcome::Plus => write!(f, "plus"),
            MeasureOutcome::Minus => write!(f, "minus"),
        }
    }
}

/// One outcome: a label plus an orthonormal set spanning its subspace.
#[derive(Clone, Debug)]
pub struct ProjectorOutcome {
    pub label: MeasureOutcome,
    /// Vectors on the parent basis; may be empty (zero projector).
    pub vectors: Vec<Array1<Complex64>>,
}

/// A labeled complete family of mutually orthogonal projectors.
#[derive(Clone, Debug)]
pub struct ProjectorSet {
    basis: Basis,
    outcomes: Vec<ProjectorOutcome>,
}

impl ProjectorSet {
    /// Validates orthonormality of all spanning vectors and completeness
    /// (the vectors together form an orthonormal basis of `basis`).
    pub fn new(basis: Basis, outcomes: Vec<ProjectorOutcome>) -> Result<Self> {
        let dim = basis.len();
        let all: Vec<&Array1<Complex64>> = outcomes.iter().flat_map(|o| o.vectors.iter()).collect();
        let mut defect = 0.0f64;
        for (i, vi) in all.iter().enumerate() {
            assert_eq!(vi.len(), dim, "projector vector length mismatch");
            for (j, vj) in all.iter().enumerate().skip(i) {
                let g: Complex64 = vi.iter().zip(vj.iter()).map(|(x, y)| x.conj() * y).sum();
                let t = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((g - t).norm());
            }
        }
        if defect > 1e-12 {
            return Err(SimError::NonOrthonormalProjectors { defect });
        }
        if all.len() != dim {
            return Err(SimError::IncompleteProjectors {
                defect: (dim as f64 - all.len() as f64).abs(),
            });
        }
        Ok(Self { basis, outcomes })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn outcomes(&self) -> &[ProjectorOutcome] {
        &self.outcomes
    }

    /// "Where did the particle land?": one outcome per distinct click tag,
    /// spanned by the basis kets carrying that tag.
    pub fn click_measurement(basis: &Basis) -> Result<ProjectorSet> {
        let dim = basis.len();
        let mut tags: Vec<ClickTag> = Vec::new();
        for l in basis.labels() {
            match l.component_for(Subsystem::Click) {
                Some(super::label::Component::Click(t)) => {
                    if !tags.contains(&t) {
                        tags.push(t);
                    }
                }
                _ => {
                    return Err(SimError::InvalidFactor(vec![Subsystem::Click]));
                }
            }
        }
        tags.sort();
        let outcomes = tags
            .into_iter()
            .map(|tag| {
                let vectors = basis
                    .labels()
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| {
                        matches!(l.component_for(Subsystem::Click),
                                 Some(super::label::Component::Click(t)) if t == tag)
                    })
                    .map(|(i, _)| {
                        let mut v = Array1::zeros(dim);
                        v[i] = Complex64::new(1.0, 0.0);
                        v
                    })
                    .collect();
                ProjectorOutcome {
                    label: match tag {
                        ClickTag::Idle => MeasureOutcome::Idle,
                        ClickTag::Fired(j) => MeasureOutcome::Fired(j),
                    },
                    vectors,
                }
            })
            .collect();
        ProjectorSet::new(basis.clone(), outcomes)
    }

    /// {|v_a(x)><v_a(x)|, |v_b(x)><v_b(x)|} on a one-element internal qubit.
    pub fn internal_ab(element: usize) -> ProjectorSet {
        let basis = Basis::internal_pair(element);
        let kets = [(MeasureOutcome::ModeA, 0), (MeasureOutcome::ModeB, 1)];
        let outcomes = kets
            .map(|(label, i)| {
                let mut v = Array1::zeros(2);
                v[i] = Complex64::new(1.0, 0.0);
                ProjectorOutcome {
                    label,
                    vectors: vec![v],
                }
            })
            .to_vec();
        ProjectorSet::new(basis, outcomes).expect("internal AB projectors")
    }

    /// Rotated internal basis |+-> = (|A> +- e^{i phi} |B>)/sqrt(2).
    pub fn internal_rotated(element: usize, phi: f64) -> ProjectorSet {
        let basis = Basis::internal_pair(element);
        let r = 1.0 / 2f64.sqrt();
        let phase = Complex64::from_polar(r, phi);
        let plus = Array1::from(vec![Complex64::new(r, 0.0), phase]);
        let minus = Array1::from(vec![Complex64::new(r, 0.0), -phase]);
        ProjectorSet::new(
            basis,
            vec![
                ProjectorOutcome {
                    label: MeasureOutcome::Plus,
                    vectors: vec![plus],
                },
                ProjectorOutcome {
                    label: MeasureOutcome::Minus,
                    vectors: vec![minus],
                },
            ],
        )
        .expect("rotated internal projectors")
    }

    /// Apply the projector of outcome `k`: sum_v |v><v|s> (unnormalized).
    pub fn project(&self, k: usize, s: &StateVector) -> Result<StateVector> {
        check_same_basis(&self.basis, s.basis())?;
        let mut amps = Array1::zeros(self.basis.len());
        for v in &self.outcomes[k].vectors {
            let c: Complex64 = v
                .iter()
                .zip(s.amps().iter())
                .map(|(x, y)| x.conj() * y)
                .sum();
            amps = amps + v.mapv(|z| z * c);
        }
        Ok(StateVector::new(self.basis.clone(), amps))
    }
}

/// Exact Born-rule distribution over outcomes, no sampling.
pub fn outcome_distribution(
    s: &StateVector,
    p: &ProjectorSet,
) -> Result<Vec<(MeasureOutcome, f64)>> {
    s.check_normalized(1e-12)?;
    check_same_basis(p.basis(), s.basis())?;
    Ok(p.outcomes
        .iter()
        .map(|o| {
            let prob: f64 = o
                .vectors
                .iter()
                .map(|v| {
                    let c: Complex64 = v
                        .iter()
                        .zip(s.amps().iter())
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                    c.norm_sqr()
                })
                .sum();
            (o.label, prob)
        })
        .collect())
}

/// Born-rule distribution for a density matrix: p_k = sum_v <v|rho|v>.
pub fn outcome_distribution_rho(
    rho: &DensityMatrix,
    p: &ProjectorSet,
) -> Result<Vec<(MeasureOutcome, f64)>> {
    check_same_basis(p.basis(), rho.basis())?;
    let m = rho.matrix();
    Ok(p.outcomes
        .iter()
        .map(|o| {
            let prob: f64 = o
                .vectors
                .iter()
                .map(|v| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..v.len() {
                        if v[i].norm_sqr() == 0.0 {
                            continue;
                        }
                        for j in 0..v.len() {
                            acc += v[i].conj() * m[(i, j)] * v[j];
                        }
                    }
                    acc.re
                })
                .sum();
            (o.label, prob)
        })
        .collect())
}

/// Sample one outcome by the Born rule, collapse, and report its probability.
pub fn projective_measure(
    s: &StateVector,
    p: &ProjectorSet,
    rng: &mut CounterRng,
) -> Result<(MeasureOutcome, StateVector, f64)> {
    let dist = outcome_distribution(s, p)?;
    let u = rng.next_f64();
    let k = sample_index(&dist, u);
    let (label, prob) = dist[k];
    let post = p.project(k, s)?.normalized()?;
    Ok((label, post, prob))
}

/// Cumulative inversion skipping numerically impossible outcomes.
pub(crate) fn sample_index(dist: &[(MeasureOutcome, f64)], u: f64) -> usize {
    let mut cum = 0.0;
    let mut last_viable = 0;
    for (k, (_, p)) in dist.iter().enumerate() {
        if *p < 1e-15 {
            continue;
        }
        last_viable = k;
        cum += p;
        if u < cum {
            return k;
        }
    }
    last_viable
}
