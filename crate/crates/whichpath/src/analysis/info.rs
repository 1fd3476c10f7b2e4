//! Joint click/internal-outcome distributions and mutual information.

use ndarray::Array2;

use super::pattern::click_distribution;
use super::remnant::{internal_distribution_at, InternalBasis};
use crate::interferometer::ChainState;
use crate::statevec::{Component, DensityMatrix, MeasureOutcome, Subsystem};
use crate::{Result, SimError};

/// Joint distribution p(element, outcome) with derived marginals.
#[derive(Clone, Debug)]
pub struct JointDistribution {
    outcomes: Vec<MeasureOutcome>,
    /// n_elements x n_outcomes
    table: Array2<f64>,
}

impl JointDistribution {
    pub fn new(outcomes: Vec<MeasureOutcome>, table: Array2<f64>) -> Result<Self> {
        if table.ncols() != outcomes.len() {
            return Err(SimError::DimensionMismatch {
                left: table.ncols(),
                right: outcomes.len(),
            });
        }
        if let Some(bad) = table.iter().find(|p| **p < -1e-15 || !p.is_finite()) {
            return Err(SimError::InvalidDistribution(format!(
                "joint probability {bad}"
            )));
        }
        let total: f64 = table.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(SimError::InvalidDistribution(format!(
                "joint probabilities sum to {total}"
            )));
        }
        let table = table.mapv(|p| p.max(0.0));
        Ok(Self { outcomes, table })
    }

    pub fn outcomes(&self) -> &[MeasureOutcome] {
        &self.outcomes
    }

    pub fn table(&self) -> &Array2<f64> {
        &self.table
    }

    pub fn n_elements(&self) -> usize {
        self.table.nrows()
    }

    pub fn element_marginal(&self) -> Vec<f64> {
        (0..self.table.nrows())
            .map(|i| self.table.row(i).sum())
            .collect()
    }

    pub fn outcome_marginal(&self) -> Vec<f64> {
        (0..self.table.ncols())
            .map(|j| self.table.column(j).sum())
            .collect()
    }
}

/// I(X;B) = sum p log2(p / (p_X p_B)) in bits, with 0 log 0 = 0.
///
/// Clamped at zero: the true quantity is non-negative and only rounding can
/// push the sum below it.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let px = j.element_marginal();
    let pb = j.outcome_marginal();
    let mut bits = 0.0;
    for (i, &pxi) in px.iter().enumerate() {
        for (k, &pbk) in pb.iter().enumerate() {
            let p = j.table[(i, k)];
            if p > 0.0 && pxi > 0.0 && pbk > 0.0 {
                bits += p * (p / (pxi * pbk)).log2();
            }
        }
    }
    bits.max(0.0)
}

/// Joint distribution of (click element, internal outcome) for a pure final
/// chain state. In the exact chain with the AB basis this is the uniform
/// 1/(2N) table whose mutual information vanishes.
pub fn click_internal_joint(cs: &ChainState, basis: InternalBasis) -> Result<JointDistribution> {
    let marginal = click_distribution(cs)?;
    let n = marginal.n_elements();
    let outcomes = outcome_columns(basis);
    let mut table = Array2::zeros((n, 2));
    for j in 0..n {
        if marginal.probs[j] < 1e-15 {
            continue;
        }
        for (outcome, p_cond) in internal_distribution_at(cs, j, basis)? {
            let col = outcomes
                .iter()
                .position(|o| *o == outcome)
                .expect("column for outcome");
            table[(j, col)] = marginal.probs[j] * p_cond;
        }
    }
    JointDistribution::new(outcomes, table)
}

fn outcome_columns(basis: InternalBasis) -> Vec<MeasureOutcome> {
    match basis {
        InternalBasis::ModeAB => vec![MeasureOutcome::ModeA, MeasureOutcome::ModeB],
        InternalBasis::Rotated { .. } => vec![MeasureOutcome::Plus, MeasureOutcome::Minus],
    }
}

/// Same joint for a final-basis density matrix (dephased chains).
pub fn click_internal_joint_rho(
    rho: &DensityMatrix,
    basis: InternalBasis,
) -> Result<JointDistribution> {
    // group the final labels by element into (mode A index, mode B index)
    let labels = rho.basis().labels();
    let mut blocks: std::collections::BTreeMap<usize, (Option<usize>, Option<usize>)> =
        std::collections::BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        let element = match label.component_for(Subsystem::Position) {
            Some(Component::Position { element }) => element,
            _ => {
                return Err(SimError::InvalidFactor(vec![Subsystem::Position]));
            }
        };
        let mode = match label.component_for(Subsystem::Internal) {
            Some(Component::Internal { mode, .. }) => mode,
            _ => {
                return Err(SimError::InvalidFactor(vec![Subsystem::Internal]));
            }
        };
        let entry = blocks.entry(element).or_default();
        match mode {
            crate::statevec::Mode::A => entry.0 = Some(i),
            crate::statevec::Mode::B => entry.1 = Some(i),
        }
    }
    let n = blocks.len();
    let outcomes = outcome_columns(basis);
    let m = rho.matrix();
    let mut table = Array2::zeros((n, 2));
    for (row, (_, (ia, ib))) in blocks.iter().enumerate() {
        match (basis, ia, ib) {
            (InternalBasis::ModeAB, Some(a), Some(b)) => {
                table[(row, 0)] = m[(*a, *a)].re;
                table[(row, 1)] = m[(*b, *b)].re;
            }
            (InternalBasis::ModeAB, Some(a), None) => {
                table[(row, 0)] = m[(*a, *a)].re;
            }
            (InternalBasis::Rotated { phi }, Some(a), Some(b)) => {
                let half_sum = (m[(*a, *a)].re + m[(*b, *b)].re) / 2.0;
                let cross = (num_complex::Complex64::from_polar(1.0, phi) * m[(*a, *b)]).re;
                table[(row, 0)] = half_sum + cross;
                table[(row, 1)] = half_sum - cross;
            }
            (InternalBasis::Rotated { .. }, _, _) => {
                return Err(SimError::UnsupportedVariant {
                    op: "rotated internal measurement",
                    variant: "single-mode detector".into(),
                });
            }
            _ => {
                return Err(SimError::InvalidFactor(vec![Subsystem::Internal]));
            }
        }
    }
    JointDistribution::new(outcomes, table)
}
