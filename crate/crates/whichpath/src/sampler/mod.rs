//! Seeded Monte Carlo generation of detection events and statistical
//! validation against the exact distributions.
//!
//! Every event is a pure function of `(seed, sample_index)`, so streams are
//! reproducible bit-for-bit no matter how the index range is chunked.

mod gof;

pub use gof::{chi_square_gof, gamma_q, ln_gamma, GofResult};

use crate::analysis::{click_distribution, internal_distribution_at, InternalBasis};
use crate::interferometer::ChainState;
use crate::rng::uniform_at;
use crate::statevec::MeasureOutcome;
use crate::{Result, SimError};

/// A sampling run: seed, size, and whether the internal mode is read out too.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub n_samples: u64,
    pub measure_internal: Option<InternalBasis>,
}

/// One detection event.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventRecord {
    pub sample_index: u64,
    pub element: usize,
    pub internal_outcome: Option<MeasureOutcome>,
}

/// The exact distributions a sampling run draws from: click probabilities,
/// and (optionally) per-element internal outcome distributions.
#[derive(Clone, Debug)]
pub struct SamplingModel {
    click_cumulative: Vec<f64>,
    internal: Option<InternalTable>,
}

#[derive(Clone, Debug)]
struct InternalTable {
    outcomes: Vec<MeasureOutcome>,
    /// per element: P(first outcome | element)
    p_first: Vec<f64>,
}

impl SamplingModel {
    /// Build from explicit distributions. `internal` maps each element to the
    /// probability of the first of the two `outcomes`.
    pub fn new(
        click_probs: &[f64],
        internal: Option<(Vec<MeasureOutcome>, Vec<f64>)>,
    ) -> Result<Self> {
        if click_probs.is_empty() {
            return Err(SimError::InsufficientData("no detector elements".into()));
        }
        let total: f64 = click_probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 || click_probs.iter().any(|p| *p < 0.0) {
            return Err(SimError::InvalidDistribution(format!(
                "click probabilities sum to {total}"
            )));
        }
        let mut cum = Vec::with_capacity(click_probs.len());
        let mut acc = 0.0;
        for p in click_probs {
            acc += p;
            cum.push(acc);
        }
        let internal = match internal {
            None => None,
            Some((outcomes, p_first)) => {
                if outcomes.len() != 2 || p_first.len() != click_probs.len() {
                    return Err(SimError::DimensionMismatch {
                        left: p_first.len(),
                        right: click_probs.len(),
                    });
                }
                Some(InternalTable { outcomes, p_first })
            }
        };
        Ok(Self {
            click_cumulative: cum,
            internal,
        })
    }

    /// Exact distributions of a pure final chain state.
    pub fn from_chain(cs: &ChainState, measure_internal: Option<InternalBasis>) -> Result<Self> {
        let pattern = click_distribution(cs)?;
        let internal = match measure_internal {
            None => None,
            Some(basis) => {
                let outcomes = match basis {
                    InternalBasis::ModeAB => vec![MeasureOutcome::ModeA, MeasureOutcome::ModeB],
                    InternalBasis::Rotated { .. } => {
                        vec![MeasureOutcome::Plus, MeasureOutcome::Minus]
                    }
                };
                let mut p_first = vec![0.0; pattern.n_elements()];
                for (j, p) in pattern.probs.iter().enumerate() {
                    if *p < 1e-15 {
                        continue; // unreachable element; any value works
                    }
                    let dist = internal_distribution_at(cs, j, basis)?;
                    p_first[j] = dist
                        .iter()
                        .find(|(o, _)| *o == outcomes[0])
                        .map(|(_, p)| *p)
                        .unwrap_or(0.0);
                }
                Some((outcomes, p_first))
            }
        };
        SamplingModel::new(&pattern.probs, internal)
    }

    fn draw(&self, seed: u64, index: u64) -> EventRecord {
        let u = uniform_at(seed, index, 0);
        let element = self
            .click_cumulative
            .partition_point(|c| *c <= u)
            .min(self.click_cumulative.len() - 1);
        let internal_outcome = self.internal.as_ref().map(|t| {
            let v = uniform_at(seed, index, 1);
            if v < t.p_first[element] {
                t.outcomes[0]
            } else {
                t.outcomes[1]
            }
        });
        EventRecord {
            sample_index: index,
            element,
            internal_outcome,
        }
    }
}

/// Generate `rc.n_samples` two-stage Born-rule events from the exact
/// distributions of a final chain state.
pub fn sample_events(cs: &ChainState, rc: &RunConfig) -> Result<Vec<EventRecord>> {
    let model = SamplingModel::from_chain(cs, rc.measure_internal)?;
    sample_events_model(&model, rc)
}

/// Generate events from explicit distributions.
pub fn sample_events_model(model: &SamplingModel, rc: &RunConfig) -> Result<Vec<EventRecord>> {
    if rc.n_samples == 0 {
        return Err(SimError::Config {
            field: "run.n_samples".into(),
            message: "must be at least 1".into(),
        });
    }
    Ok((0..rc.n_samples).map(|i| model.draw(rc.seed, i)).collect())
}

/// Event counts per element, split by internal outcome when present.
#[derive(Clone, Debug)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub outcome_labels: Vec<MeasureOutcome>,
    /// indexed `[outcome][element]`; empty when no internal readout
    pub by_outcome: Vec<Vec<u64>>,
}

pub fn histogram(events: &[EventRecord], n_elements: usize) -> Histogram {
    let mut counts = vec![0u64; n_elements];
    let mut outcome_labels: Vec<MeasureOutcome> = Vec::new();
    let mut by_outcome: Vec<Vec<u64>> = Vec::new();
    for e in events {
        counts[e.element] += 1;
        if let Some(o) = e.internal_outcome {
            let k = match outcome_labels.iter().position(|l| *l == o) {
                Some(k) => k,
                None => {
                    outcome_labels.push(o);
                    by_outcome.push(vec![0u64; n_elements]);
                    outcome_labels.len() - 1
                }
            };
            by_outcome[k][e.element] += 1;
        }
    }
    // keep outcome columns in a stable order
    let mut order: Vec<usize> = (0..outcome_labels.len()).collect();
    order.sort_by_key(|&k| outcome_labels[k]);
    let outcome_labels = order.iter().map(|&k| outcome_labels[k]).collect();
    let by_outcome = order.into_iter().map(|k| by_outcome[k].clone()).collect();
    Histogram {
        counts,
        outcome_labels,
        by_outcome,
    }
}
