//! Click-position statistics: exact Born patterns, fringe visibility, and
//! fringe-spacing estimation.

use serde::Serialize;

use crate::interferometer::{
    apply_dephasing, apply_dephasing_monte_carlo, build_u2, ChainState, Geometry, ModelVariant,
    Stage,
};
use crate::statevec::{apply_map_density, Component, DensityMatrix, Subsystem};
use crate::{Result, SimError};

/// Provenance of a pattern: which model produced it and with what knobs.
#[derive(Clone, Debug, Serialize)]
pub struct PatternMetadata {
    pub variant: String,
    pub gamma: f64,
    pub sigma: f64,
}

impl PatternMetadata {
    pub fn new(variant: ModelVariant, sigma: f64) -> Self {
        Self {
            variant: variant.name().to_string(),
            gamma: variant.gamma(),
            sigma,
        }
    }
}

/// Per-element click probabilities with derived fringe metrics.
#[derive(Clone, Debug)]
pub struct PatternReport {
    pub positions: Vec<f64>,
    pub probs: Vec<f64>,
    /// Fitted fringe contrast, clamped to [0, 1].
    pub visibility: f64,
    /// Diagnostic (max-min)/(max+min) estimator.
    pub visibility_raw: f64,
    pub fringe_spacing_m: Option<f64>,
    pub metadata: PatternMetadata,
    delta: Vec<f64>,
}

impl PatternReport {
    /// Validates the distribution and computes the fringe metrics against the
    /// known per-element phase differences `delta`.
    pub fn new(
        positions: Vec<f64>,
        probs: Vec<f64>,
        delta: Vec<f64>,
        metadata: PatternMetadata,
    ) -> Result<Self> {
        if positions.len() != probs.len() || probs.len() != delta.len() {
            return Err(SimError::DimensionMismatch {
                left: positions.len(),
                right: probs.len(),
            });
        }
        let mut probs = probs;
        for p in &mut probs {
            if *p < 0.0 {
                if *p < -1e-12 {
                    return Err(SimError::InvalidDistribution(format!(
                        "negative click probability {p}"
                    )));
                }
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(SimError::InvalidDistribution(format!(
                "click probabilities sum to {total}"
            )));
        }
        let visibility_raw = raw_visibility(&probs);
        // arrays too short for the fitted estimator fall back to the raw one
        let visibility = if probs.len() < 3 {
            visibility_raw
        } else {
            fit_visibility(&probs, &delta)?.visibility
        };
        let fringe_spacing_m = fringe_spacing_estimate(&positions, &probs);
        Ok(Self {
            positions,
            probs,
            visibility,
            visibility_raw,
            fringe_spacing_m,
            metadata,
            delta,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.probs.len()
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }
}

/// Least-squares fit of probs ~ A (1 + V cos(delta - phi0)).
#[derive(Clone, Copy, Debug)]
pub struct FringeFit {
    pub amplitude: f64,
    pub visibility: f64,
    pub phase: f64,
}

/// Fit a fringe model to a pattern using the known phase-difference table.
///
/// The model is linear in (A, B, C) with B = A V cos(phi0), C = A V sin(phi0),
/// so the fit is a 3x3 normal-equation solve; V is clamped to [0, 1]. A grid
/// whose deltas carry no spread (e.g. coincident slits) cannot constrain V
/// and yields V = 0.
pub fn fit_visibility(probs: &[f64], delta: &[f64]) -> Result<FringeFit> {
    let n = probs.len();
    if n != delta.len() {
        return Err(SimError::DimensionMismatch {
            left: n,
            right: delta.len(),
        });
    }
    if n < 3 {
        return Err(SimError::InsufficientData(format!(
            "visibility fit needs at least 3 elements, got {n}"
        )));
    }
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (p, d) in probs.iter().zip(delta) {
        let row = [1.0, d.cos(), d.sin()];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * p;
        }
    }
    let mean = probs.iter().sum::<f64>() / n as f64;
    let sol = match solve3(m, rhs) {
        Some(s) => s,
        // deltas without spread: fall back to the flat model
        None => [mean, 0.0, 0.0],
    };
    let (a, b, c) = (sol[0], sol[1], sol[2]);
    if a <= 0.0 {
        return Ok(FringeFit {
            amplitude: mean,
            visibility: 0.0,
            phase: 0.0,
        });
    }
    let v = (b.hypot(c) / a).clamp(0.0, 1.0);
    Ok(FringeFit {
        amplitude: a,
        visibility: v,
        phase: c.atan2(b),
    })
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            let pivot_vals = m[col];
            for (k, target) in m[row].iter_mut().enumerate().skip(col) {
                *target -= f * pivot_vals[k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in (row + 1)..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// (max - min) / (max + min); zero for an empty or all-zero pattern.
pub fn raw_visibility(probs: &[f64]) -> f64 {
    let max = probs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let min = probs.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if !(max.is_finite() && min.is_finite()) || max + min <= 0.0 {
        return 0.0;
    }
    (max - min) / (max + min)
}

/// Mean spacing between adjacent interior maxima, or `None` when the pattern
/// has fewer than two (flat patterns at floating-point granularity count as
/// having none).
///
/// A symmetric grid can sample a fringe crest as two equal values straddling
/// the true peak, so ties within the noise floor are treated as one plateau
/// located at its center.
pub fn fringe_spacing_estimate(positions: &[f64], probs: &[f64]) -> Option<f64> {
    let n = probs.len();
    if n < 3 {
        return None;
    }
    let floor = 1e-12 * probs.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut maxima = Vec::new();
    let mut j = 1;
    while j < n - 1 {
        // extend a plateau of values tied with probs[j]
        let mut k = j;
        while k + 1 < n && (probs[k + 1] - probs[j]).abs() <= floor {
            k += 1;
        }
        let rises = probs[j] - probs[j - 1] > floor;
        let falls = k + 1 < n && probs[k] - probs[k + 1] > floor;
        if rises && falls {
            maxima.push((positions[j] + positions[k]) / 2.0);
        }
        j = k.max(j) + 1;
    }
    if maxima.len() < 2 {
        return None;
    }
    let spacing = maxima.windows(2).map(|w| w[1] - w[0]).sum::<f64>() / (maxima.len() - 1) as f64;
    Some(spacing)
}

fn element_of(label: &crate::statevec::BasisLabel) -> usize {
    match label.component_for(Subsystem::Position) {
        Some(Component::Position { element }) => element,
        _ => unreachable!("final labels carry a position"),
    }
}

/// Exact Born click distribution of a final chain state (internal modes
/// traced out).
pub fn click_distribution(cs: &ChainState) -> Result<PatternReport> {
    cs.require_stage(Stage::Final)?;
    let n = cs.geometry().n_elements();
    let mut probs = vec![0.0f64; n];
    let s = cs.state();
    for (i, label) in s.basis().labels().iter().enumerate() {
        probs[element_of(label)] += s.amps()[i].norm_sqr();
    }
    PatternReport::new(
        cs.geometry().positions().to_vec(),
        probs,
        cs.phases().delta().to_vec(),
        PatternMetadata::new(cs.variant(), 0.0),
    )
}

/// Click distribution of a final-basis density matrix.
pub fn click_distribution_rho(
    rho: &DensityMatrix,
    geometry: &Geometry,
    delta: &[f64],
    metadata: PatternMetadata,
) -> Result<PatternReport> {
    let n = geometry.n_elements();
    let mut probs = vec![0.0f64; n];
    for (i, label) in rho.basis().labels().iter().enumerate() {
        probs[element_of(label)] += rho.matrix()[(i, i)].re;
    }
    PatternReport::new(
        geometry.positions().to_vec(),
        probs,
        delta.to_vec(),
        metadata,
    )
}

/// Pattern after Gaussian dephasing of the path coherence (closed-form
/// channel), pushed through the detector stage.
pub fn dephased_pattern(v: ModelVariant, g: &Geometry, sigma: f64) -> Result<PatternReport> {
    let diffracted = ChainState::initial(v, g.clone())?.diffract()?;
    let rho = apply_dephasing(&diffracted, sigma)?;
    finish_dephased(v, g, sigma, &diffracted, rho)
}

/// Monte Carlo companion of [`dephased_pattern`]: the coherence factor is the
/// empirical mean over `n` explicit phase draws.
pub fn dephased_pattern_mc(
    v: ModelVariant,
    g: &Geometry,
    sigma: f64,
    n: u64,
    seed: u64,
) -> Result<PatternReport> {
    let diffracted = ChainState::initial(v, g.clone())?.diffract()?;
    let rho = apply_dephasing_monte_carlo(&diffracted, sigma, n, seed)?;
    finish_dephased(v, g, sigma, &diffracted, rho)
}

fn finish_dephased(
    v: ModelVariant,
    g: &Geometry,
    sigma: f64,
    diffracted: &ChainState,
    rho: DensityMatrix,
) -> Result<PatternReport> {
    let u2 = build_u2(g, v)?;
    let rho_final = apply_map_density(&u2, &rho)?.trace_normalized()?;
    click_distribution_rho(
        &rho_final,
        g,
        diffracted.phases().delta(),
        PatternMetadata::new(v, sigma),
    )
}

/// The final-basis density matrix after dephasing, for joint statistics.
pub fn dephased_final_rho(v: ModelVariant, g: &Geometry, sigma: f64) -> Result<DensityMatrix> {
    let diffracted = ChainState::initial(v, g.clone())?.diffract()?;
    let rho = apply_dephasing(&diffracted, sigma)?;
    let u2 = build_u2(g, v)?;
    apply_map_density(&u2, &rho)?.trace_normalized()
}
