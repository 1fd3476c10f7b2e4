//! What the click leaves behind: the internal-mode superposition at the
//! struck element, conditional statistics of measuring it, and eraser
//! post-selection.

use ndarray::Array1;

use super::pattern::{click_distribution, PatternMetadata, PatternReport};
use crate::interferometer::{ChainState, ModelVariant, Stage};
use crate::statevec::{
    outcome_distribution, Basis, Component, MeasureOutcome, ProjectorSet, StateVector, Subsystem,
};
use crate::{Result, SimError};

/// Which basis an internal-mode measurement uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InternalBasis {
    /// The mode basis {|A>, |B>} (the which-path record basis).
    ModeAB,
    /// |+-> = (|A> +- e^{i phi} |B>)/sqrt(2).
    Rotated { phi: f64 },
}

/// The normalized internal state at element `j` after a click there.
///
/// For the exact chain this is proportional to
/// e^{i theta_a}|A> + e^{i theta_b}|B>: the incoming path uncertainty turned
/// into mode uncertainty, with relative phase delta_j.
pub fn post_click_internal_state(cs: &ChainState, j: usize) -> Result<StateVector> {
    cs.require_stage(Stage::Final)?;
    let s = cs.state();
    let mut labels = Vec::new();
    let mut amps = Vec::new();
    for (i, label) in s.basis().labels().iter().enumerate() {
        match label.component_for(Subsystem::Position) {
            Some(Component::Position { element }) if element == j => {
                let internal = label
                    .component_for(Subsystem::Internal)
                    .expect("final labels carry an internal mode");
                labels.push(internal.into());
                amps.push(s.amps()[i]);
            }
            _ => {}
        }
    }
    if labels.is_empty() {
        return Err(SimError::InvalidDistribution(format!(
            "element {j} is not part of the detector array"
        )));
    }
    let prob: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if prob < 1e-15 {
        return Err(SimError::ZeroProbability { prob });
    }
    let remnant = StateVector::new(Basis::new(labels), Array1::from(amps));
    remnant.normalized()
}

fn projector_for(basis: InternalBasis, j: usize) -> ProjectorSet {
    match basis {
        InternalBasis::ModeAB => ProjectorSet::internal_ab(j),
        InternalBasis::Rotated { phi } => ProjectorSet::internal_rotated(j, phi),
    }
}

/// Outcome distribution of measuring the remnant at element `j`, defined for
/// every variant. A collapsed detector has a single mode, so its AB statistics
/// are the deterministic point mass on A and a rotated measurement is
/// undefined.
pub fn internal_distribution_at(
    cs: &ChainState,
    j: usize,
    basis: InternalBasis,
) -> Result<Vec<(MeasureOutcome, f64)>> {
    let remnant = post_click_internal_state(cs, j)?;
    if remnant.dim() == 1 {
        return match basis {
            InternalBasis::ModeAB => Ok(vec![
                (MeasureOutcome::ModeA, 1.0),
                (MeasureOutcome::ModeB, 0.0),
            ]),
            InternalBasis::Rotated { .. } => Err(SimError::UnsupportedVariant {
                op: "rotated internal measurement",
                variant: cs.variant().to_string(),
            }),
        };
    }
    outcome_distribution(&remnant, &projector_for(basis, j))
}

/// Path statistics conditioned on a click at `j`, read off the internal
/// record. Only the exact chain has an orthogonal record whose outcomes can
/// be relabeled as paths; everything else is an error.
///
/// In the AB basis the answer is (1/2, 1/2) at every element: the record
/// measurement reveals nothing new about the wave that already landed.
pub fn conditional_path_distribution(
    cs: &ChainState,
    j: usize,
    basis: InternalBasis,
) -> Result<Vec<(MeasureOutcome, f64)>> {
    if cs.variant() != ModelVariant::PaperExact {
        return Err(SimError::UnsupportedVariant {
            op: "conditional_path_distribution",
            variant: cs.variant().to_string(),
        });
    }
    internal_distribution_at(cs, j, basis)
}

/// The two post-selected patterns of an eraser measurement at angle `phi`,
/// with their selection weights.
#[derive(Clone, Debug)]
pub struct EraserFringes {
    pub plus: PatternReport,
    pub minus: PatternReport,
    pub p_plus: f64,
    pub p_minus: f64,
}

/// Condition the click pattern on the rotated internal outcome.
///
/// Each conditional shows full fringes, p(x|+-) ~ 1 +- cos(delta_x - phi),
/// while their weighted mixture reproduces the flat unconditioned marginal.
pub fn eraser_fringes(cs: &ChainState, phi: f64) -> Result<EraserFringes> {
    if cs.variant() != ModelVariant::PaperExact {
        return Err(SimError::UnsupportedVariant {
            op: "eraser_fringes",
            variant: cs.variant().to_string(),
        });
    }
    let marginal = click_distribution(cs)?;
    let n = marginal.n_elements();
    let mut joint_plus = vec![0.0f64; n];
    let mut joint_minus = vec![0.0f64; n];
    for j in 0..n {
        let dist = internal_distribution_at(cs, j, InternalBasis::Rotated { phi })?;
        for (outcome, p_cond) in dist {
            match outcome {
                MeasureOutcome::Plus => joint_plus[j] = marginal.probs[j] * p_cond,
                MeasureOutcome::Minus => joint_minus[j] = marginal.probs[j] * p_cond,
                _ => {}
            }
        }
    }
    let p_plus: f64 = joint_plus.iter().sum();
    let p_minus: f64 = joint_minus.iter().sum();
    if p_plus < 1e-15 || p_minus < 1e-15 {
        return Err(SimError::ZeroProbability {
            prob: p_plus.min(p_minus),
        });
    }
    let meta = || PatternMetadata::new(cs.variant(), 0.0);
    let plus = PatternReport::new(
        marginal.positions.clone(),
        joint_plus.iter().map(|p| p / p_plus).collect(),
        marginal.delta().to_vec(),
        meta(),
    )?;
    let minus = PatternReport::new(
        marginal.positions.clone(),
        joint_minus.iter().map(|p| p / p_minus).collect(),
        marginal.delta().to_vec(),
        meta(),
    )?;
    Ok(EraserFringes {
        plus,
        minus,
        p_plus,
        p_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{evolve, evolve_with_phases, Geometry, PhaseTable};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn demo() -> Geometry {
        Geometry::default_demo()
    }

    fn small(n: usize) -> Geometry {
        Geometry::with_symmetric_array(5e-7, 1e-4, 1.0, n, 25e-3).unwrap()
    }

    #[test]
    fn zero_delta_leaves_the_symmetric_remnant() {
        let cs =
            evolve_with_phases(ModelVariant::PaperExact, &small(2), PhaseTable::zeros(2)).unwrap();
        let r = post_click_internal_state(&cs, 0).unwrap();
        let v = 1.0 / 2f64.sqrt();
        for amp in r.amps() {
            assert!((amp - Complex64::new(v, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn pi_delta_flips_the_relative_sign() {
        let cs = evolve_with_phases(
            ModelVariant::PaperExact,
            &small(2),
            PhaseTable::from_delta(vec![PI, PI]),
        )
        .unwrap();
        let r = post_click_internal_state(&cs, 1).unwrap();
        // up to global phase: (|A> - |B>)/sqrt(2)
        let ratio = r.amps()[1] / r.amps()[0];
        assert!((ratio - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn remnant_relative_phase_equals_delta() {
        let g = demo();
        let cs = evolve(ModelVariant::PaperExact, &g).unwrap();
        let delta = cs.phases().delta().to_vec();
        for j in [0usize, 17, 40, 63] {
            let r = post_click_internal_state(&cs, j).unwrap();
            let got = (r.amps()[1] / r.amps()[0]).arg();
            let want = delta[j].rem_euclid(2.0 * PI);
            let got = got.rem_euclid(2.0 * PI);
            let diff = (got - want).abs().min(2.0 * PI - (got - want).abs());
            assert!(diff < 1e-12, "element {j}: {got} vs {want}");
        }
    }

    #[test]
    fn conditional_path_is_half_half_everywhere() {
        let cs = evolve(ModelVariant::PaperExact, &demo()).unwrap();
        for j in 0..64 {
            let d = conditional_path_distribution(&cs, j, InternalBasis::ModeAB).unwrap();
            assert_eq!(d[0].0, MeasureOutcome::ModeA);
            assert!((d[0].1 - 0.5).abs() < 1e-13);
            assert!((d[1].1 - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn rotated_conditional_follows_the_remnant_phase() {
        // delta = 0: p(+|x) = 1; delta = pi: p(+|x) = 0 (phi = 0)
        let cs = evolve_with_phases(
            ModelVariant::PaperExact,
            &small(2),
            PhaseTable::from_delta(vec![0.0, PI]),
        )
        .unwrap();
        let d0 =
            conditional_path_distribution(&cs, 0, InternalBasis::Rotated { phi: 0.0 }).unwrap();
        assert!((d0[0].1 - 1.0).abs() < 1e-13);
        let d1 =
            conditional_path_distribution(&cs, 1, InternalBasis::Rotated { phi: 0.0 }).unwrap();
        assert!(d1[0].1.abs() < 1e-13);
    }

    #[test]
    fn conditional_rejects_variants_without_a_record() {
        let collapsed = evolve(ModelVariant::Collapsed, &small(2)).unwrap();
        assert!(matches!(
            conditional_path_distribution(&collapsed, 0, InternalBasis::ModeAB),
            Err(SimError::UnsupportedVariant { .. })
        ));
        let marker = evolve(ModelVariant::MarkerOverlap { chi: 0.4 }, &small(2)).unwrap();
        assert!(conditional_path_distribution(&marker, 0, InternalBasis::ModeAB).is_err());
    }

    #[test]
    fn zero_probability_click_is_an_error() {
        // collapsed dark element at delta = pi has no amplitude
        let cs = evolve_with_phases(
            ModelVariant::Collapsed,
            &small(2),
            PhaseTable::from_delta(vec![0.0, PI]),
        )
        .unwrap();
        assert!(matches!(
            post_click_internal_state(&cs, 1),
            Err(SimError::ZeroProbability { .. })
        ));
        // and so is an element index outside the array
        assert!(post_click_internal_state(&cs, 5).is_err());
    }

    #[test]
    fn collapsed_internal_statistics_are_deterministic() {
        let cs = evolve(ModelVariant::Collapsed, &small(2)).unwrap();
        let d = internal_distribution_at(&cs, 0, InternalBasis::ModeAB).unwrap();
        assert_eq!(d[0], (MeasureOutcome::ModeA, 1.0));
        assert!(internal_distribution_at(&cs, 0, InternalBasis::Rotated { phi: 0.0 }).is_err());
    }

    #[test]
    fn eraser_conditionals_have_full_visibility() {
        let cs = evolve(ModelVariant::PaperExact, &demo()).unwrap();
        let er = eraser_fringes(&cs, 0.0).unwrap();
        assert!((er.plus.visibility - 1.0).abs() < 1e-9);
        assert!((er.minus.visibility - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eraser_mixture_restores_the_flat_marginal() {
        let cs = evolve(ModelVariant::PaperExact, &demo()).unwrap();
        let er = eraser_fringes(&cs, 0.7).unwrap();
        let n = er.plus.n_elements();
        for j in 0..n {
            let mixed = er.p_plus * er.plus.probs[j] + er.p_minus * er.minus.probs[j];
            assert!((mixed - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn eraser_conditional_probs_match_closed_form() {
        let cs = evolve(ModelVariant::PaperExact, &demo()).unwrap();
        let phi = 0.3;
        let er = eraser_fringes(&cs, phi).unwrap();
        let delta = cs.phases().delta().to_vec();
        let weights: Vec<f64> = delta.iter().map(|d| 1.0 + (d - phi).cos()).collect();
        let total: f64 = weights.iter().sum();
        for (p, w) in er.plus.probs.iter().zip(&weights) {
            assert!((p - w / total).abs() < 1e-12);
        }
    }

    #[test]
    fn eraser_maxima_sit_at_matched_phase() {
        // phi = 0: maxima of p(x|+) where delta is a multiple of 2 pi
        let g = demo();
        let cs = evolve(ModelVariant::PaperExact, &g).unwrap();
        let er = eraser_fringes(&cs, 0.0).unwrap();
        let delta = cs.phases().delta().to_vec();
        let spacing = g.element_spacing();
        // locate interior maxima of the conditional pattern
        for j in 1..63 {
            let p = &er.plus.probs;
            if p[j] > p[j - 1] && p[j] > p[j + 1] {
                // delta at that element is within one element-spacing's worth
                // of phase from a multiple of 2 pi
                let phase_step = (delta[j + 1] - delta[j - 1]).abs() / 2.0;
                let wrapped = delta[j].rem_euclid(2.0 * PI);
                let dist = wrapped.min(2.0 * PI - wrapped);
                assert!(dist <= phase_step, "element {j}");
                let _ = spacing;
            }
        }
    }

    #[test]
    fn eraser_rejects_non_exact_variants() {
        let cs = evolve(ModelVariant::Collapsed, &small(4)).unwrap();
        assert!(matches!(
            eraser_fringes(&cs, 0.0),
            Err(SimError::UnsupportedVariant { .. })
        ));
    }
}
