//! Which-path distinguishability and the visibility-distinguishability
//! trade-off.

use crate::interferometer::ModelVariant;

/// Optimal equal-prior guessing advantage 2 p_correct - 1 for identifying the
/// path from the marker state: D = sqrt(1 - gamma^2) with gamma the marker
/// overlap.
///
/// The exact chain has gamma = 0, hence D = 1. A collapsed detector keeps no
/// record at all, so D = 0 by convention (consistently, its "marker states"
/// coincide: gamma = 1).
pub fn distinguishability(v: ModelVariant) -> f64 {
    let gamma = v.gamma();
    (1.0 - gamma * gamma).max(0.0).sqrt()
}

/// V^2 + D^2; equals 1 for pure-state marker models, drops below 1 under
/// dephasing.
pub fn duality_check(visibility: f64, distinguishability: f64) -> f64 {
    visibility * visibility + distinguishability * distinguishability
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn extremes_of_the_duality() {
        assert_eq!(distinguishability(ModelVariant::PaperExact), 1.0);
        assert_eq!(distinguishability(ModelVariant::Collapsed), 0.0);
        assert_eq!(
            distinguishability(ModelVariant::MarkerOverlap { chi: 0.0 }),
            0.0
        );
        assert!(
            (distinguishability(ModelVariant::MarkerOverlap { chi: FRAC_PI_2 }) - 1.0).abs()
                < 1e-15
        );
        assert_eq!(duality_check(1.0, 0.0), 1.0);
        assert_eq!(duality_check(0.0, 1.0), 1.0);
    }

    #[test]
    fn intermediate_marker_follows_the_closed_form() {
        let d = distinguishability(ModelVariant::MarkerOverlap { chi: PI / 3.0 });
        assert!((d - 0.75f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn grid_search_over_qubit_measurements_confirms_the_bound() {
        // brute-force the optimal projective measurement of the marker qubit:
        // marker states m_a = (1, 0), m_b = (cos chi, sin chi); guess "a" on
        // outcome n, "b" on the orthogonal outcome.
        let chi = PI / 3.0;
        let best = {
            let mut best = 0.0f64;
            // 100 x 100 grid over the Bloch sphere of measurement directions
            for ia in 0..100 {
                let alpha = PI * ia as f64 / 100.0;
                for ib in 0..100 {
                    let beta = 2.0 * PI * ib as f64 / 100.0;
                    // |n> = (cos a, e^{i b} sin a)
                    let p_n_a = alpha.cos().powi(2);
                    let amp_re = alpha.cos() * chi.cos() + alpha.sin() * beta.cos() * chi.sin();
                    let amp_im = -alpha.sin() * beta.sin() * chi.sin();
                    let p_n_b = amp_re * amp_re + amp_im * amp_im;
                    let p_correct = 0.5 * p_n_a + 0.5 * (1.0 - p_n_b);
                    best = best.max(2.0 * p_correct - 1.0);
                }
            }
            best
        };
        let d = distinguishability(ModelVariant::MarkerOverlap { chi });
        assert!(best <= d + 1e-12, "grid beat the bound: {best} > {d}");
        assert!(
            (best - d).abs() < 1e-3,
            "grid missed the bound: {best} vs {d}"
        );
    }

    #[test]
    fn duality_sum_is_unity_along_the_continuum() {
        use crate::analysis::pattern::click_distribution;
        use crate::interferometer::{evolve, Geometry};
        let g = Geometry::default_demo();
        for i in 0..9 {
            let chi = FRAC_PI_2 * i as f64 / 8.0;
            let v = ModelVariant::MarkerOverlap { chi };
            let pr = click_distribution(&evolve(v, &g).unwrap()).unwrap();
            let s = duality_check(pr.visibility, distinguishability(v));
            assert!((s - 1.0).abs() < 2e-6, "chi={chi}: V^2+D^2={s}");
        }
    }
}
