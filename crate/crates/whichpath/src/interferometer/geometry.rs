//! Slit/screen layout and the optical phase table.

use crate::{Result, SimError};

/// Two-slit layout: slits at +-s/2 on the slit plane, detector elements on a
/// screen at distance L, positions measured from the symmetry axis.
#[derive(Clone, Debug)]
pub struct Geometry {
    wavelength: f64,
    slit_separation: f64,
    screen_distance: f64,
    positions: Vec<f64>,
}

/// Slit-to-element distances, one row per slit.
#[derive(Clone, Debug)]
pub struct Distances {
    pub from_a: Vec<f64>,
    pub from_b: Vec<f64>,
}

impl Geometry {
    /// `slit_separation = 0` (coincident slits) is admitted as a degenerate
    /// layout; everything else must be strictly positive and finite.
    pub fn new(
        wavelength: f64,
        slit_separation: f64,
        screen_distance: f64,
        positions: Vec<f64>,
    ) -> Result<Self> {
        if !wavelength.is_finite() || wavelength <= 0.0 {
            return Err(SimError::InvalidGeometry(format!(
                "wavelength must be positive and finite, got {wavelength}"
            )));
        }
        if !slit_separation.is_finite() || slit_separation < 0.0 {
            return Err(SimError::InvalidGeometry(format!(
                "slit separation must be non-negative and finite, got {slit_separation}"
            )));
        }
        if !screen_distance.is_finite() || screen_distance <= 0.0 {
            return Err(SimError::InvalidGeometry(format!(
                "screen distance must be positive and finite, got {screen_distance}"
            )));
        }
        if positions.is_empty() {
            return Err(SimError::InvalidGeometry(
                "need at least one detector element".into(),
            ));
        }
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(SimError::InvalidGeometry(
                "detector positions must be finite".into(),
            ));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimError::InvalidGeometry(
                "detector positions must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            wavelength,
            slit_separation,
            screen_distance,
            positions,
        })
    }

    /// Detector array of `count` elements mirror-symmetric about the axis,
    /// spanning `[-span/2, +span/2]` inclusive. The mirror pairs are exact so
    /// the phase-sum constraint holds to rounding.
    pub fn with_symmetric_array(
        wavelength: f64,
        slit_separation: f64,
        screen_distance: f64,
        count: usize,
        span: f64,
    ) -> Result<Self> {
        if count == 0 {
            return Err(SimError::InvalidGeometry(
                "detector count must be >= 1".into(),
            ));
        }
        if count > 1 && (!span.is_finite() || span <= 0.0) {
            return Err(SimError::InvalidGeometry(format!(
                "detector span must be positive, got {span}"
            )));
        }
        let mut positions = vec![0.0; count];
        if count > 1 {
            let step = span / (count - 1) as f64;
            for j in 0..count / 2 {
                let x = span / 2.0 - j as f64 * step;
                positions[count - 1 - j] = x;
                positions[j] = -x;
            }
            // odd count leaves the middle element exactly on the axis
        }
        Geometry::new(wavelength, slit_separation, screen_distance, positions)
    }

    /// Demo layout: 500 nm light, 100 um slits, 1 m throw, 64 elements over
    /// +-12.5 mm (five fringes of spacing lambda L / s = 5 mm).
    pub fn default_demo() -> Geometry {
        Geometry::with_symmetric_array(500e-9, 100e-6, 1.0, 64, 25e-3)
            .expect("demo geometry is valid")
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn slit_separation(&self) -> f64 {
        self.slit_separation
    }

    pub fn screen_distance(&self) -> f64 {
        self.screen_distance
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn n_elements(&self) -> usize {
        self.positions.len()
    }

    /// Spatial wave number k = 2 pi / lambda.
    pub fn wave_number(&self) -> f64 {
        std::f64::consts::TAU / self.wavelength
    }

    /// x_j = -x_{N+1-j} within 1e-15 * |x_max|.
    pub fn is_symmetric(&self) -> bool {
        let n = self.positions.len();
        let xmax = self.positions.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tol = 1e-15 * xmax;
        (0..n).all(|j| (self.positions[j] + self.positions[n - 1 - j]).abs() <= tol)
    }

    /// Mean element spacing.
    pub fn element_spacing(&self) -> f64 {
        let n = self.positions.len();
        if n < 2 {
            return 0.0;
        }
        (self.positions[n - 1] - self.positions[0]) / (n - 1) as f64
    }
}

/// Euclidean distances from each slit to each detector element.
pub fn path_distances(g: &Geometry) -> Distances {
    let half = g.slit_separation / 2.0;
    let from_a = g
        .positions
        .iter()
        .map(|x| g.screen_distance.hypot(x - half))
        .collect();
    let from_b = g
        .positions
        .iter()
        .map(|x| g.screen_distance.hypot(x + half))
        .collect();
    Distances { from_a, from_b }
}

/// Per-element phases theta_beta_x, stored unwrapped (plain reals, not
/// reduced mod 2 pi) so sums and differences are ordinary arithmetic.
#[derive(Clone, Debug)]
pub struct PhaseTable {
    theta_a: Vec<f64>,
    theta_b: Vec<f64>,
    delta: Vec<f64>,
}

impl PhaseTable {
    pub fn new(theta_a: Vec<f64>, theta_b: Vec<f64>) -> Self {
        assert_eq!(theta_a.len(), theta_b.len());
        let delta = theta_a.iter().zip(&theta_b).map(|(a, b)| b - a).collect();
        Self {
            theta_a,
            theta_b,
            delta,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    /// Table with prescribed phase differences and theta_a = 0.
    pub fn from_delta(delta: Vec<f64>) -> Self {
        let n = delta.len();
        Self::new(vec![0.0; n], delta)
    }

    pub fn n_elements(&self) -> usize {
        self.theta_a.len()
    }

    pub fn theta_a(&self) -> &[f64] {
        &self.theta_a
    }

    pub fn theta_b(&self) -> &[f64] {
        &self.theta_b
    }

    /// `delta[j] = theta_b[j] - theta_a[j]`.
    pub fn delta(&self) -> &[f64] {
        &self.delta
    }
}

/// Optical path phases theta = k * d with exact Euclidean distances.
pub fn phase_table(g: &Geometry) -> PhaseTable {
    let k = g.wave_number();
    let d = path_distances(g);
    PhaseTable::new(
        d.from_a.iter().map(|x| k * x).collect(),
        d.from_b.iter().map(|x| k * x).collect(),
    )
}

/// Residual of the closure condition sum_x (theta_ax - theta_bx) = 0.
#[derive(Clone, Copy, Debug)]
pub struct PhaseConstraintReport {
    pub residual: f64,
    pub passes: bool,
}

pub fn check_phase_constraint(p: &PhaseTable, tol: f64) -> PhaseConstraintReport {
    let residual = p
        .theta_a
        .iter()
        .zip(&p.theta_b)
        .map(|(a, b)| a - b)
        .sum::<f64>()
        .abs();
    PhaseConstraintReport {
        residual,
        passes: residual <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances_for_central_element_are_equal() {
        let g = Geometry::new(5e-7, 1e-4, 1.0, vec![0.0]).unwrap();
        let d = path_distances(&g);
        assert_eq!(d.from_a[0], d.from_b[0]);
        let expect = (1.0f64 + (5e-5f64).powi(2)).sqrt();
        assert!((d.from_a[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn coincident_slits_give_equal_distances() {
        let g = Geometry::new(5e-7, 0.0, 1.0, vec![-0.3, 0.1, 0.7]).unwrap();
        let d = path_distances(&g);
        for j in 0..3 {
            assert_eq!(d.from_a[j], d.from_b[j]);
        }
        let p = phase_table(&g);
        assert!(p.delta().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn three_four_five_triangle_is_exact() {
        // slits at +-4, element on the axis, throw 3: distance exactly 5
        let g = Geometry::new(5e-7, 8.0, 3.0, vec![0.0]).unwrap();
        let d = path_distances(&g);
        assert!((d.from_a[0] - 5.0).abs() / 5.0 <= 1e-15);
        assert!((d.from_b[0] - 5.0).abs() / 5.0 <= 1e-15);
    }

    #[test]
    fn paraxial_phase_difference_matches_exact() {
        // k s x / L vs exact k (d_b - d_a), within 0.1%
        let g = Geometry::new(5e-7, 1e-4, 1.0, vec![2.5e-3, 5.0e-3]).unwrap();
        let p = phase_table(&g);
        let k = g.wave_number();
        let paraxial: Vec<f64> = g.positions().iter().map(|x| k * 1e-4 * x / 1.0).collect();
        assert!((p.delta()[0] - paraxial[0]).abs() / paraxial[0] < 1e-3);
        assert!((p.delta()[1] - paraxial[1]).abs() / paraxial[1] < 1e-3);
        // the concrete values: approximately pi and 2 pi
        assert!((p.delta()[0] - std::f64::consts::PI).abs() / std::f64::consts::PI < 1e-3);
        assert!(
            (p.delta()[1] - 2.0 * std::f64::consts::PI).abs() / (2.0 * std::f64::consts::PI) < 1e-3
        );
    }

    #[test]
    fn symmetric_array_satisfies_phase_constraint() {
        let g = Geometry::default_demo();
        assert!(g.is_symmetric());
        let p = phase_table(&g);
        let max_theta = p
            .theta_a()
            .iter()
            .chain(p.theta_b())
            .fold(0.0f64, |m, x| m.max(x.abs()));
        let tol = 1e-9 * g.n_elements() as f64 * max_theta;
        let rep = check_phase_constraint(&p, tol);
        assert!(rep.passes, "residual {}", rep.residual);
    }

    #[test]
    fn identical_thetas_have_zero_residual() {
        let p = PhaseTable::new(vec![0.3, 1.7, -4.0], vec![0.3, 1.7, -4.0]);
        let rep = check_phase_constraint(&p, 1e-15);
        assert_eq!(rep.residual, 0.0);
        assert!(rep.passes);
    }

    #[test]
    fn one_sided_array_fails_the_constraint() {
        // all elements on one side of the axis: residual is visibly nonzero
        let g = Geometry::new(5e-7, 1e-4, 1.0, vec![1e-3, 2e-3, 3e-3, 4e-3]).unwrap();
        assert!(!g.is_symmetric());
        let rep = check_phase_constraint(&phase_table(&g), 1e-9);
        assert!(!rep.passes);
        assert!(rep.residual > 1.0);
    }

    #[test]
    fn validation_names_the_problem() {
        assert!(Geometry::new(-5e-7, 1e-4, 1.0, vec![0.0]).is_err());
        assert!(Geometry::new(5e-7, 1e-4, -1.0, vec![0.0]).is_err());
        assert!(Geometry::new(5e-7, 1e-4, 1.0, vec![]).is_err());
        assert!(Geometry::new(5e-7, 1e-4, 1.0, vec![0.0, 0.0]).is_err());
        assert!(Geometry::new(5e-7, 1e-4, 1.0, vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn symmetric_array_is_mirror_exact() {
        let g = Geometry::with_symmetric_array(5e-7, 1e-4, 1.0, 64, 25e-3).unwrap();
        let xs = g.positions();
        for j in 0..64 {
            assert_eq!(xs[j], -xs[63 - j]);
        }
        assert_eq!(g.n_elements(), 64);
        assert!((g.element_spacing() - 25e-3 / 63.0).abs() < 1e-18);
    }

    #[test]
    fn delta_is_exactly_theta_b_minus_theta_a() {
        let p = PhaseTable::new(vec![0.25, -1.5], vec![3.0, 2.25]);
        assert_eq!(p.delta()[0], 3.0 - 0.25);
        assert_eq!(p.delta()[1], 2.25 - (-1.5));
    }
}
