//! Random phases injected before interference degrade visibility by the
//! Gaussian factor e^{-sigma^2/2}; a Monte Carlo ensemble of explicit phase
//! draws converges to the same law. Run with:
//!
//! ```text
//! cargo run -p whichpath-sim --example dephasing
//! ```

use whichpath_sim::analysis::{dephased_pattern, dephased_pattern_mc};
use whichpath_sim::interferometer::{Geometry, ModelVariant};

fn main() {
    let g = Geometry::default_demo();
    let variant = ModelVariant::MarkerOverlap { chi: 0.0 };
    let n_draws = 100_000;
    let seed = 11;

    println!("full-contrast model (chi = 0), visibility under dephasing:\n");
    println!(
        "{:>7} {:>14} {:>14} {:>14}",
        "sigma", "analytic V", "MC V (1e5)", "e^(-s^2/2)"
    );
    for sigma in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0] {
        let analytic = dephased_pattern(variant, &g, sigma).unwrap().visibility;
        let mc = dephased_pattern_mc(variant, &g, sigma, n_draws, seed)
            .unwrap()
            .visibility;
        let law = (-sigma * sigma / 2.0).exp();
        println!("{sigma:>7.2} {analytic:>14.8} {mc:>14.8} {law:>14.8}");
    }

    println!();
    println!("With a partial marker the two losses compose: V = cos(chi) e^(-s^2/2).");
    let chi = 1.0;
    for sigma in [0.5, 1.0] {
        let v = dephased_pattern(ModelVariant::MarkerOverlap { chi }, &g, sigma)
            .unwrap()
            .visibility;
        println!(
            "  chi = {chi}, sigma = {sigma}: V = {v:.8} vs {:.8}",
            chi.cos() * (-sigma * sigma / 2.0f64).exp()
        );
    }
}
