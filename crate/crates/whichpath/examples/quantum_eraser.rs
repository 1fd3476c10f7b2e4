//! Eraser post-selection: conditioning the flat click pattern on a rotated
//! internal-mode outcome restores full-contrast fringes, and the two
//! conditionals mix back to the flat marginal. Run with:
//!
//! ```text
//! cargo run -p whichpath-sim --example quantum_eraser
//! ```

use whichpath_sim::analysis::eraser_fringes;
use whichpath_sim::interferometer::{evolve, Geometry, ModelVariant};

fn bar(p: f64, p_max: f64, width: usize) -> String {
    "#".repeat(((p / p_max) * width as f64).round() as usize)
}

fn main() {
    let g = Geometry::default_demo();
    let cs = evolve(ModelVariant::PaperExact, &g).unwrap();
    let phi = 0.0;
    let er = eraser_fringes(&cs, phi).unwrap();

    println!(
        "selection weights: p(+) = {:.6}, p(-) = {:.6}",
        er.p_plus, er.p_minus
    );
    println!(
        "conditional visibilities: V(+) = {:.9}, V(-) = {:.9}\n",
        er.plus.visibility, er.minus.visibility
    );

    let p_max = er
        .plus
        .probs
        .iter()
        .chain(&er.minus.probs)
        .fold(0.0f64, |a, &b| a.max(b));
    println!("{:>9}  {:<26} {:<26}", "x (mm)", "p(x|+)", "p(x|-)");
    for j in (0..er.plus.n_elements()).step_by(4) {
        println!(
            "{:>9.2}  {:<26} {:<26}",
            er.plus.positions[j] * 1e3,
            bar(er.plus.probs[j], p_max, 24),
            bar(er.minus.probs[j], p_max, 24),
        );
    }

    let n = er.plus.n_elements();
    let residual = (0..n)
        .map(|j| {
            let mixed = er.p_plus * er.plus.probs[j] + er.p_minus * er.minus.probs[j];
            (mixed - 1.0 / n as f64).abs()
        })
        .fold(0.0f64, f64::max);
    println!("\nmixture vs flat marginal: max deviation {residual:.2e}");
    println!("The fringes were in the joint statistics all along; selecting on the");
    println!("record's rotated outcome sorts the flat pattern into two anti-phased");
    println!("interference patterns without touching the registered marginal.");
}
