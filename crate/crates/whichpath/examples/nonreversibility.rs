//! Why the detector needs internal modes: the map |beta_x> -> |phi_x| alone
//! sends two orthogonal inputs to the same output, so it cannot be an
//! isometry. Run with:
//!
//! ```text
//! cargo run -p whichpath-sim --example nonreversibility
//! ```

use whichpath_sim::interferometer::{
    build_u, build_u1, build_u2, phase_table, Geometry, ModelVariant,
};
use whichpath_sim::statevec::is_isometry;

fn main() {
    let g = Geometry::default_demo();
    let p = phase_table(&g);
    let tol = 1e-12;

    println!("Gram defects max |(V†V - I)_ij| on the default geometry (N = 64):\n");
    println!(
        "{:<28} {:>14} {:>14} {:>14}",
        "variant", "U1", "U2", "U = U2 ∘ U1"
    );

    for variant in [
        ModelVariant::PaperExact,
        ModelVariant::Collapsed,
        ModelVariant::MarkerOverlap { chi: 0.9 },
        ModelVariant::MarkerOverlap { chi: 0.0 },
    ] {
        let d1 = is_isometry(&build_u1(&p, variant).unwrap(), tol).gram_defect;
        let d2 = is_isometry(&build_u2(&g, variant).unwrap(), tol).gram_defect;
        let du = is_isometry(&build_u(&p, variant).unwrap(), tol).gram_defect;
        println!(
            "{:<28} {d1:>14.3e} {d2:>14.3e} {du:>14.3e}",
            variant.to_string()
        );
    }

    println!();
    println!("The exact chain is an isometry to machine precision: recording the");
    println!("arriving slit in orthogonal internal modes keeps the two inputs");
    println!("distinguishable. Ignoring the internal freedom (collapsed) maps both");
    println!("slits' rays at an element to the same state: the Gram matrix picks up");
    println!("an off-diagonal 1 and the defect saturates. The overlapping-marker");
    println!("model sits in between; its composed defect |gamma c| shrinks as the");
    println!("array resolves more fringes:");
    println!();
    for n in [16usize, 64, 256] {
        let g = Geometry::with_symmetric_array(500e-9, 100e-6, 1.0, n, 25e-3).unwrap();
        let p = phase_table(&g);
        let du = is_isometry(
            &build_u(&p, ModelVariant::MarkerOverlap { chi: 0.9 }).unwrap(),
            tol,
        )
        .gram_defect;
        println!("  N = {n:>3}: composed defect {du:.3e}");
    }
}
