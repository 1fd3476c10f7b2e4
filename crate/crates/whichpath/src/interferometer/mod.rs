//! The physical model: slit/screen geometry, optical phase tables, the
//! diffraction and detector-entangling maps in three variants, the staged
//! chain evolution, and the dephasing channel.

mod chain;
mod dephasing;
mod geometry;

pub use chain::{
    build_u, build_u1, build_u2, diffracted_basis, evolve, evolve_with_phases, final_basis,
    initial_basis, ChainState, ModelVariant, Stage,
};
pub use dephasing::{apply_dephasing, apply_dephasing_monte_carlo, gaussian_phase_average};
pub use geometry::{
    check_phase_constraint, path_distances, phase_table, Distances, Geometry,
    PhaseConstraintReport, PhaseTable,
};
