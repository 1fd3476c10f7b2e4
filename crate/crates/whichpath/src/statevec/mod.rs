//! Finite-dimensional complex linear algebra over labeled bases: states,
//! maps, density matrices, tensor products, projective measurement, and
//! isometry verification.

mod density;
mod label;
mod map;
mod projector;
mod state;

pub use density::{apply_map_density, density_from, mix, partial_trace, DensityMatrix};
pub use label::{Basis, BasisLabel, ClickTag, Component, Mode, Slit, Subsystem};
pub use map::{apply_map, is_isometry, IsometryReport, LinearMap};
pub use projector::{
    outcome_distribution, outcome_distribution_rho, projective_measure, MeasureOutcome,
    ProjectorOutcome, ProjectorSet,
};
pub use state::{inner, tensor, StateVector};
