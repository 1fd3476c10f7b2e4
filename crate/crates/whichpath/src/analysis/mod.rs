//! Observable statistics of a final chain state: click patterns, remnant
//! internal superpositions, conditional and joint distributions, eraser
//! post-selection, visibility, distinguishability, and mutual information.

mod duality;
mod info;
mod pattern;
mod remnant;

pub use duality::{distinguishability, duality_check};
pub use info::{
    click_internal_joint, click_internal_joint_rho, mutual_information, JointDistribution,
};
pub use pattern::{
    click_distribution, click_distribution_rho, dephased_final_rho, dephased_pattern,
    dephased_pattern_mc, fit_visibility, fringe_spacing_estimate, raw_visibility, FringeFit,
    PatternMetadata, PatternReport,
};
pub use remnant::{
    conditional_path_distribution, eraser_fringes, internal_distribution_at,
    post_click_internal_state, EraserFringes, InternalBasis,
};
