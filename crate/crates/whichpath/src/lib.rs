//! Exact state-vector simulation of a two-slit detection chain.
//!
//! The chain is modeled as a diffraction map onto detector-pointing rays, an
//! entangling map that records the arriving path in a detector-internal mode,
//! and a projective position measurement, with analytics for interference
//! visibility, which-path distinguishability, eraser post-selection, and the
//! mutual information carried by the internal record.
//!
//! Module layout:
//! - [`statevec`]: labeled bases, states, maps, density matrices, measurement
//! - [`interferometer`]: geometry, phase tables, the chain maps, dephasing
//! - [`analysis`]: click patterns, visibility, distinguishability, eraser
//! - [`sampler`]: seeded event generation and goodness-of-fit checks
//! - [`cli`]: config file handling and the `whichpath-sim` subcommands
//!
//! # Examples
//!
//! The `examples/` directory is the guided tour; each one runs standalone and
//! narrates what it prints:
//!
//! ```text
//! cargo run -p whichpath-sim --example nonreversibility   # Gram defects of U1, U2, U
//! cargo run -p whichpath-sim --example click_patterns     # the three detector models
//! cargo run -p whichpath-sim --example remnant_record     # what a click leaves behind
//! cargo run -p whichpath-sim --example quantum_eraser     # post-selected fringes
//! cargo run -p whichpath-sim --example duality_sweep      # V, D, V^2+D^2, MI vs chi
//! cargo run -p whichpath-sim --example dephasing          # the e^{-sigma^2/2} envelope
//! cargo run -p whichpath-sim --example sampling_run       # seeded events + chi-square
//! ```
//!
//! The smallest useful program:
//!
//! ```
//! use whichpath_sim::analysis::click_distribution;
//! use whichpath_sim::interferometer::{evolve, Geometry, ModelVariant};
//!
//! let g = Geometry::default_demo();
//! let chain = evolve(ModelVariant::MarkerOverlap { chi: 0.7 }, &g)?;
//! let pattern = click_distribution(&chain)?;
//! assert!((pattern.visibility - 0.7f64.cos()).abs() < 1e-6);
//! # Ok::<(), whichpath_sim::SimError>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod interferometer;
pub mod rng;
pub mod sampler;
pub mod statevec;

pub use error::{Result, SimError};
