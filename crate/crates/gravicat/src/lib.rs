//! gravicat: a numerical laboratory for the Schrödinger–Newton equation
//! and related deterministic nonlinear Schrödinger equations.
//!
//! The crate computes self-gravitating solitons, evolves two-lobe cat
//! states, and packages the dynamical consequences of the nonlinearity —
//! conditional-state divergence, projector telegraphy, the Planck-mass
//! threshold, and the breakdown of mixing/evolution interchangeability —
//! as reproducible desk-scale experiments with quantitative pass/fail
//! criteria.

pub mod config;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod params;
pub mod potentials;
pub mod propagate;
pub mod spectral;
pub mod states;
pub mod wavefunction;

pub use ensemble::{gram_trace_distance, PureEnsemble};
pub use error::{Error, Result};
pub use grid::Grid;
pub use params::{Params, UnitSystem};
pub use potentials::{PotentialField, StateDependentPotential};
pub use propagate::{
    energies, relax_imaginary, rescale_solution, step_real, EvolutionTrace, SolitonProfile,
    StepperConfig,
};
pub use states::{build_cat, canonical_ensembles, CatSign, CatSpec, ProjectorLR};
pub use wavefunction::WaveFunction;
