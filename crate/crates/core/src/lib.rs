//! Specular neutron reflectivity from layered models, likelihood fitting by
//! differential evolution, and Metropolis sampling of parameter uncertainties.
//!
//! * [`kernel`]: dynamical (Abelès matrix) and kinematic reflectivity, SLD profiles.
//! * [`inference`]: parameter spaces, forward models, Gaussian log-likelihood.
//! * [`de`]: differential evolution maximizing a log-likelihood.
//! * [`mcmc`]: random-walk Metropolis chains and posterior summaries.
//! * [`toy`]: the negative Ackley function and the overlapping-Gaussians model.

pub mod de;
pub mod error;
pub mod inference;
pub mod kernel;
pub mod mcmc;
pub mod seed;
pub mod toy;

pub use error::{Error, Result};
pub use inference::{
    Binding, Dataset, FnLikelihood, ForwardModel, LayerField, LogLikelihood, Objective,
    ParameterSpace, StructureModel,
};
pub use kernel::{Layer, LayeredStructure, ReflectivityCurve, SldProfile, WavevectorGrid};
