use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid layer {index}: {reason}")]
    InvalidLayer { index: usize, reason: String },

    #[error("a layered structure needs at least an ambient and a substrate, got {0} layer(s)")]
    TooFewLayers(usize),

    #[error("invalid wavevector grid: {0}")]
    InvalidGrid(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("degenerate Fresnel interface: both wavevectors are zero")]
    DegenerateInterface,

    #[error("non-finite reflectivity at q = {q}")]
    NumericalOverflow { q: f64 },

    #[error("kinematic reflectivity only supports sharp interfaces (layer {layer} has roughness {sigma})")]
    UnsupportedRoughness { layer: usize, sigma: f64 },

    #[error("invalid parameter space: {0}")]
    InvalidSpace(String),

    #[error("parameter vector has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("objective is -inf for every initial candidate; check bounds and model")]
    UnusableSpace,

    #[error("start point {0:?} lies outside the parameter bounds or has non-finite likelihood")]
    InvalidStart(Vec<f64>),

    #[error("need at least {needed} post-burn-in samples, have {available}")]
    InsufficientSamples { needed: usize, available: usize },
}
