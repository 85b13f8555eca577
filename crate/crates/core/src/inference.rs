//! Parameter spaces, forward models and the Gaussian log-likelihood.

use std::f64::consts::PI;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, LayeredStructure, ReflectivityCurve};
use crate::seed::rng_from_seed;

/// Named, box-bounded parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSpace {
    names: Vec<String>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ParameterSpace {
    pub fn new(names: Vec<String>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if names.len() != lower.len() || names.len() != upper.len() {
            return Err(Error::InvalidSpace(format!(
                "{} names, {} lower bounds, {} upper bounds",
                names.len(),
                lower.len(),
                upper.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            let (lo, hi) = (lower[i], upper[i]);
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidSpace(format!(
                    "parameter '{name}' needs finite bounds with lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self {
            names,
            lower,
            upper,
        })
    }

    /// Convenience constructor from `(name, lower, upper)` triples.
    pub fn from_bounds<S: Into<String>>(
        bounds: impl IntoIterator<Item = (S, f64, f64)>,
    ) -> Result<Self> {
        let mut names = Vec::new();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (n, lo, hi) in bounds {
            names.push(n.into());
            lower.push(lo);
            upper.push(hi);
        }
        Self::new(names, lower, upper)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    /// True when `theta` has the right length and every entry lies in its
    /// closed interval.
    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.len() == self.dim()
            && theta
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&t, (&lo, &hi))| t >= lo && t <= hi)
    }

    pub fn clip(&self, theta: &mut [f64]) {
        for (t, (&lo, &hi)) in theta.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *t = t.clamp(lo, hi);
        }
    }
}

/// Anything the optimizer and sampler can maximize: a bounded space plus a
/// log-likelihood that is `-inf` outside the bounds.
pub trait LogLikelihood: Sync {
    fn space(&self) -> &ParameterSpace;

    fn ln_likelihood(&self, theta: &[f64]) -> f64;
}

/// Wraps a closure as a [`LogLikelihood`]. Out-of-bounds points and
/// non-finite values map to `-inf`.
pub struct FnLikelihood<F> {
    space: ParameterSpace,
    f: F,
}

impl<F> FnLikelihood<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(space: ParameterSpace, f: F) -> Self {
        Self { space, f }
    }
}

impl<F> LogLikelihood for FnLikelihood<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn ln_likelihood(&self, theta: &[f64]) -> f64 {
        if !self.space.contains(theta) {
            return f64::NEG_INFINITY;
        }
        let v = (self.f)(theta);
        if v.is_nan() || v == f64::INFINITY {
            f64::NEG_INFINITY
        } else {
            v
        }
    }
}

/// Maps a parameter vector to model values on an abscissa.
pub trait ForwardModel: Sync {
    fn n_params(&self) -> usize;

    fn evaluate(&self, theta: &[f64], x: &[f64]) -> Result<Vec<f64>>;
}

/// Which property of a layer a fit parameter drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerField {
    Thickness,
    Sld,
    Roughness,
}

impl std::str::FromStr for LayerField {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "thickness" => Ok(Self::Thickness),
            "sld" => Ok(Self::Sld),
            "roughness" => Ok(Self::Roughness),
            other => Err(format!(
                "unknown layer field '{other}' (expected thickness, sld or roughness)"
            )),
        }
    }
}

impl std::fmt::Display for LayerField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Thickness => "thickness",
            Self::Sld => "sld",
            Self::Roughness => "roughness",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub layer: usize,
    pub field: LayerField,
}

/// Dynamical reflectivity of a template structure whose bound fields are
/// overwritten by the parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureModel {
    template: LayeredStructure,
    bindings: Vec<Binding>,
}

impl StructureModel {
    pub fn new(template: LayeredStructure, bindings: Vec<Binding>) -> Result<Self> {
        for b in &bindings {
            if b.layer >= template.len() {
                return Err(Error::InvalidSpace(format!(
                    "binding refers to layer {} but the structure has {} layers",
                    b.layer,
                    template.len()
                )));
            }
        }
        Ok(Self { template, bindings })
    }

    pub fn template(&self) -> &LayeredStructure {
        &self.template
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    /// Concrete structure for `theta`.
    pub fn bind(&self, theta: &[f64]) -> Result<LayeredStructure> {
        if theta.len() != self.bindings.len() {
            return Err(Error::DimensionMismatch {
                expected: self.bindings.len(),
                got: theta.len(),
            });
        }
        let mut layers = self.template.layers().to_vec();
        for (b, &v) in self.bindings.iter().zip(theta) {
            let layer = &mut layers[b.layer];
            match b.field {
                LayerField::Thickness => layer.thickness = v,
                LayerField::Sld => layer.sld = v,
                LayerField::Roughness => layer.roughness = v,
            }
        }
        LayeredStructure::new(layers)
    }
}

impl ForwardModel for StructureModel {
    fn n_params(&self) -> usize {
        self.bindings.len()
    }

    fn evaluate(&self, theta: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        kernel::dynamical_values(&self.bind(theta)?, q)
    }
}

/// Measured data: a curve that carries uncertainties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ReflectivityCurve", into = "ReflectivityCurve")]
pub struct Dataset {
    curve: ReflectivityCurve,
}

impl Dataset {
    pub fn new(curve: ReflectivityCurve) -> Result<Self> {
        if curve.dr.is_none() {
            return Err(Error::InvalidCurve(
                "a dataset needs uncertainties (dR column)".into(),
            ));
        }
        // Re-validate in case the curve was built field by field.
        let curve = ReflectivityCurve::new(curve.q, curve.r, curve.dr)?;
        Ok(Self { curve })
    }

    pub fn from_columns(x: Vec<f64>, y: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        Self::new(ReflectivityCurve::new(x, y, Some(dy))?)
    }

    pub fn curve(&self) -> &ReflectivityCurve {
        &self.curve
    }

    pub fn x(&self) -> &[f64] {
        &self.curve.q
    }

    pub fn y(&self) -> &[f64] {
        &self.curve.r
    }

    pub fn dy(&self) -> &[f64] {
        self.curve.dr.as_deref().expect("validated on construction")
    }

    pub fn len(&self) -> usize {
        self.curve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curve.is_empty()
    }
}

impl TryFrom<ReflectivityCurve> for Dataset {
    type Error = Error;

    fn try_from(curve: ReflectivityCurve) -> Result<Self> {
        Self::new(curve)
    }
}

impl From<Dataset> for ReflectivityCurve {
    fn from(d: Dataset) -> Self {
        d.curve
    }
}

/// Synthetic observations `y + ε` with `ε ~ N(0, δ)` and
/// `δ = max(noise_fraction·|y|, floor)`, drawn from a seeded stream.
pub fn with_gaussian_noise(
    x: &[f64],
    y: &[f64],
    noise_fraction: f64,
    floor: f64,
    seed: u64,
) -> Result<Dataset> {
    if noise_fraction.is_nan() || noise_fraction < 0.0 || floor.is_nan() || floor <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "need noise_fraction >= 0 and floor > 0, got {noise_fraction} and {floor}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let dy: Vec<f64> = y
        .iter()
        .map(|v| (noise_fraction * v.abs()).max(floor))
        .collect();
    let observed = y
        .iter()
        .zip(&dy)
        .map(|(&v, &d)| {
            let noise = Normal::new(0.0, d).map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Ok(v + noise.sample(&mut rng))
        })
        .collect::<Result<Vec<f64>>>()?;
    Dataset::from_columns(x.to_vec(), observed, dy)
}

/// `-0.5 Σ [((y - m)/δ)² + ln(2π δ²)]`.
pub fn gaussian_ln_likelihood(y: &[f64], dy: &[f64], model: &[f64]) -> f64 {
    y.iter()
        .zip(dy)
        .zip(model)
        .map(|((&y, &dy), &m)| {
            let pull = (y - m) / dy;
            pull * pull + (2.0 * PI * dy * dy).ln()
        })
        .sum::<f64>()
        * -0.5
}

/// A dataset, a parameter space, and a forward model evaluated on the
/// dataset's abscissa.
pub struct Objective<M> {
    dataset: Dataset,
    space: ParameterSpace,
    forward: M,
}

impl<M: ForwardModel> Objective<M> {
    pub fn new(dataset: Dataset, space: ParameterSpace, forward: M) -> Result<Self> {
        if forward.n_params() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: forward.n_params(),
                got: space.dim(),
            });
        }
        Ok(Self {
            dataset,
            space,
            forward,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn forward(&self) -> &M {
        &self.forward
    }

    /// Model values `R_m` on the dataset grid.
    pub fn model_curve(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.forward.evaluate(theta, self.dataset.x())
    }
}

impl<M: ForwardModel> LogLikelihood for Objective<M> {
    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn ln_likelihood(&self, theta: &[f64]) -> f64 {
        if !self.space.contains(theta) {
            return f64::NEG_INFINITY;
        }
        let model = match self.model_curve(theta) {
            Ok(m) if m.iter().all(|v| v.is_finite()) => m,
            _ => return f64::NEG_INFINITY,
        };
        let lnl = gaussian_ln_likelihood(self.dataset.y(), self.dataset.dy(), &model);
        if lnl.is_nan() {
            f64::NEG_INFINITY
        } else {
            lnl
        }
    }
}
