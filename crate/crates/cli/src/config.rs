//! Model configuration files.
//!
//! A config is a TOML document with an ordered `[[layers]]` array (ambient
//! first, substrate last), optional `[[fit]]` entries naming free layer
//! fields with their bounds, and optional `[de]` and `[mcmc]` tables:
//!
//! ```toml
//! [[layers]]
//! name = "air"
//! sld = 0.0
//!
//! [[layers]]
//! name = "film"
//! thickness = 100.0
//! sld = 3.5e-6
//! roughness = 3.0
//!
//! [[layers]]
//! name = "Si"
//! sld = 2.074e-6
//! roughness = 3.0
//!
//! [[fit]]
//! layer = "film"
//! field = "thickness"
//! lower = 10.0
//! upper = 300.0
//!
//! [de]
//! k_m = 0.5
//! k_r = 0.5
//! population = 20
//! max_iterations = 100
//!
//! [mcmc]
//! n_samples = 10000
//! burn_in = 2500
//! ```

use std::ops::Range;
use std::path::Path;

use refl_core::de::DeConfig;
use refl_core::mcmc::{default_step_scale, McmcConfig};
use refl_core::{Binding, Layer, LayerField, LayeredStructure, ParameterSpace, StructureModel};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config {path}: {message}")]
    Read { path: String, message: String },

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },

    #[error("missing [[layers]] structure section")]
    MissingStructure,

    #[error("line {line}: layer '{name}': {reason}")]
    InvalidLayer {
        line: usize,
        name: String,
        reason: String,
    },

    #[error("line {line}: fit entry '{entry}' does not match any layer field: {reason}")]
    UnresolvedFit {
        line: usize,
        entry: String,
        reason: String,
    },

    #[error("line {line}: fit entry '{entry}' has invalid bounds [{lower}, {upper}]")]
    InvalidBounds {
        line: usize,
        entry: String,
        lower: f64,
        upper: f64,
    },

    #[error("line {line}: [{table}] {message}")]
    InvalidSetting {
        line: usize,
        table: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedLayer {
    pub name: String,
    pub thickness: f64,
    pub sld: f64,
    pub roughness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParameter {
    pub layer: String,
    pub field: LayerField,
    pub lower: f64,
    pub upper: f64,
}

impl FitParameter {
    pub fn name(&self) -> String {
        format!("{}.{}", self.layer, self.field)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeSettings {
    pub k_m: f64,
    pub k_r: f64,
    pub population: usize,
    pub max_iterations: usize,
    pub tol: f64,
}

impl Default for DeSettings {
    fn default() -> Self {
        Self {
            k_m: 0.5,
            k_r: 0.5,
            population: 20,
            max_iterations: 100,
            tol: 0.0,
        }
    }
}

impl DeSettings {
    pub fn to_config(&self, seed: u64) -> DeConfig {
        DeConfig {
            mutation: self.k_m,
            recombination: self.k_r,
            population_size: self.population,
            max_iterations: self.max_iterations,
            seed,
            tol: self.tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcSettings {
    pub n_samples: usize,
    pub burn_in: usize,
    pub n_chains: usize,
    /// Explicit per-parameter steps; 2% of each bound width when absent.
    pub step_scale: Option<Vec<f64>>,
    pub tune: bool,
}

impl Default for McmcSettings {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            burn_in: 2_500,
            n_chains: 1,
            step_scale: None,
            tune: true,
        }
    }
}

impl McmcSettings {
    pub fn to_config(&self, seed: u64, space: &ParameterSpace) -> McmcConfig {
        McmcConfig {
            step_scale: self
                .step_scale
                .clone()
                .unwrap_or_else(|| default_step_scale(space)),
            n_samples: self.n_samples,
            burn_in: self.burn_in,
            seed,
            n_chains: self.n_chains,
            tune: self.tune,
        }
    }
}

/// A validated model configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub layers: Vec<NamedLayer>,
    pub fit: Vec<FitParameter>,
    pub de: DeSettings,
    pub mcmc: McmcSettings,
}

impl ModelConfig {
    pub fn structure(&self) -> LayeredStructure {
        LayeredStructure::new(
            self.layers
                .iter()
                .map(|l| Layer::new(l.thickness, l.sld, l.roughness))
                .collect(),
        )
        .expect("validated on load")
    }

    fn layer_index(&self, name: &str) -> usize {
        self.layers
            .iter()
            .position(|l| l.name == name)
            .expect("validated on load")
    }

    pub fn parameter_names(&self) -> Vec<String> {
        self.fit.iter().map(FitParameter::name).collect()
    }

    pub fn space(&self) -> refl_core::Result<ParameterSpace> {
        ParameterSpace::new(
            self.parameter_names(),
            self.fit.iter().map(|f| f.lower).collect(),
            self.fit.iter().map(|f| f.upper).collect(),
        )
    }

    pub fn forward_model(&self) -> StructureModel {
        let bindings = self
            .fit
            .iter()
            .map(|f| Binding {
                layer: self.layer_index(&f.layer),
                field: f.field,
            })
            .collect();
        StructureModel::new(self.structure(), bindings).expect("validated on load")
    }

    /// Current values of the free parameters in the layer table.
    pub fn initial_values(&self) -> Vec<f64> {
        self.fit
            .iter()
            .map(|f| {
                let l = &self.layers[self.layer_index(&f.layer)];
                match f.field {
                    LayerField::Thickness => l.thickness,
                    LayerField::Sld => l.sld,
                    LayerField::Roughness => l.roughness,
                }
            })
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    layers: Option<Vec<Spanned<RawLayer>>>,
    #[serde(default)]
    fit: Vec<Spanned<RawFit>>,
    de: Option<Spanned<RawDe>>,
    mcmc: Option<Spanned<RawMcmc>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    name: String,
    #[serde(default)]
    thickness: f64,
    sld: f64,
    #[serde(default)]
    roughness: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFit {
    layer: String,
    field: String,
    lower: f64,
    upper: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDe {
    k_m: Option<f64>,
    k_r: Option<f64>,
    population: Option<usize>,
    max_iterations: Option<usize>,
    tol: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMcmc {
    n_samples: Option<usize>,
    burn_in: Option<usize>,
    n_chains: Option<usize>,
    step_scale: Option<Vec<f64>>,
    tune: Option<bool>,
}

/// 1-based line and column of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    position(text, span.start).0
}

pub fn read_model_config(path: &Path) -> Result<ModelConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_model_config(&text)
}

pub fn parse_model_config(text: &str) -> Result<ModelConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| position(text, s.start));
        let message = e.message().to_string();
        match message
            .strip_prefix("unknown field `")
            .and_then(|rest| rest.split('`').next())
        {
            Some(key) => ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            },
            None => ConfigError::Syntax {
                line,
                column,
                message,
            },
        }
    })?;

    let raw_layers = raw.layers.ok_or(ConfigError::MissingStructure)?;
    if raw_layers.is_empty() {
        return Err(ConfigError::MissingStructure);
    }
    let mut layers: Vec<NamedLayer> = Vec::with_capacity(raw_layers.len());
    for spanned in &raw_layers {
        let line = line_of(text, spanned.span());
        let l = spanned.get_ref();
        let invalid = |reason: &str| ConfigError::InvalidLayer {
            line,
            name: l.name.clone(),
            reason: reason.to_string(),
        };
        if layers.iter().any(|existing| existing.name == l.name) {
            return Err(invalid("duplicate layer name"));
        }
        if !(l.thickness.is_finite() && l.thickness >= 0.0) {
            return Err(invalid("thickness must be finite and >= 0"));
        }
        if !l.sld.is_finite() {
            return Err(invalid("sld must be finite"));
        }
        if !(l.roughness.is_finite() && l.roughness >= 0.0) {
            return Err(invalid("roughness must be finite and >= 0"));
        }
        layers.push(NamedLayer {
            name: l.name.clone(),
            thickness: l.thickness,
            sld: l.sld,
            roughness: l.roughness,
        });
    }
    if layers.len() < 2 {
        let line = line_of(text, raw_layers[0].span());
        return Err(ConfigError::InvalidLayer {
            line,
            name: layers[0].name.clone(),
            reason: "the structure needs at least an ambient and a substrate layer".into(),
        });
    }

    let mut fit = Vec::with_capacity(raw.fit.len());
    for spanned in &raw.fit {
        let line = line_of(text, spanned.span());
        let f = spanned.get_ref();
        let entry = format!("{}.{}", f.layer, f.field);
        if !layers.iter().any(|l| l.name == f.layer) {
            return Err(ConfigError::UnresolvedFit {
                line,
                entry,
                reason: format!("no layer named '{}'", f.layer),
            });
        }
        let field: LayerField = f
            .field
            .parse()
            .map_err(|reason| ConfigError::UnresolvedFit {
                line,
                entry: entry.clone(),
                reason,
            })?;
        if !(f.lower.is_finite() && f.upper.is_finite() && f.lower < f.upper) {
            return Err(ConfigError::InvalidBounds {
                line,
                entry,
                lower: f.lower,
                upper: f.upper,
            });
        }
        if field != LayerField::Sld && f.lower < 0.0 {
            return Err(ConfigError::InvalidBounds {
                line,
                entry,
                lower: f.lower,
                upper: f.upper,
            });
        }
        if fit
            .iter()
            .any(|p: &FitParameter| p.layer == f.layer && p.field == field)
        {
            return Err(ConfigError::UnresolvedFit {
                line,
                entry,
                reason: "the same field is listed twice".into(),
            });
        }
        fit.push(FitParameter {
            layer: f.layer.clone(),
            field,
            lower: f.lower,
            upper: f.upper,
        });
    }

    let mut de = DeSettings::default();
    if let Some(spanned) = &raw.de {
        let line = line_of(text, spanned.span());
        let d = spanned.get_ref();
        de.k_m = d.k_m.unwrap_or(de.k_m);
        de.k_r = d.k_r.unwrap_or(de.k_r);
        de.population = d.population.unwrap_or(de.population);
        de.max_iterations = d.max_iterations.unwrap_or(de.max_iterations);
        de.tol = d.tol.unwrap_or(de.tol);
        de.to_config(0)
            .validate()
            .map_err(|e| ConfigError::InvalidSetting {
                line,
                table: "de".into(),
                message: e.to_string(),
            })?;
    }

    let mut mcmc = McmcSettings::default();
    if let Some(spanned) = &raw.mcmc {
        let line = line_of(text, spanned.span());
        let m = spanned.get_ref();
        let invalid = |message: String| ConfigError::InvalidSetting {
            line,
            table: "mcmc".into(),
            message,
        };
        mcmc.n_samples = m.n_samples.unwrap_or(mcmc.n_samples);
        mcmc.burn_in = m.burn_in.unwrap_or(mcmc.n_samples / 4);
        mcmc.n_chains = m.n_chains.unwrap_or(mcmc.n_chains);
        mcmc.tune = m.tune.unwrap_or(mcmc.tune);
        mcmc.step_scale = m.step_scale.clone();
        if mcmc.burn_in >= mcmc.n_samples {
            return Err(invalid(format!(
                "burn_in ({}) must be smaller than n_samples ({})",
                mcmc.burn_in, mcmc.n_samples
            )));
        }
        if mcmc.n_chains == 0 {
            return Err(invalid("n_chains must be at least 1".into()));
        }
        if let Some(steps) = &mcmc.step_scale {
            if steps.len() != fit.len() {
                return Err(invalid(format!(
                    "step_scale has {} entries but there are {} fit parameters",
                    steps.len(),
                    fit.len()
                )));
            }
            if steps.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                return Err(invalid("step_scale entries must be > 0".into()));
            }
        }
    }

    Ok(ModelConfig {
        layers,
        fit,
        de,
        mcmc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[[layers]]
name = \"air\"
sld = 0.0

[[layers]]
name = \"Si\"
sld = 2.074e-6
";

    #[test]
    fn minimal_config_has_no_free_parameters() {
        let c = parse_model_config(MINIMAL).unwrap();
        assert_eq!(c.layers.len(), 2);
        assert!(c.fit.is_empty());
        assert_eq!(c.structure().layers()[1].sld, 2.074e-6);
    }

    #[test]
    fn omitted_tables_take_defaults() {
        let c = parse_model_config(MINIMAL).unwrap();
        assert_eq!(c.de.k_m, 0.5);
        assert_eq!(c.de.k_r, 0.5);
        assert_eq!(c.de.population, 20);
        assert_eq!(c.de.max_iterations, 100);
        assert_eq!(c.mcmc.n_samples, 10_000);
        assert_eq!(c.mcmc.burn_in, 2_500);
    }

    #[test]
    fn fit_on_missing_layer_is_named() {
        let text = format!(
            "{MINIMAL}\n[[fit]]\nlayer = \"film\"\nfield = \"thickness\"\nlower = 1.0\nupper = 2.0\n"
        );
        match parse_model_config(&text) {
            Err(ConfigError::UnresolvedFit { line, entry, .. }) => {
                assert_eq!(entry, "film.thickness");
                assert_eq!(line, 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_field_name_in_fit() {
        let text = format!(
            "{MINIMAL}\n[[fit]]\nlayer = \"Si\"\nfield = \"density\"\nlower = 1.0\nupper = 2.0\n"
        );
        assert!(matches!(
            parse_model_config(&text),
            Err(ConfigError::UnresolvedFit { .. })
        ));
    }

    #[test]
    fn unknown_key_is_line_anchored() {
        let text = format!("{MINIMAL}\n[de]\nk_m = 0.7\nmutation = 3\n");
        assert_eq!(
            parse_model_config(&text),
            Err(ConfigError::UnknownKey {
                line: 11,
                key: "mutation".into()
            })
        );
        let text = "colour = 3\n[[layers]]\nname = \"a\"\nsld = 0.0\n";
        assert_eq!(
            parse_model_config(text),
            Err(ConfigError::UnknownKey {
                line: 1,
                key: "colour".into()
            })
        );
    }

    #[test]
    fn missing_structure() {
        assert_eq!(
            parse_model_config("[de]\nk_m = 0.5\n"),
            Err(ConfigError::MissingStructure)
        );
    }

    #[test]
    fn inverted_bounds() {
        let text = format!(
            "{MINIMAL}\n[[fit]]\nlayer = \"Si\"\nfield = \"roughness\"\nlower = 5.0\nupper = 2.0\n"
        );
        assert!(matches!(
            parse_model_config(&text),
            Err(ConfigError::InvalidBounds { line: 9, .. })
        ));
    }

    #[test]
    fn burn_in_must_be_shorter_than_chain() {
        let text = format!("{MINIMAL}\n[mcmc]\nn_samples = 100\nburn_in = 100\n");
        assert!(matches!(
            parse_model_config(&text),
            Err(ConfigError::InvalidSetting { line: 9, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_model_config("[[layers]]\nname = \n") {
            Err(ConfigError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_layer_is_rejected() {
        assert!(matches!(
            parse_model_config("[[layers]]\nname = \"a\"\nsld = 0.0\n"),
            Err(ConfigError::InvalidLayer { line: 1, .. })
        ));
    }

    #[test]
    fn fit_parameters_bind_in_order() {
        let text = format!(
            "{MINIMAL}\n[[fit]]\nlayer = \"Si\"\nfield = \"sld\"\nlower = 1e-6\nupper = 3e-6\n\n\
             [[fit]]\nlayer = \"Si\"\nfield = \"roughness\"\nlower = 0.0\nupper = 10.0\n"
        );
        let c = parse_model_config(&text).unwrap();
        assert_eq!(c.parameter_names(), vec!["Si.sld", "Si.roughness"]);
        assert_eq!(c.initial_values(), vec![2.074e-6, 0.0]);
        let space = c.space().unwrap();
        assert_eq!(space.lower(), &[1e-6, 0.0]);
        let s = c.forward_model().bind(&[2.5e-6, 4.0]).unwrap();
        assert_eq!(s.layers()[1].sld, 2.5e-6);
        assert_eq!(s.layers()[1].roughness, 4.0);
    }
}
