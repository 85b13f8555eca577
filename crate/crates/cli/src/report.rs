//! Machine-readable results of `fit` and `sample`.

use refl_core::de::{DeResult, Termination};
use refl_core::mcmc::{Chain, PosteriorSummary};
use refl_core::ParameterSpace;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;

pub const TOOL: &str = "refl";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterEstimate {
    pub name: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn estimates(space: &ParameterSpace, theta: &[f64]) -> Vec<ParameterEstimate> {
    (0..space.dim())
        .map(|i| ParameterEstimate {
            name: space.names()[i].clone(),
            value: theta[i],
            lower: space.lower()[i],
            upper: space.upper()[i],
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSummary {
    pub generations_run: usize,
    pub termination: Termination,
    /// Best log-likelihood after each generation, starting with the initial population.
    pub best_ln_likelihood_history: Vec<f64>,
}

impl From<&DeResult> for OptimizerSummary {
    fn from(r: &DeResult) -> Self {
        Self {
            generations_run: r.generations_run,
            termination: r.termination,
            best_ln_likelihood_history: r.history.iter().map(|g| g.best_ln_likelihood).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub seed: u64,
    pub acceptance_rate: f64,
    pub step_scale: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorReport {
    pub names: Vec<String>,
    pub summary: PosteriorSummary,
    pub chains: Vec<ChainStats>,
    /// Fraction of posterior-predictive points within three uncertainties of the data.
    pub predictive_within_3_sigma: f64,
}

impl PosteriorReport {
    pub fn new(
        space: &ParameterSpace,
        summary: PosteriorSummary,
        chains: &[Chain],
        predictive_within_3_sigma: f64,
    ) -> Self {
        Self {
            names: space.names().to_vec(),
            summary,
            chains: chains
                .iter()
                .map(|c| ChainStats {
                    seed: c.seed,
                    acceptance_rate: c.acceptance_rate(),
                    step_scale: c.step_scale.clone(),
                })
                .collect(),
            predictive_within_3_sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub master: u64,
    pub de: Option<u64>,
    pub mcmc: Option<u64>,
}

/// Wall-clock durations; the only non-reproducible part of a report.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub de_seconds: Option<f64>,
    pub mcmc_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub tool: String,
    pub version: String,
    pub parameters: Vec<ParameterEstimate>,
    pub best_ln_likelihood: f64,
    pub n_points: usize,
    pub optimizer: Option<OptimizerSummary>,
    pub posterior: Option<PosteriorReport>,
    pub config: ModelConfig,
    pub seeds: Seeds,
    pub timings: Timings,
}

impl FitReport {
    pub fn best_theta(&self) -> Vec<f64> {
        self.parameters.iter().map(|p| p.value).collect()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|mut s| {
            s.push('\n');
            s
        })
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_model_config;
    use refl_core::mcmc::summarize;

    fn sample_report() -> FitReport {
        let config = parse_model_config(
            "[[layers]]\nname = \"air\"\nsld = 0.0\n[[layers]]\nname = \"Si\"\nsld = 2.074e-6\n\
             [[fit]]\nlayer = \"Si\"\nfield = \"sld\"\nlower = 1e-6\nupper = 3e-6\n",
        )
        .unwrap();
        let space = config.space().unwrap();
        let samples: Vec<Vec<f64>> = (0..200)
            .map(|i| vec![2e-6 + 1e-9 * (i as f64).sin()])
            .collect();
        let chain = Chain {
            ln_likelihood: vec![-1.0 / 3.0; samples.len()],
            accepted: vec![true; samples.len()],
            samples,
            burn_in: 50,
            seed: u64::MAX,
            step_scale: vec![4e-8],
        };
        let summary = summarize(std::slice::from_ref(&chain)).unwrap();
        FitReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            parameters: estimates(&space, &[2.074_000_000_000_000_2e-6]),
            best_ln_likelihood: -123.456_789_012_345_67,
            n_points: 200,
            optimizer: Some(OptimizerSummary {
                generations_run: 2,
                termination: Termination::MaxIterations,
                best_ln_likelihood_history: vec![-1e300, -0.1 + 0.2, 5e-324],
            }),
            posterior: Some(PosteriorReport::new(&space, summary, &[chain], 0.987)),
            config,
            seeds: Seeds {
                master: 42,
                de: Some(0xdead_beef_cafe_f00d),
                mcmc: None,
            },
            timings: Timings {
                de_seconds: Some(0.125),
                mcmc_seconds: None,
            },
        }
    }

    #[test]
    fn report_round_trips_exactly() {
        let report = sample_report();
        let json = report.to_json().unwrap();
        let back = FitReport::from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn timings_are_a_separate_object() {
        let v: serde_json::Value =
            serde_json::from_str(&sample_report().to_json().unwrap()).unwrap();
        assert_eq!(v["timings"]["de_seconds"], 0.125);
        assert_eq!(v["config"]["de"]["k_m"], 0.5);
        assert_eq!(v["parameters"][0]["name"], "Si.sld");
    }
}
