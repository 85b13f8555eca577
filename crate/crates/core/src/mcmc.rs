//! Random-walk Metropolis sampling over a box-bounded parameter space.
//!
//! Proposals are `θ + a∘R` with `R` standard normal per coordinate and are
//! accepted with probability `min(1, exp(lnL' - lnL))`. Out-of-bounds
//! proposals have `lnL = -inf` and are always rejected, which amounts to a
//! uniform prior on the box. Rejected steps repeat the current sample.
//!
//! During burn-in the step vector can be tuned: every 100 steps it is scaled
//! by 1.1 when the window's acceptance rate is above 0.5 and by 0.9 when it is
//! below 0.2. The kernel is frozen once burn-in ends.

use rand::seq::index;
use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{ForwardModel, LogLikelihood, Objective, ParameterSpace};
use crate::seed::{derive_seed, rng_from_seed, Rng};

/// Steps per tuning window.
pub const TUNE_WINDOW: usize = 100;
/// Target acceptance band for burn-in tuning.
pub const TUNE_BAND: (f64, f64) = (0.2, 0.5);
/// Minimum pooled post-burn-in length for [`summarize`].
pub const MIN_SUMMARY_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    /// Per-parameter proposal scale `a`.
    pub step_scale: Vec<f64>,
    pub n_samples: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub n_chains: usize,
    pub tune: bool,
}

impl McmcConfig {
    /// Defaults for `space`: steps of 2% of each bound width, 10 000 samples,
    /// 25% burn-in, one chain, tuning on.
    pub fn for_space(space: &ParameterSpace) -> Self {
        Self {
            step_scale: default_step_scale(space),
            n_samples: 10_000,
            burn_in: 2_500,
            seed: 42,
            n_chains: 1,
            tune: true,
        }
    }

    pub fn validate(&self, space: &ParameterSpace) -> Result<()> {
        if self.step_scale.len() != space.dim() {
            return Err(Error::InvalidConfig(format!(
                "{} step sizes for {} parameters",
                self.step_scale.len(),
                space.dim()
            )));
        }
        if let Some(a) = self
            .step_scale
            .iter()
            .find(|a| !(a.is_finite() && **a > 0.0))
        {
            return Err(Error::InvalidConfig(format!(
                "step sizes must be finite and > 0, got {a}"
            )));
        }
        if self.burn_in >= self.n_samples {
            return Err(Error::InvalidConfig(format!(
                "burn-in ({}) must be smaller than the number of samples ({})",
                self.burn_in, self.n_samples
            )));
        }
        if self.n_chains == 0 {
            return Err(Error::InvalidConfig("need at least one chain".into()));
        }
        Ok(())
    }
}

/// 2% of each parameter's bound width.
pub fn default_step_scale(space: &ParameterSpace) -> Vec<f64> {
    (0..space.dim()).map(|i| 0.02 * space.width(i)).collect()
}

/// A single Markov chain, including its burn-in segment until trimmed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub samples: Vec<Vec<f64>>,
    pub ln_likelihood: Vec<f64>,
    pub accepted: Vec<bool>,
    pub burn_in: usize,
    pub seed: u64,
    /// Step vector in force after burn-in.
    pub step_scale: Vec<f64>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.accepted.is_empty() {
            return 0.0;
        }
        self.accepted.iter().filter(|&&a| a).count() as f64 / self.accepted.len() as f64
    }

    /// Samples after the burn-in marker.
    pub fn retained(&self) -> &[Vec<f64>] {
        &self.samples[self.burn_in.min(self.samples.len())..]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub theta: Vec<f64>,
    pub ln_likelihood: f64,
    pub accepted: bool,
}

/// One Metropolis transition from `theta` (whose log-likelihood is `ln_l`).
pub fn metropolis_step<L: LogLikelihood + ?Sized>(
    objective: &L,
    theta: &[f64],
    ln_l: f64,
    step_scale: &[f64],
    rng: &mut Rng,
) -> Step {
    let proposal: Vec<f64> = theta
        .iter()
        .zip(step_scale)
        .map(|(&t, &a)| t + a * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let proposed = if objective.space().contains(&proposal) {
        objective.ln_likelihood(&proposal)
    } else {
        f64::NEG_INFINITY
    };
    let p = acceptance_probability(ln_l, proposed);
    let n: f64 = rng.random();
    if n < p {
        Step {
            theta: proposal,
            ln_likelihood: proposed,
            accepted: true,
        }
    } else {
        Step {
            theta: theta.to_vec(),
            ln_likelihood: ln_l,
            accepted: false,
        }
    }
}

/// `min(1, exp(proposed - current))`; zero for `-inf` or NaN proposals.
pub fn acceptance_probability(current: f64, proposed: f64) -> f64 {
    if proposed.is_nan() || proposed == f64::NEG_INFINITY {
        return 0.0;
    }
    (proposed - current).exp().min(1.0)
}

/// Runs one chain of `config.n_samples` steps from `start`, seeded by
/// `config.seed`.
pub fn run_chain<L: LogLikelihood + ?Sized>(
    objective: &L,
    start: &[f64],
    config: &McmcConfig,
) -> Result<Chain> {
    config.validate(objective.space())?;
    let mut rng = rng_from_seed(config.seed);
    chain_from(objective, start, config, config.seed, &mut rng)
}

fn chain_from<L: LogLikelihood + ?Sized>(
    objective: &L,
    start: &[f64],
    config: &McmcConfig,
    seed: u64,
    rng: &mut Rng,
) -> Result<Chain> {
    let ln_start = objective.ln_likelihood(start);
    if !objective.space().contains(start) || !ln_start.is_finite() {
        return Err(Error::InvalidStart(start.to_vec()));
    }
    let n = config.n_samples;
    let mut step = config.step_scale.clone();
    let mut samples = Vec::with_capacity(n);
    let mut ln_likelihood = Vec::with_capacity(n);
    let mut accepted = Vec::with_capacity(n);
    let mut theta = start.to_vec();
    let mut ln_l = ln_start;
    let mut window_accepts = 0usize;

    for i in 0..n {
        let s = metropolis_step(objective, &theta, ln_l, &step, rng);
        theta = s.theta;
        ln_l = s.ln_likelihood;
        accepted.push(s.accepted);
        samples.push(theta.clone());
        ln_likelihood.push(ln_l);

        if config.tune && i < config.burn_in {
            window_accepts += s.accepted as usize;
            if (i + 1) % TUNE_WINDOW == 0 {
                let rate = window_accepts as f64 / TUNE_WINDOW as f64;
                let factor = if rate > TUNE_BAND.1 {
                    1.1
                } else if rate < TUNE_BAND.0 {
                    0.9
                } else {
                    1.0
                };
                step.iter_mut().for_each(|a| *a *= factor);
                window_accepts = 0;
            }
        }
    }

    Ok(Chain {
        samples,
        ln_likelihood,
        accepted,
        burn_in: config.burn_in,
        seed,
        step_scale: step,
    })
}

/// Runs `config.n_chains` independent chains in parallel. Chain `k` is seeded
/// with `derive_seed(config.seed, "mcmc/chain/k")` and starts from `start`
/// jittered by one proposal-sized draw (falling back to `start` itself when
/// the jittered point is infeasible).
pub fn run_chains<L: LogLikelihood + ?Sized>(
    objective: &L,
    start: &[f64],
    config: &McmcConfig,
) -> Result<Vec<Chain>> {
    config.validate(objective.space())?;
    if !objective.space().contains(start) || !objective.ln_likelihood(start).is_finite() {
        return Err(Error::InvalidStart(start.to_vec()));
    }
    (0..config.n_chains)
        .into_par_iter()
        .map(|k| {
            let seed = derive_seed(config.seed, &format!("mcmc/chain/{k}"));
            let mut rng = rng_from_seed(seed);
            let jittered: Vec<f64> = start
                .iter()
                .zip(&config.step_scale)
                .map(|(&t, &a)| t + a * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let origin = if objective.ln_likelihood(&jittered).is_finite() {
                jittered
            } else {
                start.to_vec()
            };
            chain_from(objective, &origin, config, seed, &mut rng)
        })
        .collect()
}

/// Drops the burn-in segment.
pub fn trim_burn_in(chain: &Chain) -> Chain {
    let cut = chain.burn_in.min(chain.samples.len());
    Chain {
        samples: chain.samples[cut..].to_vec(),
        ln_likelihood: chain.ln_likelihood[cut..].to_vec(),
        accepted: chain.accepted[cut..].to_vec(),
        burn_in: 0,
        seed: chain.seed,
        step_scale: chain.step_scale.clone(),
    }
}

/// Pooled post-burn-in statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub n_samples: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub median: Vec<f64>,
    /// 2.5% quantile.
    pub lower: Vec<f64>,
    /// 97.5% quantile.
    pub upper: Vec<f64>,
    pub correlation: Vec<Vec<f64>>,
    /// Parameters with zero sample variance; their correlations are reported as 0.
    pub degenerate: Vec<bool>,
}

/// Post-burn-in samples of all chains, concatenated in chain order.
pub fn pooled_samples(chains: &[Chain]) -> Vec<Vec<f64>> {
    chains
        .iter()
        .flat_map(|c| c.retained().iter().cloned())
        .collect()
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[allow(clippy::needless_range_loop)]
pub fn summarize(chains: &[Chain]) -> Result<PosteriorSummary> {
    let pooled = pooled_samples(chains);
    if pooled.len() < MIN_SUMMARY_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SUMMARY_SAMPLES,
            available: pooled.len(),
        });
    }
    let n = pooled.len();
    let dim = pooled[0].len();
    let nf = n as f64;

    let mean: Vec<f64> = (0..dim)
        .map(|i| pooled.iter().map(|s| s[i]).sum::<f64>() / nf)
        .collect();
    let mut cov = vec![vec![0.0; dim]; dim];
    for s in &pooled {
        for i in 0..dim {
            let di = s[i] - mean[i];
            for j in i..dim {
                cov[i][j] += di * (s[j] - mean[j]);
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            cov[i][j] /= nf - 1.0;
            cov[j][i] = cov[i][j];
        }
    }
    let std: Vec<f64> = (0..dim).map(|i| cov[i][i].max(0.0).sqrt()).collect();
    let degenerate: Vec<bool> = std.iter().map(|&s| s == 0.0).collect();
    let correlation = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        1.0
                    } else if degenerate[i] || degenerate[j] {
                        0.0
                    } else {
                        (cov[i][j] / (std[i] * std[j])).clamp(-1.0, 1.0)
                    }
                })
                .collect()
        })
        .collect();

    let mut median = Vec::with_capacity(dim);
    let mut lower = Vec::with_capacity(dim);
    let mut upper = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut column: Vec<f64> = pooled.iter().map(|s| s[i]).collect();
        column.sort_by(f64::total_cmp);
        lower.push(quantile(&column, 0.025));
        median.push(quantile(&column, 0.5));
        upper.push(quantile(&column, 0.975));
    }

    Ok(PosteriorSummary {
        n_samples: n,
        mean,
        std,
        median,
        lower,
        upper,
        correlation,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictiveDraw {
    pub theta: Vec<f64>,
    pub curve: Vec<f64>,
}

/// Model curves for `n_draws` posterior samples drawn without replacement.
pub fn posterior_predictive<M: ForwardModel>(
    objective: &Objective<M>,
    chains: &[Chain],
    n_draws: usize,
    rng: &mut Rng,
) -> Result<Vec<PredictiveDraw>> {
    let pooled = pooled_samples(chains);
    if n_draws > pooled.len() {
        return Err(Error::InsufficientSamples {
            needed: n_draws,
            available: pooled.len(),
        });
    }
    index::sample(rng, pooled.len(), n_draws)
        .into_iter()
        .map(|i| {
            let theta = pooled[i].clone();
            let curve = objective.model_curve(&theta)?;
            Ok(PredictiveDraw { theta, curve })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::{Dataset, FnLikelihood};

    fn space1(lo: f64, hi: f64) -> ParameterSpace {
        ParameterSpace::from_bounds([("x", lo, hi)]).unwrap()
    }

    fn cfg(step: Vec<f64>, n: usize, burn: usize, seed: u64) -> McmcConfig {
        McmcConfig {
            step_scale: step,
            n_samples: n,
            burn_in: burn,
            seed,
            n_chains: 1,
            tune: false,
        }
    }

    #[test]
    fn acceptance_probability_rules() {
        assert_eq!(acceptance_probability(-3.0, -3.0), 1.0);
        assert_eq!(acceptance_probability(-3.0, 2.0), 1.0);
        assert!((acceptance_probability(0.0, -2f64.ln()) - 0.5).abs() < 1e-15);
        assert_eq!(acceptance_probability(0.0, f64::NEG_INFINITY), 0.0);
        assert_eq!(acceptance_probability(0.0, f64::NAN), 0.0);
    }

    #[test]
    fn equal_or_better_proposals_always_accepted() {
        let flat = FnLikelihood::new(space1(-100.0, 100.0), |_: &[f64]| 0.0);
        let up = FnLikelihood::new(
            space1(-100.0, 100.0),
            |t: &[f64]| if t[0] == 0.0 { 0.0 } else { 5.0 },
        );
        let mut rng = rng_from_seed(1);
        for _ in 0..1000 {
            assert!(metropolis_step(&flat, &[0.0], 0.0, &[1.0], &mut rng).accepted);
            assert!(metropolis_step(&up, &[0.0], 0.0, &[1.0], &mut rng).accepted);
        }
    }

    #[test]
    fn half_probability_gap_is_accepted_half_the_time() {
        let gap = FnLikelihood::new(space1(-100.0, 100.0), |t: &[f64]| {
            if t[0] == 0.0 {
                0.0
            } else {
                -(2f64.ln())
            }
        });
        let mut rng = rng_from_seed(2024);
        let trials = 10_000;
        let hits = (0..trials)
            .filter(|_| metropolis_step(&gap, &[0.0], 0.0, &[1.0], &mut rng).accepted)
            .count();
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "{freq}");
    }

    #[test]
    fn out_of_bounds_always_rejected() {
        let flat = FnLikelihood::new(space1(0.0, 1.0), |_: &[f64]| 0.0);
        let mut rng = rng_from_seed(5);
        for _ in 0..500 {
            let s = metropolis_step(&flat, &[1.0], 0.0, &[1e3], &mut rng);
            if !s.accepted {
                assert_eq!(s.theta, vec![1.0]);
            } else {
                assert!((0.0..=1.0).contains(&s.theta[0]));
            }
        }
    }

    #[test]
    fn vanishing_step_keeps_chain_still() {
        let target = FnLikelihood::new(space1(-10.0, 10.0), |t: &[f64]| -0.5 * t[0] * t[0]);
        let c = run_chain(&target, &[1.5], &cfg(vec![1e-300], 500, 100, 3)).unwrap();
        assert_eq!(c.acceptance_rate(), 1.0);
        assert!(c.samples.iter().all(|s| (s[0] - 1.5).abs() < 1e-12));
    }

    #[test]
    fn flat_target_accepts_everything_inside() {
        let flat = FnLikelihood::new(space1(-1e6, 1e6), |_: &[f64]| 1.0);
        let c = run_chain(&flat, &[0.0], &cfg(vec![0.5], 2000, 500, 9)).unwrap();
        assert_eq!(c.acceptance_rate(), 1.0);
    }

    #[test]
    fn standard_normal_moments() {
        let target = FnLikelihood::new(space1(-10.0, 10.0), |t: &[f64]| -0.5 * t[0] * t[0]);
        let mut config = McmcConfig::for_space(target.space());
        config.n_samples = 100_000;
        config.burn_in = 25_000;
        config.seed = 17;
        let chain = trim_burn_in(&run_chain(&target, &[0.0], &config).unwrap());
        let n = chain.len() as f64;
        let mean = chain.samples.iter().map(|s| s[0]).sum::<f64>() / n;
        let var = chain
            .samples
            .iter()
            .map(|s| (s[0] - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var.sqrt() - 1.0).abs() < 0.05, "std {}", var.sqrt());
        let rate = chain.acceptance_rate();
        assert!((0.15..0.6).contains(&rate), "acceptance {rate}");
    }

    #[test]
    fn tuning_freezes_after_burn_in() {
        let target = FnLikelihood::new(space1(-10.0, 10.0), |t: &[f64]| -0.5 * t[0] * t[0]);
        let mut config = cfg(vec![0.01], 3000, 1000, 4);
        config.tune = true;
        let chain = run_chain(&target, &[0.0], &config).unwrap();
        // acceptance is near 1 at this scale, so each of the 10 windows grows the step
        assert!((chain.step_scale[0] - 0.01 * 1.1f64.powi(10)).abs() < 1e-12);
    }

    #[test]
    fn start_must_be_feasible() {
        let target = FnLikelihood::new(space1(-1.0, 1.0), |_: &[f64]| 0.0);
        assert!(matches!(
            run_chain(&target, &[2.0], &cfg(vec![0.1], 200, 10, 0)),
            Err(Error::InvalidStart(_))
        ));
    }

    #[test]
    fn config_validation() {
        let s = space1(0.0, 1.0);
        assert!(cfg(vec![0.1], 100, 100, 0).validate(&s).is_err());
        assert!(cfg(vec![0.0], 100, 10, 0).validate(&s).is_err());
        assert!(cfg(vec![0.1, 0.1], 100, 10, 0).validate(&s).is_err());
        let mut c = cfg(vec![0.1], 100, 10, 0);
        c.n_chains = 0;
        assert!(c.validate(&s).is_err());
        assert_eq!(McmcConfig::for_space(&s).step_scale, vec![0.02]);
    }

    #[test]
    fn chains_are_reproducible() {
        let target = FnLikelihood::new(
            ParameterSpace::from_bounds([("a", -5.0, 5.0), ("b", -5.0, 5.0)]).unwrap(),
            |t: &[f64]| -0.5 * (t[0] * t[0] + 4.0 * t[1] * t[1]),
        );
        let mut config = McmcConfig::for_space(target.space());
        config.n_samples = 2000;
        config.burn_in = 500;
        config.n_chains = 3;
        let a = run_chains(&target, &[0.1, 0.1], &config).unwrap();
        let b = run_chains(&target, &[0.1, 0.1], &config).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].samples, a[1].samples);
        assert_ne!(a[0].seed, a[1].seed);
        let single = run_chain(&target, &[0.1, 0.1], &config).unwrap();
        assert_eq!(single, run_chain(&target, &[0.1, 0.1], &config).unwrap());
    }

    fn synthetic_chain(samples: Vec<Vec<f64>>, burn_in: usize) -> Chain {
        let n = samples.len();
        Chain {
            samples,
            ln_likelihood: vec![0.0; n],
            accepted: vec![true; n],
            burn_in,
            seed: 0,
            step_scale: vec![1.0],
        }
    }

    #[test]
    fn trimming() {
        let c = synthetic_chain((0..10).map(|i| vec![i as f64]).collect(), 0);
        assert_eq!(trim_burn_in(&c), c);

        let c = synthetic_chain((0..10).map(|i| vec![i as f64]).collect(), 5);
        let t = trim_burn_in(&c);
        assert_eq!(t.len(), 5);
        assert_eq!(t.samples[0], vec![5.0]);
        assert_eq!(trim_burn_in(&t), t);
    }

    #[test]
    fn identical_samples_are_degenerate() {
        let c = synthetic_chain(vec![vec![1.0, 2.0]; 200], 50);
        let s = summarize(&[c]).unwrap();
        assert_eq!(s.n_samples, 150);
        assert_eq!(s.std, vec![0.0, 0.0]);
        assert_eq!(s.degenerate, vec![true, true]);
        assert_eq!(s.correlation, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(s.lower, vec![1.0, 2.0]);
        assert_eq!(s.upper, vec![1.0, 2.0]);
    }

    #[test]
    fn independent_coordinates_are_uncorrelated() {
        let mut rng = rng_from_seed(77);
        let n = 20_000;
        let samples: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                vec![
                    rng.sample::<f64, _>(StandardNormal),
                    rng.random::<f64>(),
                    3.0 + 0.1 * rng.sample::<f64, _>(StandardNormal),
                ]
            })
            .collect();
        let s = summarize(&[synthetic_chain(samples, 0)]).unwrap();
        let bound = 3.0 / (n as f64).sqrt();
        for i in 0..3 {
            assert_eq!(s.correlation[i][i], 1.0);
            for j in 0..3 {
                assert_eq!(s.correlation[i][j], s.correlation[j][i]);
                if i != j {
                    assert!(s.correlation[i][j].abs() < bound);
                }
            }
            assert!(s.lower[i] <= s.median[i] && s.median[i] <= s.upper[i]);
        }
        assert!((s.lower[0] + 1.96).abs() < 0.05 && (s.upper[0] - 1.96).abs() < 0.05);
    }

    #[test]
    fn pooling_equals_concatenation() {
        let mut rng = rng_from_seed(8);
        let mk = |rng: &mut Rng, n: usize| -> Vec<Vec<f64>> {
            (0..n)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect()
        };
        let a = mk(&mut rng, 300);
        let b = mk(&mut rng, 250);
        let ca = synthetic_chain(a.clone(), 100);
        let cb = synthetic_chain(b.clone(), 50);
        let mut joined = a[100..].to_vec();
        joined.extend_from_slice(&b[50..]);
        assert_eq!(
            summarize(&[ca, cb]).unwrap(),
            summarize(&[synthetic_chain(joined, 0)]).unwrap()
        );
    }

    #[test]
    fn too_few_samples() {
        let c = synthetic_chain(vec![vec![1.0]; 150], 60);
        assert_eq!(
            summarize(&[c]),
            Err(Error::InsufficientSamples {
                needed: 100,
                available: 90
            })
        );
    }

    /// `y = θ0 + θ1 x`.
    struct Line;

    impl ForwardModel for Line {
        fn n_params(&self) -> usize {
            2
        }
        fn evaluate(&self, theta: &[f64], x: &[f64]) -> Result<Vec<f64>> {
            Ok(x.iter().map(|&x| theta[0] + theta[1] * x).collect())
        }
    }

    fn line_objective() -> Objective<Line> {
        let data =
            Dataset::from_columns(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0], vec![0.1; 3]).unwrap();
        Objective::new(
            data,
            ParameterSpace::from_bounds([("a", -5.0, 5.0), ("b", -5.0, 5.0)]).unwrap(),
            Line,
        )
        .unwrap()
    }

    #[test]
    fn predictive_draws() {
        let obj = line_objective();
        let samples: Vec<Vec<f64>> = (0..200).map(|i| vec![1.0, i as f64 / 100.0]).collect();
        let chain = synthetic_chain(samples, 0);
        let draws =
            posterior_predictive(&obj, std::slice::from_ref(&chain), 1, &mut rng_from_seed(1))
                .unwrap();
        assert_eq!(draws.len(), 1);
        assert_eq!(draws[0].curve, obj.model_curve(&draws[0].theta).unwrap());

        let draws = posterior_predictive(
            &obj,
            std::slice::from_ref(&chain),
            200,
            &mut rng_from_seed(1),
        )
        .unwrap();
        let mut seen: Vec<u64> = draws.iter().map(|d| d.theta[1].to_bits()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 200);

        assert!(matches!(
            posterior_predictive(&obj, &[chain], 201, &mut rng_from_seed(1)),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn degenerate_chain_gives_identical_curves() {
        let obj = line_objective();
        let chain = synthetic_chain(vec![vec![0.5, 1.25]; 50], 10);
        let draws = posterior_predictive(&obj, &[chain], 20, &mut rng_from_seed(3)).unwrap();
        assert!(draws.windows(2).all(|w| w[0].curve == w[1].curve));
    }
}
