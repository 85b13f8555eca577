//! Classical differential evolution: best/1 mutation, binomial recombination
//! with one forced coordinate, and elitist one-to-one selection.
//!
//! The optimizer maximizes a [`LogLikelihood`]. All random draws for a
//! generation are taken sequentially from a single seeded stream before the
//! offspring are evaluated in parallel, so a run is reproducible regardless
//! of thread scheduling.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{LogLikelihood, ParameterSpace};
use crate::seed::{rng_from_seed, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    /// Mutation constant `k_m`.
    pub mutation: f64,
    /// Recombination constant `k_r`.
    pub recombination: f64,
    pub population_size: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Stop early once the standard deviation of the population's lnL drops
    /// below this value. Zero disables the rule.
    pub tol: f64,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            mutation: 0.5,
            recombination: 0.5,
            population_size: 20,
            max_iterations: 100,
            seed: 42,
            tol: 0.0,
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mutation.is_finite() && self.mutation > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mutation constant must be > 0, got {}",
                self.mutation
            )));
        }
        if !(0.0..=1.0).contains(&self.recombination) {
            return Err(Error::InvalidConfig(format!(
                "recombination constant must lie in [0, 1], got {}",
                self.recombination
            )));
        }
        if self.population_size < 4 {
            return Err(Error::InvalidConfig(format!(
                "population size must be at least 4, got {}",
                self.population_size
            )));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be >= 0, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Candidate solutions and their log-likelihoods. `members[j]` is the
/// parameter vector of candidate `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Vec<f64>>,
    ln_likelihood: Vec<f64>,
    best_index: usize,
}

impl Population {
    /// Evaluates every member (in parallel) and locates the best.
    pub fn evaluate<L: LogLikelihood + ?Sized>(members: Vec<Vec<f64>>, objective: &L) -> Self {
        let ln_likelihood: Vec<f64> = members
            .par_iter()
            .map(|m| objective.ln_likelihood(m))
            .collect();
        Self::from_parts(members, ln_likelihood)
    }

    /// Builds a population from already-evaluated members.
    pub fn from_parts(members: Vec<Vec<f64>>, ln_likelihood: Vec<f64>) -> Self {
        assert_eq!(members.len(), ln_likelihood.len());
        assert!(!members.is_empty());
        let best_index = argmax(&ln_likelihood);
        Self {
            members,
            ln_likelihood,
            best_index,
        }
    }

    pub fn members(&self) -> &[Vec<f64>] {
        &self.members
    }

    pub fn ln_likelihood(&self) -> &[f64] {
        &self.ln_likelihood
    }

    pub fn best_index(&self) -> usize {
        self.best_index
    }

    pub fn best(&self) -> &[f64] {
        &self.members[self.best_index]
    }

    pub fn best_ln_likelihood(&self) -> f64 {
        self.ln_likelihood[self.best_index]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn spread(&self) -> f64 {
        let n = self.ln_likelihood.len() as f64;
        let mean = self.ln_likelihood.iter().sum::<f64>() / n;
        let var = self
            .ln_likelihood
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / n;
        var.sqrt()
    }
}

/// First index of the greatest value; `-inf` and NaN never beat a finite value.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] || (values[best].is_nan() && !v.is_nan()) {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxIterations,
    Converged,
}

/// Snapshot of one generation (generation 0 is the initial population).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generation {
    pub ln_likelihood: Vec<f64>,
    pub best_theta: Vec<f64>,
    pub best_ln_likelihood: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeResult {
    pub best_theta: Vec<f64>,
    pub best_ln_likelihood: f64,
    pub history: Vec<Generation>,
    pub generations_run: usize,
    pub termination: Termination,
}

/// Uniform draws within the bounds for every candidate, then evaluation.
pub fn initialize_population<L: LogLikelihood + ?Sized>(
    objective: &L,
    config: &DeConfig,
    rng: &mut Rng,
) -> Result<Population> {
    config.validate()?;
    let space = objective.space();
    let members: Vec<Vec<f64>> = (0..config.population_size)
        .map(|_| {
            (0..space.dim())
                .map(|i| {
                    let lo = space.lower()[i];
                    (lo + rng.random::<f64>() * space.width(i)).min(space.upper()[i])
                })
                .collect()
        })
        .collect();
    let population = Population::evaluate(members, objective);
    if population
        .ln_likelihood()
        .iter()
        .all(|v| *v == f64::NEG_INFINITY || v.is_nan())
    {
        return Err(Error::UnusableSpace);
    }
    Ok(population)
}

/// `best + k_m (p_r1 - p_r2)`, clipped to the bounds.
pub fn mutant_vector(
    best: &[f64],
    r1: &[f64],
    r2: &[f64],
    mutation: f64,
    space: &ParameterSpace,
) -> Vec<f64> {
    let mut m: Vec<f64> = best
        .iter()
        .zip(r1.iter().zip(r2))
        .map(|(&b, (&a, &c))| b + mutation * (a - c))
        .collect();
    space.clip(&mut m);
    m
}

/// Two distinct indices in `0..n`, both different from `exclude`.
fn distinct_pair(n: usize, exclude: usize, rng: &mut Rng) -> (usize, usize) {
    let r1 = loop {
        let r = rng.random_range(0..n);
        if r != exclude {
            break r;
        }
    };
    let r2 = loop {
        let r = rng.random_range(0..n);
        if r != exclude && r != r1 {
            break r;
        }
    };
    (r1, r2)
}

/// One mutant per candidate around the current best.
pub fn mutate(
    parent: &Population,
    space: &ParameterSpace,
    config: &DeConfig,
    rng: &mut Rng,
) -> Vec<Vec<f64>> {
    let n = parent.len();
    assert!(n >= 4, "mutation needs at least 4 candidates");
    let best = parent.best();
    (0..n)
        .map(|j| {
            let (r1, r2) = distinct_pair(n, j, rng);
            mutant_vector(
                best,
                &parent.members()[r1],
                &parent.members()[r2],
                config.mutation,
                space,
            )
        })
        .collect()
}

/// Binomial crossover: each coordinate comes from the mutant when a uniform
/// draw falls below `k_r`, and one random coordinate per candidate always does.
pub fn recombine(
    parent: &Population,
    mutant: &[Vec<f64>],
    config: &DeConfig,
    rng: &mut Rng,
) -> Vec<Vec<f64>> {
    assert_eq!(parent.len(), mutant.len());
    parent
        .members()
        .iter()
        .zip(mutant)
        .map(|(p, m)| {
            assert_eq!(p.len(), m.len());
            let forced = rng.random_range(0..p.len());
            p.iter()
                .zip(m)
                .enumerate()
                .map(|(i, (&pv, &mv))| {
                    let x: f64 = rng.random();
                    if x < config.recombination || i == forced {
                        mv
                    } else {
                        pv
                    }
                })
                .collect()
        })
        .collect()
}

/// Keeps each offspring only when it strictly improves on its parent.
pub fn select(parent: Population, offspring: Population) -> Population {
    assert_eq!(parent.len(), offspring.len());
    let Population {
        mut members,
        mut ln_likelihood,
        ..
    } = parent;
    for (j, (child, lnl)) in offspring
        .members
        .into_iter()
        .zip(offspring.ln_likelihood)
        .enumerate()
    {
        if lnl > ln_likelihood[j] {
            members[j] = child;
            ln_likelihood[j] = lnl;
        }
    }
    Population::from_parts(members, ln_likelihood)
}

fn snapshot(p: &Population) -> Generation {
    Generation {
        ln_likelihood: p.ln_likelihood().to_vec(),
        best_theta: p.best().to_vec(),
        best_ln_likelihood: p.best_ln_likelihood(),
    }
}

/// Runs DE to completion, recording every generation.
pub fn run_de<L: LogLikelihood + ?Sized>(objective: &L, config: &DeConfig) -> Result<DeResult> {
    config.validate()?;
    let space = objective.space();
    let mut rng = rng_from_seed(config.seed);
    let mut population = initialize_population(objective, config, &mut rng)?;
    let mut history = vec![snapshot(&population)];
    let mut termination = Termination::MaxIterations;
    let mut generations_run = 0;

    for _ in 0..config.max_iterations {
        if config.tol > 0.0 && population.spread() < config.tol {
            termination = Termination::Converged;
            break;
        }
        let mutant = mutate(&population, space, config, &mut rng);
        let trial = recombine(&population, &mutant, config, &mut rng);
        let offspring = Population::evaluate(trial, objective);
        population = select(population, offspring);
        generations_run += 1;
        history.push(snapshot(&population));
    }
    if termination == Termination::MaxIterations
        && config.tol > 0.0
        && population.spread() < config.tol
    {
        termination = Termination::Converged;
    }

    Ok(DeResult {
        best_theta: population.best().to_vec(),
        best_ln_likelihood: population.best_ln_likelihood(),
        history,
        generations_run,
        termination,
    })
}
