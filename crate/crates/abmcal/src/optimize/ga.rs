//! Real-valued simple genetic algorithm.
//!
//! Selection draws with replacement, with probability proportional to a
//! rank-based linear fitness (best rank weighted 2, worst 0); raw inverse
//! objective values would be fragile with objectives ranging over many
//! orders of magnitude. Crossover is whole-arithmetic blending per pair,
//! mutation is a per-gene Gaussian perturbation scaled to the gene's range,
//! and the two best chromosomes carry over unchanged each generation.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::Objective;
use crate::objective::{init_free_params, ObjectiveError};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Per-pair probability of arithmetic crossover.
    pub crossover_prob: f64,
    /// Per-gene probability of Gaussian mutation.
    pub mutation_prob: f64,
    /// Mutation standard deviation as a fraction of each gene's bound width.
    pub mutation_scale: f64,
    /// Chromosomes carried over unchanged each generation.
    pub elite: usize,
    /// Monte Carlo replications per fitness evaluation.
    pub replications: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            generations: 100,
            crossover_prob: 0.8,
            mutation_prob: 0.01,
            mutation_scale: 0.1,
            elite: 2,
            replications: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    pub best_theta: Vec<f64>,
    pub best_f: f64,
    /// Best value found so far, after each generation.
    pub trace_best: Vec<f64>,
    /// Mean population fitness per generation.
    pub trace_mean: Vec<f64>,
    pub generations: usize,
    pub final_population: Vec<Vec<f64>>,
}

/// Rank-based selection weights over fitness values (ascending is better):
/// best gets weight 2, worst 0, linear in between.
fn rank_weights(fitness: &[f64]) -> Vec<f64> {
    let n = fitness.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap());
    let mut weights = vec![0.0; n];
    if n == 1 {
        weights[0] = 1.0;
        return weights;
    }
    for (rank, &idx) in order.iter().enumerate() {
        weights[idx] = 2.0 * (n - 1 - rank) as f64 / (n - 1) as f64;
    }
    weights
}

fn sample_index<R: Rng>(cumulative: &[f64], rng: &mut R) -> usize {
    let total = *cumulative.last().unwrap();
    let u = rng.random_range(0.0..total);
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

/// Run the genetic algorithm.
pub fn ga_run<O: Objective, R: Rng>(
    obj: &O,
    config: &GaConfig,
    rng: &mut R,
) -> Result<GaResult, ObjectiveError> {
    if config.population_size < config.elite + 2 {
        return Err(ObjectiveError::InvalidSpec(
            "population must exceed the elite count by at least two".into(),
        ));
    }
    let space = obj.space();
    let dim = space.len();

    let mut population: Vec<Vec<f64>> = (0..config.population_size)
        .map(|_| init_free_params(space, rng))
        .collect();
    let mut fitness = evaluate_all(obj, &population, config.replications)?;

    let mut best_idx = argmin(&fitness);
    let mut best_theta = population[best_idx].clone();
    let mut best_f = fitness[best_idx];

    let mut trace_best = Vec::with_capacity(config.generations);
    let mut trace_mean = Vec::with_capacity(config.generations);

    for _ in 0..config.generations {
        // Elitism: the two best survive unchanged.
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap());
        let mut next: Vec<Vec<f64>> = order[..config.elite]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        let mut next_fitness: Vec<Option<f64>> =
            order[..config.elite].iter().map(|&i| Some(fitness[i])).collect();

        // Selection with replacement, proportional to rank weight.
        let weights = rank_weights(&fitness);
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        let offspring_needed = config.population_size - config.elite;
        let mut intermediate: Vec<Vec<f64>> = (0..offspring_needed)
            .map(|_| population[sample_index(&cumulative, rng)].clone())
            .collect();

        // Pairwise whole-arithmetic crossover on consecutive pairs.
        #[allow(clippy::needless_range_loop)]
        for pair in intermediate.chunks_mut(2) {
            if pair.len() < 2 || rng.random::<f64>() >= config.crossover_prob {
                continue;
            }
            let w: f64 = rng.random();
            for g in 0..dim {
                let (a, b) = (pair[0][g], pair[1][g]);
                pair[0][g] = w * a + (1.0 - w) * b;
                pair[1][g] = (1.0 - w) * a + w * b;
            }
        }

        // Per-gene Gaussian mutation, clamped to bounds.
        for chromosome in intermediate.iter_mut() {
            for (g, param) in space.params.iter().enumerate() {
                if rng.random::<f64>() < config.mutation_prob {
                    let step: f64 = StandardNormal.sample(rng);
                    chromosome[g] += step * config.mutation_scale * (param.hi - param.lo);
                }
            }
            *chromosome = space.clamp(chromosome);
        }

        next.extend(intermediate);
        next_fitness.resize(next.len(), None);

        // Evaluate the fresh chromosomes; elites keep their cached values.
        let fresh: Vec<(usize, Vec<f64>)> = next
            .iter()
            .enumerate()
            .filter(|(i, _)| next_fitness[*i].is_none())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        let fresh_values = evaluate_all(
            obj,
            &fresh.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>(),
            config.replications,
        )?;
        for ((i, _), v) in fresh.iter().zip(fresh_values) {
            next_fitness[*i] = Some(v);
        }

        population = next;
        fitness = next_fitness.into_iter().map(|v| v.unwrap()).collect();
        debug_assert_eq!(population.len(), config.population_size);

        best_idx = argmin(&fitness);
        if fitness[best_idx] < best_f {
            best_f = fitness[best_idx];
            best_theta = population[best_idx].clone();
        }
        trace_best.push(best_f);
        trace_mean.push(fitness.iter().sum::<f64>() / fitness.len() as f64);
    }

    Ok(GaResult {
        best_theta,
        best_f,
        trace_best,
        trace_mean,
        generations: config.generations,
        final_population: population,
    })
}

fn evaluate_all<O: Objective>(
    obj: &O,
    population: &[Vec<f64>],
    replications: usize,
) -> Result<Vec<f64>, ObjectiveError> {
    population
        .par_iter()
        .map(|c| obj.eval(c, replications))
        .collect()
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .expect("non-empty")
}
