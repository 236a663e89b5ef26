//! Differential evolution: six mutation strategies, binomial and exponential
//! crossover, greedy one-to-one selection.

use serde::{Deserialize, Serialize};

use super::common::{distinct_indices, evaluate_all, repair_clamp};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeStrategy {
    Rand1,
    Best1,
    Best2,
    Rand2,
    TargetToBest1,
    CurrentToRand1,
}

impl DeStrategy {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "rand/1" => DeStrategy::Rand1,
            "best/1" => DeStrategy::Best1,
            "best/2" => DeStrategy::Best2,
            "rand/2" => DeStrategy::Rand2,
            "target-to-best/1" => DeStrategy::TargetToBest1,
            "current-to-rand/1" => DeStrategy::CurrentToRand1,
            other => return Err(Error::Config(format!("unknown DE strategy `{other}`"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            DeStrategy::Rand1 => "rand/1",
            DeStrategy::Best1 => "best/1",
            DeStrategy::Best2 => "best/2",
            DeStrategy::Rand2 => "rand/2",
            DeStrategy::TargetToBest1 => "target-to-best/1",
            DeStrategy::CurrentToRand1 => "current-to-rand/1",
        }
    }

    /// Number of mutually distinct donor indices the strategy samples.
    pub fn donors(&self) -> usize {
        match self {
            DeStrategy::Rand1 => 3,
            DeStrategy::Best1 => 2,
            DeStrategy::Best2 => 4,
            DeStrategy::Rand2 => 5,
            DeStrategy::TargetToBest1 => 2,
            DeStrategy::CurrentToRand1 => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeCrossover {
    Binomial,
    Exponential,
}

impl DeCrossover {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "binomial" => DeCrossover::Binomial,
            "exponential" => DeCrossover::Exponential,
            other => return Err(Error::Config(format!("unknown DE crossover `{other}`"))),
        })
    }
}

/// Mutant vector from explicit donor indices (the testable core).
///
/// `donors` are mutually distinct indices, none equal to `i`; `best` is the
/// index of the population's current best member.
pub fn de_mutant_from(
    strategy: DeStrategy,
    pop: &Population,
    i: usize,
    best: usize,
    donors: &[usize],
    f: f64,
) -> Result<Vec<f64>> {
    if donors.len() < strategy.donors() {
        return Err(Error::Config(format!(
            "strategy {} needs {} donors, got {}",
            strategy.name(),
            strategy.donors(),
            donors.len()
        )));
    }
    let x = |k: usize| &pop.members[k].position;
    let dim = pop.dim();
    let mut v = vec![0.0; dim];
    for j in 0..dim {
        v[j] = match strategy {
            DeStrategy::Rand1 => x(donors[0])[j] + f * (x(donors[1])[j] - x(donors[2])[j]),
            DeStrategy::Best1 => x(best)[j] + f * (x(donors[0])[j] - x(donors[1])[j]),
            DeStrategy::Best2 => {
                x(best)[j]
                    + f * (x(donors[0])[j] - x(donors[1])[j])
                    + f * (x(donors[2])[j] - x(donors[3])[j])
            }
            DeStrategy::Rand2 => {
                x(donors[0])[j]
                    + f * (x(donors[1])[j] - x(donors[2])[j])
                    + f * (x(donors[3])[j] - x(donors[4])[j])
            }
            DeStrategy::TargetToBest1 => {
                x(i)[j] + f * (x(best)[j] - x(i)[j]) + f * (x(donors[0])[j] - x(donors[1])[j])
            }
            DeStrategy::CurrentToRand1 => {
                x(i)[j] + f * (x(donors[0])[j] - x(i)[j]) + f * (x(donors[1])[j] - x(donors[2])[j])
            }
        };
    }
    Ok(v)
}

/// Sample donors and build the mutant for member `i`.
pub fn de_mutate(
    strategy: DeStrategy,
    pop: &Population,
    i: usize,
    f: f64,
    rng: &mut dyn Randomness,
) -> Result<Vec<f64>> {
    let donors = distinct_indices(pop.len(), strategy.donors(), Some(i), rng)?;
    let best = pop
        .best_index()
        .ok_or_else(|| Error::Contract("population not evaluated".into()))?;
    de_mutant_from(strategy, pop, i, best, &donors, f)
}

/// Binomial crossover: take the mutant component where `rand <= CR` or at the
/// forced position `j_rand`.
pub fn binomial_crossover(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    rng: &mut dyn Randomness,
) -> Vec<f64> {
    assert_eq!(target.len(), mutant.len());
    let j_rand = rng.index(target.len());
    (0..target.len())
        .map(|j| {
            if rng.uniform() <= cr || j == j_rand {
                mutant[j]
            } else {
                target[j]
            }
        })
        .collect()
}

/// Exponential crossover with an explicit circular run `[start, start+len)`
/// modulo the dimension.
pub fn exponential_crossover_at(
    target: &[f64],
    mutant: &[f64],
    start: usize,
    len: usize,
) -> Vec<f64> {
    assert_eq!(target.len(), mutant.len());
    let d = target.len();
    let mut out = target.to_vec();
    for k in 0..len.min(d) {
        let j = (start + k) % d;
        out[j] = mutant[j];
    }
    out
}

/// Exponential crossover: the run starts at a uniform position and extends
/// while `rand <= CR`, at most over the whole vector.
pub fn exponential_crossover(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    rng: &mut dyn Randomness,
) -> Vec<f64> {
    let d = target.len();
    let start = rng.index(d);
    let mut len = 1usize;
    while len < d && rng.uniform() <= cr {
        len += 1;
    }
    exponential_crossover_at(target, mutant, start, len)
}

/// Greedy one-to-one selection: the trial survives iff its fitness is less
/// than or equal to the target's.
pub fn de_select(target: &Individual, trial: Individual) -> Result<Individual> {
    let ft = trial.expect_fitness()?;
    let fx = target.expect_fitness()?;
    Ok(if ft <= fx { trial } else { target.clone() })
}

#[derive(Debug, Clone)]
pub struct DeParams {
    pub pop_size: usize,
    pub f: f64,
    pub cr: f64,
    pub strategy: DeStrategy,
    pub crossover: DeCrossover,
}

impl DeParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        let p = DeParams {
            pop_size: set.usize("pop_size")?,
            f: set.f64("f")?,
            cr: set.f64("cr")?,
            strategy: DeStrategy::parse(set.str("strategy")?)?,
            crossover: DeCrossover::parse(set.str("crossover")?)?,
        };
        if p.pop_size < 6 {
            return Err(Error::config(
                "parameter `pop_size` must be at least 6 for DE",
            ));
        }
        Ok(p)
    }
}

pub struct De {
    params: DeParams,
    pop: Population,
}

impl De {
    pub fn new(params: DeParams) -> Self {
        De {
            params,
            pop: Population::new(Vec::new()),
        }
    }
}

impl PopulationOptimizer for De {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.params.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)
    }

    fn generation_evals(&self) -> u64 {
        self.params.pop_size as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let donor_pop = self.pop.clone();
        for i in 0..donor_pop.len() {
            let mutant = de_mutate(self.params.strategy, &donor_pop, i, self.params.f, rng)?;
            let target = &donor_pop.members[i];
            let mut trial_pos = match self.params.crossover {
                DeCrossover::Binomial => {
                    binomial_crossover(&target.position, &mutant, self.params.cr, rng)
                }
                DeCrossover::Exponential => {
                    exponential_crossover(&target.position, &mutant, self.params.cr, rng)
                }
            };
            repair_clamp(eval.space(), &mut trial_pos, rng);
            let mut trial = Individual::new(trial_pos);
            eval.evaluate(&mut trial)?;
            self.pop.members[i] = de_select(target, trial)?;
        }
        self.pop.generation += 1;
        Ok(())
    }

    fn population(&self) -> &Population {
        &self.pop
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::ScriptedRng;

    fn pop_from(positions: &[&[f64]]) -> Population {
        Population::new(
            positions
                .iter()
                .enumerate()
                .map(|(i, p)| Individual::evaluated(p.to_vec(), i as f64))
                .collect(),
        )
    }

    #[test]
    fn rand1_with_zero_factor_returns_first_donor() {
        let pop = pop_from(&[&[9.0, 9.0], &[1.0, 2.0], &[4.0, 6.0], &[2.0, 2.0]]);
        let v = de_mutant_from(DeStrategy::Rand1, &pop, 0, 0, &[1, 2, 3], 0.0).unwrap();
        assert_eq!(v, vec![1.0, 2.0]);
    }

    #[test]
    fn rand1_hand_oracle() {
        // x_r1 = (1,2), x_r2 = (4,6), x_r3 = (2,2), F = 0.5 -> (2,4)
        let pop = pop_from(&[&[9.0, 9.0], &[1.0, 2.0], &[4.0, 6.0], &[2.0, 2.0]]);
        // draw 0 three times: each picks the first still-free index != i,
        // i.e. donors 1, 2, 3 in order
        let mut rng = ScriptedRng::new().with_indices(&[0, 0, 0]);
        let v = de_mutate(DeStrategy::Rand1, &pop, 0, 0.5, &mut rng).unwrap();
        assert_eq!(v, vec![2.0, 4.0]);
    }

    #[test]
    fn target_to_best_collapses_when_target_is_best() {
        let pop = pop_from(&[&[3.0, -1.0], &[5.0, 5.0], &[5.0, 5.0], &[0.0, 0.0]]);
        // x_i = x_best (index 0), donors share one position
        let v = de_mutant_from(DeStrategy::TargetToBest1, &pop, 0, 0, &[1, 2], 0.7).unwrap();
        assert_eq!(v, vec![3.0, -1.0]);
    }

    #[test]
    fn population_too_small_is_config_error() {
        let pop = pop_from(&[&[0.0], &[1.0], &[2.0]]);
        let mut rng = ScriptedRng::new().with_indices(&[0, 0, 0, 0, 0]);
        let err = de_mutate(DeStrategy::Rand2, &pop, 0, 0.5, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn binomial_cr_one_copies_mutant() {
        let target = [1.0, 1.0, 1.0, 1.0];
        let mutant = [2.0, 3.0, 4.0, 5.0];
        let mut rng = ScriptedRng::new()
            .with_indices(&[2])
            .with_uniforms(&[0.0, 0.5, 0.9999, 0.2]);
        let trial = binomial_crossover(&target, &mutant, 1.0, &mut rng);
        assert_eq!(trial, mutant);
    }

    #[test]
    fn binomial_cr_zero_differs_only_at_forced_position() {
        let target = [1.0, 1.0, 1.0, 1.0];
        let mutant = [2.0, 3.0, 4.0, 5.0];
        let mut rng = ScriptedRng::new()
            .with_indices(&[2])
            .with_uniforms(&[0.5, 0.5, 0.5, 0.5]); // all > 0, never cross
        let trial = binomial_crossover(&target, &mutant, 0.0, &mut rng);
        assert_eq!(trial, vec![1.0, 1.0, 4.0, 1.0]);
    }

    #[test]
    fn exponential_full_run_copies_mutant() {
        let target = [1.0, 1.0, 1.0];
        let mutant = [7.0, 8.0, 9.0];
        assert_eq!(exponential_crossover_at(&target, &mutant, 0, 3), mutant);
    }

    #[test]
    fn exponential_run_wraps_around() {
        let target = [1.0, 1.0, 1.0, 1.0];
        let mutant = [7.0, 8.0, 9.0, 6.0];
        let trial = exponential_crossover_at(&target, &mutant, 3, 2);
        assert_eq!(trial, vec![7.0, 1.0, 1.0, 6.0]);
    }

    #[test]
    fn selection_is_inclusive_on_ties() {
        let target = Individual::evaluated(vec![0.0], 5.0);
        let trial = Individual::evaluated(vec![1.0], 5.0);
        assert_eq!(de_select(&target, trial).unwrap().position, vec![1.0]);
        let worse = Individual::evaluated(vec![1.0], 6.0);
        assert_eq!(de_select(&target, worse).unwrap().position, vec![0.0]);
        let better = Individual::evaluated(vec![1.0], 4.0);
        assert_eq!(de_select(&target, better).unwrap().position, vec![1.0]);
    }

    #[test]
    fn unevaluated_selection_is_contract_error() {
        let target = Individual::new(vec![0.0]);
        let trial = Individual::evaluated(vec![1.0], 5.0);
        assert!(matches!(de_select(&target, trial), Err(Error::Contract(_))));
    }
}
