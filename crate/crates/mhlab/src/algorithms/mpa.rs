//! Marine predators: Brownian and Lévy step phases keyed to run thirds, an
//! elite matrix replicated from the best-so-far, per-individual memory, and
//! the FADs long-jump perturbation.

use super::common::{distinct_indices, evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

const LEVY_BETA: f64 = 1.5;

/// Phase-1 step: `step = rb * (elite - rb * prey)`, `prey' = prey + p r step`.
pub fn phase1_component(elite: f64, prey: f64, rb: f64, p: f64, r: f64) -> (f64, f64) {
    let step = rb * (elite - rb * prey);
    (step, prey + p * r * step)
}

/// Phase-2 first half: Lévy steps around the elite.
pub fn phase2_levy_component(elite: f64, prey: f64, rl: f64, p: f64, r: f64) -> (f64, f64) {
    let step = rl * (elite - rl * prey);
    (step, prey + p * r * step)
}

/// Phase-2 second half: Brownian steps anchored on the elite with the
/// adaptive factor `cf`.
pub fn phase2_brownian_component(elite: f64, prey: f64, rb: f64, p: f64, cf: f64) -> (f64, f64) {
    let step = rb * (rb * elite - prey);
    (step, elite + p * cf * step)
}

/// Phase-3 step: Lévy walk anchored on the elite.
pub fn phase3_component(elite: f64, prey: f64, rl: f64, p: f64, cf: f64) -> (f64, f64) {
    let step = rl * (rl * elite - prey);
    (step, elite + p * cf * step)
}

/// Adaptive step-size factor `(1 - t/T)^(2 t / T)`.
pub fn adaptive_cf(t: u64, horizon: u64) -> f64 {
    let ratio = (t as f64 / horizon.max(1) as f64).min(1.0);
    (1.0 - ratio).powf(2.0 * ratio)
}

#[derive(Debug, Clone)]
pub struct MpaParams {
    pub pop_size: usize,
    pub p: f64,
    pub fads: f64,
}

impl MpaParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(MpaParams {
            pop_size: set.usize("pop_size")?.max(2),
            p: set.f64("p")?,
            fads: set.f64("fads")?,
        })
    }
}

pub struct Mpa {
    params: MpaParams,
    pop: Population,
    clock: Clock,
}

impl Mpa {
    pub fn new(params: MpaParams) -> Self {
        Mpa {
            params,
            pop: Population::new(Vec::new()),
            clock: Clock::new(1),
        }
    }

    fn memory_select(&mut self, i: usize, candidate: Individual) -> Result<()> {
        if candidate.expect_fitness()? <= self.pop.members[i].expect_fitness()? {
            self.pop.members[i] = candidate;
        }
        Ok(())
    }
}

impl PopulationOptimizer for Mpa {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.params.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)?;
        self.clock = Clock::new(planned_generations(
            eval.budget().remaining(),
            self.generation_evals(),
        ));
        Ok(())
    }

    fn generation_evals(&self) -> u64 {
        2 * self.pop.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let space = eval.space().clone();
        let dim = self.pop.dim();
        let n = self.pop.len();
        let ratio = self.clock.ratio();
        let cf = adaptive_cf(self.clock.t(), self.clock.horizon());
        // elite matrix: best-so-far replicated over every row
        let elite = eval
            .best_position()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| self.pop.members[0].position.clone());

        for i in 0..n {
            let prey = self.pop.members[i].position.clone();
            let mut pos = vec![0.0; dim];
            for j in 0..dim {
                let r = rng.uniform();
                pos[j] = if ratio < 1.0 / 3.0 {
                    phase1_component(elite[j], prey[j], rng.normal(), self.params.p, r).1
                } else if ratio < 2.0 / 3.0 {
                    if i < n / 2 {
                        phase2_levy_component(
                            elite[j],
                            prey[j],
                            rng.levy(LEVY_BETA),
                            self.params.p,
                            r,
                        )
                        .1
                    } else {
                        phase2_brownian_component(
                            elite[j],
                            prey[j],
                            rng.normal(),
                            self.params.p,
                            cf,
                        )
                        .1
                    }
                } else {
                    phase3_component(elite[j], prey[j], rng.levy(LEVY_BETA), self.params.p, cf).1
                };
            }
            repair_clamp(&space, &mut pos, rng);
            let mut cand = Individual::new(pos);
            eval.evaluate(&mut cand)?;
            self.memory_select(i, cand)?;
        }

        // FADs effect / long jump, one branch per generation
        let fads_branch = rng.uniform() < self.params.fads;
        for i in 0..n {
            let mut pos = self.pop.members[i].position.clone();
            if fads_branch {
                for (j, v) in pos.iter_mut().enumerate() {
                    let u = if rng.uniform() < self.params.fads {
                        1.0
                    } else {
                        0.0
                    };
                    let r = rng.uniform();
                    let (lo, hi) = (space.lower()[j], space.upper()[j]);
                    *v += cf * (lo + r * (hi - lo)) * u;
                }
            } else {
                let r = rng.uniform();
                let donors = distinct_indices(n, 2, Some(i), rng)?;
                let scale = self.params.fads * (1.0 - r) + r;
                for (j, v) in pos.iter_mut().enumerate() {
                    *v += scale
                        * (self.pop.members[donors[0]].position[j]
                            - self.pop.members[donors[1]].position[j]);
                }
            }
            repair_clamp(&space, &mut pos, rng);
            let mut cand = Individual::new(pos);
            eval.evaluate(&mut cand)?;
            self.memory_select(i, cand)?;
        }

        self.clock.tick();
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

    #[test]
    fn phase1_hand_oracle() {
        // rb = 1, elite = 2, prey = 1, P = 0.5, r = 1 -> step 1, prey' 1.5
        let (step, next) = phase1_component(2.0, 1.0, 1.0, 0.5, 1.0);
        assert_eq!(step, 1.0);
        assert_eq!(next, 1.5);
    }

    #[test]
    fn phase1_collapses_when_prey_is_elite() {
        let (step, next) = phase1_component(3.0, 3.0, 1.0, 0.5, 0.7);
        assert_eq!(step, 0.0);
        assert_eq!(next, 3.0);
    }

    #[test]
    fn phase3_zero_levy_lands_on_elite() {
        let (step, next) = phase3_component(4.0, 9.0, 0.0, 0.5, 0.8);
        assert_eq!(step, 0.0);
        assert_eq!(next, 4.0);
    }

    #[test]
    fn cf_decays_to_zero() {
        assert_eq!(adaptive_cf(0, 100), 1.0);
        assert_eq!(adaptive_cf(100, 100), 0.0);
        let mid = adaptive_cf(50, 100);
        assert!(mid > 0.0 && mid < 1.0);
    }
}
