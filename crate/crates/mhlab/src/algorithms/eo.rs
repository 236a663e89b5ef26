//! Equilibrium optimizer: concentrations relax toward a pool of the four
//! best solutions plus their mean, with an exponential memory term and a
//! generation-rate term.

use super::common::{evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Concentration update: `c_eq + (c - c_eq) F + (G / (lambda V)) (1 - F)`.
pub fn eo_concentration(c: f64, c_eq: f64, f: f64, g_over_lambda_v: f64) -> f64 {
    c_eq + (c - c_eq) * f + g_over_lambda_v * (1.0 - f)
}

/// Exponential term `F = a1 sign(r - 0.5) (e^(-lambda tau) - 1)`.
pub fn exponential_term(a1: f64, r: f64, lambda: f64, tau: f64) -> f64 {
    let sign = if r > 0.5 {
        1.0
    } else if r < 0.5 {
        -1.0
    } else {
        0.0
    };
    a1 * sign * ((-lambda * tau).exp() - 1.0)
}

/// Time factor `tau = (1 - t/T)^(a2 t / T)`.
pub fn time_factor(t: u64, horizon: u64, a2: f64) -> f64 {
    let ratio = (t as f64 / horizon.max(1) as f64).min(1.0);
    (1.0 - ratio).powf(a2 * ratio)
}

#[derive(Debug, Clone)]
pub struct EoParams {
    pub pop_size: usize,
    pub a1: f64,
    pub a2: f64,
    pub gp: f64,
}

impl EoParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(EoParams {
            pop_size: set.usize("pop_size")?.max(2),
            a1: set.f64("a1")?,
            a2: set.f64("a2")?,
            gp: set.f64("gp")?,
        })
    }
}

pub struct Eo {
    params: EoParams,
    pop: Population,
    /// Four best-so-far concentrations, best first.
    pool: Vec<Individual>,
    clock: Clock,
}

impl Eo {
    pub fn new(params: EoParams) -> Self {
        Eo {
            params,
            pop: Population::new(Vec::new()),
            pool: Vec::new(),
            clock: Clock::new(1),
        }
    }

    /// Replace the worst pool slot whenever a better concentration shows up.
    fn update_pool(&mut self, cand: &Individual) -> Result<()> {
        let f = cand.expect_fitness()?;
        if self.pool.len() < 4 {
            self.pool.push(cand.clone());
        } else {
            let worst = self.pool.len() - 1;
            if f < self.pool[worst].expect_fitness()? {
                self.pool[worst] = cand.clone();
            }
        }
        self.pool.sort_by(|a, b| {
            a.fitness()
                .unwrap_or(f64::INFINITY)
                .partial_cmp(&b.fitness().unwrap_or(f64::INFINITY))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(())
    }

    fn pool_pick(&self, rng: &mut dyn Randomness) -> Vec<f64> {
        let k = rng.index(self.pool.len() + 1);
        if k < self.pool.len() {
            self.pool[k].position.clone()
        } else {
            // the pool mean candidate
            let dim = self.pool[0].dim();
            let mut mean = vec![0.0; dim];
            for m in &self.pool {
                for (j, v) in m.position.iter().enumerate() {
                    mean[j] += v;
                }
            }
            mean.iter_mut().for_each(|v| *v /= self.pool.len() as f64);
            mean
        }
    }
}

impl PopulationOptimizer for Eo {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.params.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)?;
        self.pool.clear();
        let snapshot = self.pop.clone();
        for m in &snapshot.members {
            self.update_pool(m)?;
        }
        self.clock = Clock::new(planned_generations(
            eval.budget().remaining(),
            self.generation_evals(),
        ));
        Ok(())
    }

    fn generation_evals(&self) -> u64 {
        self.pop.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let space = eval.space().clone();
        let dim = self.pop.dim();
        let tau = time_factor(self.clock.t(), self.clock.horizon(), self.params.a2);

        for i in 0..self.pop.len() {
            let c_eq = self.pool_pick(rng);
            let r1 = rng.uniform();
            let r2 = rng.uniform();
            let gcp = if r2 >= self.params.gp { 0.5 * r1 } else { 0.0 };
            let mut pos = vec![0.0; dim];
            for j in 0..dim {
                let lambda = rng.uniform();
                let r = rng.uniform();
                let f = exponential_term(self.params.a1, r, lambda, tau);
                let c = self.pop.members[i].position[j];
                let g = gcp * (c_eq[j] - lambda * c) * f;
                // lambda can be drawn exactly zero; the rate term then
                // carries no information and is dropped
                let g_over = if g == 0.0 {
                    0.0
                } else {
                    g / (lambda.max(1e-12))
                };
                pos[j] = eo_concentration(c, c_eq[j], f, g_over);
            }
            repair_clamp(&space, &mut pos, rng);
            let mut moved = Individual::new(pos);
            eval.evaluate(&mut moved)?;
            self.update_pool(&moved)?;
            self.pop.members[i] = moved;
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
    fn zero_terms_collapse_to_pool_candidate() {
        assert_eq!(eo_concentration(7.0, 2.0, 0.0, 0.0), 2.0);
    }

    #[test]
    fn full_memory_term_keeps_concentration() {
        // F = 1 wipes the generation term and keeps C
        assert_eq!(eo_concentration(7.0, 2.0, 1.0, 123.0), 7.0);
    }

    #[test]
    fn concentration_hand_oracle() {
        // C = 2, C_eq = 0, F = 0.5, G/(lambda V) = 1 -> 0 + 1 + 0.5 = 1.5
        assert_eq!(eo_concentration(2.0, 0.0, 0.5, 1.0), 1.5);
    }

    #[test]
    fn exponential_term_vanishes_at_zero_lambda() {
        assert_eq!(exponential_term(2.0, 0.9, 0.0, 0.7), 0.0);
    }

    #[test]
    fn time_factor_endpoints() {
        assert_eq!(time_factor(0, 10, 1.0), 1.0);
        assert_eq!(time_factor(10, 10, 1.0), 0.0);
    }
}
