//! Moth-flame optimizer with a fitness-dependent weight: moths spiral around
//! a shrinking list of flames, pulled between their flame and the best flame
//! by the weight `w = |f(best) / f(moth)|`.

use super::common::{evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Fitness weight; the equal-fitness limit 1 is used when `f_moth` is zero.
pub fn fitness_weight(f_best: f64, f_moth: f64) -> f64 {
    if f_moth == 0.0 {
        1.0
    } else {
        (f_best / f_moth).abs()
    }
}

/// One-coordinate spiral update:
/// `dist * e^(b t) * cos(2 pi t) + w * flame + (1 - w) * best`.
pub fn imfo_component(dist: f64, b: f64, t: f64, w: f64, flame: f64, best: f64) -> f64 {
    dist * (b * t).exp() * (2.0 * std::f64::consts::PI * t).cos() + w * flame + (1.0 - w) * best
}

#[derive(Debug, Clone)]
pub struct ImfoParams {
    pub pop_size: usize,
    /// Spiral shape constant.
    pub b: f64,
    /// Probability of crossing a moved moth with the best flame.
    pub p: f64,
}

impl ImfoParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(ImfoParams {
            pop_size: set.usize("pop_size")?.max(2),
            b: set.f64("b")?,
            p: set.f64("p")?,
        })
    }
}

pub struct Imfo {
    params: ImfoParams,
    moths: Population,
    /// Sorted best-so-far solutions, best first.
    flames: Vec<Individual>,
    clock: Clock,
}

impl Imfo {
    pub fn new(params: ImfoParams) -> Self {
        Imfo {
            params,
            moths: Population::new(Vec::new()),
            flames: Vec::new(),
            clock: Clock::new(1),
        }
    }

    fn rebuild_flames(&mut self) {
        let mut pool: Vec<Individual> = self.flames.drain(..).collect();
        pool.extend(self.moths.members.iter().cloned());
        pool.sort_by(|a, b| {
            let fa = a.fitness().unwrap_or(f64::INFINITY);
            let fb = b.fitness().unwrap_or(f64::INFINITY);
            fa.partial_cmp(&fb).unwrap_or(std::cmp::Ordering::Equal)
        });
        pool.truncate(self.params.pop_size);
        self.flames = pool;
    }

    fn flame_count(&self) -> usize {
        let n = self.params.pop_size as f64;
        let shrunk = n - self.clock.ratio() * (n - 1.0);
        (shrunk.round() as usize).clamp(1, self.flames.len().max(1))
    }
}

impl PopulationOptimizer for Imfo {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.moths = init_population(eval.space(), self.params.pop_size, rng)?;
        evaluate_all(eval, &mut self.moths)?;
        self.flames.clear();
        self.rebuild_flames();
        self.clock = Clock::new(planned_generations(
            eval.budget().remaining(),
            self.generation_evals(),
        ));
        Ok(())
    }

    fn generation_evals(&self) -> u64 {
        self.moths.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let space = eval.space().clone();
        let dim = self.moths.dim();
        let n_flames = self.flame_count();
        let f_best = self.flames[0].expect_fitness()?;
        let best_pos = self.flames[0].position.clone();

        for i in 0..self.moths.len() {
            let flame = &self.flames[i.min(n_flames - 1)];
            let w = fitness_weight(f_best, self.moths.members[i].expect_fitness()?);
            let mut pos = vec![0.0; dim];
            for j in 0..dim {
                let dist = (flame.position[j] - self.moths.members[i].position[j]).abs();
                let t = rng.uniform_in(-1.0, 1.0);
                pos[j] = imfo_component(dist, self.params.b, t, w, flame.position[j], best_pos[j]);
            }
            // dynamic crossover toward the best flame
            if rng.uniform() < self.params.p {
                for (j, v) in pos.iter_mut().enumerate() {
                    if rng.uniform() < 0.5 {
                        *v = best_pos[j];
                    }
                }
            }
            repair_clamp(&space, &mut pos, rng);
            let mut moved = Individual::new(pos);
            eval.evaluate(&mut moved)?;
            self.moths.members[i] = moved;
        }
        self.rebuild_flames();
        self.clock.tick();
        self.moths.generation += 1;
        Ok(())
    }

    fn population(&self) -> &Population {
        &self.moths
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_fitness_gives_unit_weight() {
        assert_eq!(fitness_weight(5.0, 5.0), 1.0);
        // w = 1 drops the best-flame term entirely
        let v = imfo_component(0.0, 1.0, 0.3, 1.0, 2.5, 999.0);
        assert_eq!(v, 2.5);
    }

    #[test]
    fn zero_fitness_guard() {
        assert_eq!(fitness_weight(0.0, 0.0), 1.0);
        assert_eq!(fitness_weight(1.0, 0.0), 1.0);
    }

    #[test]
    fn zero_distance_unit_weight_returns_flame() {
        let v = imfo_component(0.0, 2.0, -0.7, 1.0, 4.0, -1.0);
        assert_eq!(v, 4.0);
    }

    #[test]
    fn spiral_hand_oracle() {
        // b = 1, t = 0, dist = 1, w = 0.5, flame = 2, best = 4
        // -> 1 * e^0 * cos(0) + 0.5*2 + 0.5*4 = 4
        let v = imfo_component(1.0, 1.0, 0.0, 0.5, 2.0, 4.0);
        assert!((v - 4.0).abs() < 1e-12);
    }
}
