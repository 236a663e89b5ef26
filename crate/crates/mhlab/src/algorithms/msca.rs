//! Multi-strategy sine-cosine optimizer: the classic sine/cosine position
//! update plus a rotating auxiliary pool (Cauchy mutation, chaotic local
//! search, opposition-based learning and two differential-evolution probes)
//! fired with probability `p_c` once per generation.

use super::common::{distinct_indices, evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Amplitude schedule: `r1 = a - t * a / T`.
pub fn amplitude(a: f64, t: u64, horizon: u64) -> f64 {
    a - t as f64 * a / horizon.max(1) as f64
}

/// One-coordinate sine/cosine update; the sine branch fires when `r4 < 0.5`.
pub fn sca_component(x: f64, dest: f64, r1: f64, r2: f64, r3: f64, r4: f64) -> f64 {
    let pull = (r3 * dest - x).abs();
    if r4 < 0.5 {
        x + r1 * r2.sin() * pull
    } else {
        x + r1 * r2.cos() * pull
    }
}

#[derive(Debug, Clone)]
pub struct MscaParams {
    pub pop_size: usize,
    pub a: f64,
    pub p_c: f64,
    pub mu_chaos: f64,
}

impl MscaParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(MscaParams {
            pop_size: set.usize("pop_size")?.max(2),
            a: set.f64("a")?,
            p_c: set.f64("p_c")?,
            mu_chaos: set.f64("mu_chaos")?,
        })
    }
}

pub struct Msca {
    params: MscaParams,
    pop: Population,
    clock: Clock,
    chaos: f64,
}

impl Msca {
    pub fn new(params: MscaParams) -> Self {
        Msca {
            params,
            pop: Population::new(Vec::new()),
            clock: Clock::new(1),
            chaos: 0.7,
        }
    }

    fn auxiliary(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let space = eval.space().clone();
        let dim = self.pop.dim();
        let best_idx = self.pop.best_index().unwrap_or(0);
        let which = (self.clock.t() as usize) % 5;
        let (target_idx, mut cand) = match which {
            0 => {
                // Cauchy mutation of the best member
                let base = self.pop.members[best_idx].position.clone();
                let pos: Vec<f64> = (0..dim)
                    .map(|j| {
                        let u = rng.uniform();
                        let cauchy = (std::f64::consts::PI * (u - 0.5)).tan();
                        base[j] + cauchy * (space.upper()[j] - space.lower()[j]) / 10.0
                    })
                    .collect();
                (best_idx, pos)
            }
            1 => {
                // chaotic local search around the best, radius shrinking with t
                let base = self.pop.members[best_idx].position.clone();
                let shrink = 1.0 - self.clock.ratio();
                let pos: Vec<f64> = (0..dim)
                    .map(|j| {
                        self.chaos = self.params.mu_chaos * self.chaos * (1.0 - self.chaos);
                        let span = (space.upper()[j] - space.lower()[j]) / 10.0;
                        base[j] + (2.0 * self.chaos - 1.0) * span * shrink
                    })
                    .collect();
                (best_idx, pos)
            }
            2 => {
                // opposition-based learning on a random member
                let k = rng.index(self.pop.len());
                let pos: Vec<f64> = self.pop.members[k]
                    .position
                    .iter()
                    .enumerate()
                    .map(|(j, x)| space.lower()[j] + space.upper()[j] - x)
                    .collect();
                (k, pos)
            }
            _ => {
                // differential probes: rand/1 (which == 3) or best/1 (== 4)
                let k = rng.index(self.pop.len());
                let donors = distinct_indices(self.pop.len(), 3, Some(k), rng)?;
                let (f, cr) = (0.5, 0.9);
                let basis = if which == 3 { donors[0] } else { best_idx };
                let j_rand = rng.index(dim);
                let pos: Vec<f64> = (0..dim)
                    .map(|j| {
                        let mutant = self.pop.members[basis].position[j]
                            + f * (self.pop.members[donors[1]].position[j]
                                - self.pop.members[donors[2]].position[j]);
                        if rng.uniform() <= cr || j == j_rand {
                            mutant
                        } else {
                            self.pop.members[k].position[j]
                        }
                    })
                    .collect();
                (k, pos)
            }
        };
        repair_clamp(&space, &mut cand, rng);
        let mut ind = Individual::new(cand);
        eval.evaluate(&mut ind)?;
        if ind.expect_fitness()? <= self.pop.members[target_idx].expect_fitness()? {
            self.pop.members[target_idx] = ind;
        }
        Ok(())
    }
}

impl PopulationOptimizer for Msca {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.params.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)?;
        self.chaos = 0.7;
        self.clock = Clock::new(planned_generations(
            eval.budget().remaining(),
            self.generation_evals(),
        ));
        Ok(())
    }

    fn generation_evals(&self) -> u64 {
        self.pop.len().max(1) as u64 + 1
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let r1 = amplitude(self.params.a, self.clock.t(), self.clock.horizon());
        let dest = eval
            .best_position()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| self.pop.members[0].position.clone());
        let space = eval.space().clone();
        for i in 0..self.pop.len() {
            let mut pos = self.pop.members[i].position.clone();
            for (j, x) in pos.iter_mut().enumerate() {
                let r2 = rng.uniform_in(0.0, 2.0 * std::f64::consts::PI);
                let r3 = rng.uniform_in(0.0, 2.0);
                let r4 = rng.uniform();
                *x = sca_component(*x, dest[j], r1, r2, r3, r4);
            }
            repair_clamp(&space, &mut pos, rng);
            let mut moved = Individual::new(pos);
            eval.evaluate(&mut moved)?;
            self.pop.members[i] = moved;
        }
        if rng.uniform() < self.params.p_c {
            self.auxiliary(eval, rng)?;
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
    fn amplitude_hits_zero_at_horizon() {
        assert_eq!(amplitude(2.0, 10, 10), 0.0);
        assert_eq!(amplitude(2.0, 0, 10), 2.0);
    }

    #[test]
    fn zero_amplitude_freezes_position() {
        let x = sca_component(7.0, 3.0, 0.0, 1.2, 0.4, 0.3);
        assert_eq!(x, 7.0);
    }

    #[test]
    fn zero_sine_freezes_position() {
        // sine branch with r2 = 0 -> sin = 0 -> no movement
        let x = sca_component(7.0, 3.0, 2.0, 0.0, 0.4, 0.3);
        assert_eq!(x, 7.0);
    }

    #[test]
    fn sine_branch_hand_oracle() {
        // a = 2, t = 0 -> r1 = 2; sin(r2) = 1, r3 = 1, X = 0, P = 3 -> 6
        let r1 = amplitude(2.0, 0, 10);
        let x = sca_component(0.0, 3.0, r1, std::f64::consts::FRAC_PI_2, 1.0, 0.0);
        assert!((x - 6.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_branch_used_at_and_above_half() {
        // r4 = 0.5 -> cosine; cos(0) = 1
        let x = sca_component(0.0, 3.0, 2.0, 0.0, 1.0, 0.5);
        assert!((x - 6.0).abs() < 1e-12);
    }
}
