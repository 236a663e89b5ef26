//! Butterfly-style dual-population optimizer with criss-cross and
//! toward-best recombination and greedy one-to-one selection.
//!
//! Only the recombination operators are modelled here; the covariance-matrix
//! retreat phase of the original method is out of scope. The first population
//! evolves, the second serves as a frozen diversity archive feeding the
//! pooled donor draws.

use super::common::{distinct_indices, evaluate_all, repair_clamp};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Criss-cross variant: `v = x1_cc + F * (x1_r1 - pooled_r2)`.
pub fn criss_cross(cc: &[f64], r1: &[f64], pooled_r2: &[f64], f: f64) -> Vec<f64> {
    cc.iter()
        .zip(r1)
        .zip(pooled_r2)
        .map(|((a, b), c)| a + f * (b - c))
        .collect()
}

/// Toward-best variant: `v = x1_best + F * (x1_cc - pooled_r2)`.
pub fn toward_best(best: &[f64], cc: &[f64], pooled_r2: &[f64], f: f64) -> Vec<f64> {
    best.iter()
        .zip(cc)
        .zip(pooled_r2)
        .map(|((a, b), c)| a + f * (b - c))
        .collect()
}

#[derive(Debug, Clone)]
pub struct EbcmParams {
    pub pop_size: usize,
    pub f: f64,
}

impl EbcmParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        let p = EbcmParams {
            pop_size: set.usize("pop_size")?,
            f: set.f64("f")?,
        };
        if p.pop_size < 8 {
            return Err(Error::config(
                "parameter `pop_size` must be at least 8 (two populations of 4)",
            ));
        }
        Ok(p)
    }
}

pub struct Ebcm {
    params: EbcmParams,
    x1: Population,
    x2: Vec<Individual>,
}

impl Ebcm {
    pub fn new(params: EbcmParams) -> Self {
        Ebcm {
            params,
            x1: Population::new(Vec::new()),
            x2: Vec::new(),
        }
    }

    fn pooled(&self, idx: usize) -> &Individual {
        if idx < self.x1.len() {
            &self.x1.members[idx]
        } else {
            &self.x2[idx - self.x1.len()]
        }
    }
}

impl PopulationOptimizer for Ebcm {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let half = self.params.pop_size / 2;
        self.x1 = init_population(eval.space(), half, rng)?;
        evaluate_all(eval, &mut self.x1)?;
        let mut archive = init_population(eval.space(), self.params.pop_size - half, rng)?;
        evaluate_all(eval, &mut archive)?;
        self.x2 = archive.members;
        Ok(())
    }

    fn generation_evals(&self) -> u64 {
        self.x1.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        if self.x2.is_empty() {
            return Err(Error::config("archive population X2 is empty"));
        }
        let n1 = self.x1.len();
        let pool_n = n1 + self.x2.len();
        let best = self
            .x1
            .best_index()
            .ok_or_else(|| Error::Contract("population not evaluated".into()))?;
        let snapshot = self.x1.clone();
        for z in 0..n1 {
            let picks = distinct_indices(n1, 2, Some(z), rng)?;
            let (cc, r1) = (picks[0], picks[1]);
            // pooled donor distinct from the two X1 donors; cc and r1 are
            // always inside the pool, so exactly pool_n - 2 slots remain
            let mut k = rng.index(pool_n - 2);
            let mut idx = 0usize;
            let r2 = loop {
                if idx != cc && idx != r1 {
                    if k == 0 {
                        break idx;
                    }
                    k -= 1;
                }
                idx += 1;
            };
            let v = if rng.uniform() < 0.5 {
                criss_cross(
                    &snapshot.members[cc].position,
                    &snapshot.members[r1].position,
                    &self.pooled(r2).position,
                    self.params.f,
                )
            } else {
                toward_best(
                    &snapshot.members[best].position,
                    &snapshot.members[cc].position,
                    &self.pooled(r2).position,
                    self.params.f,
                )
            };
            let mut pos = v;
            repair_clamp(eval.space(), &mut pos, rng);
            let mut trial = Individual::new(pos);
            eval.evaluate(&mut trial)?;
            if trial.expect_fitness()? <= snapshot.members[z].expect_fitness()? {
                self.x1.members[z] = trial;
            }
        }
        self.x1.generation += 1;
        Ok(())
    }

    fn population(&self) -> &Population {
        &self.x1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criss_cross_zero_factor_is_identity_on_cc() {
        let v = criss_cross(&[3.0, -2.0], &[9.0, 9.0], &[1.0, 1.0], 0.0);
        assert_eq!(v, vec![3.0, -2.0]);
    }

    #[test]
    fn criss_cross_hand_oracle() {
        // F = 1, cc = (0,0), r1 = (2,2), pooled = (1,1) -> (1,1)
        let v = criss_cross(&[0.0, 0.0], &[2.0, 2.0], &[1.0, 1.0], 1.0);
        assert_eq!(v, vec![1.0, 1.0]);
    }

    #[test]
    fn toward_best_difference_vanishes() {
        // cc coincides with the pooled donor -> v = best
        let v = toward_best(&[5.0, 6.0], &[2.0, 2.0], &[2.0, 2.0], 0.8);
        assert_eq!(v, vec![5.0, 6.0]);
    }
}
