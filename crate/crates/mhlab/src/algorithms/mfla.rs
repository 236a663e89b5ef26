//! Memetic frog leaping: rank-ordered dealing into memeplexes, the worst frog
//! of each memeplex jumps toward the global best and a center point, and a
//! scaled local probe refines each memeplex best.

use super::common::{evaluate_all, repair_clamp};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Geometric center: plain mean of the memeplex positions.
pub fn geometric_center(positions: &[&[f64]]) -> Vec<f64> {
    let dim = positions.first().map_or(0, |p| p.len());
    let mut c = vec![0.0; dim];
    for p in positions {
        for (j, v) in p.iter().enumerate() {
            c[j] += v;
        }
    }
    c.iter_mut()
        .for_each(|v| *v /= positions.len().max(1) as f64);
    c
}

/// Gravitational center: fitness-weighted mean, better frogs weigh more.
/// Degenerates to the geometric center when all fitnesses agree.
pub fn gravitational_center(positions: &[&[f64]], fitness: &[f64]) -> Vec<f64> {
    let worst = fitness.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let best = fitness.iter().cloned().fold(f64::INFINITY, f64::min);
    if worst == best {
        return geometric_center(positions);
    }
    let weights: Vec<f64> = fitness.iter().map(|f| worst - f).collect();
    let total: f64 = weights.iter().sum();
    let dim = positions[0].len();
    let mut c = vec![0.0; dim];
    for (p, w) in positions.iter().zip(&weights) {
        for (j, v) in p.iter().enumerate() {
            c[j] += w * v;
        }
    }
    c.iter_mut().for_each(|v| *v /= total);
    c
}

/// The leap: `q_w + r1 (q_best - q_w) + r2 (q_m - q_w)`.
pub fn frog_leap(q_w: &[f64], q_best: &[f64], q_m: &[f64], r1: f64, r2: f64) -> Vec<f64> {
    q_w.iter()
        .zip(q_best)
        .zip(q_m)
        .map(|((w, b), m)| w + r1 * (b - w) + r2 * (m - w))
        .collect()
}

#[derive(Debug, Clone)]
pub struct MflaParams {
    pub memeplexes: usize,
    pub memeplex_size: usize,
    pub beta: f64,
}

impl MflaParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        let p = MflaParams {
            memeplexes: set.usize("memeplexes")?,
            memeplex_size: set.usize("memeplex_size")?,
            beta: set.f64("beta")?,
        };
        if p.memeplexes < 1 || p.memeplex_size < 2 {
            return Err(Error::config(
                "mfla needs at least 1 memeplex of at least 2 frogs",
            ));
        }
        Ok(p)
    }

    pub fn pop_size(&self) -> usize {
        self.memeplexes * self.memeplex_size
    }
}

pub struct Mfla {
    params: MflaParams,
    pop: Population,
}

impl Mfla {
    pub fn new(params: MflaParams) -> Self {
        Mfla {
            params,
            pop: Population::new(Vec::new()),
        }
    }
}

impl PopulationOptimizer for Mfla {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        if self.params.pop_size() != self.params.memeplexes * self.params.memeplex_size {
            return Err(Error::config(
                "population must equal memeplexes * memeplex_size",
            ));
        }
        self.pop = init_population(eval.space(), self.params.pop_size(), rng)?;
        evaluate_all(eval, &mut self.pop)
    }

    fn generation_evals(&self) -> u64 {
        2 * self.params.memeplexes as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let space = eval.space().clone();
        let ranked = self.pop.ranked_indices();
        let global_best = self.pop.members[ranked[0]].position.clone();
        let m = self.params.memeplexes;

        for mplx in 0..m {
            // rank-ordered dealing: memeplex k owns ranked[k], ranked[k+m], ...
            let member_ids: Vec<usize> = ranked.iter().skip(mplx).step_by(m).copied().collect();
            let positions: Vec<&[f64]> = member_ids
                .iter()
                .map(|&i| self.pop.members[i].position.as_slice())
                .collect();
            let fitness: Vec<f64> = member_ids
                .iter()
                .map(|&i| self.pop.members[i].expect_fitness())
                .collect::<Result<_>>()?;

            let q_m = if rng.uniform() < 0.5 {
                geometric_center(&positions)
            } else {
                gravitational_center(&positions, &fitness)
            };
            // dealing is rank-ordered, so first is the memeplex best,
            // last the memeplex worst
            let best_id = member_ids[0];
            let worst_id = *member_ids.last().unwrap();

            let r1 = rng.uniform();
            let r2 = rng.uniform();
            let mut leap = frog_leap(
                &self.pop.members[worst_id].position,
                &global_best,
                &q_m,
                r1,
                r2,
            );
            repair_clamp(&space, &mut leap, rng);
            let mut cand = Individual::new(leap);
            eval.evaluate(&mut cand)?;
            if cand.expect_fitness()? <= self.pop.members[worst_id].expect_fitness()? {
                self.pop.members[worst_id] = cand;
            }

            // memetic refinement around the memeplex best, radius scaled by beta
            let mut probe = self.pop.members[best_id].position.clone();
            for (j, v) in probe.iter_mut().enumerate() {
                let span = (space.upper()[j] - space.lower()[j]) / 20.0;
                *v += self.params.beta * rng.normal() * span;
            }
            repair_clamp(&space, &mut probe, rng);
            let mut probe_ind = Individual::new(probe);
            eval.evaluate(&mut probe_ind)?;
            if probe_ind.expect_fitness()? <= self.pop.members[best_id].expect_fitness()? {
                self.pop.members[best_id] = probe_ind;
            }
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

    #[test]
    fn zero_draws_leave_worst_frog_in_place() {
        let out = frog_leap(&[1.0, 2.0], &[5.0, 5.0], &[9.0, 9.0], 0.0, 0.0);
        assert_eq!(out, vec![1.0, 2.0]);
    }

    #[test]
    fn coincident_attractors_freeze_any_rand() {
        let q = [3.0, -1.0];
        for r in [0.0, 0.37, 1.0] {
            let out = frog_leap(&q, &q, &q, r, r);
            assert_eq!(out, q.to_vec());
        }
    }

    #[test]
    fn leap_hand_oracle() {
        // q_w = 0, q_best = 2, q_m = 4, both draws 0.5 -> 3
        let out = frog_leap(&[0.0], &[2.0], &[4.0], 0.5, 0.5);
        assert_eq!(out, vec![3.0]);
    }

    #[test]
    fn centers_agree_for_uniform_fitness() {
        let a = [0.0, 4.0];
        let b = [2.0, 0.0];
        let positions: Vec<&[f64]> = vec![&a, &b];
        let g = geometric_center(&positions);
        let c = gravitational_center(&positions, &[1.0, 1.0]);
        assert_eq!(g, c);
        assert_eq!(g, vec![1.0, 2.0]);
    }

    #[test]
    fn gravitational_center_leans_toward_better() {
        let a = [0.0];
        let b = [10.0];
        let positions: Vec<&[f64]> = vec![&a, &b];
        // a is much better (lower fitness) -> center closer to a
        let c = gravitational_center(&positions, &[0.0, 10.0]);
        assert_eq!(c, vec![0.0]);
    }

    #[test]
    fn size_mismatch_rejected() {
        assert!(MflaParams::from_set(
            &crate::params::ParamSet::new()
                .with_int("memeplexes", 0)
                .with_int("memeplex_size", 5)
                .with_real("beta", 0.6)
        )
        .is_err());
    }
}
