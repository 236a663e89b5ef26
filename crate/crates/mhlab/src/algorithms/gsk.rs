//! Gaining-sharing knowledge optimizer: a junior phase learns from nearest
//! fitness neighbors, a senior phase from the best/middle/worst tiers; the
//! per-dimension phase mix shifts from junior to senior over the run.

use serde::{Deserialize, Serialize};

use super::common::{distinct_indices, evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Junior gaining-sharing for one coordinate.
///
/// `better`/`worse` are the nearest better and worse neighbors in the
/// fitness ordering (the endpoints use themselves).
pub fn junior_component(
    x_i: f64,
    better: f64,
    worse: f64,
    x_r: f64,
    k_f: f64,
    i_worse_than_r: bool,
) -> f64 {
    if i_worse_than_r {
        x_i + k_f * ((better - worse) + (x_r - x_i))
    } else {
        x_i + k_f * ((better - worse) + (x_i - x_r))
    }
}

/// Senior gaining-sharing for one coordinate, printed form: the second
/// branch differences against `x_r`; `senior_symmetric` switches it to the
/// `x_m` form mirroring the junior phase.
#[allow(clippy::too_many_arguments)]
pub fn senior_component(
    x_i: f64,
    p_best: f64,
    p_worst: f64,
    x_m: f64,
    x_r: f64,
    k_f: f64,
    i_worse_than_m: bool,
    senior_symmetric: bool,
) -> f64 {
    if i_worse_than_m {
        x_i + k_f * ((p_best - p_worst) + (x_m - x_i))
    } else {
        let anchor = if senior_symmetric { x_m } else { x_r };
        x_i + k_f * ((p_best - p_worst) + (x_i - anchor))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GskParams {
    pub pop_size: usize,
    /// Top/bottom tier fraction.
    pub p: f64,
    pub k_f: f64,
    pub k_r: f64,
    /// Knowledge rate steering the junior/senior dimension split.
    pub k: f64,
    /// Config flag (not a tuned parameter): use the symmetric senior branch.
    #[serde(default)]
    pub senior_symmetric: bool,
}

impl GskParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        let p = GskParams {
            pop_size: set.usize("pop_size")?,
            p: set.f64("p")?,
            k_f: set.f64("k_f")?,
            k_r: set.f64("k_r")?,
            k: set.f64("k")?,
            senior_symmetric: false,
        };
        if p.pop_size < 3 {
            return Err(Error::config(
                "parameter `pop_size` must be at least 3 for gsk",
            ));
        }
        Ok(p)
    }
}

pub struct Gsk {
    params: GskParams,
    pop: Population,
    clock: Clock,
}

impl Gsk {
    pub fn new(params: GskParams) -> Self {
        Gsk {
            params,
            pop: Population::new(Vec::new()),
            clock: Clock::new(1),
        }
    }

    pub fn with_senior_symmetric(mut self, on: bool) -> Self {
        self.params.senior_symmetric = on;
        self
    }
}

impl PopulationOptimizer for Gsk {
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
        self.pop.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let space = eval.space().clone();
        let n = self.pop.len();
        let dim = self.pop.dim();
        let ranked = self.pop.ranked_indices();
        let snapshot = self.pop.clone();
        let junior_share = (1.0 - self.clock.ratio()).powf(self.params.k);
        let tier = ((n as f64 * self.params.p).ceil() as usize).clamp(1, n);

        // position of each member in the ranking
        let mut rank_of = vec![0usize; n];
        for (pos, &i) in ranked.iter().enumerate() {
            rank_of[i] = pos;
        }

        for i in 0..n {
            let s = rank_of[i];
            let better = ranked[s.saturating_sub(1)];
            let worse = ranked[(s + 1).min(n - 1)];
            let r_junior = distinct_indices(n, 1, Some(i), rng)?[0];

            let p_best = ranked[rng.index(tier)];
            let p_worst = ranked[n - 1 - rng.index(tier)];
            let mid_lo = tier.min(n - 1);
            let mid_hi = n.saturating_sub(tier).max(mid_lo + 1);
            let x_m = ranked[mid_lo + rng.index((mid_hi - mid_lo).max(1))];
            let r_senior = distinct_indices(n, 1, Some(i), rng)?[0];

            let f_i = snapshot.members[i].expect_fitness()?;
            let junior_flag = f_i > snapshot.members[r_junior].expect_fitness()?;
            let senior_flag = f_i > snapshot.members[x_m].expect_fitness()?;

            let x = |k: usize| &snapshot.members[k].position;
            let mut trial = snapshot.members[i].position.clone();
            for j in 0..dim {
                let gained = if rng.uniform() <= junior_share {
                    junior_component(
                        x(i)[j],
                        x(better)[j],
                        x(worse)[j],
                        x(r_junior)[j],
                        self.params.k_f,
                        junior_flag,
                    )
                } else {
                    senior_component(
                        x(i)[j],
                        x(p_best)[j],
                        x(p_worst)[j],
                        x(x_m)[j],
                        x(r_senior)[j],
                        self.params.k_f,
                        senior_flag,
                        self.params.senior_symmetric,
                    )
                };
                if rng.uniform() <= self.params.k_r {
                    trial[j] = gained;
                }
            }
            repair_clamp(&space, &mut trial, rng);
            let mut cand = Individual::new(trial);
            eval.evaluate(&mut cand)?;
            if cand.expect_fitness()? <= f_i {
                self.pop.members[i] = cand;
            }
        }
        self.clock.tick();
        self.pop.generation += 1;
        Ok(())
    }

    fn population(&self) -> &Population {
        &self.pop
    }
}
