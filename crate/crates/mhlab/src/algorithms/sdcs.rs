//! Snap-drift cuckoo search: a switching parameter steers between snap and
//! drift modes; dedicated crossover and mutation operators propose candidates
//! that survive greedy selection.

use super::common::{evaluate_all, repair_clamp};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Switching-parameter update: snap subtracts the rate while the performance
/// measure sits in `[0, 0.5]`, drift adds it; clamped into `[0, 1]`.
pub fn switching_parameter(p_m: f64, omega: f64) -> f64 {
    if (0.0..=0.5).contains(&p_m) {
        (p_m - omega).max(0.0)
    } else {
        (p_m + omega).min(1.0)
    }
}

/// Heaviside step; 1 at and above zero.
pub fn heaviside(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Crossover operator; branch chosen by `p` against the variability `j`.
/// `levy` holds one step per dimension.
pub fn sdcs_crossover(x_i: &[f64], x_j: &[f64], a0: f64, j: f64, p: f64, levy: &[f64]) -> Vec<f64> {
    let dim = x_i.len();
    let mut out = vec![0.0; dim];
    for d in 0..dim {
        out[d] = if p < j {
            x_i[d] + a0 * (x_j[d] * levy[d] - x_i[d])
        } else if p <= 1.0 - j {
            x_i[d] + a0 * (x_j[d] - x_i[d]) * levy[d]
        } else {
            // printed identically to the middle branch in the source method
            x_i[d] + a0 * (x_j[d] - x_i[d]) * levy[d]
        };
    }
    out
}

/// Mutation operator gated by `H(p_a - eps)`; `r` is one uniform scalar.
pub fn sdcs_mutation(
    x_i: &[f64],
    x_j: &[f64],
    p_a: f64,
    eps: f64,
    j: f64,
    p: f64,
    r: f64,
) -> Vec<f64> {
    let h = heaviside(p_a - eps);
    x_i.iter()
        .zip(x_j)
        .map(|(a, b)| {
            if p < j {
                a + h * (b * r - a)
            } else if p <= 1.0 - j {
                a + h * (b - a) * r
            } else {
                a + h * (b - a)
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SdcsParams {
    pub pop_size: usize,
    pub omega: f64,
    pub j: f64,
    pub a0: f64,
    pub beta: f64,
}

impl SdcsParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(SdcsParams {
            pop_size: set.usize("pop_size")?.max(2),
            omega: set.f64("omega")?,
            j: set.f64("j")?,
            a0: set.f64("a0")?,
            beta: set.f64("beta")?,
        })
    }
}

pub struct Sdcs {
    params: SdcsParams,
    pop: Population,
    /// Performance measure: fraction of greedy replacements last generation.
    p_m: f64,
    p_a: f64,
}

impl Sdcs {
    pub fn new(params: SdcsParams) -> Self {
        Sdcs {
            params,
            pop: Population::new(Vec::new()),
            p_m: 0.5,
            p_a: 0.5,
        }
    }

    pub fn p_a(&self) -> f64 {
        self.p_a
    }

    fn other_index(&self, i: usize, rng: &mut dyn Randomness) -> usize {
        let n = self.pop.len();
        let k = rng.index(n - 1);
        if k >= i {
            k + 1
        } else {
            k
        }
    }
}

impl PopulationOptimizer for Sdcs {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.params.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)
    }

    fn generation_evals(&self) -> u64 {
        2 * self.pop.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.p_a = switching_parameter(self.p_m, self.params.omega);
        let n = self.pop.len();
        let dim = self.pop.dim();
        let mut improved = 0usize;

        for i in 0..n {
            // crossover proposal
            let j_idx = self.other_index(i, rng);
            let p = rng.uniform();
            let levy: Vec<f64> = (0..dim).map(|_| rng.levy(self.params.beta)).collect();
            let mut pos = sdcs_crossover(
                &self.pop.members[i].position,
                &self.pop.members[j_idx].position,
                self.params.a0,
                self.params.j,
                p,
                &levy,
            );
            repair_clamp(eval.space(), &mut pos, rng);
            let mut cand = Individual::new(pos);
            eval.evaluate(&mut cand)?;
            if cand.expect_fitness()? <= self.pop.members[i].expect_fitness()? {
                self.pop.members[i] = cand;
                improved += 1;
            }

            // mutation proposal
            let j_idx = self.other_index(i, rng);
            let p = rng.uniform();
            let eps = rng.uniform();
            let r = rng.uniform();
            let mut pos = sdcs_mutation(
                &self.pop.members[i].position,
                &self.pop.members[j_idx].position,
                self.p_a,
                eps,
                self.params.j,
                p,
                r,
            );
            repair_clamp(eval.space(), &mut pos, rng);
            let mut cand = Individual::new(pos);
            eval.evaluate(&mut cand)?;
            if cand.expect_fitness()? <= self.pop.members[i].expect_fitness()? {
                self.pop.members[i] = cand;
                improved += 1;
            }
        }

        self.p_m = improved as f64 / (2 * n) as f64;
        self.pop.generation += 1;
        Ok(())
    }

    fn population(&self) -> &Population {
        &self.pop
    }
}
