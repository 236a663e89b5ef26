//! Gravitational search with hyperbolic acceleration coefficients: velocities
//! integrate a mass-weighted gravity pull plus an explicit best-solution
//! attractor whose strengths swap over the run.

use super::common::{evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Velocity update for one coordinate:
/// `v' = rand * v + c1 * a * dt + c2 * (gbest - x) / dt`.
#[allow(clippy::too_many_arguments)]
pub fn hgsa_velocity(
    rand: f64,
    v: f64,
    c1: f64,
    a: f64,
    c2: f64,
    gbest: f64,
    x: f64,
    dt: f64,
) -> f64 {
    rand * v + c1 * a * dt + c2 * (gbest - x) / dt
}

/// Position update `x' = x + v'`.
pub fn hgsa_position(x: f64, v_next: f64) -> f64 {
    x + v_next
}

/// Hyperbolic coefficient pair: `c1` decays from ~1 to ~0 while `c2` grows
/// symmetrically, crossing at mid-run.
pub fn hyperbolic_coefficients(t: u64, horizon: u64) -> (f64, f64) {
    let ratio = t as f64 / horizon.max(1) as f64;
    let sigma = 0.5 * (1.0 + (4.0 * ratio - 2.0).tanh());
    (1.0 - sigma, sigma)
}

/// Normalized gravitational masses from fitness values (minimization).
pub fn masses(fitness: &[f64]) -> Vec<f64> {
    let best = fitness.iter().cloned().fold(f64::INFINITY, f64::min);
    let worst = fitness.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if worst == best {
        return vec![1.0 / fitness.len() as f64; fitness.len()];
    }
    let raw: Vec<f64> = fitness
        .iter()
        .map(|f| (worst - f) / (worst - best))
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|m| m / sum.max(f64::MIN_POSITIVE)).collect()
}

#[derive(Debug, Clone)]
pub struct HgsaParams {
    pub pop_size: usize,
    pub g0: f64,
}

impl HgsaParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(HgsaParams {
            pop_size: set.usize("pop_size")?.max(2),
            g0: set.f64("g0")?,
        })
    }
}

pub struct Hgsa {
    params: HgsaParams,
    pop: Population,
    velocities: Vec<Vec<f64>>,
    clock: Clock,
}

impl Hgsa {
    pub fn new(params: HgsaParams) -> Self {
        Hgsa {
            params,
            pop: Population::new(Vec::new()),
            velocities: Vec::new(),
            clock: Clock::new(1),
        }
    }
}

impl PopulationOptimizer for Hgsa {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.params.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)?;
        self.velocities = vec![vec![0.0; self.pop.dim()]; self.pop.len()];
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
        let n = self.pop.len();
        let t = self.clock.t();
        let horizon = self.clock.horizon();
        let ratio = t as f64 / horizon as f64;
        let g = self.params.g0 * (-20.0 * ratio).exp();
        let (c1, c2) = hyperbolic_coefficients(t, horizon);
        let gbest = eval
            .best_position()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| self.pop.members[0].position.clone());

        let fitness: Vec<f64> = self
            .pop
            .members
            .iter()
            .map(|m| m.expect_fitness())
            .collect::<Result<_>>()?;
        let m = masses(&fitness);

        // heaviest first; the attracting set shrinks linearly to one
        let ranked = self.pop.ranked_indices();
        let kbest = ((n as f64 * (1.0 - ratio)).round() as usize).clamp(1, n);
        let attractors = &ranked[..kbest];

        let snapshot = self.pop.positions();
        let mut accel = vec![vec![0.0; dim]; n];
        for i in 0..n {
            for &j in attractors {
                if j == i {
                    continue;
                }
                let dist: f64 = snapshot[i]
                    .iter()
                    .zip(&snapshot[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let pull = rng.uniform() * g * m[j] / (dist + 1e-12);
                for d in 0..dim {
                    accel[i][d] += pull * (snapshot[j][d] - snapshot[i][d]);
                }
            }
        }

        for i in 0..n {
            let rand_i = rng.uniform();
            let mut pos = snapshot[i].clone();
            for d in 0..dim {
                let v = hgsa_velocity(
                    rand_i,
                    self.velocities[i][d],
                    c1,
                    accel[i][d],
                    c2,
                    gbest[d],
                    pos[d],
                    1.0,
                );
                self.velocities[i][d] = v;
                pos[d] = hgsa_position(pos[d], v);
            }
            repair_clamp(&space, &mut pos, rng);
            let mut moved = crate::population::Individual::new(pos);
            eval.evaluate(&mut moved)?;
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
