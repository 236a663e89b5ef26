//! Aquila optimizer: four hunting maneuvers scheduled over the run, the first
//! two exploring while `t <= (2/3) T`, the last two exploiting after that.

use super::common::{evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

const LEVY_BETA: f64 = 1.5;

/// High soar: `best * (1 - t/T) + (mean - best * rand)`.
pub fn ao_step1(best: f64, mean: f64, t: u64, horizon: u64, rand: f64) -> f64 {
    best * (1.0 - t as f64 / horizon.max(1) as f64) + (mean - best * rand)
}

/// Contour flight: `best * levy + x_rand + (y - x) * rand`, with the spiral
/// coordinates `y`/`x` supplied per dimension.
pub fn ao_step2(best: f64, levy: f64, x_rand: f64, spiral_y: f64, spiral_x: f64, rand: f64) -> f64 {
    best * levy + x_rand + (spiral_y - spiral_x) * rand
}

/// Low flight: `(best - mean) * alpha - rand + ((ub - lb) * rand + lb) * delta`.
#[allow(clippy::too_many_arguments)]
pub fn ao_step3(
    best: f64,
    mean: f64,
    alpha: f64,
    delta: f64,
    lb: f64,
    ub: f64,
    rand1: f64,
    rand2: f64,
) -> f64 {
    (best - mean) * alpha - rand1 + ((ub - lb) * rand2 + lb) * delta
}

/// Swoop: `QF * best - (g1 * x * rand) - g2 * levy + rand * g1`.
#[allow(clippy::too_many_arguments)]
pub fn ao_step4(
    best: f64,
    x: f64,
    levy: f64,
    qf: f64,
    g1: f64,
    g2: f64,
    rand1: f64,
    rand2: f64,
) -> f64 {
    qf * best - (g1 * x * rand1) - g2 * levy + rand2 * g1
}

/// Quality function `t^((2 rand - 1) / (1 - T)^2)`.
pub fn quality_function(t: u64, horizon: u64, rand: f64) -> f64 {
    let denom = (1.0 - horizon as f64).powi(2).max(1e-12);
    (t as f64).powf((2.0 * rand - 1.0) / denom)
}

/// Spiral shape for the contour flight, reference convention:
/// `r = 10 + 0.00565 d`, `phi = -0.005 d + 3 pi / 2` for 1-based `d`.
pub fn spiral_xy(dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(dim);
    let mut ys = Vec::with_capacity(dim);
    for d in 1..=dim {
        let r = 10.0 + 0.00565 * d as f64;
        let phi = -0.005 * d as f64 + 3.0 * std::f64::consts::FRAC_PI_2;
        xs.push(r * phi.sin());
        ys.push(r * phi.cos());
    }
    (xs, ys)
}

#[derive(Debug, Clone)]
pub struct AoParams {
    pub pop_size: usize,
    pub alpha: f64,
    pub delta: f64,
}

impl AoParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(AoParams {
            pop_size: set.usize("pop_size")?.max(2),
            alpha: set.f64("alpha")?,
            delta: set.f64("delta")?,
        })
    }
}

pub struct Ao {
    params: AoParams,
    pop: Population,
    clock: Clock,
}

impl Ao {
    pub fn new(params: AoParams) -> Self {
        Ao {
            params,
            pop: Population::new(Vec::new()),
            clock: Clock::new(1),
        }
    }
}

impl PopulationOptimizer for Ao {
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
        let dim = self.pop.dim();
        let (t, horizon) = (self.clock.t(), self.clock.horizon());
        let exploring = (t as f64) <= 2.0 / 3.0 * horizon as f64;
        let best_pos = eval
            .best_position()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| self.pop.members[0].position.clone());
        let mean = self.pop.centroid();
        let (sx, sy) = spiral_xy(dim);

        for i in 0..self.pop.len() {
            let coin = rng.uniform();
            let mut pos = vec![0.0; dim];
            if exploring {
                if coin <= 0.5 {
                    let r = rng.uniform();
                    for j in 0..dim {
                        pos[j] = ao_step1(best_pos[j], mean[j], t, horizon, r);
                    }
                } else {
                    let donor = rng.index(self.pop.len());
                    let r = rng.uniform();
                    for j in 0..dim {
                        let levy = rng.levy(LEVY_BETA);
                        pos[j] = ao_step2(
                            best_pos[j],
                            levy,
                            self.pop.members[donor].position[j],
                            sy[j],
                            sx[j],
                            r,
                        );
                    }
                }
            } else if coin <= 0.5 {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                for j in 0..dim {
                    pos[j] = ao_step3(
                        best_pos[j],
                        mean[j],
                        self.params.alpha,
                        self.params.delta,
                        space.lower()[j],
                        space.upper()[j],
                        r1,
                        r2,
                    );
                }
            } else {
                let qf = quality_function(t.max(1), horizon, rng.uniform());
                let g1 = 2.0 * rng.uniform() - 1.0;
                let g2 = 2.0 * (1.0 - t as f64 / horizon as f64);
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                for j in 0..dim {
                    let levy = rng.levy(LEVY_BETA);
                    pos[j] = ao_step4(
                        best_pos[j],
                        self.pop.members[i].position[j],
                        levy,
                        qf,
                        g1,
                        g2,
                        r1,
                        r2,
                    );
                }
            }
            repair_clamp(&space, &mut pos, rng);
            let mut cand = Individual::new(pos);
            eval.evaluate(&mut cand)?;
            if cand.expect_fitness()? <= self.pop.members[i].expect_fitness()? {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step1_at_horizon_with_zero_rand_returns_mean() {
        assert_eq!(ao_step1(5.0, 3.0, 10, 10, 0.0), 3.0);
    }

    #[test]
    fn step3_with_zero_rands_hand_oracle() {
        // (best - mean) * alpha + lb * delta
        let v = ao_step3(6.0, 2.0, 0.1, 0.1, -100.0, 100.0, 0.0, 0.0);
        assert!((v - (0.4 - 10.0)).abs() < 1e-12);
    }

    #[test]
    fn step2_with_null_draws_returns_donor() {
        assert_eq!(ao_step2(9.0, 0.0, 4.0, 1.0, 2.0, 0.0), 4.0);
    }

    #[test]
    fn step4_collapses_to_qf_best() {
        let v = ao_step4(3.0, 7.0, 0.0, 1.0, 0.5, 0.2, 0.0, 0.0);
        assert_eq!(v, 3.0);
    }

    #[test]
    fn quality_function_is_one_at_t_one() {
        assert_eq!(quality_function(1, 50, 0.3), 1.0);
    }

    #[test]
    fn spiral_matches_reference_convention() {
        let (x, y) = spiral_xy(3);
        for d in 1..=3usize {
            let r = 10.0 + 0.00565 * d as f64;
            let phi = -0.005 * d as f64 + 3.0 * std::f64::consts::FRAC_PI_2;
            assert_eq!(x[d - 1], r * phi.sin());
            assert_eq!(y[d - 1], r * phi.cos());
        }
    }
}
