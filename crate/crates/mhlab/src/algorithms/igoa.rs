//! Grasshopper optimizer with a Gaussian factor on the social term and a
//! Lévy-flight candidate accepted by the printed fitness comparison.

use super::common::{evaluate_all, planned_generations, repair_clamp, Clock};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Individual, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Social force kernel `s(r) = 0.5 e^(-r/1.5) - e^(-r)`.
pub fn social_force(r: f64) -> f64 {
    0.5 * (-r / 1.5).exp() - (-r).exp()
}

/// Shrinking coefficient `c = cmax - l (cmax - cmin) / L`.
pub fn shrink_coefficient(cmax: f64, cmin: f64, l: u64, big_l: u64) -> f64 {
    cmax - l as f64 * (cmax - cmin) / big_l.max(1) as f64
}

/// Social-interaction position update for member `i`; coincident pairs
/// contribute nothing (their direction is undefined).
///
/// `gaussian` is the per-dimension factor multiplying the social term and
/// `target` the best-so-far position.
pub fn igoa_social_update(
    positions: &[Vec<f64>],
    i: usize,
    c: f64,
    lower: &[f64],
    upper: &[f64],
    gaussian: &[f64],
    target: &[f64],
) -> Vec<f64> {
    let dim = target.len();
    let mut social = vec![0.0; dim];
    for (j, pos) in positions.iter().enumerate() {
        if j == i {
            continue;
        }
        let dist: f64 = pos
            .iter()
            .zip(&positions[i])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist < 1e-12 {
            continue;
        }
        for d in 0..dim {
            let half_width = (upper[d] - lower[d]) / 2.0;
            let s = social_force((pos[d] - positions[i][d]).abs());
            social[d] += c * half_width * s * (pos[d] - positions[i][d]) / dist;
        }
    }
    (0..dim)
        .map(|d| c * social[d] * gaussian[d] + target[d])
        .collect()
}

/// Lévy candidate `x + rand(d) .* levy`.
pub fn levy_candidate(x: &[f64], rand_d: &[f64], levy: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(rand_d)
        .zip(levy)
        .map(|((a, r), l)| a + r * l)
        .collect()
}

/// The printed acceptance rule: adopt the Lévy candidate only when its
/// fitness is strictly greater.
pub fn adopt_levy(f_levy: f64, f_star: f64) -> bool {
    f_levy > f_star
}

#[derive(Debug, Clone)]
pub struct IgoaParams {
    pub pop_size: usize,
    pub cmax: f64,
    pub cmin: f64,
    pub beta: f64,
}

impl IgoaParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        let p = IgoaParams {
            pop_size: set.usize("pop_size")?,
            cmax: set.f64("cmax")?,
            cmin: set.f64("cmin")?,
            beta: set.f64("beta")?,
        };
        if p.pop_size < 2 {
            return Err(Error::config("parameter `pop_size` must be at least 2"));
        }
        Ok(p)
    }
}

pub struct Igoa {
    params: IgoaParams,
    pop: Population,
    clock: Clock,
}

impl Igoa {
    pub fn new(params: IgoaParams) -> Self {
        Igoa {
            params,
            pop: Population::new(Vec::new()),
            clock: Clock::new(1),
        }
    }
}

impl PopulationOptimizer for Igoa {
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
        let c = shrink_coefficient(
            self.params.cmax,
            self.params.cmin,
            self.clock.t() + 1,
            self.clock.horizon(),
        );
        let target = eval
            .best_position()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| self.pop.members[0].position.clone());
        let snapshot = self.pop.positions();

        for i in 0..self.pop.len() {
            let alpha = rng.uniform();
            let gaussian: Vec<f64> = (0..dim).map(|_| 1.0 + alpha * rng.normal()).collect();
            let mut updated = igoa_social_update(
                &snapshot,
                i,
                c,
                space.lower(),
                space.upper(),
                &gaussian,
                &target,
            );
            repair_clamp(&space, &mut updated, rng);
            let mut star = Individual::new(updated);
            eval.evaluate(&mut star)?;

            let rand_d: Vec<f64> = (0..dim).map(|_| rng.uniform()).collect();
            let levy: Vec<f64> = (0..dim).map(|_| rng.levy(self.params.beta)).collect();
            let mut levy_pos = levy_candidate(&star.position, &rand_d, &levy);
            repair_clamp(&space, &mut levy_pos, rng);
            let mut levy_ind = Individual::new(levy_pos);
            eval.evaluate(&mut levy_ind)?;

            self.pop.members[i] = if adopt_levy(levy_ind.expect_fitness()?, star.expect_fitness()?)
            {
                levy_ind
            } else {
                star
            };
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
    fn schedule_endpoints() {
        assert_eq!(shrink_coefficient(1.0, 0.00001, 0, 100), 1.0);
        let end = shrink_coefficient(1.0, 0.00001, 100, 100);
        assert!((end - 0.00001).abs() < 1e-15);
    }

    #[test]
    fn zero_rand_levy_keeps_position() {
        let x = [1.0, -2.0, 3.0];
        let out = levy_candidate(&x, &[0.0, 0.0, 0.0], &[5.0, -7.0, 2.0]);
        assert_eq!(out, x.to_vec());
    }

    #[test]
    fn equal_fitness_keeps_star() {
        assert!(!adopt_levy(2.0, 2.0));
        assert!(adopt_levy(3.0, 2.0));
        assert!(!adopt_levy(1.0, 2.0));
    }

    #[test]
    fn coincident_grasshoppers_contribute_nothing() {
        let positions = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]];
        let out = igoa_social_update(
            &positions,
            0,
            0.8,
            &[-100.0, -100.0],
            &[100.0, 100.0],
            &[1.0, 1.0],
            &[4.0, -4.0],
        );
        // empty social term leaves only the target
        assert_eq!(out, vec![4.0, -4.0]);
    }

    #[test]
    fn social_force_has_comfort_zone_root() {
        // s is negative (repulsion) at short range, positive further out
        assert!(social_force(0.5) < 0.0);
        assert!(social_force(3.0) > 0.0);
    }
}
