//! Helpers shared by the optimizer implementations.

use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::population::{Individual, Population};
use crate::rng::Randomness;
use crate::space::{RepairPolicy, SearchSpace};

/// Draw `count` mutually distinct indices from `0..n`, never returning
/// `exclude`. Sampling walks the remaining candidates instead of rejecting,
/// so it terminates for any `Randomness` (including all-zero test doubles).
pub fn distinct_indices(
    n: usize,
    count: usize,
    exclude: Option<usize>,
    rng: &mut dyn Randomness,
) -> Result<Vec<usize>> {
    let reserved = usize::from(exclude.is_some_and(|e| e < n));
    if count + reserved > n {
        return Err(Error::Config(format!(
            "population of {n} too small to draw {count} distinct indices"
        )));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    for pick in 0..count {
        let available = n - reserved - pick;
        let mut k = rng.index(available);
        let mut idx = 0usize;
        loop {
            let taken = Some(idx) == exclude || chosen.contains(&idx);
            if !taken {
                if k == 0 {
                    break;
                }
                k -= 1;
            }
            idx += 1;
        }
        chosen.push(idx);
    }
    Ok(chosen)
}

/// Planned number of generations left, given the per-generation cost; used by
/// the iteration-ratio schedules. At least 1.
pub fn planned_generations(remaining_evals: u64, generation_evals: u64) -> u64 {
    (remaining_evals / generation_evals.max(1)).max(1)
}

/// Clamp-repair a candidate into the space (the laboratory default policy).
pub fn repair_clamp(space: &SearchSpace, position: &mut [f64], rng: &mut dyn Randomness) {
    space.repair(position, RepairPolicy::Clamp, rng);
}

/// Evaluate `candidate` and replace `incumbent` if the candidate is at least
/// as good. Returns true when the replacement happened.
pub fn greedy_replace(
    eval: &mut Evaluator,
    incumbent: &mut Individual,
    mut candidate: Individual,
) -> Result<bool> {
    let f_new = eval.evaluate(&mut candidate)?;
    let f_old = incumbent.expect_fitness()?;
    if f_new <= f_old {
        *incumbent = candidate;
        Ok(true)
    } else {
        Ok(false)
    }
}

/// Evaluate every member of a freshly built population.
pub fn evaluate_all(eval: &mut Evaluator, pop: &mut Population) -> Result<()> {
    for m in &mut pop.members {
        eval.evaluate(m)?;
    }
    Ok(())
}

/// Iteration counter with a fixed horizon; `ratio` is `t / T` clamped to 1.
#[derive(Debug, Clone, Copy)]
pub struct Clock {
    t: u64,
    horizon: u64,
}

impl Clock {
    pub fn new(horizon: u64) -> Self {
        Clock {
            t: 0,
            horizon: horizon.max(1),
        }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn ratio(&self) -> f64 {
        (self.t as f64 / self.horizon as f64).min(1.0)
    }

    pub fn tick(&mut self) {
        self.t += 1;
    }
}
