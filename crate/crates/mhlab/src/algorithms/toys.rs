//! Reference toy searchers used to calibrate the bias audit. Neither is a
//! serious optimizer; both run through the standard loop.

use super::common::evaluate_all;
use crate::error::Result;
use crate::eval::Evaluator;
use crate::params::ParamSet;
use crate::population::{init_population, Population};
use crate::rng::Randomness;
use crate::runner::PopulationOptimizer;

/// Contracts every individual halfway toward the origin each generation: a
/// searcher biased to the center of the box by construction.
pub struct OriginMagnet {
    pop_size: usize,
    pop: Population,
}

impl OriginMagnet {
    pub fn new(pop_size: usize) -> Self {
        OriginMagnet {
            pop_size: pop_size.max(2),
            pop: Population::new(Vec::new()),
        }
    }

    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(OriginMagnet::new(set.usize("pop_size")?))
    }
}

impl PopulationOptimizer for OriginMagnet {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)
    }

    fn generation_evals(&self) -> u64 {
        self.pop.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, _rng: &mut dyn Randomness) -> Result<()> {
        for m in &mut self.pop.members {
            m.position.iter_mut().for_each(|v| *v *= 0.5);
            m.invalidate();
            eval.evaluate(m)?;
        }
        self.pop.generation += 1;
        Ok(())
    }

    fn population(&self) -> &Population {
        &self.pop
    }
}

/// Uniform random sampling of the box every generation. The sampling law
/// never looks at the landscape, so it is invariant to where the optimum
/// was shifted.
pub struct RandomSearch {
    pop_size: usize,
    pop: Population,
}

impl RandomSearch {
    pub fn new(pop_size: usize) -> Self {
        RandomSearch {
            pop_size: pop_size.max(2),
            pop: Population::new(Vec::new()),
        }
    }

    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(RandomSearch::new(set.usize("pop_size")?))
    }
}

impl PopulationOptimizer for RandomSearch {
    fn init(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        self.pop = init_population(eval.space(), self.pop_size, rng)?;
        evaluate_all(eval, &mut self.pop)
    }

    fn generation_evals(&self) -> u64 {
        self.pop.len().max(1) as u64
    }

    fn advance(&mut self, eval: &mut Evaluator, rng: &mut dyn Randomness) -> Result<()> {
        let space = eval.space().clone();
        for m in &mut self.pop.members {
            m.position = space.sample(rng);
            m.invalidate();
            eval.evaluate(m)?;
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
    use crate::benchmarks::{base_function, BenchmarkProblem};
    use crate::budget::Budget;
    use crate::metrics::Recorder;
    use crate::rng::RngStream;
    use crate::runner::run_optimizer_loop;

    #[test]
    fn origin_magnet_nails_origin_optima() {
        let p = BenchmarkProblem::plain(base_function("sphere").unwrap(), 4, 1);
        let mut opt = OriginMagnet::new(10);
        let trace = run_optimizer_loop(
            &mut opt,
            &p,
            Budget::new(2000).unwrap(),
            &RngStream::new(3),
            Recorder::new(1),
        )
        .unwrap();
        assert!(trace.final_error() < 1e-9, "error {}", trace.final_error());
    }

    #[test]
    fn random_search_improves_slowly_but_terminates() {
        let p = BenchmarkProblem::plain(base_function("sphere").unwrap(), 2, 1);
        let mut opt = RandomSearch::new(8);
        let trace = run_optimizer_loop(
            &mut opt,
            &p,
            Budget::new(400).unwrap(),
            &RngStream::new(3),
            Recorder::new(1),
        )
        .unwrap();
        assert_eq!(trace.evals_used, 400);
        let first = trace.rows.first().unwrap().best;
        let last = trace.rows.last().unwrap().best;
        assert!(last <= first);
    }
}
