//! Budgeted objective evaluation with best-so-far tracking.

use crate::benchmarks::BenchmarkProblem;
use crate::budget::Budget;
use crate::error::Result;
use crate::population::Individual;
use crate::space::SearchSpace;

/// Evaluate `ind` on `problem`, consuming exactly one budget unit.
///
/// On budget exhaustion the error is returned and no fitness is cached.
pub fn evaluate(
    problem: &BenchmarkProblem,
    ind: &mut Individual,
    budget: &mut Budget,
) -> Result<f64> {
    budget.consume_one()?;
    let f = problem.evaluate(&ind.position);
    ind.set_fitness(f);
    Ok(f)
}

/// Couples a problem with a budget and remembers the best evaluated point,
/// including candidates an algorithm later rejects. Ties keep the earlier
/// point, so "best so far" is stable and non-increasing.
pub struct Evaluator<'a> {
    problem: &'a BenchmarkProblem,
    budget: &'a mut Budget,
    best: Option<(Vec<f64>, f64)>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a BenchmarkProblem, budget: &'a mut Budget) -> Self {
        Evaluator {
            problem,
            budget,
            best: None,
        }
    }

    pub fn evaluate(&mut self, ind: &mut Individual) -> Result<f64> {
        let f = evaluate(self.problem, ind, self.budget)?;
        match &self.best {
            Some((_, fb)) if f >= *fb => {}
            _ => self.best = Some((ind.position.clone(), f)),
        }
        Ok(f)
    }

    pub fn problem(&self) -> &BenchmarkProblem {
        self.problem
    }

    pub fn space(&self) -> &SearchSpace {
        self.problem.space()
    }

    pub fn budget(&self) -> &Budget {
        self.budget
    }

    pub fn used(&self) -> u64 {
        self.budget.used()
    }

    pub fn can_afford(&self, k: u64) -> bool {
        self.budget.can_afford(k)
    }

    pub fn best_fitness(&self) -> Option<f64> {
        self.best.as_ref().map(|(_, f)| *f)
    }

    pub fn best_position(&self) -> Option<&[f64]> {
        self.best.as_ref().map(|(p, _)| p.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{base_function, BenchmarkProblem};

    fn sphere_problem(dim: usize) -> BenchmarkProblem {
        BenchmarkProblem::plain(base_function("sphere").unwrap(), dim, 0)
    }

    #[test]
    fn evaluation_caches_and_counts() {
        let p = sphere_problem(2);
        let mut budget = Budget::new(10).unwrap();
        let mut ind = Individual::new(vec![3.0, 4.0]);
        let f = evaluate(&p, &mut ind, &mut budget).unwrap();
        assert_eq!(f, 25.0);
        assert_eq!(ind.fitness(), Some(25.0));
        assert_eq!(budget.used(), 1);
    }

    #[test]
    fn exhausted_budget_leaves_fitness_unset() {
        let p = sphere_problem(1);
        let mut budget = Budget::new(1).unwrap();
        let mut a = Individual::new(vec![1.0]);
        evaluate(&p, &mut a, &mut budget).unwrap();
        let mut b = Individual::new(vec![2.0]);
        let err = evaluate(&p, &mut b, &mut budget).unwrap_err();
        assert!(err.is_budget_exhausted());
        assert!(b.fitness().is_none());
        assert_eq!(budget.used(), 1);
    }

    #[test]
    fn shifted_sphere_at_shift_gives_f_star() {
        use crate::benchmarks::{make_problem, RotateMode, ShiftMode};
        let p = make_problem(
            base_function("sphere").unwrap(),
            3,
            ShiftMode::RandomInterior,
            RotateMode::None,
            4,
            &mut crate::rng::RngStream::new(2),
        )
        .unwrap();
        let mut budget = Budget::new(1).unwrap();
        let mut ind = Individual::new(p.optimum_position().to_vec());
        let f = evaluate(&p, &mut ind, &mut budget).unwrap();
        assert!((f - 400.0).abs() < 1e-10);
    }

    #[test]
    fn best_tracking_is_stable_on_ties() {
        let p = sphere_problem(1);
        let mut budget = Budget::new(10).unwrap();
        let mut ev = Evaluator::new(&p, &mut budget);
        let mut a = Individual::new(vec![2.0]);
        ev.evaluate(&mut a).unwrap();
        let mut b = Individual::new(vec![-2.0]); // same fitness, later
        ev.evaluate(&mut b).unwrap();
        assert_eq!(ev.best_position().unwrap(), &[2.0]);
        let mut c = Individual::new(vec![1.0]);
        ev.evaluate(&mut c).unwrap();
        assert_eq!(ev.best_fitness(), Some(1.0));
    }
}
