//! Experiment plans and their expansion into seeded run descriptors.

use serde::{Deserialize, Serialize};

use crate::algorithms;
use crate::benchmarks::{ClassCounts, SuiteSpec};
use crate::budget::DEFAULT_BUDGET_MULTIPLIER;
use crate::error::{Error, Result};
use crate::params::ParamSet;
use crate::rng::{hash_str, mix_words};

/// One algorithm entry of a plan: a registry id plus parameter overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedAlgo {
    pub id: String,
    #[serde(default)]
    pub params: ParamSet,
}

impl PlannedAlgo {
    pub fn new(id: &str) -> Self {
        PlannedAlgo {
            id: id.into(),
            params: ParamSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub algos: Vec<PlannedAlgo>,
    pub dim: usize,
    pub counts: ClassCounts,
    pub shifted: bool,
    /// Restrict to these 1-based function indices (all when empty).
    #[serde(default)]
    pub funcs: Vec<usize>,
    pub runs: usize,
    pub base_seed: u64,
    pub budget_multiplier: u64,
    /// Record every n-th generation in traces.
    pub trace_stride: u64,
}

impl ExperimentPlan {
    pub fn new(algos: Vec<PlannedAlgo>, dim: usize, base_seed: u64) -> Self {
        ExperimentPlan {
            algos,
            dim,
            counts: ClassCounts::standard(),
            shifted: true,
            funcs: Vec::new(),
            runs: 31,
            base_seed,
            budget_multiplier: DEFAULT_BUDGET_MULTIPLIER,
            trace_stride: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algos.is_empty() {
            return Err(Error::config("plan has no algorithms"));
        }
        if self.runs == 0 {
            return Err(Error::config("plan needs at least one run per cell"));
        }
        if self.dim == 0 {
            return Err(Error::config("plan dimension must be positive"));
        }
        if self.budget_multiplier == 0 {
            return Err(Error::config("budget multiplier must be positive"));
        }
        let total = self.counts.total();
        for f in &self.funcs {
            if *f == 0 || *f > total {
                return Err(Error::Config(format!(
                    "function index {f} outside the suite (1..={total})"
                )));
            }
        }
        for a in &self.algos {
            let spec = algorithms::lookup(&a.id)?;
            if spec.availability == algorithms::Availability::External {
                return Err(Error::NotImplemented(a.id.clone()));
            }
            spec.materialize(&a.params)?;
        }
        Ok(())
    }

    pub fn suite_spec(&self) -> SuiteSpec {
        SuiteSpec {
            dim: self.dim,
            counts: self.counts,
            shifted: self.shifted,
            seed: mix_words(&[self.base_seed, hash_str("suite")]),
        }
    }

    pub fn budget_evals(&self) -> u64 {
        self.budget_multiplier * self.dim as u64
    }

    /// Selected function indices, ascending.
    pub fn function_indices(&self) -> Vec<usize> {
        if self.funcs.is_empty() {
            (1..=self.counts.total()).collect()
        } else {
            let mut f = self.funcs.clone();
            f.sort_unstable();
            f.dedup();
            f
        }
    }
}

/// A fully determined unit of work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDescriptor {
    pub id: String,
    pub algo: String,
    pub func_index: usize,
    pub dim: usize,
    pub run: usize,
    pub seed: u64,
}

/// Per-run seed: avalanche mix of the base seed, algorithm id, function
/// index, dimension and run index.
pub fn run_seed(base_seed: u64, algo: &str, func_index: usize, dim: usize, run: usize) -> u64 {
    mix_words(&[
        base_seed,
        hash_str(algo),
        func_index as u64,
        dim as u64,
        run as u64,
    ])
}

/// Cartesian product algorithms x functions x run indices with derived seeds.
pub fn plan_matrix(plan: &ExperimentPlan) -> Result<Vec<RunDescriptor>> {
    plan.validate()?;
    let funcs = plan.function_indices();
    let mut out = Vec::with_capacity(plan.algos.len() * funcs.len() * plan.runs);
    for algo in &plan.algos {
        for &func_index in &funcs {
            for run in 0..plan.runs {
                out.push(RunDescriptor {
                    id: format!("{}-f{:03}-d{}-r{:03}", algo.id, func_index, plan.dim, run),
                    algo: algo.id.clone(),
                    func_index,
                    dim: plan.dim,
                    run,
                    seed: run_seed(plan.base_seed, &algo.id, func_index, plan.dim, run),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn plan() -> ExperimentPlan {
        ExperimentPlan::new(vec![PlannedAlgo::new("de"), PlannedAlgo::new("gsk")], 10, 7)
    }

    #[test]
    fn matrix_is_the_full_cartesian_product() {
        let mut p = plan();
        p.runs = 31;
        let descriptors = plan_matrix(&p).unwrap();
        assert_eq!(descriptors.len(), 2 * 30 * 31);
    }

    #[test]
    fn twelve_algos_thirty_funcs_thirty_one_runs() {
        let algos: Vec<PlannedAlgo> = crate::algorithms::implemented_ids()
            .into_iter()
            .map(PlannedAlgo::new)
            .collect();
        let mut p = ExperimentPlan::new(algos, 10, 1);
        p.runs = 31;
        assert_eq!(plan_matrix(&p).unwrap().len(), 11_160);
    }

    #[test]
    fn seeds_and_ids_never_collide() {
        let mut p = plan();
        p.runs = 31;
        let descriptors = plan_matrix(&p).unwrap();
        let seeds: HashSet<u64> = descriptors.iter().map(|d| d.seed).collect();
        assert_eq!(seeds.len(), descriptors.len());
        let ids: HashSet<&str> = descriptors.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids.len(), descriptors.len());
    }

    #[test]
    fn replanning_is_deterministic() {
        let p = plan();
        assert_eq!(plan_matrix(&p).unwrap(), plan_matrix(&p).unwrap());
    }

    #[test]
    fn unknown_algorithm_rejected() {
        let p = ExperimentPlan::new(vec![PlannedAlgo::new("nope")], 10, 7);
        assert!(plan_matrix(&p).is_err());
    }

    #[test]
    fn external_algorithm_rejected_with_not_implemented() {
        let p = ExperimentPlan::new(vec![PlannedAlgo::new("hses")], 10, 7);
        assert!(matches!(plan_matrix(&p), Err(Error::NotImplemented(_))));
    }

    #[test]
    fn function_filter_validates_range() {
        let mut p = plan();
        p.funcs = vec![31];
        assert!(plan_matrix(&p).is_err());
        p.funcs = vec![1, 30];
        assert_eq!(plan_matrix(&p).unwrap().len(), 2 * 2 * 31);
    }
}
