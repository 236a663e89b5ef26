//! Bridge between the generic tuner and real optimizer runs: configurations
//! are scored by the final error of one seeded run on a training instance.

use serde::{Deserialize, Serialize};

use crate::algorithms;
use crate::benchmarks::{make_suite, BenchmarkProblem, ClassCounts};
use crate::budget::Budget;
use crate::error::Result;
use crate::metrics::Recorder;
use crate::params::{ParamSet, ParamSpace};
use crate::rng::{hash_str, mix_words, RngStream};
use crate::tuner::{tune, ConfigScorer, TuneAudit, TuneConfig};

/// Scores a configuration of one algorithm by running it on a training
/// instance with a reduced evaluation budget.
pub struct AlgorithmRunScorer {
    algo_id: String,
    instances: Vec<BenchmarkProblem>,
    evals_per_run: u64,
}

impl AlgorithmRunScorer {
    pub fn new(algo_id: &str, instances: Vec<BenchmarkProblem>, evals_per_run: u64) -> Self {
        AlgorithmRunScorer {
            algo_id: algo_id.into(),
            instances,
            evals_per_run,
        }
    }

    /// Training instances spanning all four function classes (two per class).
    pub fn training_suite(dim: usize, seed: u64) -> Result<Vec<BenchmarkProblem>> {
        make_suite(
            dim,
            ClassCounts {
                unimodal: 2,
                multimodal: 2,
                hybrid: 2,
                composition: 2,
            },
            true,
            mix_words(&[seed, hash_str("training-suite")]),
        )
    }
}

impl ConfigScorer for AlgorithmRunScorer {
    fn instances(&self) -> usize {
        self.instances.len()
    }

    fn score(&self, params: &ParamSet, instance: usize, seed: u64) -> Result<f64> {
        let problem = &self.instances[instance % self.instances.len()];
        let run = algorithms::run_population_loop(
            &self.algo_id,
            params,
            problem,
            Budget::new(self.evals_per_run)?,
            &RngStream::new(seed),
            Recorder::new(u64::MAX),
        );
        match run {
            Ok(trace) => Ok(trace.final_error()),
            // a configuration whose initial population alone exceeds the
            // scoring budget is raced out with a worst-case score
            Err(e) if e.is_budget_exhausted() => Ok(1e30),
            Err(e) => Err(e),
        }
    }
}

/// A tuned preset as persisted by the tune command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TunedPreset {
    pub algo: String,
    pub dim: usize,
    pub params: ParamSet,
}

/// Scenario for tuning one algorithm at one dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TuneScenario {
    pub algo: String,
    pub dim: usize,
    /// Total scoring runs for the session.
    pub total_budget: u64,
    /// Evaluation budget of each scoring run.
    pub evals_per_run: u64,
    pub seed: u64,
    pub elimination_alpha: f64,
}

impl TuneScenario {
    pub fn new(algo: &str, dim: usize, seed: u64) -> Self {
        TuneScenario {
            algo: algo.into(),
            dim,
            total_budget: 2_000,
            evals_per_run: 1_000 * dim as u64,
            seed,
            elimination_alpha: 0.05,
        }
    }
}

/// Tune one algorithm end to end and return the winning preset plus the full
/// audit log of every race.
pub fn tune_algorithm(scenario: &TuneScenario) -> Result<(TunedPreset, TuneAudit)> {
    let spec = algorithms::lookup(&scenario.algo)?;
    let instances = AlgorithmRunScorer::training_suite(scenario.dim, scenario.seed)?;
    let scorer = AlgorithmRunScorer::new(&scenario.algo, instances, scenario.evals_per_run);
    let space: &ParamSpace = &spec.params;
    let (params, audit) = tune(
        &scorer,
        space,
        TuneConfig {
            total_budget: scenario.total_budget,
            elimination_alpha: scenario.elimination_alpha,
            seed: scenario.seed,
            ..TuneConfig::default()
        },
    )?;
    Ok((
        TunedPreset {
            algo: scenario.algo.clone(),
            dim: scenario.dim,
            params,
        },
        audit,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuning_de_returns_in_range_parameters() {
        let mut scenario = TuneScenario::new("de", 2, 3);
        scenario.total_budget = 120;
        scenario.evals_per_run = 400;
        let (preset, audit) = tune_algorithm(&scenario).unwrap();
        let f = preset.params.f64("f").unwrap();
        assert!((0.0..=1.0).contains(&f), "tuned f = {f}");
        algorithms::lookup("de")
            .unwrap()
            .params
            .validate(&preset.params)
            .unwrap();
        assert!(audit.runs_used <= 120);
        assert!(!audit.iterations.is_empty());
        // the audit records every sampled configuration
        for race in &audit.iterations {
            assert!(!race.entries.is_empty());
        }
    }

    #[test]
    fn tuning_is_deterministic_in_the_seed() {
        let mut scenario = TuneScenario::new("de", 2, 8);
        scenario.total_budget = 80;
        scenario.evals_per_run = 200;
        let (a, _) = tune_algorithm(&scenario).unwrap();
        let (b, _) = tune_algorithm(&scenario).unwrap();
        assert_eq!(a.params, b.params);
    }
}
