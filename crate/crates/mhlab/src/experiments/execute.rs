//! Parallel plan execution with crash-resume.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use super::plan::{plan_matrix, ExperimentPlan, RunDescriptor};
use super::store::{ResultStore, RunRecord};
use crate::algorithms;
use crate::benchmarks::{make_suite_spec, suite_manifest, BenchmarkProblem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::metrics::Recorder;
use crate::params::ParamSet;
use crate::rng::RngStream;

/// Execute every pending descriptor of `plan` into a store at `out_dir`.
///
/// Completed descriptors found in an existing store are skipped, so a killed
/// experiment resumes where it stopped. Each run is confined to its own
/// state; results are identical for any `parallelism`.
pub fn execute(plan: &ExperimentPlan, out_dir: &Path, parallelism: usize) -> Result<ResultStore> {
    plan.validate()?;
    let descriptors = plan_matrix(plan)?;
    let store = ResultStore::open(out_dir)?;

    // manifests first so a crashed run is still reconstructible
    let suite_spec = plan.suite_spec();
    let suite = make_suite_spec(&suite_spec)?;
    std::fs::write(
        out_dir.join("plan.json"),
        serde_json::to_string_pretty(plan)?,
    )?;
    std::fs::write(
        out_dir.join("suite.json"),
        serde_json::to_string_pretty(&suite_manifest(&suite_spec, &suite))?,
    )?;

    let done = store.completed_ids();
    let pending: Vec<&RunDescriptor> = descriptors
        .iter()
        .filter(|d| !done.contains(&d.id))
        .collect();

    let params_of: std::collections::BTreeMap<&str, ParamSet> = plan
        .algos
        .iter()
        .map(|a| {
            let spec = algorithms::lookup(&a.id)?;
            Ok((a.id.as_str(), spec.materialize(&a.params)?))
        })
        .collect::<Result<_>>()?;

    let suite: Arc<Vec<BenchmarkProblem>> = Arc::new(suite);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    pool.install(|| {
        pending.par_iter().try_for_each(|d| -> Result<()> {
            let problem = suite
                .iter()
                .find(|p| p.index() == d.func_index)
                .ok_or_else(|| {
                    Error::Config(format!("function index {} not in suite", d.func_index))
                })?;
            let params = &params_of[d.algo.as_str()];
            let (record, trace_jsonl) = run_one(d, params, problem, plan)?;
            store.append(record, &trace_jsonl)
        })
    })?;

    Ok(store)
}

/// Execute a single descriptor, returning its record and serialized trace.
pub fn run_one(
    d: &RunDescriptor,
    params: &ParamSet,
    problem: &BenchmarkProblem,
    plan: &ExperimentPlan,
) -> Result<(RunRecord, String)> {
    let budget = Budget::new(plan.budget_evals())?;
    let trace = algorithms::run_population_loop(
        &d.algo,
        params,
        problem,
        budget,
        &RngStream::new(d.seed),
        Recorder::new(plan.trace_stride),
    )?;
    let record = RunRecord {
        algo: d.algo.clone(),
        func_index: d.func_index,
        dim: d.dim,
        run: d.run,
        seed: d.seed,
        final_error: trace.final_error(),
        evals: trace.evals_used,
        wall_ms: trace.wall_ms,
        trace_path: format!("traces/{}.jsonl", d.id),
    };
    Ok((record, trace.to_jsonl()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::ClassCounts;
    use crate::experiments::plan::PlannedAlgo;

    fn small_plan() -> ExperimentPlan {
        let mut p = ExperimentPlan::new(
            vec![PlannedAlgo::new("de"), PlannedAlgo::new("random-search")],
            3,
            99,
        );
        p.counts = ClassCounts {
            unimodal: 1,
            multimodal: 1,
            hybrid: 1,
            composition: 1,
        };
        p.runs = 2;
        p.budget_multiplier = 300;
        p.trace_stride = 5;
        p
    }

    #[test]
    fn executes_all_descriptors_and_respects_budget() {
        let tmp = tempfile::tempdir().unwrap();
        let store = execute(&small_plan(), tmp.path(), 2).unwrap();
        assert_eq!(store.len(), 2 * 4 * 2);
        for r in store.sorted_records() {
            assert!(r.evals <= 300 * 3);
            assert!(tmp.path().join(&r.trace_path).exists());
        }
        assert!(tmp.path().join("plan.json").exists());
        assert!(tmp.path().join("suite.json").exists());
    }

    #[test]
    fn resume_skips_completed_work_without_duplicates() {
        let tmp = tempfile::tempdir().unwrap();
        let plan = small_plan();
        execute(&plan, tmp.path(), 1).unwrap();

        // drop half the record lines, keeping trace files around
        let records_path = ResultStore::records_path(tmp.path());
        let text = std::fs::read_to_string(&records_path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let keep = lines.len() / 2;
        std::fs::write(&records_path, format!("{}\n", lines[..keep].join("\n"))).unwrap();

        let store = execute(&plan, tmp.path(), 1).unwrap();
        assert_eq!(store.len(), 16);
        let ids = store.completed_ids();
        assert_eq!(ids.len(), 16, "duplicate records after resume");
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let plan = small_plan();
        let tmp1 = tempfile::tempdir().unwrap();
        let tmp8 = tempfile::tempdir().unwrap();
        let s1 = execute(&plan, tmp1.path(), 1).unwrap();
        let s8 = execute(&plan, tmp8.path(), 8).unwrap();
        let mut a = s1.sorted_records();
        let mut b = s8.sorted_records();
        for (x, y) in a.iter_mut().zip(b.iter_mut()) {
            x.wall_ms = 0;
            y.wall_ms = 0;
            assert_eq!(x, y);
        }
    }
}
