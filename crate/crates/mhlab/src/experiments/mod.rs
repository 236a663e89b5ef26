//! Experiment orchestration: seeded plans, parallel execution with resume,
//! the bias audit, and export/report generation.

mod bias;
mod execute;
mod export;
mod plan;
mod store;
mod svg;
mod tuning;

pub use bias::{bias_audit, BiasAuditConfig, BiasAuditReport, BiasDimReport, BiasRow};
pub use execute::{execute, run_one};
pub use export::{
    fingerprint, matrix_from_records, read_results_csv, results_csv, summary_csv,
    write_results_csv, Aggregation, RESULTS_HEADER,
};
pub use plan::{plan_matrix, run_seed, ExperimentPlan, PlannedAlgo, RunDescriptor};
pub use store::{ResultStore, RunRecord};
pub use svg::{cd_plot, line_chart, xpl_xpt_area};
pub use tuning::{tune_algorithm, AlgorithmRunScorer, TuneScenario, TunedPreset};

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::stats::{friedman, nemenyi_cd, wilcoxon_signed_rank};

/// Everything `report` wrote, relative to the output directory.
#[derive(Debug, Clone, Default)]
pub struct ReportBundle {
    pub files: Vec<String>,
}

/// Render the full report bundle for a store: results and summary CSVs, a
/// statistics text report, a critical-difference plot and per-function
/// convergence/diversity/trade-off charts.
pub fn report(store: &ResultStore, out_dir: &Path) -> Result<ReportBundle> {
    if store.is_empty() {
        return Err(Error::InsufficientData("no records".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut bundle = ReportBundle::default();
    let emit = |bundle: &mut ReportBundle, name: &str, content: String| -> Result<()> {
        std::fs::write(out_dir.join(name), content)?;
        bundle.files.push(name.to_string());
        Ok(())
    };

    let records = store.sorted_records();
    emit(&mut bundle, "results.csv", results_csv(store))?;
    emit(&mut bundle, "summary.csv", summary_csv(store)?)?;

    // statistics: Friedman ranks + pairwise Wilcoxon over per-function means
    let mut stats_text = String::new();
    let algos: BTreeSet<String> = records.iter().map(|r| r.algo.clone()).collect();
    if algos.len() >= 2 {
        let matrix = matrix_from_records(&records, Aggregation::Mean)?;
        if algos.len() >= 3 {
            let rep = friedman(&matrix)?;
            let _ = writeln!(stats_text, "friedman: {}", rep.report(0.05).summary);
            let _ = writeln!(stats_text, "friedman p = {:.6}", rep.p_value);
            if let Ok(cd) = nemenyi_cd(matrix.k(), matrix.n(), 0.05) {
                let _ = writeln!(stats_text, "nemenyi cd (alpha 0.05) = {cd:.4}");
                emit(
                    &mut bundle,
                    "cd_plot.svg",
                    cd_plot("average ranks", &matrix.algorithms, &rep.average_ranks, cd),
                )?;
            }
        }
        let _ = writeln!(stats_text, "pairwise wilcoxon (two-sided):");
        let names = matrix.algorithms.clone();
        for i in 0..names.len() {
            for j in (i + 1)..names.len() {
                match wilcoxon_signed_rank(&matrix.column(i), &matrix.column(j)) {
                    Ok(w) => {
                        let _ = writeln!(
                            stats_text,
                            "  {} vs {}: R+={}, R-={}, p={:.6}",
                            names[i], names[j], w.r_plus, w.r_minus, w.p_value
                        );
                    }
                    Err(e) => {
                        let _ = writeln!(stats_text, "  {} vs {}: {e}", names[i], names[j]);
                    }
                }
            }
        }
    } else {
        let _ = writeln!(stats_text, "single algorithm: no comparison tests");
    }
    emit(&mut bundle, "stats.txt", stats_text)?;

    // per-function charts from traces
    let funcs: BTreeSet<usize> = records.iter().map(|r| r.func_index).collect();
    for &f in &funcs {
        let mut convergence = Vec::new();
        let mut diversity = Vec::new();
        for algo in &algos {
            let cell: Vec<&RunRecord> = records
                .iter()
                .filter(|r| &r.algo == algo && r.func_index == f)
                .collect();
            let mut conv_acc: Option<Vec<(f64, f64)>> = None;
            let mut div_acc: Option<Vec<(f64, f64)>> = None;
            for r in &cell {
                let rows = store.read_trace(r)?;
                if rows.is_empty() {
                    continue;
                }
                add_series(&mut conv_acc, rows.iter().map(|t| (t.evals as f64, t.best)));
                add_series(&mut div_acc, rows.iter().map(|t| (t.gen as f64, t.div)));
            }
            if let Some(mut acc) = conv_acc {
                scale_series(&mut acc, cell.len());
                convergence.push((algo.clone(), acc));
            }
            if let Some(mut acc) = div_acc {
                scale_series(&mut acc, cell.len());
                diversity.push((algo.clone(), acc));
            }
        }
        emit(
            &mut bundle,
            &format!("convergence_f{f:03}.svg"),
            line_chart(
                &format!("convergence on f{f:03}"),
                "evaluations",
                "best fitness (log10)",
                &convergence,
                true,
            ),
        )?;
        emit(
            &mut bundle,
            &format!("diversity_f{f:03}.svg"),
            line_chart(
                &format!("population diversity on f{f:03}"),
                "generation",
                "diversity",
                &diversity,
                false,
            ),
        )?;
    }

    // one trade-off area chart per algorithm on the first function
    if let Some(&f) = funcs.iter().next() {
        for algo in &algos {
            if let Some(r) = records
                .iter()
                .find(|r| &r.algo == algo && r.func_index == f)
            {
                let rows = store.read_trace(r)?;
                let series: Vec<(f64, f64)> = rows.iter().map(|t| (t.gen as f64, t.xpl)).collect();
                emit(
                    &mut bundle,
                    &format!("tradeoff_{algo}_f{f:03}.svg"),
                    xpl_xpt_area(&format!("{algo} on f{f:03}"), &series),
                )?;
            }
        }
    }
    Ok(bundle)
}

/// Pointwise accumulate a series; traces of one cell share their recording
/// grid, so rows align index by index (shorter traces are truncated).
fn add_series(acc: &mut Option<Vec<(f64, f64)>>, it: impl Iterator<Item = (f64, f64)>) {
    match acc {
        None => *acc = Some(it.collect()),
        Some(v) => {
            let new: Vec<(f64, f64)> = it.collect();
            v.truncate(new.len().min(v.len()));
            for (slot, (x, y)) in v.iter_mut().zip(new) {
                slot.0 = x;
                slot.1 += y;
            }
        }
    }
}

fn scale_series(v: &mut [(f64, f64)], n: usize) {
    let n = n.max(1) as f64;
    for p in v {
        p.1 /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::ClassCounts;

    #[test]
    fn report_bundle_contains_expected_artifacts() {
        let tmp = tempfile::tempdir().unwrap();
        let mut plan = ExperimentPlan::new(
            vec![
                PlannedAlgo::new("de"),
                PlannedAlgo::new("gsk"),
                PlannedAlgo::new("eo"),
            ],
            3,
            17,
        );
        plan.counts = ClassCounts {
            unimodal: 1,
            multimodal: 1,
            hybrid: 0,
            composition: 0,
        };
        plan.runs = 3;
        plan.budget_multiplier = 200;
        let store = execute(&plan, tmp.path(), 4).unwrap();
        let out = tmp.path().join("report");
        let bundle = report(&store, &out).unwrap();
        for needed in [
            "results.csv",
            "summary.csv",
            "stats.txt",
            "cd_plot.svg",
            "convergence_f001.svg",
            "diversity_f002.svg",
            "tradeoff_de_f001.svg",
        ] {
            assert!(
                bundle.files.iter().any(|f| f == needed),
                "missing {needed} in {:?}",
                bundle.files
            );
            assert!(out.join(needed).exists());
        }
        let stats = std::fs::read_to_string(out.join("stats.txt")).unwrap();
        assert!(stats.contains("friedman"), "{stats}");
    }

    #[test]
    fn report_on_empty_store_fails_with_no_records() {
        let tmp = tempfile::tempdir().unwrap();
        let store = ResultStore::open(tmp.path()).unwrap();
        let err = report(&store, tmp.path()).unwrap_err().to_string();
        assert!(err.contains("no records"), "{err}");
    }
}
