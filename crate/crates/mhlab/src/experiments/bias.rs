//! Search-bias-to-origin audit: run each algorithm on paired shifted and
//! non-shifted suites (identical bases and rotations), compare per-function
//! mean errors with a paired Wilcoxon test, and rank algorithms per
//! condition with a Friedman test.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plan::{run_seed, PlannedAlgo};
use crate::algorithms;
use crate::benchmarks::{make_suite_spec, BenchmarkProblem, ClassCounts, SuiteSpec};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::metrics::Recorder;
use crate::params::ParamSet;
use crate::rng::{hash_str, mix_words, RngStream};
use crate::stats::{friedman, nemenyi_cd, wilcoxon_signed_rank, FriedmanReport, ResultMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasAuditConfig {
    pub algos: Vec<PlannedAlgo>,
    pub dims: Vec<usize>,
    pub counts: ClassCounts,
    pub runs: usize,
    pub budget_multiplier: u64,
    pub seed: u64,
    pub alpha: f64,
    pub parallelism: usize,
}

impl BiasAuditConfig {
    pub fn new(algos: Vec<PlannedAlgo>, dims: Vec<usize>, seed: u64) -> Self {
        BiasAuditConfig {
            algos,
            dims,
            counts: ClassCounts::standard(),
            runs: 31,
            budget_multiplier: crate::budget::DEFAULT_BUDGET_MULTIPLIER,
            seed,
            alpha: 0.05,
            parallelism: 1,
        }
    }
}

/// Per-algorithm, per-dimension audit verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasRow {
    pub algo: String,
    pub dim: usize,
    /// Rank sum of functions where the shifted error exceeds the
    /// non-shifted error (evidence of origin bias).
    pub r_plus: f64,
    pub r_minus: f64,
    pub p_value: f64,
    pub biased: bool,
}

/// One dimension's full audit output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiasDimReport {
    pub dim: usize,
    pub rows: Vec<BiasRow>,
    /// Friedman rank tables per condition when three or more algorithms ran.
    pub friedman_nonshifted: Option<FriedmanReport>,
    pub friedman_shifted: Option<FriedmanReport>,
    pub critical_difference: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiasAuditReport {
    pub dims: Vec<BiasDimReport>,
    pub alpha: f64,
}

impl BiasAuditReport {
    /// The per-algorithm verdict lines, one per (algorithm, dimension).
    pub fn verdict_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for d in &self.dims {
            for r in &d.rows {
                out.push(format!(
                    "{} (d={}): R+={}, R-={}, p={:.6}, biased={}",
                    r.algo,
                    r.dim,
                    r.r_plus,
                    r.r_minus,
                    r.p_value,
                    if r.biased { "yes" } else { "no" }
                ));
            }
        }
        out
    }

    /// Table layout per condition: "rank (position)" per algorithm.
    pub fn rank_table(&self) -> String {
        let mut out = String::new();
        for d in &self.dims {
            if let (Some(ns), Some(sh)) = (&d.friedman_nonshifted, &d.friedman_shifted) {
                out.push_str(&format!(
                    "dim {}: algorithm, nonshifted rank (pos), shifted rank (pos)\n",
                    d.dim
                ));
                let algos: Vec<&str> = d.rows.iter().map(|r| r.algo.as_str()).collect();
                let pos =
                    |ranks: &[f64], i: usize| 1 + ranks.iter().filter(|&&r| r < ranks[i]).count();
                for (i, a) in algos.iter().enumerate() {
                    out.push_str(&format!(
                        "{a}, {:.4} ({}), {:.4} ({})\n",
                        ns.average_ranks[i],
                        pos(&ns.average_ranks, i),
                        sh.average_ranks[i],
                        pos(&sh.average_ranks, i),
                    ));
                }
            }
        }
        out
    }
}

/// Mean final error per function for one algorithm over one suite.
fn per_function_means(
    algo: &str,
    params: &ParamSet,
    suite: &[BenchmarkProblem],
    cfg: &BiasAuditConfig,
    condition: &str,
) -> Result<Vec<f64>> {
    let units: Vec<(usize, usize)> = suite
        .iter()
        .enumerate()
        .flat_map(|(pi, _)| (0..cfg.runs).map(move |r| (pi, r)))
        .collect();
    let errors: Vec<(usize, f64)> = units
        .par_iter()
        .map(|&(pi, run)| -> Result<(usize, f64)> {
            let problem = &suite[pi];
            let seed = mix_words(&[
                run_seed(cfg.seed, algo, problem.index(), problem.dim(), run),
                hash_str(condition),
            ]);
            let trace = algorithms::run_population_loop(
                algo,
                params,
                problem,
                Budget::new(cfg.budget_multiplier * problem.dim() as u64)?,
                &RngStream::new(seed),
                Recorder::new(u64::MAX), // rows are not needed for the audit
            )?;
            Ok((pi, trace.final_error()))
        })
        .collect::<Result<_>>()?;
    let mut sums = vec![0.0; suite.len()];
    for (pi, e) in errors {
        sums[pi] += e;
    }
    Ok(sums.into_iter().map(|s| s / cfg.runs as f64).collect())
}

/// Run the paired-suite audit.
pub fn bias_audit(cfg: &BiasAuditConfig) -> Result<BiasAuditReport> {
    if cfg.algos.is_empty() || cfg.dims.is_empty() {
        return Err(Error::config("bias audit needs algorithms and dimensions"));
    }
    if cfg.runs == 0 {
        return Err(Error::config("bias audit needs at least one run"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let mut dims = Vec::new();
    for &dim in &cfg.dims {
        let suite_seed = mix_words(&[cfg.seed, hash_str("bias-suite"), dim as u64]);
        let shifted = make_suite_spec(&SuiteSpec {
            dim,
            counts: cfg.counts,
            shifted: true,
            seed: suite_seed,
        })?;
        let nonshifted = make_suite_spec(&SuiteSpec {
            dim,
            counts: cfg.counts,
            shifted: false,
            seed: suite_seed,
        })?;
        // the pairing invariant the whole audit rests on
        for (s, n) in shifted.iter().zip(&nonshifted) {
            if s.index() != n.index()
                || s.describe() != n.describe()
                || s.transform().rotation != n.transform().rotation
            {
                return Err(Error::Contract(
                    "shifted and non-shifted suites are not paired".into(),
                ));
            }
        }

        let mut rows = Vec::new();
        let mut ns_means_by_algo = Vec::new();
        let mut sh_means_by_algo = Vec::new();
        for algo in &cfg.algos {
            let spec = algorithms::lookup(&algo.id)?;
            let params = spec.materialize(&algo.params)?;
            let (ns_means, sh_means) = pool.install(|| -> Result<(Vec<f64>, Vec<f64>)> {
                Ok((
                    per_function_means(&algo.id, &params, &nonshifted, cfg, "nonshifted")?,
                    per_function_means(&algo.id, &params, &shifted, cfg, "shifted")?,
                ))
            })?;
            let rep = wilcoxon_signed_rank(&sh_means, &ns_means)?;
            rows.push(BiasRow {
                algo: algo.id.clone(),
                dim,
                r_plus: rep.r_plus,
                r_minus: rep.r_minus,
                p_value: rep.p_value,
                biased: rep.p_value <= cfg.alpha && rep.r_plus > rep.r_minus,
            });
            ns_means_by_algo.push(ns_means);
            sh_means_by_algo.push(sh_means);
        }

        let (friedman_nonshifted, friedman_shifted, critical_difference) = if cfg.algos.len() >= 3 {
            let names: Vec<String> = cfg.algos.iter().map(|a| a.id.clone()).collect();
            let probs: Vec<String> = shifted
                .iter()
                .map(|p| format!("f{:03}", p.index()))
                .collect();
            let to_matrix = |cols: &[Vec<f64>]| -> Result<ResultMatrix> {
                ResultMatrix::new(
                    names.clone(),
                    probs.clone(),
                    (0..probs.len())
                        .map(|r| cols.iter().map(|c| c[r]).collect())
                        .collect(),
                )
            };
            let ns = friedman(&to_matrix(&ns_means_by_algo)?)?;
            let sh = friedman(&to_matrix(&sh_means_by_algo)?)?;
            let cd = nemenyi_cd(cfg.algos.len(), probs.len(), 0.05).ok();
            (Some(ns), Some(sh), cd)
        } else {
            (None, None, None)
        };

        dims.push(BiasDimReport {
            dim,
            rows,
            friedman_nonshifted,
            friedman_shifted,
            critical_difference,
        });
    }
    Ok(BiasAuditReport {
        dims,
        alpha: cfg.alpha,
    })
}
