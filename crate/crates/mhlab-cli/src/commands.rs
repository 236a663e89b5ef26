//! Subcommand implementations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mhlab::algorithms::{self, Availability};
use mhlab::benchmarks::ClassCounts;
use mhlab::error::{Error, Result};
use mhlab::experiments::{
    self, bias_audit, matrix_from_records, read_results_csv, BiasAuditConfig, ExperimentPlan,
    PlannedAlgo, TuneScenario,
};
use mhlab::params::{ParamSet, ParamValue};
use mhlab::stats::{cd_groups, friedman_opts, nemenyi_cd, wilcoxon_signed_rank};

use crate::args::{BiasArgs, Cli, Command, ReportArgs, RunArgs, StatsArgs, TuneArgs};

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::List => cmd_list(),
        Command::Run(a) => cmd_run(a),
        Command::Tune(a) => cmd_tune(a),
        Command::Stats(a) => cmd_stats(a),
        Command::BiasAudit(a) => cmd_bias_audit(a),
        Command::Report(a) => cmd_report(a),
    }
}

fn cmd_list() -> Result<()> {
    let registry = algorithms::registry();
    println!("implemented algorithms:");
    for spec in registry
        .iter()
        .filter(|s| s.availability == Availability::Implemented)
    {
        println!(
            "  {:<14} [{}] {}",
            spec.id,
            spec.taxonomy.label(),
            spec.display_name
        );
        for def in &spec.params.defs {
            println!(
                "      {:<16} {:?} (default {})",
                def.name, def.kind, def.default
            );
        }
    }
    println!("calibration toys:");
    for spec in registry
        .iter()
        .filter(|s| s.availability == Availability::Toy)
    {
        println!(
            "  {:<14} [{}] {}",
            spec.id,
            spec.taxonomy.label(),
            spec.display_name
        );
    }
    println!("external references (not implemented):");
    for spec in registry
        .iter()
        .filter(|s| s.availability == Availability::External)
    {
        println!(
            "  {:<14} [{}] {}",
            spec.id,
            spec.taxonomy.label(),
            spec.display_name
        );
    }
    Ok(())
}

/// `1-3,7` -> [1, 2, 3, 7]
fn parse_func_ranges(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let part = part.trim();
        if let Some((a, b)) = part.split_once('-') {
            let lo: usize = a.trim().parse().map_err(|_| bad_funcs(part))?;
            let hi: usize = b.trim().parse().map_err(|_| bad_funcs(part))?;
            if lo == 0 || hi < lo {
                return Err(bad_funcs(part));
            }
            out.extend(lo..=hi);
        } else {
            let v: usize = part.parse().map_err(|_| bad_funcs(part))?;
            out.push(v);
        }
    }
    Ok(out)
}

fn bad_funcs(part: &str) -> Error {
    Error::Config(format!(
        "bad function selector `{part}` (expected e.g. 1-3,7)"
    ))
}

fn parse_counts(text: &str) -> Result<ClassCounts> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("bad class counts `{text}` (expected u,m,h,c)")))?;
    if parts.len() != 4 {
        return Err(Error::Config(format!(
            "bad class counts `{text}` (expected 4 numbers)"
        )));
    }
    Ok(ClassCounts {
        unimodal: parts[0],
        multimodal: parts[1],
        hybrid: parts[2],
        composition: parts[3],
    })
}

/// Resolve the per-algorithm parameter sets for a preset name or file.
fn preset_params(
    preset: &str,
    algo_ids: &[String],
    dim: usize,
) -> Result<BTreeMap<String, ParamSet>> {
    let mut out = BTreeMap::new();
    if ["default", "tuned-10", "tuned-30", "tuned-50"].contains(&preset) {
        for id in algo_ids {
            let spec = algorithms::lookup(id)?;
            out.insert(id.clone(), spec.preset(preset)?);
        }
        return Ok(out);
    }
    // otherwise a preset file: {"<algo>": {param: value, ...}, ...}
    let text = std::fs::read_to_string(preset).map_err(|e| {
        Error::Config(format!(
            "cannot read preset `{preset}`: {e} (and it is not a builtin name)"
        ))
    })?;
    let map: BTreeMap<String, ParamSet> = serde_json::from_str(&text)?;
    for id in algo_ids {
        let spec = algorithms::lookup(id)?;
        let overrides = map.get(id).cloned().unwrap_or_default();
        out.insert(id.clone(), spec.materialize(&overrides)?);
    }
    let _ = dim;
    Ok(out)
}

/// Apply `--set key=value` overrides to a plan. Unknown keys are errors.
fn apply_overrides(plan: &mut ExperimentPlan, sets: &[String]) -> Result<()> {
    for entry in sets {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{entry}` is not key=value")))?;
        let parse_u64 = || {
            value.parse::<u64>().map_err(|_| {
                Error::Config(format!("override `{key}` needs an integer, got `{value}`"))
            })
        };
        match key {
            "seed" => plan.base_seed = parse_u64()?,
            "runs" => plan.runs = parse_u64()? as usize,
            "dims" | "dim" => plan.dim = parse_u64()? as usize,
            "budget-multiplier" => plan.budget_multiplier = parse_u64()?,
            "trace-stride" => plan.trace_stride = parse_u64()?,
            "shifted" => {
                plan.shifted = value.parse::<bool>().map_err(|_| {
                    Error::Config(format!(
                        "override `shifted` needs true/false, got `{value}`"
                    ))
                })?
            }
            other => {
                // algorithm parameter override: <algo>.<param>=value
                let (algo, param) = other
                    .split_once('.')
                    .ok_or_else(|| Error::Config(format!("unknown override key `{other}`")))?;
                let planned = plan
                    .algos
                    .iter_mut()
                    .find(|a| a.id == algo)
                    .ok_or_else(|| {
                        Error::Config(format!("override for `{algo}`, which is not in the plan"))
                    })?;
                let parsed: ParamValue = if let Ok(i) = value.parse::<i64>() {
                    ParamValue::Int(i)
                } else if let Ok(f) = value.parse::<f64>() {
                    ParamValue::Real(f)
                } else {
                    ParamValue::Cat(value.to_string())
                };
                planned.params.values.insert(param.to_string(), parsed);
            }
        }
    }
    plan.validate()
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let shifted = !a.nonshifted;
    let mut dims = a.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    if dims.is_empty() {
        return Err(Error::config("at least one dimension is required"));
    }

    let mut total_descriptors = 0usize;
    for &dim in &dims {
        let mut plan = if let Some(cfg) = &a.config {
            let text = std::fs::read_to_string(cfg)?;
            serde_json::from_str::<ExperimentPlan>(&text)?
        } else {
            if a.algos.is_empty() {
                return Err(Error::config(
                    "no algorithms given (use --algos or --config)",
                ));
            }
            let presets = preset_params(&a.preset, &a.algos, dim)?;
            let planned: Vec<PlannedAlgo> = a
                .algos
                .iter()
                .map(|id| PlannedAlgo {
                    id: id.clone(),
                    params: presets[id].clone(),
                })
                .collect();
            let mut p = ExperimentPlan::new(planned, dim, a.seed);
            p.counts = parse_counts(&a.counts)?;
            p.shifted = shifted;
            p.runs = a.runs;
            p.budget_multiplier = a.budget_multiplier;
            p.trace_stride = a.trace_stride;
            if let Some(funcs) = &a.funcs {
                p.funcs = parse_func_ranges(funcs)?;
            }
            p
        };
        if a.config.is_some() {
            plan.dim = dim;
        }
        apply_overrides(&mut plan, &a.set)?;

        let descriptors = experiments::plan_matrix(&plan)?;
        total_descriptors += descriptors.len();
        if a.dry_run {
            continue;
        }
        let out_dir = run_out_dir(&a.out, &dims, dim);
        std::fs::create_dir_all(&out_dir)?;
        let store = experiments::execute(&plan, &out_dir, a.parallelism)?;
        experiments::write_results_csv(&store, &out_dir.join("results.csv"))?;
        println!(
            "dim {dim}: {} runs complete, results in {}",
            store.len(),
            out_dir.display()
        );
    }
    if a.dry_run {
        println!("dry run: {total_descriptors} run descriptors, nothing written");
    }
    Ok(())
}

fn run_out_dir(base: &str, dims: &[usize], dim: usize) -> PathBuf {
    if dims.len() == 1 {
        PathBuf::from(base)
    } else {
        Path::new(base).join(format!("d{dim}"))
    }
}

fn cmd_tune(a: TuneArgs) -> Result<()> {
    let scenarios: Vec<TuneScenario> = if let Some(path) = &a.scenario {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read scenario `{path}`: {e}")))?;
        // accept a single scenario object or an array of them
        serde_json::from_str::<Vec<TuneScenario>>(&text)
            .or_else(|_| serde_json::from_str::<TuneScenario>(&text).map(|s| vec![s]))?
    } else {
        if a.algos.is_empty() {
            return Err(Error::config(
                "no algorithms given (use --algos or --scenario)",
            ));
        }
        a.dims
            .iter()
            .flat_map(|&dim| {
                a.algos.iter().map(move |algo| {
                    let mut s = TuneScenario::new(algo, dim, a.seed);
                    s.total_budget = a.budget;
                    s.evals_per_run = a.evals_multiplier * dim as u64;
                    s.elimination_alpha = a.alpha;
                    s
                })
            })
            .collect()
    };
    std::fs::create_dir_all(&a.out)?;

    let mut by_dim: BTreeMap<usize, BTreeMap<String, ParamSet>> = BTreeMap::new();
    for scenario in &scenarios {
        let (preset, audit) = experiments::tune_algorithm(scenario)?;
        let audit_path = Path::new(&a.out).join(format!(
            "tune_{}_d{}_audit.json",
            scenario.algo, scenario.dim
        ));
        std::fs::write(&audit_path, serde_json::to_string_pretty(&audit)?)?;
        println!(
            "{} d{}: best score {:.6e} after {} runs -> {}",
            scenario.algo,
            scenario.dim,
            audit.best_score,
            audit.runs_used,
            audit_path.display()
        );
        by_dim
            .entry(scenario.dim)
            .or_default()
            .insert(scenario.algo.clone(), preset.params);
    }
    for (dim, presets) in by_dim {
        let preset_path = Path::new(&a.out).join(format!("presets_d{dim}.json"));
        std::fs::write(&preset_path, serde_json::to_string_pretty(&presets)?)?;
        println!("presets written to {}", preset_path.display());
    }
    Ok(())
}

fn cmd_stats(a: StatsArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Error::Config(format!("cannot read `{}`: {e}", a.input)))?;
    let records = read_results_csv(&text)?;
    let agg = if a.median {
        experiments::Aggregation::Median
    } else {
        experiments::Aggregation::Mean
    };
    let matrix = matrix_from_records(&records, agg)?;

    let mut out = String::new();
    use std::fmt::Write as _;
    if matrix.k() >= 3 {
        let rep = friedman_opts(&matrix, a.iman_davenport)?;
        let _ = writeln!(
            out,
            "friedman chi2 = {:.4}, p = {:.6}",
            rep.chi_square, rep.p_value
        );
        if let Some((f_stat, p)) = rep.iman_davenport {
            let _ = writeln!(out, "iman-davenport F = {f_stat:.4}, p = {p:.6}");
        }
        let _ = writeln!(
            out,
            "average ranks (sum = {:.3}):",
            rep.average_ranks.iter().sum::<f64>()
        );
        let mut order: Vec<usize> = (0..matrix.k()).collect();
        order.sort_by(|&x, &y| {
            rep.average_ranks[x]
                .partial_cmp(&rep.average_ranks[y])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for (pos, &i) in order.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {:<16} {:.4} ({})",
                matrix.algorithms[i],
                rep.average_ranks[i],
                pos + 1
            );
        }
        if let Ok(cd) = nemenyi_cd(matrix.k(), matrix.n(), a.alpha) {
            let _ = writeln!(out, "nemenyi cd (alpha {}) = {cd:.4}", a.alpha);
            for group in cd_groups(&rep.average_ranks, cd) {
                let names: Vec<&str> = group
                    .iter()
                    .map(|&i| matrix.algorithms[i].as_str())
                    .collect();
                let _ = writeln!(out, "  indistinguishable: {}", names.join(", "));
            }
        }
    }
    let _ = writeln!(out, "pairwise wilcoxon (two-sided, alpha {}):", a.alpha);
    for i in 0..matrix.k() {
        for j in (i + 1)..matrix.k() {
            match wilcoxon_signed_rank(&matrix.column(i), &matrix.column(j)) {
                Ok(w) => {
                    let verdict = if w.p_value <= a.alpha {
                        "significant"
                    } else {
                        "ns"
                    };
                    let _ = writeln!(
                        out,
                        "  {} vs {}: R+={}, R-={}, p={:.6} [{verdict}]",
                        matrix.algorithms[i], matrix.algorithms[j], w.r_plus, w.r_minus, w.p_value
                    );
                }
                Err(e) => {
                    let _ = writeln!(
                        out,
                        "  {} vs {}: {e}",
                        matrix.algorithms[i], matrix.algorithms[j]
                    );
                }
            }
        }
    }

    print!("{out}");
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(Path::new(dir).join("stats.txt"), &out)?;
        if matrix.k() >= 3 {
            let rep = friedman_opts(&matrix, false)?;
            if let Ok(cd) = nemenyi_cd(matrix.k(), matrix.n(), a.alpha) {
                std::fs::write(
                    Path::new(dir).join("cd_plot.svg"),
                    experiments::cd_plot(
                        "average ranks",
                        &matrix.algorithms,
                        &rep.average_ranks,
                        cd,
                    ),
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_bias_audit(a: BiasArgs) -> Result<()> {
    if a.algos.is_empty() {
        return Err(Error::config("no algorithms given (use --algos)"));
    }
    let cfg = BiasAuditConfig {
        algos: a.algos.iter().map(|id| PlannedAlgo::new(id)).collect(),
        dims: a.dims.clone(),
        counts: parse_counts(&a.counts)?,
        runs: a.runs,
        budget_multiplier: a.budget_multiplier,
        seed: a.seed,
        alpha: a.alpha,
        parallelism: a.parallelism,
    };
    let report = bias_audit(&cfg)?;
    for line in report.verdict_lines() {
        println!("{line}");
    }
    let table = report.rank_table();
    if !table.is_empty() {
        println!("{table}");
    }
    std::fs::create_dir_all(&a.out)?;
    std::fs::write(
        Path::new(&a.out).join("bias_audit.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    for d in &report.dims {
        if let (Some(ns), Some(cd)) = (&d.friedman_nonshifted, d.critical_difference) {
            let names: Vec<String> = d.rows.iter().map(|r| r.algo.clone()).collect();
            std::fs::write(
                Path::new(&a.out).join(format!("cd_nonshifted_d{}.svg", d.dim)),
                experiments::cd_plot(
                    &format!("non-shifted ranks (d={})", d.dim),
                    &names,
                    &ns.average_ranks,
                    cd,
                ),
            )?;
        }
        if let (Some(sh), Some(cd)) = (&d.friedman_shifted, d.critical_difference) {
            let names: Vec<String> = d.rows.iter().map(|r| r.algo.clone()).collect();
            std::fs::write(
                Path::new(&a.out).join(format!("cd_shifted_d{}.svg", d.dim)),
                experiments::cd_plot(
                    &format!("shifted ranks (d={})", d.dim),
                    &names,
                    &sh.average_ranks,
                    cd,
                ),
            )?;
        }
    }
    println!("audit written to {}", a.out);
    Ok(())
}

fn cmd_report(a: ReportArgs) -> Result<()> {
    let store_dir = PathBuf::from(&a.store);
    let store = experiments::ResultStore::open(&store_dir)?;
    let out = a
        .out
        .map(PathBuf::from)
        .unwrap_or_else(|| store_dir.clone());
    let bundle = experiments::report(&store, &out)?;
    println!(
        "wrote {} report files to {}",
        bundle.files.len(),
        out.display()
    );
    Ok(())
}
