//! CSV export/import and aggregation into score matrices.
//!
//! `results.csv` carries one row per run record, sorted by (algo, function,
//! run) so repeated exports of the same store are byte-identical except for
//! the wall-time column. Plan and suite manifests are fingerprinted into
//! header comments for provenance.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::store::{ResultStore, RunRecord};
use crate::error::{Error, Result};
use crate::metrics::{summarize, RunTrace};
use crate::stats::ResultMatrix;

pub const RESULTS_HEADER: &str =
    "algo,func_index,dim,run,seed,final_error,evals,wall_ms,trace_path";

/// FNV-1a fingerprint of a byte string, as fixed-width hex.
pub fn fingerprint(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    format!("{h:016x}")
}

fn manifest_fingerprint(dir: &Path, name: &str) -> String {
    fs::read(dir.join(name))
        .map(|b| fingerprint(&b))
        .unwrap_or_else(|_| "absent".into())
}

/// Render the results CSV for `store`.
pub fn results_csv(store: &ResultStore) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# plan={} suite={}",
        manifest_fingerprint(store.dir(), "plan.json"),
        manifest_fingerprint(store.dir(), "suite.json"),
    );
    out.push_str(RESULTS_HEADER);
    out.push('\n');
    for r in store.sorted_records() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.algo,
            r.func_index,
            r.dim,
            r.run,
            r.seed,
            r.final_error,
            r.evals,
            r.wall_ms,
            r.trace_path
        );
    }
    out
}

pub fn write_results_csv(store: &ResultStore, path: &Path) -> Result<()> {
    fs::write(path, results_csv(store))?;
    Ok(())
}

/// Parse a results CSV produced by [`results_csv`]. Errors carry the 1-based
/// line number of the offending row.
pub fn read_results_csv(text: &str) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != RESULTS_HEADER {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected header `{RESULTS_HEADER}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 9 fields, got {}", fields.len()),
            });
        }
        let parse_err = |what: &str| Error::Parse {
            line: lineno,
            msg: format!("bad {what} field"),
        };
        records.push(RunRecord {
            algo: fields[0].to_string(),
            func_index: fields[1].parse().map_err(|_| parse_err("func_index"))?,
            dim: fields[2].parse().map_err(|_| parse_err("dim"))?,
            run: fields[3].parse().map_err(|_| parse_err("run"))?,
            seed: fields[4].parse().map_err(|_| parse_err("seed"))?,
            final_error: fields[5].parse().map_err(|_| parse_err("final_error"))?,
            evals: fields[6].parse().map_err(|_| parse_err("evals"))?,
            wall_ms: fields[7].parse().map_err(|_| parse_err("wall_ms"))?,
            trace_path: fields[8].to_string(),
        });
    }
    if !saw_header {
        return Err(Error::Parse {
            line: 1,
            msg: "missing results header".into(),
        });
    }
    Ok(records)
}

/// How a (algorithm, function) cell is aggregated over runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Mean,
    Median,
}

/// Aggregate records into a problems x algorithms matrix of final errors.
///
/// Algorithms are ordered by first appearance in sorted order; every
/// (algorithm, function) cell must be populated.
pub fn matrix_from_records(records: &[RunRecord], agg: Aggregation) -> Result<ResultMatrix> {
    if records.is_empty() {
        return Err(Error::InsufficientData("no records to aggregate".into()));
    }
    let mut dims: Vec<usize> = records.iter().map(|r| r.dim).collect();
    dims.sort_unstable();
    dims.dedup();
    if dims.len() > 1 {
        return Err(Error::Config(format!(
            "records mix problem dimensions {dims:?}; aggregate one dimension at a time"
        )));
    }
    let mut algos: Vec<String> = records.iter().map(|r| r.algo.clone()).collect();
    algos.sort();
    algos.dedup();
    let mut funcs: Vec<usize> = records.iter().map(|r| r.func_index).collect();
    funcs.sort_unstable();
    funcs.dedup();

    let mut scores = Vec::with_capacity(funcs.len());
    for &f in &funcs {
        let mut row = Vec::with_capacity(algos.len());
        for a in &algos {
            let mut errs: Vec<f64> = records
                .iter()
                .filter(|r| r.func_index == f && &r.algo == a)
                .map(|r| r.final_error)
                .collect();
            if errs.is_empty() {
                return Err(Error::InsufficientData(format!(
                    "no runs of `{a}` on function {f}"
                )));
            }
            errs.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
            let v = match agg {
                Aggregation::Mean => errs.iter().sum::<f64>() / errs.len() as f64,
                Aggregation::Median => {
                    let n = errs.len();
                    if n % 2 == 1 {
                        errs[n / 2]
                    } else {
                        0.5 * (errs[n / 2 - 1] + errs[n / 2])
                    }
                }
            };
            row.push(v);
        }
        scores.push(row);
    }
    ResultMatrix::new(
        algos,
        funcs.iter().map(|f| format!("f{f:03}")).collect(),
        scores,
    )
}

/// Per-cell summary rows: aggregation of every (algorithm, function) cell.
pub fn summary_csv(store: &ResultStore) -> Result<String> {
    let records = store.sorted_records();
    if records.is_empty() {
        return Err(Error::InsufficientData("no records".into()));
    }
    let mut out = String::from(
        "algo,func_index,dim,runs,mean_error,std_error,best_error,worst_error,median_error,mean_error_floored,mean_xpl,mean_xpt\n",
    );
    let mut cells: Vec<(String, usize, usize)> = records
        .iter()
        .map(|r| (r.algo.clone(), r.func_index, r.dim))
        .collect();
    cells.dedup();
    for (algo, func, dim) in cells {
        let cell_records: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.algo == algo && r.func_index == func && r.dim == dim)
            .collect();
        let mut traces = Vec::with_capacity(cell_records.len());
        for r in &cell_records {
            let rows = store.read_trace(r)?;
            traces.push(RunTrace {
                rows,
                best_position: Vec::new(),
                best_fitness: r.final_error,
                evals_used: r.evals,
                f_star: 0.0,
                wall_ms: r.wall_ms,
            });
        }
        let s = summarize(&traces).expect("cell has at least one run");
        let floored =
            cell_records.iter().map(|r| r.floored_error()).sum::<f64>() / cell_records.len() as f64;
        let _ = writeln!(
            out,
            "{algo},{func},{dim},{},{},{},{},{},{},{},{},{}",
            s.runs,
            s.mean_error,
            s.std_error,
            s.best_error,
            s.worst_error,
            s.median_error,
            floored,
            s.mean_xpl,
            s.mean_xpt
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(algo: &str, func: usize, run: usize, err: f64) -> RunRecord {
        RunRecord {
            algo: algo.into(),
            func_index: func,
            dim: 2,
            run,
            seed: run as u64,
            final_error: err,
            evals: 10,
            wall_ms: 1,
            trace_path: format!("traces/{algo}-f{func:03}-d2-r{run:03}.jsonl"),
        }
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let tmp = tempfile::tempdir().unwrap();
        let store = ResultStore::open(tmp.path()).unwrap();
        for (i, err) in [0.25, 1.5, 0.125].iter().enumerate() {
            store.append(record("de", 1, i, *err), "").unwrap();
            store.append(record("gsk", 1, i, err * 2.0), "").unwrap();
            store.append(record("de", 2, i, err * 3.0), "").unwrap();
            store.append(record("gsk", 2, i, err * 0.5), "").unwrap();
        }
        let text = results_csv(&store);
        let parsed = read_results_csv(&text).unwrap();
        assert_eq!(parsed, store.sorted_records());
        let m1 = matrix_from_records(&parsed, Aggregation::Mean).unwrap();
        let m2 = matrix_from_records(&store.sorted_records(), Aggregation::Mean).unwrap();
        assert_eq!(m1, m2);
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let text = format!("{RESULTS_HEADER}\nde,1,2,0,7,0.5,10,1,x\noops\n");
        match read_results_csv(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn matrix_rejects_mixed_dimensions() {
        let mut a = record("de", 1, 0, 1.0);
        let mut b = record("de", 1, 1, 2.0);
        a.dim = 10;
        b.dim = 30;
        assert!(matrix_from_records(&[a, b], Aggregation::Mean).is_err());
    }

    #[test]
    fn matrix_requires_complete_cells() {
        let records = vec![record("de", 1, 0, 1.0), record("gsk", 2, 0, 1.0)];
        assert!(matrix_from_records(&records, Aggregation::Mean).is_err());
    }

    #[test]
    fn median_aggregation() {
        let records = vec![
            record("de", 1, 0, 1.0),
            record("de", 1, 1, 100.0),
            record("de", 1, 2, 2.0),
            record("gsk", 1, 0, 5.0),
            record("gsk", 1, 1, 6.0),
            record("gsk", 1, 2, 7.0),
            record("de", 2, 0, 0.0),
            record("gsk", 2, 0, 0.0),
        ];
        let m = matrix_from_records(&records, Aggregation::Median).unwrap();
        assert_eq!(m.scores[0][0], 2.0); // de on f1
        assert_eq!(m.scores[0][1], 6.0); // gsk on f1
    }

    #[test]
    fn fingerprint_is_stable() {
        assert_eq!(fingerprint(b"abc"), fingerprint(b"abc"));
        assert_ne!(fingerprint(b"abc"), fingerprint(b"abd"));
    }
}
