//! Append-only result store backed by a directory of JSON artifacts.
//!
//! Layout under the store directory:
//! * `plan.json` — the experiment plan,
//! * `suite.json` — the suite manifest,
//! * `records.jsonl` — one completed [`RunRecord`] per line (append-only),
//! * `traces/<descriptor-id>.jsonl` — one trace row per recorded generation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One completed run; the flat record exported to `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub func_index: usize,
    pub dim: usize,
    pub run: usize,
    pub seed: u64,
    pub final_error: f64,
    pub evals: u64,
    pub wall_ms: u64,
    pub trace_path: String,
}

impl RunRecord {
    pub fn descriptor_id(&self) -> String {
        format!(
            "{}-f{:03}-d{}-r{:03}",
            self.algo, self.func_index, self.dim, self.run
        )
    }

    /// The optimum is a true lower bound; anything clearly below it means a
    /// broken problem or accounting.
    pub fn validate(&self) -> Result<()> {
        if self.final_error < -1e-8 || !self.final_error.is_finite() {
            return Err(Error::Contract(format!(
                "final error {} of {} is below the known optimum",
                self.final_error,
                self.descriptor_id()
            )));
        }
        Ok(())
    }

    /// Error floored at the reporting threshold used in summaries.
    pub fn floored_error(&self) -> f64 {
        self.final_error.max(1e-8)
    }
}

/// Directory-backed store; appends are serialized by a mutex so parallel
/// runs can complete in any order.
pub struct ResultStore {
    dir: PathBuf,
    appender: std::sync::Mutex<fs::File>,
    records: std::sync::Mutex<Vec<RunRecord>>,
}

impl ResultStore {
    pub fn records_path(dir: &Path) -> PathBuf {
        dir.join("records.jsonl")
    }

    pub fn traces_dir(dir: &Path) -> PathBuf {
        dir.join("traces")
    }

    /// Open (or create) a store, loading any records already present.
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(Self::traces_dir(dir))?;
        let records_path = Self::records_path(dir);
        let mut records = Vec::new();
        if records_path.exists() {
            for (i, line) in fs::read_to_string(&records_path)?.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: RunRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
                records.push(rec);
            }
        }
        let appender = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&records_path)?;
        Ok(ResultStore {
            dir: dir.to_path_buf(),
            appender: std::sync::Mutex::new(appender),
            records: std::sync::Mutex::new(records),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.records.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, descriptor_id: &str) -> bool {
        self.records
            .lock()
            .expect("store lock")
            .iter()
            .any(|r| r.descriptor_id() == descriptor_id)
    }

    /// Completed descriptor ids.
    pub fn completed_ids(&self) -> std::collections::HashSet<String> {
        self.records
            .lock()
            .expect("store lock")
            .iter()
            .map(RunRecord::descriptor_id)
            .collect()
    }

    /// Persist a trace file and append its record; the record line is written
    /// only after the trace is safely on disk.
    pub fn append(&self, record: RunRecord, trace_jsonl: &str) -> Result<()> {
        record.validate()?;
        let trace_abs = self.dir.join(&record.trace_path);
        if let Some(parent) = trace_abs.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&trace_abs, trace_jsonl)?;
        {
            let mut f = self.appender.lock().expect("store lock");
            let line = serde_json::to_string(&record)?;
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        self.records.lock().expect("store lock").push(record);
        Ok(())
    }

    /// Records sorted by (algo, function, run); the canonical export order.
    pub fn sorted_records(&self) -> Vec<RunRecord> {
        let mut recs = self.records.lock().expect("store lock").clone();
        recs.sort_by(|a, b| {
            (&a.algo, a.func_index, a.dim, a.run).cmp(&(&b.algo, b.func_index, b.dim, b.run))
        });
        recs
    }

    pub fn read_trace(&self, record: &RunRecord) -> Result<Vec<crate::metrics::TraceRow>> {
        let text = fs::read_to_string(self.dir.join(&record.trace_path))?;
        crate::metrics::RunTrace::from_jsonl(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(run: usize) -> RunRecord {
        RunRecord {
            algo: "de".into(),
            func_index: 1,
            dim: 2,
            run,
            seed: 42 + run as u64,
            final_error: 0.5,
            evals: 100,
            wall_ms: 3,
            trace_path: format!("traces/de-f001-d2-r{run:03}.jsonl"),
        }
    }

    #[test]
    fn append_then_reopen_preserves_records() {
        let tmp = tempfile::tempdir().unwrap();
        {
            let store = ResultStore::open(tmp.path()).unwrap();
            store
                .append(
                    record(0),
                    "{\"gen\":0,\"evals\":1,\"best\":1.0,\"div\":0.0,\"xpl\":0.0,\"xpt\":100.0}\n",
                )
                .unwrap();
            store.append(record(1), "").unwrap();
            assert_eq!(store.len(), 2);
        }
        let store = ResultStore::open(tmp.path()).unwrap();
        assert_eq!(store.len(), 2);
        assert!(store.contains("de-f001-d2-r000"));
        assert!(!store.contains("de-f001-d2-r002"));
        let rows = store.read_trace(&record(0)).unwrap();
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn negative_error_is_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        let store = ResultStore::open(tmp.path()).unwrap();
        let mut bad = record(0);
        bad.final_error = -1.0;
        assert!(store.append(bad, "").is_err());
        assert!(store.is_empty());
    }

    #[test]
    fn sorted_records_are_stable() {
        let tmp = tempfile::tempdir().unwrap();
        let store = ResultStore::open(tmp.path()).unwrap();
        store.append(record(2), "").unwrap();
        store.append(record(0), "").unwrap();
        store.append(record(1), "").unwrap();
        let runs: Vec<usize> = store.sorted_records().iter().map(|r| r.run).collect();
        assert_eq!(runs, vec![0, 1, 2]);
    }
}
