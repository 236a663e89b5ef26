//! Per-run instrumentation: convergence, population diversity and the
//! exploration/exploitation split.

use serde::{Deserialize, Serialize};

use crate::population::Population;

/// Per-dimension mean absolute deviation from the dimension median, averaged
/// over dimensions.
pub fn diversity(pop: &Population) -> f64 {
    assert!(!pop.is_empty(), "diversity of an empty population");
    let n = pop.len() as f64;
    let dim = pop.dim();
    if dim == 0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut column = Vec::with_capacity(pop.len());
    for j in 0..dim {
        column.clear();
        column.extend(pop.members.iter().map(|m| m.position[j]));
        let med = median_in_place(&mut column);
        let dev: f64 = pop
            .members
            .iter()
            .map(|m| (med - m.position[j]).abs())
            .sum();
        acc += dev / n;
    }
    acc / dim as f64
}

/// Median; even sizes average the two central order statistics.
fn median_in_place(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Exploration/exploitation percentages from the current diversity and the
/// maximum diversity reached so far.
///
/// `XPL% = 100 * div / div_max`, `XPT% = 100 * |div - div_max| / div_max`;
/// a degenerate run with `div_max = 0` is fully exploitative: `(0, 100)`.
pub fn xpl_xpt(div_t: f64, div_max: f64) -> (f64, f64) {
    debug_assert!(div_t >= 0.0 && div_max >= div_t - 1e-15);
    if div_max <= 0.0 {
        return (0.0, 100.0);
    }
    let xpl = 100.0 * div_t / div_max;
    let xpt = 100.0 * (div_t - div_max).abs() / div_max;
    (xpl, xpt)
}

/// One recorded generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub gen: u64,
    pub evals: u64,
    pub best: f64,
    pub div: f64,
    pub xpl: f64,
    pub xpt: f64,
}

/// Everything measured over one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub evals_used: u64,
    /// Known optimum of the problem the run was made on.
    pub f_star: f64,
    pub wall_ms: u64,
}

impl RunTrace {
    /// `best_fitness - f_star`; non-negative up to round-off.
    pub fn final_error(&self) -> f64 {
        self.best_fitness - self.f_star
    }

    /// Serialize rows as JSON Lines (one record per generation).
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&serde_json::to_string(row).expect("trace row serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> crate::Result<Vec<TraceRow>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| crate::Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
            })
            .collect()
    }

    /// Iteration-mean exploration/exploitation percentages.
    pub fn mean_xpl_xpt(&self) -> (f64, f64) {
        if self.rows.is_empty() {
            return (0.0, 100.0);
        }
        let n = self.rows.len() as f64;
        let xpl = self.rows.iter().map(|r| r.xpl).sum::<f64>() / n;
        let xpt = self.rows.iter().map(|r| r.xpt).sum::<f64>() / n;
        (xpl, xpt)
    }
}

/// Accumulates trace rows during a run; `stride` controls how many
/// generations are skipped between recorded rows (1 = every generation).
#[derive(Debug, Clone)]
pub struct Recorder {
    stride: u64,
    div_max: f64,
    rows: Vec<TraceRow>,
}

impl Default for Recorder {
    fn default() -> Self {
        Recorder::new(1)
    }
}

impl Recorder {
    pub fn new(stride: u64) -> Self {
        Recorder {
            stride: stride.max(1),
            div_max: 0.0,
            rows: Vec::new(),
        }
    }

    /// Record one generation. The running diversity maximum is updated on
    /// every call, including skipped generations.
    pub fn record(&mut self, gen: u64, evals: u64, best: f64, pop: &Population) {
        let div = diversity(pop);
        self.div_max = self.div_max.max(div);
        if !gen.is_multiple_of(self.stride) {
            return;
        }
        let (xpl, xpt) = xpl_xpt(div, self.div_max);
        self.rows.push(TraceRow {
            gen,
            evals,
            best,
            div,
            xpl,
            xpt,
        });
    }

    pub fn div_max(&self) -> f64 {
        self.div_max
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn finish(
        self,
        best_position: Vec<f64>,
        best_fitness: f64,
        evals_used: u64,
        f_star: f64,
        wall_ms: u64,
    ) -> RunTrace {
        RunTrace {
            rows: self.rows,
            best_position,
            best_fitness,
            evals_used,
            f_star,
            wall_ms,
        }
    }
}

/// Aggregates over a batch of runs of one (algorithm, problem) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub runs: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub best_error: f64,
    pub worst_error: f64,
    pub median_error: f64,
    pub mean_xpl: f64,
    pub mean_xpt: f64,
}

/// Summarize final errors (fitness minus `f_star`) and mean trade-off
/// percentages over a set of traces. Standard deviation is the sample
/// deviation (n - 1), zero for a single run.
pub fn summarize(traces: &[RunTrace]) -> Option<RunSummary> {
    if traces.is_empty() {
        return None;
    }
    let mut errors: Vec<f64> = traces.iter().map(RunTrace::final_error).collect();
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let var = if errors.len() > 1 {
        errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    errors.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let median = if errors.len() % 2 == 1 {
        errors[errors.len() / 2]
    } else {
        0.5 * (errors[errors.len() / 2 - 1] + errors[errors.len() / 2])
    };
    let (mut xpl, mut xpt) = (0.0, 0.0);
    for t in traces {
        let (a, b) = t.mean_xpl_xpt();
        xpl += a;
        xpt += b;
    }
    Some(RunSummary {
        runs: traces.len(),
        mean_error: mean,
        std_error: var.sqrt(),
        best_error: errors[0],
        worst_error: *errors.last().unwrap(),
        median_error: median,
        mean_xpl: xpl / n,
        mean_xpt: xpt / n,
    })
}
