//! Nonparametric comparison machinery: Friedman average ranks, the Wilcoxon
//! signed-rank test, and Nemenyi critical differences with grouping for
//! critical-difference plots.
//!
//! Conventions, pinned by tests:
//! * ranks are midranks (ties averaged), rank 1 is the best (lowest) score;
//! * Wilcoxon drops zero differences, `R+` sums ranks where `a > b`, and the
//!   two-sided p-value uses the normal approximation without continuity
//!   correction;
//! * the Friedman p-value is the plain chi-square tail; the Iman-Davenport
//!   F-correction is available behind a flag.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

use crate::error::{Error, Result};

/// Problems x algorithms score matrix (lower is better).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultMatrix {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    /// `scores[row][col]` = score of `algorithms[col]` on `problems[row]`.
    pub scores: Vec<Vec<f64>>,
}

impl ResultMatrix {
    pub fn new(
        algorithms: Vec<String>,
        problems: Vec<String>,
        scores: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if algorithms.len() < 2 || problems.len() < 2 {
            return Err(Error::config(
                "result matrix needs at least 2 rows and 2 columns",
            ));
        }
        if scores.len() != problems.len() || scores.iter().any(|r| r.len() != algorithms.len()) {
            return Err(Error::config("result matrix shape mismatch"));
        }
        if scores.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::config("result matrix contains non-finite cells"));
        }
        Ok(ResultMatrix {
            algorithms,
            problems,
            scores,
        })
    }

    pub fn k(&self) -> usize {
        self.algorithms.len()
    }

    pub fn n(&self) -> usize {
        self.problems.len()
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.scores.iter().map(|r| r[col]).collect()
    }
}

/// Outcome of one statistical test, ready for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub test: String,
    pub summary: String,
    pub p_value: f64,
    pub alpha: f64,
    pub significant: bool,
}

/// Midranks of `values` (rank 1 = smallest; ties averaged).
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share the average of ranks i+1..=j+1
        let avg = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Friedman test result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanReport {
    pub average_ranks: Vec<f64>,
    pub chi_square: f64,
    pub p_value: f64,
    /// Iman-Davenport corrected statistic and p-value, when requested.
    pub iman_davenport: Option<(f64, f64)>,
}

impl FriedmanReport {
    pub fn report(&self, alpha: f64) -> StatReport {
        StatReport {
            test: "friedman".into(),
            summary: format!(
                "chi2 = {:.4}, average ranks = [{}]",
                self.chi_square,
                self.average_ranks
                    .iter()
                    .map(|r| format!("{r:.4}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            p_value: self.p_value,
            alpha,
            significant: self.p_value <= alpha,
        }
    }
}

/// Friedman test over a problems x algorithms matrix.
///
/// `chi2 = 12N / (k (k+1)) * (sum R_j^2 - k (k+1)^2 / 4)` with `R_j` the
/// average rank of algorithm `j`; p from the chi-square tail with `k - 1`
/// degrees of freedom.
pub fn friedman(matrix: &ResultMatrix) -> Result<FriedmanReport> {
    friedman_opts(matrix, false)
}

pub fn friedman_opts(matrix: &ResultMatrix, iman_davenport: bool) -> Result<FriedmanReport> {
    let k = matrix.k();
    let n = matrix.n();
    if k < 3 {
        return Err(Error::config(
            "friedman needs at least 3 algorithms; use the Wilcoxon signed-rank test for 2",
        ));
    }
    let mut rank_sums = vec![0.0; k];
    for row in &matrix.scores {
        for (j, r) in midranks(row).into_iter().enumerate() {
            rank_sums[j] += r;
        }
    }
    let average_ranks: Vec<f64> = rank_sums.iter().map(|s| s / n as f64).collect();
    let sum_r2: f64 = average_ranks.iter().map(|r| r * r).sum();
    let kf = k as f64;
    let nf = n as f64;
    let chi_square =
        (12.0 * nf / (kf * (kf + 1.0)) * (sum_r2 - kf * (kf + 1.0).powi(2) / 4.0)).max(0.0);
    let dist = ChiSquared::new((k - 1) as f64).expect("k >= 3");
    let p_value = (1.0 - dist.cdf(chi_square)).clamp(0.0, 1.0);

    let iman = if iman_davenport {
        let denom = nf * (kf - 1.0) - chi_square;
        if denom <= 0.0 {
            Some((f64::INFINITY, 0.0))
        } else {
            let f_stat = (nf - 1.0) * chi_square / denom;
            let fdist = FisherSnedecor::new(kf - 1.0, (kf - 1.0) * (nf - 1.0))
                .map_err(|e| Error::Config(format!("iman-davenport dof: {e}")))?;
            Some((f_stat, (1.0 - fdist.cdf(f_stat)).clamp(0.0, 1.0)))
        }
    } else {
        None
    };

    Ok(FriedmanReport {
        average_ranks,
        chi_square,
        p_value,
        iman_davenport: iman,
    })
}

/// Wilcoxon signed-rank result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonReport {
    /// Rank sum of pairs where the first series is larger.
    pub r_plus: f64,
    pub r_minus: f64,
    /// Pairs surviving zero-difference removal.
    pub n_effective: usize,
    pub z: f64,
    pub p_value: f64,
}

impl WilcoxonReport {
    /// `+1` when the first series is larger on balance, `-1` when smaller.
    pub fn direction(&self) -> i8 {
        if self.r_plus > self.r_minus {
            1
        } else if self.r_plus < self.r_minus {
            -1
        } else {
            0
        }
    }

    pub fn report(&self, alpha: f64) -> StatReport {
        StatReport {
            test: "wilcoxon-signed-rank".into(),
            summary: format!(
                "R+ = {}, R- = {}, n = {}, z = {:.4}",
                self.r_plus, self.r_minus, self.n_effective, self.z
            ),
            p_value: self.p_value,
            alpha,
            significant: self.p_value <= alpha,
        }
    }
}

/// Paired two-sided Wilcoxon signed-rank test of `a` against `b`.
///
/// Zero differences are dropped; fewer than 5 surviving pairs is an
/// `InsufficientData` error.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonReport> {
    if a.len() != b.len() {
        return Err(Error::Contract(format!(
            "paired series differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let n = diffs.len();
    if n < 5 {
        return Err(Error::InsufficientData(format!(
            "only {n} non-zero paired differences (need at least 5)"
        )));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&abs);
    let mut r_plus = 0.0;
    let mut r_minus = 0.0;
    for (d, r) in diffs.iter().zip(&ranks) {
        if *d > 0.0 {
            r_plus += r;
        } else {
            r_minus += r;
        }
    }
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let sd = (nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0).sqrt();
    let w = r_plus.min(r_minus);
    let z = (w - mean) / sd;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let p_value = (2.0 * normal.cdf(z)).clamp(0.0, 1.0);
    Ok(WilcoxonReport {
        r_plus,
        r_minus,
        n_effective: n,
        z,
        p_value,
    })
}

/// Critical-difference q constants (infinite degrees of freedom, already
/// divided by sqrt(2)), indexed by the number of algorithms `k - 2`.
const Q_ALPHA_05: [f64; 19] = [
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354,
    3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
];
const Q_ALPHA_10: [f64; 19] = [
    1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978, 3.030, 3.077, 3.120,
    3.159, 3.196, 3.230, 3.261, 3.291, 3.319,
];

/// Nemenyi critical difference `q_alpha(k) * sqrt(k (k+1) / (6 N))`.
///
/// `alpha` must be 0.05 or 0.10; `k` at most 20 (the embedded table).
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    let table: &[f64] = if (alpha - 0.05).abs() < 1e-12 {
        &Q_ALPHA_05
    } else if (alpha - 0.10).abs() < 1e-12 {
        &Q_ALPHA_10
    } else {
        return Err(Error::config(
            "critical-difference alpha must be 0.05 or 0.10",
        ));
    };
    if !(2..=20).contains(&k) {
        return Err(Error::Config(format!(
            "critical difference tabulated for 2..=20 algorithms, got {k}"
        )));
    }
    if n == 0 {
        return Err(Error::config(
            "critical difference needs at least one problem",
        ));
    }
    let q = table[k - 2];
    Ok(q * (k as f64 * (k as f64 + 1.0) / (6.0 * n as f64)).sqrt())
}

/// Maximal groups of rank-adjacent algorithms whose rank spread is at most
/// `cd` (inclusive). Returned indices refer to the input slice; each group is
/// sorted by rank.
pub fn cd_groups(ranks: &[f64], cd: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_by(|&a, &b| {
        ranks[a]
            .partial_cmp(&ranks[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last_end = 0usize;
    for start in 0..order.len() {
        let mut end = start;
        while end + 1 < order.len() && ranks[order[end + 1]] - ranks[order[start]] <= cd {
            end += 1;
        }
        // keep only maximal intervals: skip when contained in the previous one
        if groups.is_empty() || end > last_end {
            groups.push(order[start..=end].to_vec());
            last_end = end;
        }
    }
    groups
}
