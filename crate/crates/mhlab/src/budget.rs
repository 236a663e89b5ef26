//! Function-evaluation budget with exact accounting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default budget multiplier: `max_evals = 10_000 * dim`.
pub const DEFAULT_BUDGET_MULTIPLIER: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    max_evals: u64,
    used_evals: u64,
}

impl Budget {
    pub fn new(max_evals: u64) -> Result<Self> {
        if max_evals == 0 {
            return Err(Error::config("budget must allow at least one evaluation"));
        }
        Ok(Budget {
            max_evals,
            used_evals: 0,
        })
    }

    /// The standard protocol budget for a `dim`-dimensional problem.
    pub fn for_dim(dim: usize) -> Self {
        Budget {
            max_evals: DEFAULT_BUDGET_MULTIPLIER * dim as u64,
            used_evals: 0,
        }
    }

    pub fn max_evals(&self) -> u64 {
        self.max_evals
    }

    pub fn used(&self) -> u64 {
        self.used_evals
    }

    pub fn remaining(&self) -> u64 {
        self.max_evals - self.used_evals
    }

    pub fn exhausted(&self) -> bool {
        self.used_evals >= self.max_evals
    }

    /// Whether `k` more evaluations fit.
    pub fn can_afford(&self, k: u64) -> bool {
        self.remaining() >= k
    }

    /// Account for one evaluation; fails (without counting) when spent.
    pub fn consume_one(&mut self) -> Result<()> {
        if self.exhausted() {
            return Err(Error::BudgetExhausted {
                used: self.used_evals,
            });
        }
        self.used_evals += 1;
        Ok(())
    }
}
