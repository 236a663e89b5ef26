//! A laboratory for population-based metaheuristics.
//!
//! The crate bundles everything needed to run reproducible black-box
//! optimization experiments end to end:
//!
//! * a problem/population model with exact evaluation-budget accounting
//!   ([`budget`], [`space`], [`population`], [`eval`]),
//! * a shiftable/rotatable benchmark suite in the CEC style ([`benchmarks`]),
//! * twelve equation-level optimizers behind one generation-step trait
//!   ([`algorithms`]),
//! * per-run instrumentation: convergence, diversity and the
//!   exploration/exploitation split ([`metrics`]),
//! * an iterated-racing parameter tuner ([`tuner`]),
//! * Friedman / Wilcoxon / critical-difference comparison machinery
//!   ([`stats`]),
//! * experiment orchestration with seeded plans, resume and CSV/SVG export
//!   ([`experiments`]).
//!
//! Everything downstream of a `(algorithm, params, problem, seed)` tuple is
//! deterministic, including across thread counts.

pub mod algorithms;
pub mod benchmarks;
pub mod budget;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod metrics;
pub mod params;
pub mod population;
pub mod rng;
pub mod runner;
pub mod space;
pub mod stats;
pub mod tuner;

pub use budget::Budget;
pub use error::{Error, Result};
pub use eval::Evaluator;
pub use population::{Individual, Population};
pub use rng::{Randomness, RngStream};
pub use space::{RepairPolicy, SearchSpace};
