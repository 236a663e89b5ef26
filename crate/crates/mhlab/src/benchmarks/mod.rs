//! Benchmark problems: base test functions composed with shift, rotation and
//! an objective bias, in the CEC 2017 style, plus suite construction.
//!
//! Problems are immutable after construction and safe to share across
//! concurrent runs.

mod base;
mod composite;
mod problem;
mod suite;
mod transform;

pub use base::{all_base_names, base_function, eval_base, BaseFunction, Modality};
pub use composite::{eval_composition, eval_hybrid, CompComponent, CompositionSpec, HybridSpec};
pub use problem::{BenchmarkProblem, Objective};
pub use suite::{
    make_problem, make_suite, make_suite_spec, suite_manifest, ClassCounts, ManifestEntry,
    RotateMode, ShiftMode, SuiteManifest, SuiteSpec,
};
pub use transform::{random_orthogonal, rotation_defect, Transform};
