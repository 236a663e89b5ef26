//! Deterministic suite construction and the suite manifest.

use serde::{Deserialize, Serialize};

use super::base::{base_function, BaseFunction, Modality};
use super::composite::{CompComponent, CompositionSpec, HybridSpec};
use super::problem::{BenchmarkProblem, Objective};
use super::transform::{random_orthogonal, Transform};
use crate::error::{Error, Result};
use crate::rng::{Randomness, RngStream};
use crate::space::SearchSpace;

/// Shift sampling range: optima stay well inside the `[-100, 100]` box so
/// boundary clamping can never masquerade as convergence.
const SHIFT_RANGE: f64 = 80.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftMode {
    None,
    RandomInterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotateMode {
    None,
    RandomOrthogonal,
}

/// Problems per class, ordered unimodal, multimodal, hybrid, composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub unimodal: usize,
    pub multimodal: usize,
    pub hybrid: usize,
    pub composition: usize,
}

impl ClassCounts {
    /// The full 30-problem layout: 3 + 7 + 10 + 10.
    pub fn standard() -> Self {
        ClassCounts {
            unimodal: 3,
            multimodal: 7,
            hybrid: 10,
            composition: 10,
        }
    }

    pub fn total(&self) -> usize {
        self.unimodal + self.multimodal + self.hybrid + self.composition
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub dim: usize,
    pub counts: ClassCounts,
    pub shifted: bool,
    pub seed: u64,
}

/// Build a single problem from a base function.
///
/// Interior shifts are drawn uniformly in `[-80, 80]^dim`; rotations are
/// seeded random orthogonal matrices; `f* = 100 * index`.
pub fn make_problem(
    base: BaseFunction,
    dim: usize,
    shift_mode: ShiftMode,
    rotate: RotateMode,
    index: usize,
    rng: &mut dyn Randomness,
) -> Result<BenchmarkProblem> {
    if dim == 0 {
        return Err(Error::config("problem dimension must be at least 1"));
    }
    let objective = Objective::Base(base);
    assemble(objective, dim, shift_mode, rotate, index, rng)
}

fn assemble(
    objective: Objective,
    dim: usize,
    shift_mode: ShiftMode,
    rotate: RotateMode,
    index: usize,
    rng: &mut dyn Randomness,
) -> Result<BenchmarkProblem> {
    // always draw the shift so paired shifted/non-shifted suites consume
    // identical random streams and end up with identical rotations
    let drawn: Vec<f64> = (0..dim)
        .map(|_| rng.uniform_in(-SHIFT_RANGE, SHIFT_RANGE))
        .collect();
    let shift = match shift_mode {
        ShiftMode::RandomInterior => drawn,
        ShiftMode::None => vec![0.0; dim],
    };
    let rotation = match rotate {
        RotateMode::RandomOrthogonal => Some(random_orthogonal(dim, rng)),
        RotateMode::None => None,
    };
    let f_star = 100.0 * index as f64;
    let transform = Transform::new(shift, rotation, f_star)?;
    BenchmarkProblem::new(
        objective,
        transform,
        SearchSpace::symmetric(dim, 100.0),
        index,
        f_star,
    )
}

const UNIMODAL_POOL: &[&str] = &["sphere", "bent-cigar", "zakharov", "schwefel", "elliptic"];
const MULTIMODAL_POOL: &[&str] = &["rastrigin", "ackley", "griewank", "rosenbrock", "levy"];
const ALL_POOL: &[&str] = &[
    "sphere",
    "bent-cigar",
    "zakharov",
    "schwefel",
    "elliptic",
    "rastrigin",
    "ackley",
    "griewank",
    "rosenbrock",
    "levy",
];

fn hybrid_objective(dim: usize, rng: &mut dyn Randomness) -> Result<Objective> {
    let n_seg = if dim >= 3 { 2 + rng.index(2) } else { 1 }; // 2 or 3 segments
    let segments: Vec<(BaseFunction, f64)> = (0..n_seg)
        .map(|_| {
            let name = ALL_POOL[rng.index(ALL_POOL.len())];
            Ok((base_function(name)?, 1.0))
        })
        .collect::<Result<_>>()?;
    // deal dimensions round-robin after a seeded rotation of the start point
    let start = rng.index(n_seg);
    let assignment: Vec<usize> = (0..dim).map(|j| (start + j) % n_seg).collect();
    Ok(Objective::Hybrid(HybridSpec::new(segments, assignment)?))
}

fn composition_objective(dim: usize, rng: &mut dyn Randomness) -> Result<Objective> {
    let n_comp = 3.min(dim.max(1));
    let sigmas = [10.0, 20.0, 30.0];
    let biases = [0.0, 50.0, 100.0];
    let mut components = Vec::with_capacity(n_comp);
    for k in 0..n_comp {
        let name = ALL_POOL[rng.index(ALL_POOL.len())];
        let delta = if k == 0 {
            vec![0.0; dim] // anchors the composition optimum at the origin
        } else {
            (0..dim).map(|_| rng.uniform_in(-60.0, 60.0)).collect()
        };
        components.push(CompComponent {
            base: base_function(name)?,
            delta,
            sigma: sigmas[k % sigmas.len()],
            bias: biases[k % biases.len()],
        });
    }
    Ok(Objective::Composition(CompositionSpec::new(components)?))
}

/// Deterministic suite for `spec`; classes ordered unimodal, multimodal,
/// hybrid, composition; indices 1..=total; `f* = 100 * index`.
///
/// Suites built from the same seed with `shifted` toggled agree on every
/// base, partition and rotation and differ only in the shift vectors.
pub fn make_suite_spec(spec: &SuiteSpec) -> Result<Vec<BenchmarkProblem>> {
    let root = RngStream::new(spec.seed);
    let shift_mode = if spec.shifted {
        ShiftMode::RandomInterior
    } else {
        ShiftMode::None
    };
    let mut out = Vec::with_capacity(spec.counts.total());
    let mut index = 0usize;
    let mut push = |objective: Objective, idx: usize, rng: &mut RngStream| -> Result<()> {
        out.push(assemble(
            objective,
            spec.dim,
            shift_mode,
            RotateMode::RandomOrthogonal,
            idx,
            rng,
        )?);
        Ok(())
    };
    for k in 0..spec.counts.unimodal {
        index += 1;
        let mut rng = root.substream_indexed("problem", index as u64);
        let base = base_function(UNIMODAL_POOL[k % UNIMODAL_POOL.len()])?;
        debug_assert_eq!(base.modality, Modality::Unimodal);
        push(Objective::Base(base), index, &mut rng)?;
    }
    for k in 0..spec.counts.multimodal {
        index += 1;
        let mut rng = root.substream_indexed("problem", index as u64);
        let base = base_function(MULTIMODAL_POOL[k % MULTIMODAL_POOL.len()])?;
        push(Objective::Base(base), index, &mut rng)?;
    }
    for _ in 0..spec.counts.hybrid {
        index += 1;
        let mut rng = root.substream_indexed("problem", index as u64);
        let obj = hybrid_objective(spec.dim, &mut rng)?;
        push(obj, index, &mut rng)?;
    }
    for _ in 0..spec.counts.composition {
        index += 1;
        let mut rng = root.substream_indexed("problem", index as u64);
        let obj = composition_objective(spec.dim, &mut rng)?;
        push(obj, index, &mut rng)?;
    }
    Ok(out)
}

/// Convenience wrapper over [`make_suite_spec`].
pub fn make_suite(
    dim: usize,
    counts: ClassCounts,
    shifted: bool,
    seed: u64,
) -> Result<Vec<BenchmarkProblem>> {
    make_suite_spec(&SuiteSpec {
        dim,
        counts,
        shifted,
        seed,
    })
}

/// One manifest record per problem; the embedded [`SuiteSpec`] makes the
/// whole suite reconstructible byte-exactly from the seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub spec: SuiteSpec,
    pub problems: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub objective: String,
    pub dim: usize,
    pub f_star: f64,
    pub shift: Vec<f64>,
    pub rotated: bool,
}

pub fn suite_manifest(spec: &SuiteSpec, problems: &[BenchmarkProblem]) -> SuiteManifest {
    SuiteManifest {
        spec: spec.clone(),
        problems: problems
            .iter()
            .map(|p| ManifestEntry {
                index: p.index(),
                objective: p.describe(),
                dim: p.dim(),
                f_star: p.f_star(),
                shift: p.optimum_position().to_vec(),
                rotated: p.transform().rotation.is_some(),
            })
            .collect(),
    }
}
