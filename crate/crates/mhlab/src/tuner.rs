//! Iterated-racing parameter tuner.
//!
//! The loop repeats three steps until the run budget is spent: sample
//! configurations from a per-parameter model, race them over problem
//! instances with rank-based elimination, and contract the model toward the
//! survivors. Scores come from a [`ConfigScorer`], so the tuner works the
//! same over real optimizer runs and synthetic objectives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ParamKind, ParamSet, ParamSpace, ParamValue};
use crate::rng::{Randomness, RngStream};
use crate::stats::{friedman, nemenyi_cd, wilcoxon_signed_rank, ResultMatrix};

/// Anything that can score one configuration on one instance. Lower is
/// better. `seed` makes repeated scoring reproducible.
pub trait ConfigScorer: Sync {
    fn instances(&self) -> usize;
    fn score(&self, params: &ParamSet, instance: usize, seed: u64) -> Result<f64>;
}

/// Per-parameter sampling distributions: truncated normal for numeric
/// parameters, a probability vector for categorical ones. The initial model
/// samples uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingModel {
    pub entries: Vec<ModelEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelEntry {
    Uniform,
    Normal { mean: f64, stdev: f64 },
    Categorical { probs: Vec<f64> },
}

impl SamplingModel {
    /// Uniform-over-the-box initial model for `space`.
    pub fn uniform(space: &ParamSpace) -> Self {
        SamplingModel {
            entries: space
                .defs
                .iter()
                .map(|d| match &d.kind {
                    ParamKind::Cat { choices } => ModelEntry::Categorical {
                        probs: vec![1.0 / choices.len() as f64; choices.len()],
                    },
                    _ => ModelEntry::Uniform,
                })
                .collect(),
        }
    }
}

/// Draw one value for parameter `def` from `entry`, truncated into bounds.
fn sample_value(
    def: &crate::params::ParamDef,
    entry: &ModelEntry,
    rng: &mut dyn Randomness,
) -> ParamValue {
    match (&def.kind, entry) {
        (ParamKind::Real { lo, hi }, ModelEntry::Uniform) => {
            ParamValue::Real(rng.uniform_in(*lo, *hi))
        }
        (ParamKind::Real { lo, hi }, ModelEntry::Normal { mean, stdev }) => {
            let mut v = mean + stdev * rng.normal();
            for _ in 0..16 {
                if v >= *lo && v <= *hi {
                    break;
                }
                v = mean + stdev * rng.normal();
            }
            ParamValue::Real(v.clamp(*lo, *hi))
        }
        (ParamKind::Int { lo, hi }, ModelEntry::Uniform) => {
            let span = (hi - lo + 1) as usize;
            ParamValue::Int(lo + rng.index(span) as i64)
        }
        (ParamKind::Int { lo, hi }, ModelEntry::Normal { mean, stdev }) => {
            let mut v = mean + stdev * rng.normal();
            for _ in 0..16 {
                if v >= *lo as f64 && v <= *hi as f64 {
                    break;
                }
                v = mean + stdev * rng.normal();
            }
            ParamValue::Int((v.round() as i64).clamp(*lo, *hi))
        }
        (ParamKind::Cat { choices }, ModelEntry::Categorical { probs }) => {
            let u = rng.uniform();
            let mut acc = 0.0;
            for (c, p) in choices.iter().zip(probs) {
                acc += p;
                if u < acc {
                    return ParamValue::Cat(c.clone());
                }
            }
            ParamValue::Cat(choices.last().expect("non-empty choices").clone())
        }
        // shape mismatch cannot happen for models built from the same space
        (ParamKind::Cat { choices }, _) => ParamValue::Cat(choices[0].clone()),
        (ParamKind::Real { lo, .. }, ModelEntry::Categorical { .. }) => ParamValue::Real(*lo),
        (ParamKind::Int { lo, .. }, ModelEntry::Categorical { .. }) => ParamValue::Int(*lo),
    }
}

/// Sample `k` configurations; every value lands inside its declared bounds.
pub fn sample_configs(
    model: &SamplingModel,
    space: &ParamSpace,
    k: usize,
    rng: &mut dyn Randomness,
) -> Result<Vec<ParamSet>> {
    if k == 0 {
        return Err(Error::config("cannot sample zero configurations"));
    }
    if model.entries.len() != space.defs.len() {
        return Err(Error::config(
            "sampling model does not match parameter space",
        ));
    }
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut set = ParamSet::new();
        for (def, entry) in space.defs.iter().zip(&model.entries) {
            set.values
                .insert(def.name.clone(), sample_value(def, entry, rng));
        }
        space.validate(&set)?;
        out.push(set);
    }
    Ok(out)
}

/// Contraction of the model toward an elite set.
///
/// Numeric means move to the elite mean; stdevs shrink by `stdev_decay`
/// (from the parameter range on first contact). Categorical probabilities
/// blend halfway toward the elite frequencies.
pub fn update_model(
    model: &SamplingModel,
    space: &ParamSpace,
    elites: &[ParamSet],
    stdev_decay: f64,
) -> Result<SamplingModel> {
    if elites.is_empty() {
        return Err(Error::config(
            "cannot update a sampling model from zero elites",
        ));
    }
    let mut entries = Vec::with_capacity(space.defs.len());
    for (i, def) in space.defs.iter().enumerate() {
        let numeric_range = match &def.kind {
            ParamKind::Real { lo, hi } => Some(hi - lo),
            ParamKind::Int { lo, hi } => Some((hi - lo) as f64),
            ParamKind::Cat { .. } => None,
        };
        let entry = match &def.kind {
            ParamKind::Real { .. } | ParamKind::Int { .. } => {
                let values: Vec<f64> = elites
                    .iter()
                    .map(|e| e.f64(&def.name))
                    .collect::<Result<_>>()?;
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                let prev_stdev = match &model.entries[i] {
                    ModelEntry::Normal { stdev, .. } => *stdev,
                    _ => numeric_range.unwrap_or(1.0) / 2.0,
                };
                ModelEntry::Normal {
                    mean,
                    stdev: (prev_stdev * stdev_decay).max(1e-12),
                }
            }
            ParamKind::Cat { choices } => {
                let mut freq = vec![0.0; choices.len()];
                for e in elites {
                    let v = e.str(&def.name)?;
                    if let Some(pos) = choices.iter().position(|c| c == v) {
                        freq[pos] += 1.0;
                    }
                }
                let total: f64 = freq.iter().sum();
                let prev = match &model.entries[i] {
                    ModelEntry::Categorical { probs } => probs.clone(),
                    _ => vec![1.0 / choices.len() as f64; choices.len()],
                };
                let probs: Vec<f64> = prev
                    .iter()
                    .zip(&freq)
                    .map(|(p, f)| 0.5 * p + 0.5 * f / total.max(1.0))
                    .collect();
                let norm: f64 = probs.iter().sum();
                ModelEntry::Categorical {
                    probs: probs.iter().map(|p| p / norm).collect(),
                }
            }
        };
        entries.push(entry);
    }
    Ok(SamplingModel { entries })
}

/// One candidate's standing inside a race.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RaceEntry {
    pub params: ParamSet,
    pub scores: Vec<f64>,
    pub eliminated_at: Option<usize>,
}

/// Full race record: per-block scores and the elimination history.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RaceState {
    pub entries: Vec<RaceEntry>,
    pub blocks: usize,
    pub runs_used: u64,
}

impl RaceState {
    pub fn survivors(&self) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&i| self.entries[i].eliminated_at.is_none())
            .collect()
    }

    /// Mean score of an entry over the blocks it completed.
    pub fn mean_score(&self, i: usize) -> f64 {
        let s = &self.entries[i].scores;
        if s.is_empty() {
            f64::INFINITY
        } else {
            s.iter().sum::<f64>() / s.len() as f64
        }
    }

    /// Surviving entry with the lowest mean score.
    pub fn best_survivor(&self) -> Option<usize> {
        self.survivors().into_iter().min_by(|&a, &b| {
            self.mean_score(a)
                .partial_cmp(&self.mean_score(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RaceConfig {
    pub elimination_alpha: f64,
    /// Hard cap on scoring runs the race may spend.
    pub max_runs: u64,
    /// Blocks to complete before the first elimination test.
    pub min_blocks: usize,
    pub seed: u64,
}

impl Default for RaceConfig {
    fn default() -> Self {
        RaceConfig {
            elimination_alpha: 0.05,
            max_runs: 500,
            min_blocks: 2,
            seed: 0,
        }
    }
}

/// Race `configs` over the scorer's instances.
///
/// After each block every survivor has one more score; once `min_blocks`
/// blocks are in, a Friedman test (or Wilcoxon for two survivors) runs at
/// `elimination_alpha`, and on significance the survivors whose average rank
/// exceeds the best one's by more than the Nemenyi critical difference are
/// eliminated. The race stops at one survivor or when `max_runs` is spent.
pub fn race(
    scorer: &dyn ConfigScorer,
    configs: Vec<ParamSet>,
    cfg: RaceConfig,
) -> Result<RaceState> {
    if configs.len() < 2 {
        return Err(Error::config("a race needs at least two configurations"));
    }
    if scorer.instances() == 0 {
        return Err(Error::config("a race needs at least one instance"));
    }
    if cfg.max_runs < 2 * configs.len() as u64 {
        return Err(Error::Config(format!(
            "race budget of {} runs cannot cover two blocks of {} configurations",
            cfg.max_runs,
            configs.len()
        )));
    }
    let mut state = RaceState {
        entries: configs
            .into_iter()
            .map(|params| RaceEntry {
                params,
                scores: Vec::new(),
                eliminated_at: None,
            })
            .collect(),
        blocks: 0,
        runs_used: 0,
    };

    loop {
        let survivors = state.survivors();
        if survivors.len() <= 1 {
            break;
        }
        if state.runs_used + survivors.len() as u64 > cfg.max_runs {
            break;
        }
        let instance = state.blocks % scorer.instances();
        let block_seed = crate::rng::mix_words(&[cfg.seed, state.blocks as u64 + 1]);
        for &i in &survivors {
            let s = scorer.score(&state.entries[i].params, instance, block_seed)?;
            if !s.is_finite() {
                return Err(Error::Contract(format!(
                    "scorer returned non-finite score {s} for configuration {i}"
                )));
            }
            state.entries[i].scores.push(s);
            state.runs_used += 1;
        }
        state.blocks += 1;

        if state.blocks < cfg.min_blocks {
            continue;
        }
        eliminate(&mut state, cfg.elimination_alpha)?;
    }
    Ok(state)
}

/// Rank-based elimination over the completed blocks.
fn eliminate(state: &mut RaceState, alpha: f64) -> Result<()> {
    let survivors = state.survivors();
    let k = survivors.len();
    let blocks = state.blocks;
    if k < 2 || blocks < 2 {
        return Ok(());
    }
    if k == 2 {
        let a = &state.entries[survivors[0]].scores;
        let b = &state.entries[survivors[1]].scores;
        match wilcoxon_signed_rank(a, b) {
            Ok(rep) if rep.p_value <= alpha => {
                let worse = if rep.direction() >= 0 {
                    survivors[0]
                } else {
                    survivors[1]
                };
                state.entries[worse].eliminated_at = Some(blocks);
            }
            _ => {}
        }
        return Ok(());
    }
    let matrix = ResultMatrix::new(
        survivors.iter().map(|i| format!("cfg{i}")).collect(),
        (0..blocks).map(|b| format!("block{b}")).collect(),
        (0..blocks)
            .map(|b| {
                survivors
                    .iter()
                    .map(|&i| state.entries[i].scores[b])
                    .collect()
            })
            .collect(),
    )?;
    let rep = friedman(&matrix)?;
    if rep.p_value > alpha {
        return Ok(());
    }
    let cd = nemenyi_cd(k, blocks, if alpha <= 0.075 { 0.05 } else { 0.10 })?;
    let best_rank = rep
        .average_ranks
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    for (pos, &i) in survivors.iter().enumerate() {
        if rep.average_ranks[pos] - best_rank > cd {
            state.entries[i].eliminated_at = Some(blocks);
        }
    }
    Ok(())
}

/// Audit record of one tuning session.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TuneAudit {
    pub iterations: Vec<RaceState>,
    pub runs_used: u64,
    pub best_params: ParamSet,
    pub best_score: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct TuneConfig {
    /// Total scoring runs for the whole session.
    pub total_budget: u64,
    pub configs_per_iteration: usize,
    pub elites: usize,
    pub stdev_decay: f64,
    pub elimination_alpha: f64,
    pub seed: u64,
}

impl Default for TuneConfig {
    fn default() -> Self {
        TuneConfig {
            total_budget: 2_000,
            configs_per_iteration: 8,
            elites: 2,
            stdev_decay: 0.9,
            elimination_alpha: 0.05,
            seed: 0,
        }
    }
}

/// Run the full sample / race / contract loop and return the best surviving
/// configuration plus the audit log of every race.
pub fn tune(
    scorer: &dyn ConfigScorer,
    space: &ParamSpace,
    cfg: TuneConfig,
) -> Result<(ParamSet, TuneAudit)> {
    let k = cfg.configs_per_iteration.max(2);
    if cfg.total_budget < 2 * k as u64 {
        return Err(Error::Config(format!(
            "tuning budget of {} runs is too small for one race of {k} configurations",
            cfg.total_budget
        )));
    }
    let mut rng = RngStream::new(cfg.seed).substream("tuner");
    let mut model = SamplingModel::uniform(space);
    let mut audit = TuneAudit {
        iterations: Vec::new(),
        runs_used: 0,
        best_params: space.defaults(),
        best_score: f64::INFINITY,
    };
    let mut elites: Vec<ParamSet> = Vec::new();
    let mut iteration = 0u64;

    while audit.runs_used + 2 * k as u64 <= cfg.total_budget {
        let fresh = sample_configs(&model, space, k - elites.len().min(k - 1), &mut rng)?;
        let mut configs = elites.clone();
        configs.extend(fresh);
        configs.truncate(k);

        let race_budget = ((cfg.total_budget - audit.runs_used) / 4).max(2 * k as u64);
        let state = race(
            scorer,
            configs,
            RaceConfig {
                elimination_alpha: cfg.elimination_alpha,
                max_runs: race_budget.min(cfg.total_budget - audit.runs_used),
                min_blocks: 2,
                seed: crate::rng::mix_words(&[cfg.seed, iteration + 101]),
            },
        )?;
        audit.runs_used += state.runs_used;

        // track the best configuration ever raced, by mean score
        let mut order: Vec<usize> = state.survivors();
        order.sort_by(|&a, &b| {
            state
                .mean_score(a)
                .partial_cmp(&state.mean_score(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        if let Some(&best) = order.first() {
            let score = state.mean_score(best);
            if score < audit.best_score {
                audit.best_score = score;
                audit.best_params = state.entries[best].params.clone();
            }
        }
        elites = order
            .iter()
            .take(cfg.elites.max(1))
            .map(|&i| state.entries[i].params.clone())
            .collect();
        audit.iterations.push(state);
        if !elites.is_empty() {
            model = update_model(&model, space, &elites, cfg.stdev_decay)?;
        }
        iteration += 1;
    }

    if audit.iterations.is_empty() {
        return Err(Error::config(
            "tuning budget spent before any race completed",
        ));
    }
    Ok((audit.best_params.clone(), audit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{cat, int, real};

    struct Quadratic;

    impl ConfigScorer for Quadratic {
        fn instances(&self) -> usize {
            4
        }
        fn score(&self, params: &ParamSet, _instance: usize, _seed: u64) -> Result<f64> {
            let theta = params.f64("theta")?;
            Ok((theta - 0.3).powi(2))
        }
    }

    fn theta_space() -> ParamSpace {
        ParamSpace::new(vec![real("theta", 0.0, 1.0, 0.5)])
    }

    #[test]
    fn degenerate_stdev_samples_the_mean() {
        let space = theta_space();
        let model = SamplingModel {
            entries: vec![ModelEntry::Normal {
                mean: 0.25,
                stdev: 0.0,
            }],
        };
        let mut rng = RngStream::new(1);
        for c in sample_configs(&model, &space, 20, &mut rng).unwrap() {
            assert_eq!(c.f64("theta").unwrap(), 0.25);
        }
    }

    #[test]
    fn uniform_model_covers_the_box() {
        let space = theta_space();
        let model = SamplingModel::uniform(&space);
        let mut rng = RngStream::new(2);
        let mut deciles = [0usize; 10];
        for c in sample_configs(&model, &space, 2_000, &mut rng).unwrap() {
            let v = c.f64("theta").unwrap();
            assert!((0.0..=1.0).contains(&v));
            deciles[(v * 10.0).min(9.0) as usize] += 1;
        }
        assert!(deciles.iter().all(|&d| d > 100), "coverage {deciles:?}");
    }

    #[test]
    fn certain_categorical_always_returns_its_choice() {
        let space = ParamSpace::new(vec![cat("mode", &["x", "y", "z"], "x")]);
        let model = SamplingModel {
            entries: vec![ModelEntry::Categorical {
                probs: vec![0.0, 1.0, 0.0],
            }],
        };
        let mut rng = RngStream::new(3);
        for c in sample_configs(&model, &space, 50, &mut rng).unwrap() {
            assert_eq!(c.str("mode").unwrap(), "y");
        }
    }

    #[test]
    fn update_moves_mean_to_unanimous_elites() {
        let space = theta_space();
        let model = SamplingModel::uniform(&space);
        let elites = vec![
            ParamSet::new().with_real("theta", 0.4),
            ParamSet::new().with_real("theta", 0.4),
        ];
        let updated = update_model(&model, &space, &elites, 0.9).unwrap();
        match &updated.entries[0] {
            ModelEntry::Normal { mean, stdev } => {
                assert_eq!(*mean, 0.4);
                assert!((stdev - 0.45).abs() < 1e-12); // (1-0)/2 * 0.9
            }
            other => panic!("unexpected entry {other:?}"),
        }
    }

    #[test]
    fn decay_one_keeps_stdev_and_repeats_shrink_monotonically() {
        let space = theta_space();
        let mut model = update_model(
            &SamplingModel::uniform(&space),
            &space,
            &[ParamSet::new().with_real("theta", 0.5)],
            1.0,
        )
        .unwrap();
        let first = match &model.entries[0] {
            ModelEntry::Normal { stdev, .. } => *stdev,
            _ => unreachable!(),
        };
        assert_eq!(first, 0.5); // unchanged from the range half-width
        let mut last = first;
        for _ in 0..5 {
            model = update_model(
                &model,
                &space,
                &[ParamSet::new().with_real("theta", 0.5)],
                0.8,
            )
            .unwrap();
            let s = match &model.entries[0] {
                ModelEntry::Normal { stdev, .. } => *stdev,
                _ => unreachable!(),
            };
            assert!(s < last);
            last = s;
        }
    }

    #[test]
    fn identical_configs_race_without_elimination() {
        let configs = vec![
            ParamSet::new().with_real("theta", 0.3),
            ParamSet::new().with_real("theta", 0.3),
        ];
        let state = race(
            &Quadratic,
            configs,
            RaceConfig {
                max_runs: 40,
                ..RaceConfig::default()
            },
        )
        .unwrap();
        assert_eq!(state.survivors().len(), 2);
    }

    #[test]
    fn dominant_config_survives_grid_race() {
        let grid: Vec<ParamSet> = (0..=10)
            .map(|i| ParamSet::new().with_real("theta", i as f64 / 10.0))
            .collect();
        let state = race(
            &Quadratic,
            grid,
            RaceConfig {
                max_runs: 400,
                ..RaceConfig::default()
            },
        )
        .unwrap();
        let best = state.best_survivor().unwrap();
        let theta = state.entries[best].params.f64("theta").unwrap();
        assert!(
            (theta - 0.3).abs() <= 0.1,
            "survivor theta {theta} too far from 0.3"
        );
    }

    #[test]
    fn zero_budget_race_is_config_error() {
        let configs = vec![
            ParamSet::new().with_real("theta", 0.1),
            ParamSet::new().with_real("theta", 0.2),
        ];
        let err = race(
            &Quadratic,
            configs,
            RaceConfig {
                max_runs: 0,
                ..RaceConfig::default()
            },
        );
        assert!(err.is_err());
    }

    struct PopSizeLoss;

    impl ConfigScorer for PopSizeLoss {
        fn instances(&self) -> usize {
            3
        }
        fn score(&self, params: &ParamSet, _instance: usize, _seed: u64) -> Result<f64> {
            Ok((params.usize("pop_size")? as f64 - 40.0).abs())
        }
    }

    #[test]
    fn tuner_recovers_synthetic_pop_size_optimum() {
        // exhaustive-sweep oracle: the loss is uniquely minimized at 40
        let oracle_best = (4..=200)
            .min_by_key(|p| (*p as i64 - 40).unsigned_abs())
            .unwrap();
        assert_eq!(oracle_best, 40);

        let space = ParamSpace::new(vec![int("pop_size", 4, 200, 30)]);
        let mut hits = 0;
        for seed in 0..10u64 {
            let (best, audit) = tune(
                &PopSizeLoss,
                &space,
                TuneConfig {
                    total_budget: 2_000,
                    seed,
                    ..TuneConfig::default()
                },
            )
            .unwrap();
            assert!(audit.runs_used <= 2_000);
            let v = best.usize("pop_size").unwrap() as i64;
            if (v - 40).abs() <= 5 {
                hits += 1;
            }
        }
        assert!(
            hits >= 9,
            "tuner recovered pop_size in only {hits}/10 sessions"
        );
    }

    #[test]
    fn tune_is_deterministic_in_the_seed() {
        let space = theta_space();
        let run = |seed| {
            tune(
                &Quadratic,
                &space,
                TuneConfig {
                    total_budget: 300,
                    seed,
                    ..TuneConfig::default()
                },
            )
            .unwrap()
            .0
        };
        assert_eq!(run(9), run(9));
    }

    #[test]
    fn budget_accounting_never_exceeds_total() {
        let space = theta_space();
        for budget in [40u64, 100, 333] {
            let (_, audit) = tune(
                &Quadratic,
                &space,
                TuneConfig {
                    total_budget: budget,
                    seed: 4,
                    ..TuneConfig::default()
                },
            )
            .unwrap();
            assert!(audit.runs_used <= budget, "{} > {budget}", audit.runs_used);
        }
    }

    #[test]
    fn too_small_budget_is_config_error() {
        let space = theta_space();
        assert!(tune(
            &Quadratic,
            &space,
            TuneConfig {
                total_budget: 10,
                ..TuneConfig::default()
            }
        )
        .is_err());
    }
}
