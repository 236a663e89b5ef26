//! The optimizer registry: twelve runnable population algorithms, reference
//! entries for four external methods whose internals are not reproduced
//! here, and two calibration toys.
//!
//! Algorithm ids and parameter names appear verbatim in config files and CSV
//! output; renames are breaking changes.

pub mod ao;
pub mod common;
pub mod de;
pub mod ebcm;
pub mod eo;
pub mod gsk;
pub mod hgsa;
pub mod igoa;
pub mod imfo;
pub mod mfla;
pub mod mpa;
pub mod msca;
pub mod sdcs;
pub mod toys;

use serde::{Deserialize, Serialize};

use crate::benchmarks::BenchmarkProblem;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::metrics::{Recorder, RunTrace};
use crate::params::{self, ParamSet, ParamSpace};
use crate::rng::RngStream;
use crate::runner::{run_optimizer_loop, PopulationOptimizer};

/// Inspiration-family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Taxonomy {
    Evolutionary,
    SwarmHuman,
    SwarmNonHuman,
    PhysicsChemistry,
}

impl Taxonomy {
    pub fn label(&self) -> &'static str {
        match self {
            Taxonomy::Evolutionary => "EA",
            Taxonomy::SwarmHuman => "SIA-human",
            Taxonomy::SwarmNonHuman => "SIA-nonhuman",
            Taxonomy::PhysicsChemistry => "physics-chemistry",
        }
    }
}

/// Whether an entry can actually be run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Availability {
    /// Fully implemented optimizer.
    Implemented,
    /// Calibration helper, excluded from the comparison roster.
    Toy,
    /// Known by name only; building it is an error.
    External,
}

#[derive(Debug, Clone)]
pub struct AlgorithmSpec {
    pub id: &'static str,
    pub display_name: &'static str,
    pub taxonomy: Taxonomy,
    pub availability: Availability,
    pub params: ParamSpace,
}

impl AlgorithmSpec {
    pub fn defaults(&self) -> ParamSet {
        self.params.defaults()
    }

    /// Defaults overlaid with `overrides`, validated against the space.
    pub fn materialize(&self, overrides: &ParamSet) -> Result<ParamSet> {
        self.params.materialize(overrides)
    }

    /// A shipped preset: `default` or one of the `tuned-10/30/50` columns.
    /// Algorithms without a tuned row fall back to their defaults.
    pub fn preset(&self, name: &str) -> Result<ParamSet> {
        match name {
            "default" => Ok(self.defaults()),
            "tuned-10" | "tuned-30" | "tuned-50" => {
                let dim: u32 = name.trim_start_matches("tuned-").parse().unwrap();
                let mut set = self.defaults();
                if let Some(tuned) = tuned_preset(self.id, dim) {
                    for (k, v) in tuned.values {
                        set.values.insert(k, v);
                    }
                }
                self.params.validate(&set)?;
                Ok(set)
            }
            other => Err(Error::Config(format!(
                "unknown preset `{other}` (expected default, tuned-10, tuned-30, tuned-50)"
            ))),
        }
    }

    /// Instantiate the optimizer behind this entry.
    pub fn build(&self, set: &ParamSet) -> Result<Box<dyn PopulationOptimizer>> {
        if self.availability == Availability::External {
            return Err(Error::NotImplemented(self.id.to_string()));
        }
        let full = self.materialize(set)?;
        Ok(match self.id {
            "de" => Box::new(de::De::new(de::DeParams::from_set(&full)?)),
            "ebcm" => Box::new(ebcm::Ebcm::new(ebcm::EbcmParams::from_set(&full)?)),
            "sdcs" => Box::new(sdcs::Sdcs::new(sdcs::SdcsParams::from_set(&full)?)),
            "msca" => Box::new(msca::Msca::new(msca::MscaParams::from_set(&full)?)),
            "imfo" => Box::new(imfo::Imfo::new(imfo::ImfoParams::from_set(&full)?)),
            "ao" => Box::new(ao::Ao::new(ao::AoParams::from_set(&full)?)),
            "igoa" => Box::new(igoa::Igoa::new(igoa::IgoaParams::from_set(&full)?)),
            "hgsa" => Box::new(hgsa::Hgsa::new(hgsa::HgsaParams::from_set(&full)?)),
            "mfla" => Box::new(mfla::Mfla::new(mfla::MflaParams::from_set(&full)?)),
            "gsk" => Box::new(gsk::Gsk::new(gsk::GskParams::from_set(&full)?)),
            "mpa" => Box::new(mpa::Mpa::new(mpa::MpaParams::from_set(&full)?)),
            "eo" => Box::new(eo::Eo::new(eo::EoParams::from_set(&full)?)),
            "origin-magnet" => Box::new(toys::OriginMagnet::from_set(&full)?),
            "random-search" => Box::new(toys::RandomSearch::from_set(&full)?),
            other => return Err(Error::NotImplemented(other.to_string())),
        })
    }
}

fn pop_size(default: i64) -> params::ParamDef {
    params::int("pop_size", 4, 256, default)
}

/// Every registry entry, implemented algorithms first.
pub fn registry() -> Vec<AlgorithmSpec> {
    use Availability::*;
    use Taxonomy::*;
    vec![
        AlgorithmSpec {
            id: "de",
            display_name: "Differential evolution",
            taxonomy: Evolutionary,
            availability: Implemented,
            params: ParamSpace::new(vec![
                params::int("pop_size", 6, 256, 50),
                params::real("f", 0.0, 1.0, 0.5),
                params::real("cr", 0.0, 1.0, 0.9),
                params::cat(
                    "strategy",
                    &[
                        "rand/1",
                        "best/1",
                        "best/2",
                        "rand/2",
                        "target-to-best/1",
                        "current-to-rand/1",
                    ],
                    "rand/1",
                ),
                params::cat("crossover", &["binomial", "exponential"], "binomial"),
            ]),
        },
        AlgorithmSpec {
            id: "ebcm",
            display_name: "Butterfly optimizer with criss-cross modification",
            taxonomy: SwarmNonHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                params::int("pop_size", 8, 256, 50),
                params::real("f", 0.0, 2.0, 0.5),
            ]),
        },
        AlgorithmSpec {
            id: "sdcs",
            display_name: "Snap-drift cuckoo search",
            taxonomy: SwarmNonHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(25),
                params::real("omega", 0.0, 1.0, 0.5),
                params::real("j", 0.0, 1.0, 0.2),
                params::real("a0", 0.0, 2.0, 0.1),
                params::real("beta", 1.1, 1.99, 1.5),
            ]),
        },
        AlgorithmSpec {
            id: "msca",
            display_name: "Multi-strategy sine cosine algorithm",
            taxonomy: PhysicsChemistry,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(30),
                params::real("a", 0.1, 4.0, 2.0),
                params::real("p_c", 0.0, 1.0, 0.8),
                params::real("mu_chaos", 2.0, 4.0, 4.0),
            ]),
        },
        AlgorithmSpec {
            id: "imfo",
            display_name: "Improved moth-flame optimization",
            taxonomy: SwarmNonHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(100),
                params::int("b", 1, 5, 1),
                params::real("p", 0.0, 1.0, 0.5),
            ]),
        },
        AlgorithmSpec {
            id: "ao",
            display_name: "Aquila optimizer",
            taxonomy: SwarmNonHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(25),
                params::real("alpha", 0.0, 1.0, 0.1),
                params::real("delta", 0.0, 1.0, 0.1),
            ]),
        },
        AlgorithmSpec {
            id: "igoa",
            display_name: "Improved grasshopper optimization algorithm",
            taxonomy: SwarmNonHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(30),
                params::real("cmax", 0.1, 2.0, 1.0),
                params::real("cmin", 1e-6, 0.1, 1e-5),
                params::real("beta", 1.1, 1.99, 1.5),
            ]),
        },
        AlgorithmSpec {
            id: "hgsa",
            display_name: "Hyperbolic gravitational search algorithm",
            taxonomy: PhysicsChemistry,
            availability: Implemented,
            params: ParamSpace::new(vec![pop_size(30), params::real("g0", 1.0, 500.0, 100.0)]),
        },
        AlgorithmSpec {
            id: "mfla",
            display_name: "Memetic frog leaping algorithm",
            taxonomy: SwarmNonHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                params::int("memeplexes", 1, 16, 4),
                params::int("memeplex_size", 2, 32, 5),
                params::real("beta", 0.0, 2.0, 0.6),
            ]),
        },
        AlgorithmSpec {
            id: "gsk",
            display_name: "Gaining-sharing knowledge algorithm",
            taxonomy: SwarmHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(100),
                params::real("p", 0.01, 0.5, 0.1),
                params::real("k_f", 0.0, 1.0, 0.5),
                params::real("k_r", 0.0, 1.0, 0.9),
                params::real("k", 1.0, 20.0, 10.0),
            ]),
        },
        AlgorithmSpec {
            id: "mpa",
            display_name: "Marine predators algorithm",
            taxonomy: SwarmNonHuman,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(25),
                params::real("p", 0.05, 2.0, 0.5),
                params::real("fads", 0.0, 1.0, 0.2),
            ]),
        },
        AlgorithmSpec {
            id: "eo",
            display_name: "Equilibrium optimizer",
            taxonomy: PhysicsChemistry,
            availability: Implemented,
            params: ParamSpace::new(vec![
                pop_size(30),
                params::real("a1", 0.5, 3.0, 2.0),
                params::real("a2", 0.5, 2.0, 1.0),
                params::real("gp", 0.0, 1.0, 0.5),
            ]),
        },
        AlgorithmSpec {
            id: "origin-magnet",
            display_name: "Origin magnet (bias-audit calibration toy)",
            taxonomy: PhysicsChemistry,
            availability: Toy,
            params: ParamSpace::new(vec![pop_size(10)]),
        },
        AlgorithmSpec {
            id: "random-search",
            display_name: "Uniform random search (bias-audit calibration toy)",
            taxonomy: Evolutionary,
            availability: Toy,
            params: ParamSpace::new(vec![pop_size(10)]),
        },
        AlgorithmSpec {
            id: "hses",
            display_name: "Hybrid sampling evolution strategy",
            taxonomy: Evolutionary,
            availability: External,
            params: ParamSpace::default(),
        },
        AlgorithmSpec {
            id: "nlshade",
            display_name: "Nearest-neighbor LSHADE variant",
            taxonomy: Evolutionary,
            availability: External,
            params: ParamSpace::default(),
        },
        AlgorithmSpec {
            id: "ls-spa",
            display_name: "LSHADE with semi-parameter adaptation and CMA hybrid",
            taxonomy: Evolutionary,
            availability: External,
            params: ParamSpace::default(),
        },
        AlgorithmSpec {
            id: "ed-eb",
            display_name: "Enhanced differential evolution pair",
            taxonomy: Evolutionary,
            availability: External,
            params: ParamSpace::default(),
        },
    ]
}

/// Ids of the runnable comparison algorithms (excludes toys and externals).
pub fn implemented_ids() -> Vec<&'static str> {
    registry()
        .iter()
        .filter(|s| s.availability == Availability::Implemented)
        .map(|s| s.id)
        .collect()
}

pub fn lookup(id: &str) -> Result<AlgorithmSpec> {
    registry()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::Config(format!("unknown algorithm `{id}`")))
}

/// Tuned parameter columns for 10/30/50 variables, where published.
fn tuned_preset(id: &str, dim: u32) -> Option<ParamSet> {
    let set = ParamSet::new();
    let s = match (id, dim) {
        ("ao", 10) => set
            .with_int("pop_size", 34)
            .with_real("alpha", 0.9161)
            .with_real("delta", 0.3806),
        ("ao", 30) => set
            .with_int("pop_size", 10)
            .with_real("alpha", 0.4207)
            .with_real("delta", 0.9379),
        ("ao", 50) => set
            .with_int("pop_size", 69)
            .with_real("alpha", 0.186)
            .with_real("delta", 0.6773),
        ("sdcs", 10) => set
            .with_int("pop_size", 10)
            .with_real("omega", 0.3413)
            .with_real("j", 0.8281)
            .with_real("a0", 0.9491),
        ("sdcs", 30) => set
            .with_int("pop_size", 24)
            .with_real("omega", 0.1854)
            .with_real("j", 0.9618)
            .with_real("a0", 0.5973),
        ("sdcs", 50) => set
            .with_int("pop_size", 10)
            .with_real("omega", 0.9137)
            .with_real("j", 0.9316)
            .with_real("a0", 0.5201),
        ("igoa", 10) => set.with_int("pop_size", 34),
        ("igoa", 30) => set.with_int("pop_size", 35),
        ("igoa", 50) => set.with_int("pop_size", 25),
        ("hgsa", 10) => set.with_int("pop_size", 37).with_real("g0", 89.0),
        ("hgsa", 30) => set.with_int("pop_size", 23).with_real("g0", 118.0),
        ("hgsa", 50) => set.with_int("pop_size", 24).with_real("g0", 116.0),
        ("mfla", 10) => set
            .with_int("memeplexes", 5)
            .with_int("memeplex_size", 5)
            .with_real("beta", 0.7563),
        ("mfla", 30) => set
            .with_int("memeplexes", 4)
            .with_int("memeplex_size", 6)
            .with_real("beta", 0.5867),
        ("mfla", 50) => set
            .with_int("memeplexes", 4)
            .with_int("memeplex_size", 5)
            .with_real("beta", 1.4742),
        ("imfo", 10) => set
            .with_int("pop_size", 119)
            .with_int("b", 4)
            .with_real("p", 0.0199),
        ("imfo", 30) => set
            .with_int("pop_size", 118)
            .with_int("b", 4)
            .with_real("p", 0.2963),
        ("imfo", 50) => set
            .with_int("pop_size", 93)
            .with_int("b", 3)
            .with_real("p", 0.3593),
        ("msca", 10) => set
            .with_int("pop_size", 27)
            .with_real("a", 1.0)
            .with_real("p_c", 0.0659)
            .with_real("mu_chaos", 3.0),
        ("msca", 30) => set
            .with_int("pop_size", 31)
            .with_real("a", 1.0)
            .with_real("p_c", 0.0319)
            .with_real("mu_chaos", 4.0),
        ("msca", 50) => set
            .with_int("pop_size", 31)
            .with_real("a", 1.0)
            .with_real("p_c", 0.0116)
            .with_real("mu_chaos", 4.0),
        ("gsk", 10) => set
            .with_int("pop_size", 101)
            .with_real("p", 0.1353)
            .with_real("k_f", 0.4822)
            .with_real("k_r", 0.9797)
            .with_real("k", 12.0),
        ("gsk", 30) => set
            .with_int("pop_size", 93)
            .with_real("p", 0.052)
            .with_real("k_f", 0.485)
            .with_real("k_r", 0.991)
            .with_real("k", 10.0),
        ("gsk", 50) => set
            .with_int("pop_size", 100)
            .with_real("p", 0.0521)
            .with_real("k_f", 0.4581)
            .with_real("k_r", 0.9309)
            .with_real("k", 9.0),
        ("mpa", 10) => set
            .with_int("pop_size", 21)
            .with_real("p", 0.6737)
            .with_real("fads", 0.8297),
        ("mpa", 30) => set
            .with_int("pop_size", 31)
            .with_real("p", 0.1949)
            .with_real("fads", 0.1014),
        ("mpa", 50) => set
            .with_int("pop_size", 25)
            .with_real("p", 0.5076)
            .with_real("fads", 0.3425),
        ("eo", 10) => set
            .with_int("pop_size", 33)
            .with_real("a1", 1.8876)
            .with_real("a2", 0.9305)
            .with_real("gp", 0.2999),
        ("eo", 30) => set
            .with_int("pop_size", 31)
            .with_real("a1", 1.9447)
            .with_real("a2", 0.95021)
            .with_real("gp", 0.5871),
        ("eo", 50) => set
            .with_int("pop_size", 20)
            .with_real("a1", 1.8587)
            .with_real("a2", 1.1681)
            .with_real("gp", 0.7087),
        _ => return None,
    };
    Some(s)
}

/// Resolve `algo_id`, validate `params`, and drive the generic population
/// loop on `problem` until the budget is spent.
pub fn run_population_loop(
    algo_id: &str,
    params: &ParamSet,
    problem: &BenchmarkProblem,
    budget: Budget,
    rng: &RngStream,
    recorder: Recorder,
) -> Result<RunTrace> {
    let spec = lookup(algo_id)?;
    let mut opt = spec.build(params)?;
    run_optimizer_loop(opt.as_mut(), problem, budget, rng, recorder)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_implemented_ids_with_stable_names() {
        let ids = implemented_ids();
        assert_eq!(
            ids,
            vec![
                "de", "ebcm", "sdcs", "msca", "imfo", "ao", "igoa", "hgsa", "mfla", "gsk", "mpa",
                "eo"
            ]
        );
    }

    #[test]
    fn external_entries_are_marked_not_implemented() {
        for id in ["nlshade", "hses", "ls-spa", "ed-eb"] {
            let spec = lookup(id).unwrap();
            assert_eq!(spec.availability, Availability::External);
            match spec.build(&ParamSet::new()) {
                Err(Error::NotImplemented(named)) => assert_eq!(named, id),
                other => panic!("{id}: expected NotImplemented, got {:?}", other.err()),
            }
        }
    }

    #[test]
    fn all_defaults_validate_against_their_ranges() {
        for spec in registry() {
            spec.params
                .validate(&spec.defaults())
                .unwrap_or_else(|e| panic!("{}: {e}", spec.id));
        }
    }

    #[test]
    fn gsk_declares_five_parameters() {
        assert_eq!(lookup("gsk").unwrap().params.len(), 5);
    }

    #[test]
    fn taxonomy_tags_match_inspiration_sources() {
        assert_eq!(lookup("gsk").unwrap().taxonomy, Taxonomy::SwarmHuman);
        assert_eq!(lookup("eo").unwrap().taxonomy, Taxonomy::PhysicsChemistry);
        assert_eq!(lookup("de").unwrap().taxonomy, Taxonomy::Evolutionary);
        assert_eq!(lookup("mpa").unwrap().taxonomy, Taxonomy::SwarmNonHuman);
    }

    #[test]
    fn tuned_presets_validate_for_every_algorithm_and_dim() {
        for spec in registry() {
            if spec.availability != Availability::Implemented {
                continue;
            }
            for preset in ["default", "tuned-10", "tuned-30", "tuned-50"] {
                let set = spec
                    .preset(preset)
                    .unwrap_or_else(|e| panic!("{}/{preset}: {e}", spec.id));
                spec.params.validate(&set).unwrap();
            }
        }
    }

    #[test]
    fn invalid_param_names_offender() {
        let spec = lookup("de").unwrap();
        let err = match spec.build(&ParamSet::new().with_real("f", 7.0)) {
            Err(e) => e.to_string(),
            Ok(_) => panic!("out-of-range parameter accepted"),
        };
        assert!(err.contains("`f`"), "{err}");
    }

    #[test]
    fn unknown_id_is_config_error() {
        assert!(matches!(lookup("nope"), Err(Error::Config(_))));
    }
}
