//! Candidate solutions and their populations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Randomness;
use crate::space::SearchSpace;

/// A position vector with an optional cached fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub position: Vec<f64>,
    fitness: Option<f64>,
}

impl Individual {
    pub fn new(position: Vec<f64>) -> Self {
        Individual {
            position,
            fitness: None,
        }
    }

    pub fn evaluated(position: Vec<f64>, fitness: f64) -> Self {
        Individual {
            position,
            fitness: Some(fitness),
        }
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn expect_fitness(&self) -> Result<f64> {
        self.fitness
            .ok_or_else(|| Error::Contract("individual has no cached fitness".into()))
    }

    pub fn set_fitness(&mut self, f: f64) {
        self.fitness = Some(f);
    }

    /// Drop the cached fitness (the position is about to change).
    pub fn invalidate(&mut self) {
        self.fitness = None;
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }
}

/// An ordered list of individuals plus a generation counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: u64,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Self {
        Population {
            members,
            generation: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members.first().map_or(0, Individual::dim)
    }

    /// Index of the best (lowest-fitness) member; earliest wins ties.
    /// Unevaluated members are ignored.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, ind) in self.members.iter().enumerate() {
            if let Some(f) = ind.fitness() {
                match best {
                    Some((_, fb)) if f >= fb => {}
                    _ => best = Some((i, f)),
                }
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn best(&self) -> Option<&Individual> {
        self.best_index().map(|i| &self.members[i])
    }

    /// Indices sorted ascending by fitness (best first), stable on ties.
    pub fn ranked_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by(|&a, &b| {
            let fa = self.members[a].fitness().unwrap_or(f64::INFINITY);
            let fb = self.members[b].fitness().unwrap_or(f64::INFINITY);
            fa.partial_cmp(&fb).unwrap_or(std::cmp::Ordering::Equal)
        });
        idx
    }

    pub fn positions(&self) -> Vec<Vec<f64>> {
        self.members.iter().map(|m| m.position.clone()).collect()
    }

    /// Per-dimension mean position.
    pub fn centroid(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut c = vec![0.0; dim];
        for m in &self.members {
            for j in 0..dim {
                c[j] += m.position[j];
            }
        }
        let n = self.members.len().max(1) as f64;
        c.iter_mut().for_each(|v| *v /= n);
        c
    }
}

/// Draw `n` individuals uniformly inside `space`; fitness left unevaluated,
/// generation 0.
pub fn init_population(
    space: &SearchSpace,
    n: usize,
    rng: &mut dyn Randomness,
) -> Result<Population> {
    if n == 0 {
        return Err(Error::config("population size must be at least 1"));
    }
    let members = (0..n).map(|_| Individual::new(space.sample(rng))).collect();
    Ok(Population::new(members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn degenerate_interval_pins_positions() {
        let space = SearchSpace::new(vec![0.0], vec![0.0]).unwrap();
        let pop = init_population(&space, 3, &mut RngStream::new(1)).unwrap();
        for m in &pop.members {
            assert_eq!(m.position, vec![0.0]);
            assert!(m.fitness().is_none());
        }
        assert_eq!(pop.generation, 0);
    }

    #[test]
    fn all_coordinates_inside_bounds() {
        let space = SearchSpace::symmetric(2, 100.0);
        let pop = init_population(&space, 50, &mut RngStream::new(2)).unwrap();
        assert_eq!(pop.len(), 50);
        for m in &pop.members {
            assert!(space.contains(&m.position));
        }
    }

    #[test]
    fn same_seed_bit_identical_population() {
        let space = SearchSpace::symmetric(4, 100.0);
        let a = init_population(&space, 20, &mut RngStream::new(99)).unwrap();
        let b = init_population(&space, 20, &mut RngStream::new(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_size_rejected() {
        let space = SearchSpace::symmetric(1, 1.0);
        assert!(init_population(&space, 0, &mut RngStream::new(0)).is_err());
    }

    #[test]
    fn best_is_stable_on_ties() {
        let mut pop = Population::new(vec![
            Individual::evaluated(vec![1.0], 5.0),
            Individual::evaluated(vec![2.0], 5.0),
        ]);
        assert_eq!(pop.best_index(), Some(0));
        pop.members[1].set_fitness(4.0);
        assert_eq!(pop.best_index(), Some(1));
    }
}
