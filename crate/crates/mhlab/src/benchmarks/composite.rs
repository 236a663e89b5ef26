//! Generic hybrid and composition constructors.
//!
//! Hybrids partition the dimensions into segments, each evaluated by its own
//! base function; compositions blend complete component landscapes with
//! normalized distance-based weights. Both are built so their global optimum
//! sits at the origin with value exactly zero, which the transform layer then
//! relocates.

use super::base::BaseFunction;
use crate::error::{Error, Result};

/// Dimension partition: `assignment[j]` names the segment evaluating
/// coordinate `j`. Every segment must own at least one coordinate.
#[derive(Debug, Clone)]
pub struct HybridSpec {
    pub segments: Vec<(BaseFunction, f64)>,
    pub assignment: Vec<usize>,
}

impl HybridSpec {
    pub fn new(segments: Vec<(BaseFunction, f64)>, assignment: Vec<usize>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::config("hybrid needs at least one segment"));
        }
        if segments.iter().any(|(_, w)| *w < 0.0 || !w.is_finite()) {
            return Err(Error::config(
                "hybrid weights must be finite and non-negative",
            ));
        }
        let mut seen = vec![false; segments.len()];
        for &s in &assignment {
            if s >= segments.len() {
                return Err(Error::Config(format!(
                    "hybrid assignment references segment {s} of {}",
                    segments.len()
                )));
            }
            seen[s] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::config("hybrid partition leaves a segment empty"));
        }
        Ok(HybridSpec {
            segments,
            assignment,
        })
    }

    pub fn dim(&self) -> usize {
        self.assignment.len()
    }

    /// Weighted sum of segment evaluations; `z` is in base coordinates
    /// (optimum of the whole hybrid at the origin).
    pub fn eval(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.assignment.len() {
            return Err(Error::Contract(format!(
                "hybrid expects {} coordinates, got {}",
                self.assignment.len(),
                z.len()
            )));
        }
        let mut total = 0.0;
        for (k, (base, w)) in self.segments.iter().enumerate() {
            let part: Vec<f64> = self
                .assignment
                .iter()
                .zip(z)
                .filter(|(s, _)| **s == k)
                .map(|(_, v)| v + base.optimum_coord)
                .collect();
            total += w * base.eval(&part);
        }
        Ok(total)
    }
}

/// One component landscape of a composition.
#[derive(Debug, Clone)]
pub struct CompComponent {
    pub base: BaseFunction,
    /// Component optimum in base coordinates.
    pub delta: Vec<f64>,
    /// Spread of the component's weight kernel.
    pub sigma: f64,
    /// Additive value bias of the component.
    pub bias: f64,
}

/// Distance-weighted blend of component landscapes.
///
/// Weights: `w_k = exp(-d_k^2 / (2 D sigma_k^2)) / d_k`, normalized to sum 1;
/// a point coinciding with a component optimum selects that component alone.
/// With `delta_0 = 0` and `bias_0 = 0` (suite convention) the global optimum
/// is the origin with value 0.
#[derive(Debug, Clone)]
pub struct CompositionSpec {
    pub components: Vec<CompComponent>,
}

impl CompositionSpec {
    pub fn new(components: Vec<CompComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::config("composition needs at least one component"));
        }
        let dim = components[0].delta.len();
        for c in &components {
            if c.delta.len() != dim {
                return Err(Error::config(
                    "composition components disagree on dimension",
                ));
            }
            if c.sigma <= 0.0 || !c.sigma.is_finite() {
                return Err(Error::config("composition sigma must be positive"));
            }
        }
        Ok(CompositionSpec { components })
    }

    pub fn dim(&self) -> usize {
        self.components[0].delta.len()
    }

    /// Normalized weights at `z`; non-negative, sum exactly 1.
    pub fn weights(&self, z: &[f64]) -> Vec<f64> {
        let d = z.len() as f64;
        let mut raw = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let dist2: f64 = z.iter().zip(&c.delta).map(|(a, b)| (a - b) * (a - b)).sum();
            let dist = dist2.sqrt();
            if dist < 1e-12 {
                // exact hit: this component alone
                let mut w = vec![0.0; self.components.len()];
                w[raw.len()] = 1.0;
                return w;
            }
            raw.push((-dist2 / (2.0 * d * c.sigma * c.sigma)).exp() / dist);
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            // all kernels underflowed; fall back to nearest component
            let nearest = self
                .components
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let da: f64 = z.iter().zip(&a.delta).map(|(x, y)| (x - y) * (x - y)).sum();
                    let db: f64 = z.iter().zip(&b.delta).map(|(x, y)| (x - y) * (x - y)).sum();
                    da.partial_cmp(&db).unwrap()
                })
                .map(|(i, _)| i)
                .unwrap();
            let mut w = vec![0.0; self.components.len()];
            w[nearest] = 1.0;
            return w;
        }
        raw.iter().map(|v| v / sum).collect()
    }

    pub fn eval(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.dim() {
            return Err(Error::Contract(format!(
                "composition expects {} coordinates, got {}",
                self.dim(),
                z.len()
            )));
        }
        let w = self.weights(z);
        let mut total = 0.0;
        for (c, wk) in self.components.iter().zip(&w) {
            if *wk == 0.0 {
                continue;
            }
            let local: Vec<f64> = z
                .iter()
                .zip(&c.delta)
                .map(|(v, dk)| v - dk + c.base.optimum_coord)
                .collect();
            total += wk * (c.base.eval(&local) + c.bias);
        }
        Ok(total)
    }
}

pub fn eval_hybrid(spec: &HybridSpec, z: &[f64]) -> Result<f64> {
    spec.eval(z)
}

pub fn eval_composition(spec: &CompositionSpec, z: &[f64]) -> Result<f64> {
    spec.eval(z)
}
