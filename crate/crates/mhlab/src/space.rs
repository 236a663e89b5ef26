//! Box-bounded search spaces and boundary repair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Randomness;

/// A `dim`-dimensional box. `lower[j] <= upper[j]` for all `j`; degenerate
/// intervals (`lower == upper`) are allowed and pin that coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::config(format!(
                "bound vectors must be non-empty and equally long (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        for j in 0..lower.len() {
            if !lower[j].is_finite() || !upper[j].is_finite() {
                return Err(Error::config(format!("bound {j} is not finite")));
            }
            if lower[j] > upper[j] {
                return Err(Error::config(format!(
                    "lower bound {} exceeds upper bound {} in dimension {j}",
                    lower[j], upper[j]
                )));
            }
        }
        Ok(SearchSpace { lower, upper })
    }

    /// The `[-half, half]^dim` box; `[-100, 100]` is the suite default.
    pub fn symmetric(dim: usize, half: f64) -> Self {
        SearchSpace::new(vec![-half; dim], vec![half; dim]).expect("valid symmetric box")
    }

    pub fn uniform_bounds(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        SearchSpace::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .enumerate()
                .all(|(j, &v)| v >= self.lower[j] && v <= self.upper[j])
    }

    /// Draw a point uniformly inside the box.
    pub fn sample(&self, rng: &mut dyn Randomness) -> Vec<f64> {
        (0..self.dim())
            .map(|j| rng.uniform_in(self.lower[j], self.upper[j]))
            .collect()
    }

    /// Repair `position` in place so it lies inside the box.
    ///
    /// `Clamp` saturates at the violated bound, `Reflect` mirrors across it
    /// (folding as often as needed), `Resample` redraws the offending
    /// coordinate uniformly. Clamp and reflect are idempotent.
    pub fn repair(&self, position: &mut [f64], policy: RepairPolicy, rng: &mut dyn Randomness) {
        assert_eq!(
            position.len(),
            self.dim(),
            "position/space dimension mismatch"
        );
        for j in 0..position.len() {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            let x = &mut position[j];
            if *x >= lo && *x <= hi {
                continue;
            }
            if !x.is_finite() {
                // NaN/inf cannot be reflected meaningfully
                *x = if x.is_nan() {
                    0.5 * (lo + hi)
                } else if *x > 0.0 {
                    hi
                } else {
                    lo
                };
                continue;
            }
            match policy {
                RepairPolicy::Clamp => *x = x.clamp(lo, hi),
                RepairPolicy::Reflect => {
                    let width = hi - lo;
                    if width == 0.0 {
                        *x = lo;
                        continue;
                    }
                    let mut v = *x;
                    // fold into [lo, lo + 2w) then mirror the upper half
                    let period = 2.0 * width;
                    v = (v - lo).rem_euclid(period) + lo;
                    if v > hi {
                        v = hi - (v - hi);
                    }
                    *x = v.clamp(lo, hi);
                }
                RepairPolicy::Resample => *x = rng.uniform_in(lo, hi),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RepairPolicy {
    #[default]
    Clamp,
    Reflect,
    Resample,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngStream, ZeroRng};

    #[test]
    fn rejects_inverted_bounds() {
        assert!(SearchSpace::new(vec![1.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![0.0], vec![0.0]).is_ok()); // degenerate ok
        assert!(SearchSpace::new(vec![0.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn clamp_saturates() {
        let s = SearchSpace::symmetric(1, 100.0);
        let mut x = vec![101.0];
        s.repair(&mut x, RepairPolicy::Clamp, &mut ZeroRng);
        assert_eq!(x, vec![100.0]);
        let mut y = vec![-250.0];
        s.repair(&mut y, RepairPolicy::Clamp, &mut ZeroRng);
        assert_eq!(y, vec![-100.0]);
    }

    #[test]
    fn reflect_mirrors() {
        let s = SearchSpace::symmetric(1, 100.0);
        let mut x = vec![101.0];
        s.repair(&mut x, RepairPolicy::Reflect, &mut ZeroRng);
        assert_eq!(x, vec![99.0]);
        let mut y = vec![-103.5];
        s.repair(&mut y, RepairPolicy::Reflect, &mut ZeroRng);
        assert_eq!(y, vec![-96.5]);
    }

    #[test]
    fn in_bounds_untouched_by_every_policy() {
        let s = SearchSpace::symmetric(3, 100.0);
        let orig = vec![-100.0, 0.25, 100.0];
        for policy in [
            RepairPolicy::Clamp,
            RepairPolicy::Reflect,
            RepairPolicy::Resample,
        ] {
            let mut x = orig.clone();
            s.repair(&mut x, policy, &mut RngStream::new(1));
            assert_eq!(x, orig, "{policy:?} modified an in-bounds point");
        }
    }

    #[test]
    fn repair_is_idempotent_for_clamp_and_reflect() {
        let s = SearchSpace::symmetric(2, 10.0);
        let mut rng = RngStream::new(5);
        for _ in 0..500 {
            let raw: Vec<f64> = (0..2).map(|_| rng.uniform_in(-100.0, 100.0)).collect();
            for policy in [RepairPolicy::Clamp, RepairPolicy::Reflect] {
                let mut once = raw.clone();
                s.repair(&mut once, policy, &mut ZeroRng);
                let mut twice = once.clone();
                s.repair(&mut twice, policy, &mut ZeroRng);
                assert_eq!(once, twice);
                assert!(s.contains(&once));
            }
        }
    }

    #[test]
    fn resample_lands_inside() {
        let s = SearchSpace::symmetric(1, 1.0);
        let mut rng = RngStream::new(9);
        for _ in 0..100 {
            let mut x = vec![55.0];
            s.repair(&mut x, RepairPolicy::Resample, &mut rng);
            assert!(s.contains(&x));
        }
    }
}
