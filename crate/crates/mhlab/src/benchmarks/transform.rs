//! Shift / rotation / bias composition: `g(x) = base(M (x - o)) + f*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Randomness;

/// Orthogonality tolerance enforced on rotation matrices.
pub const ORTHO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    /// Optimum location `o` in search-space units.
    pub shift: Vec<f64>,
    /// Row-major orthogonal matrix, `None` meaning identity.
    pub rotation: Option<Vec<Vec<f64>>>,
    /// Objective bias `f*`.
    pub bias: f64,
}

impl Transform {
    pub fn identity(dim: usize) -> Self {
        Transform {
            shift: vec![0.0; dim],
            rotation: None,
            bias: 0.0,
        }
    }

    pub fn new(shift: Vec<f64>, rotation: Option<Vec<Vec<f64>>>, bias: f64) -> Result<Self> {
        if let Some(m) = &rotation {
            let dim = shift.len();
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::config("rotation matrix shape mismatch"));
            }
            let defect = rotation_defect(m);
            if defect > ORTHO_TOL {
                return Err(Error::Config(format!(
                    "rotation matrix is not orthogonal (max |M'M - I| = {defect:e})"
                )));
            }
        }
        Ok(Transform {
            shift,
            rotation,
            bias,
        })
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// Pull a search-space point back into base coordinates: `M (x - o)`.
    pub fn pull(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        debug_assert_eq!(x.len(), d);
        let centered: Vec<f64> = (0..d).map(|j| x[j] - self.shift[j]).collect();
        match &self.rotation {
            None => centered,
            Some(m) => (0..d)
                .map(|i| (0..d).map(|j| m[i][j] * centered[j]).sum())
                .collect(),
        }
    }

    /// A copy with the shift zeroed (the non-shifted partner).
    pub fn without_shift(&self) -> Self {
        Transform {
            shift: vec![0.0; self.dim()],
            rotation: self.rotation.clone(),
            bias: self.bias,
        }
    }
}

/// `max_ij |M^T M - I|` for an orthogonality check.
pub fn rotation_defect(m: &[Vec<f64>]) -> f64 {
    let d = m.len();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            // (M^T M)_{ij} = sum_k M_{ki} M_{kj}
            let v: f64 = (0..d).map(|k| m[k][i] * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

/// Random orthogonal matrix: Gaussian entries orthonormalized by modified
/// Gram-Schmidt with one re-orthogonalization pass. Deterministic in `rng`.
pub fn random_orthogonal(dim: usize, rng: &mut dyn Randomness) -> Vec<Vec<f64>> {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.normal()).collect())
            .collect();
        let mut ok = true;
        for k in 0..dim {
            for _pass in 0..2 {
                for j in 0..k {
                    let dot: f64 = (0..dim).map(|i| cols[k][i] * cols[j][i]).sum();
                    for i in 0..dim {
                        cols[k][i] -= dot * cols[j][i];
                    }
                }
            }
            let norm: f64 = cols[k].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false; // degenerate draw; retry with fresh entries
                break;
            }
            cols[k].iter_mut().for_each(|v| *v /= norm);
        }
        if !ok {
            continue;
        }
        // columns hold the orthonormal basis; emit row-major M with rows = basis
        let m: Vec<Vec<f64>> = cols;
        if rotation_defect(&m) <= ORTHO_TOL {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn random_rotation_is_orthogonal() {
        for dim in [2usize, 5, 10, 30, 50] {
            let mut rng = RngStream::new(dim as u64);
            let m = random_orthogonal(dim, &mut rng);
            assert!(
                rotation_defect(&m) < 1e-9,
                "defect {:e} at dim {dim}",
                rotation_defect(&m)
            );
        }
    }

    #[test]
    fn pull_recenters_exactly() {
        let t = Transform::new(vec![3.0, -4.0], None, 700.0).unwrap();
        assert_eq!(t.pull(&[3.0, -4.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn rotated_pull_of_shift_is_exact_zero() {
        let mut rng = RngStream::new(8);
        let m = random_orthogonal(6, &mut rng);
        let shift: Vec<f64> = (0..6).map(|i| i as f64 - 2.5).collect();
        let t = Transform::new(shift.clone(), Some(m), 100.0).unwrap();
        assert_eq!(t.pull(&shift), vec![0.0; 6]);
    }

    #[test]
    fn non_orthogonal_matrix_rejected() {
        let m = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        assert!(Transform::new(vec![0.0, 0.0], Some(m), 0.0).is_err());
    }
}
