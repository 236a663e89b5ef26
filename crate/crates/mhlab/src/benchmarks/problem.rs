//! A fully assembled benchmark problem.

use std::sync::Arc;

use super::base::BaseFunction;
use super::composite::{CompositionSpec, HybridSpec};
use super::transform::Transform;
use crate::error::Result;
use crate::space::SearchSpace;

/// What sits behind the transform.
#[derive(Debug, Clone)]
pub enum Objective {
    Base(BaseFunction),
    Hybrid(HybridSpec),
    Composition(CompositionSpec),
}

impl Objective {
    /// Evaluate in base coordinates. All three variants attain exactly 0 at
    /// the origin of base coordinates (single bases via their optimum
    /// offset).
    pub fn eval_at(&self, z: &[f64]) -> f64 {
        match self {
            Objective::Base(b) => {
                let local: Vec<f64> = z.iter().map(|v| v + b.optimum_coord).collect();
                b.eval(&local)
            }
            Objective::Hybrid(h) => h.eval(z).expect("hybrid arity checked at construction"),
            Objective::Composition(c) => c
                .eval(z)
                .expect("composition arity checked at construction"),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Objective::Base(b) => b.name.to_string(),
            Objective::Hybrid(h) => format!(
                "hybrid({})",
                h.segments
                    .iter()
                    .map(|(b, _)| b.name)
                    .collect::<Vec<_>>()
                    .join("|")
            ),
            Objective::Composition(c) => format!(
                "composition({})",
                c.components
                    .iter()
                    .map(|k| k.base.name)
                    .collect::<Vec<_>>()
                    .join("|")
            ),
        }
    }
}

/// `g(x) = objective(M (x - o)) + f*` over a box, with the suite index and
/// the known optimum value carried along. Immutable and cheap to clone.
#[derive(Debug, Clone)]
pub struct BenchmarkProblem {
    inner: Arc<ProblemInner>,
}

#[derive(Debug)]
struct ProblemInner {
    objective: Objective,
    transform: Transform,
    space: SearchSpace,
    index: usize,
    f_star: f64,
}

impl BenchmarkProblem {
    pub fn new(
        objective: Objective,
        transform: Transform,
        space: SearchSpace,
        index: usize,
        f_star: f64,
    ) -> Result<Self> {
        debug_assert_eq!(transform.dim(), space.dim());
        Ok(BenchmarkProblem {
            inner: Arc::new(ProblemInner {
                objective,
                transform,
                space,
                index,
                f_star,
            }),
        })
    }

    /// Plain unshifted, unrotated problem over `[-100, 100]^dim`.
    pub fn plain(base: BaseFunction, dim: usize, index: usize) -> Self {
        let mut t = Transform::identity(dim);
        t.bias = 100.0 * index as f64;
        let f_star = t.bias;
        BenchmarkProblem::new(
            Objective::Base(base),
            t,
            SearchSpace::symmetric(dim, 100.0),
            index,
            f_star,
        )
        .expect("plain problem is well formed")
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let z = self.inner.transform.pull(x);
        self.inner.objective.eval_at(&z) + self.inner.transform.bias
    }

    pub fn space(&self) -> &SearchSpace {
        &self.inner.space
    }

    pub fn dim(&self) -> usize {
        self.inner.space.dim()
    }

    pub fn index(&self) -> usize {
        self.inner.index
    }

    /// Known optimum value `f*`.
    pub fn f_star(&self) -> f64 {
        self.inner.f_star
    }

    /// Location of the optimum (the shift vector).
    pub fn optimum_position(&self) -> &[f64] {
        &self.inner.transform.shift
    }

    pub fn transform(&self) -> &Transform {
        &self.inner.transform
    }

    pub fn objective(&self) -> &Objective {
        &self.inner.objective
    }

    pub fn describe(&self) -> String {
        self.inner.objective.describe()
    }

    /// The paired problem with the shift removed, all else identical.
    pub fn without_shift(&self) -> Self {
        BenchmarkProblem {
            inner: Arc::new(ProblemInner {
                objective: self.inner.objective.clone(),
                transform: self.inner.transform.without_shift(),
                space: self.inner.space.clone(),
                index: self.inner.index,
                f_star: self.inner.f_star,
            }),
        }
    }

    pub fn is_shifted(&self) -> bool {
        self.inner.transform.shift.iter().any(|v| *v != 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::base::base_function;
    use crate::benchmarks::transform::random_orthogonal;
    use crate::rng::{Randomness, RngStream};

    #[test]
    fn optimum_value_is_bias_exactly() {
        let mut rng = RngStream::new(21);
        for name in ["sphere", "rosenbrock", "ackley", "rastrigin"] {
            let base = base_function(name).unwrap();
            let dim = 8;
            let shift: Vec<f64> = (0..dim).map(|_| rng.uniform_in(-80.0, 80.0)).collect();
            let rot = random_orthogonal(dim, &mut rng);
            let t = Transform::new(shift.clone(), Some(rot), 300.0).unwrap();
            let p = BenchmarkProblem::new(
                Objective::Base(base),
                t,
                SearchSpace::symmetric(dim, 100.0),
                3,
                300.0,
            )
            .unwrap();
            let g = p.evaluate(&shift);
            assert!(
                (g - 300.0).abs() <= 1e-12 * 300.0,
                "{name}: g(o) = {g}, want 300"
            );
        }
    }

    #[test]
    fn shift_invariance_of_landscape_shape() {
        let base = base_function("rastrigin").unwrap();
        let dim = 5;
        let mut rng = RngStream::new(9);
        let rot = random_orthogonal(dim, &mut rng);
        let shift: Vec<f64> = (0..dim).map(|_| rng.uniform_in(-80.0, 80.0)).collect();
        let shifted = BenchmarkProblem::new(
            Objective::Base(base.clone()),
            Transform::new(shift.clone(), Some(rot.clone()), 100.0).unwrap(),
            SearchSpace::symmetric(dim, 100.0),
            1,
            100.0,
        )
        .unwrap();
        let unshifted = shifted.without_shift();
        for _ in 0..100 {
            let x: Vec<f64> = (0..dim).map(|_| rng.uniform_in(-20.0, 20.0)).collect();
            let moved: Vec<f64> = x.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let lhs = shifted.evaluate(&moved);
            let rhs = unshifted.evaluate(&x);
            assert!(
                (lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()),
                "landscape moved: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn plain_problem_optimum_at_origin() {
        let p = BenchmarkProblem::plain(base_function("sphere").unwrap(), 3, 1);
        assert_eq!(p.evaluate(&[0.0, 0.0, 0.0]), 100.0);
        assert_eq!(p.f_star(), 100.0);
        assert!(!p.is_shifted());
    }
}
