//! Base test functions. Each ships with its optimum value pinned to zero at a
//! known point (`optimum_coord` repeated over all dimensions), which is what
//! lets the transform layer relocate optima exactly.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Unimodal,
    Multimodal,
}

/// A pure objective of any dimensionality.
#[derive(Clone)]
pub struct BaseFunction {
    pub name: &'static str,
    pub modality: Modality,
    pub separable: bool,
    /// The global optimizer is `[optimum_coord; dim]` with value exactly 0.
    pub optimum_coord: f64,
    eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl fmt::Debug for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseFunction")
            .field("name", &self.name)
            .field("modality", &self.modality)
            .field("separable", &self.separable)
            .finish()
    }
}

impl BaseFunction {
    pub fn custom(
        name: &'static str,
        modality: Modality,
        separable: bool,
        optimum_coord: f64,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        BaseFunction {
            name,
            modality,
            separable,
            optimum_coord,
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    /// The point where this base attains 0.
    pub fn optimum(&self, dim: usize) -> Vec<f64> {
        vec![self.optimum_coord; dim]
    }
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn bent_cigar(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>()
}

fn zakharov(x: &[f64]) -> f64 {
    let s1: f64 = x.iter().map(|v| v * v).sum();
    let s2: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
        .sum();
    s1 + s2.powi(2) + s2.powi(4)
}

fn rosenbrock(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return (x[0] - 1.0).powi(2);
    }
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / d).sqrt();
    let mean_cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    // writing the additive constant as exp(1.0) makes ackley(0) exactly 0
    -20.0 * (-0.2 * rms).exp() - mean_cos.exp() + 20.0 + 1f64.exp()
}

fn griewank(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let p: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    s - p + 1.0
}

/// Schwefel's double-sum (problem 1.2): optimum at the origin.
fn schwefel(x: &[f64]) -> f64 {
    let mut acc = 0.0;
    let mut total = 0.0;
    for v in x {
        acc += v;
        total += acc * acc;
    }
    total
}

fn levy(x: &[f64]) -> f64 {
    let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
    let d = w.len();
    let head = (PI * w[0]).sin().powi(2);
    let body: f64 = w[..d - 1]
        .iter()
        .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
        .sum();
    let tail = (w[d - 1] - 1.0).powi(2) * (1.0 + (2.0 * PI * w[d - 1]).sin().powi(2));
    head + body + tail
}

fn elliptic(x: &[f64]) -> f64 {
    let d = x.len();
    if d == 1 {
        return x[0] * x[0];
    }
    x.iter()
        .enumerate()
        .map(|(i, v)| 1e6f64.powf(i as f64 / (d - 1) as f64) * v * v)
        .sum()
}

/// Names of every shipped base function, in registry order.
pub fn all_base_names() -> &'static [&'static str] {
    &[
        "sphere",
        "bent-cigar",
        "zakharov",
        "schwefel",
        "elliptic",
        "rosenbrock",
        "rastrigin",
        "ackley",
        "griewank",
        "levy",
    ]
}

/// Look up a shipped base function by name.
pub fn base_function(name: &str) -> Result<BaseFunction> {
    use Modality::*;
    let f = match name {
        "sphere" => BaseFunction::custom("sphere", Unimodal, true, 0.0, sphere),
        "bent-cigar" => BaseFunction::custom("bent-cigar", Unimodal, true, 0.0, bent_cigar),
        "zakharov" => BaseFunction::custom("zakharov", Unimodal, false, 0.0, zakharov),
        "schwefel" => BaseFunction::custom("schwefel", Unimodal, false, 0.0, schwefel),
        "elliptic" => BaseFunction::custom("elliptic", Unimodal, true, 0.0, elliptic),
        "rosenbrock" => BaseFunction::custom("rosenbrock", Multimodal, false, 1.0, rosenbrock),
        "rastrigin" => BaseFunction::custom("rastrigin", Multimodal, true, 0.0, rastrigin),
        "ackley" => BaseFunction::custom("ackley", Multimodal, false, 0.0, ackley),
        "griewank" => BaseFunction::custom("griewank", Multimodal, false, 0.0, griewank),
        "levy" => BaseFunction::custom("levy", Multimodal, false, 1.0, levy),
        other => {
            return Err(Error::Config(format!("unknown base function `{other}`")));
        }
    };
    Ok(f)
}

/// Evaluate a shipped base function by name.
pub fn eval_base(name: &str, x: &[f64]) -> Result<f64> {
    Ok(base_function(name)?.eval(x))
}
