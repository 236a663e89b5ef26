//! Declared parameter spaces and concrete parameter assignments.
//!
//! Algorithm registries declare a [`ParamSpace`]; experiment configs and the
//! tuner produce [`ParamSet`]s validated against it. Parameter names appear
//! verbatim in config files and CSV output, so renames are breaking changes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ParamKind {
    /// Real-valued parameter in `[lo, hi]`.
    Real { lo: f64, hi: f64 },
    /// Integer parameter in `[lo, hi]`.
    Int { lo: i64, hi: i64 },
    /// Categorical parameter over a fixed, non-empty choice list.
    Cat { choices: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDef {
    pub name: String,
    #[serde(flatten)]
    pub kind: ParamKind,
    pub default: ParamValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Int(i64),
    Cat(String),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Real(v) => Some(*v),
            ParamValue::Int(v) => Some(*v as f64),
            ParamValue::Cat(_) => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            ParamValue::Int(v) => Some(*v),
            ParamValue::Real(v) if v.fract() == 0.0 => Some(*v as i64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ParamValue::Cat(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Cat(s) => write!(f, "{s}"),
        }
    }
}

/// Ordered list of parameter definitions for one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ParamSpace {
    pub defs: Vec<ParamDef>,
}

impl ParamSpace {
    pub fn new(defs: Vec<ParamDef>) -> Self {
        ParamSpace { defs }
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ParamDef> {
        self.defs.iter().find(|d| d.name == name)
    }

    /// Check a single value against a definition.
    pub fn check_value(def: &ParamDef, value: &ParamValue) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match (&def.kind, value) {
            (ParamKind::Real { lo, hi }, v) => match v.as_f64() {
                Some(x) if x.is_finite() && x >= *lo && x <= *hi => Ok(()),
                _ => bad(format!(
                    "parameter `{}` = {} outside real range [{lo}, {hi}]",
                    def.name, value
                )),
            },
            (ParamKind::Int { lo, hi }, v) => match v.as_i64() {
                Some(x) if x >= *lo && x <= *hi => Ok(()),
                _ => bad(format!(
                    "parameter `{}` = {} outside integer range [{lo}, {hi}]",
                    def.name, value
                )),
            },
            (ParamKind::Cat { choices }, ParamValue::Cat(s)) if choices.contains(s) => Ok(()),
            (ParamKind::Cat { choices }, _) => bad(format!(
                "parameter `{}` = {} not among choices {choices:?}",
                def.name, value
            )),
        }
    }

    /// Validate every entry of `set`: unknown names and out-of-range values
    /// are rejected, naming the offending parameter.
    pub fn validate(&self, set: &ParamSet) -> Result<()> {
        for (name, value) in &set.values {
            let def = self
                .get(name)
                .ok_or_else(|| Error::Config(format!("unknown parameter `{name}`")))?;
            Self::check_value(def, value)?;
        }
        Ok(())
    }

    /// Defaults for every parameter.
    pub fn defaults(&self) -> ParamSet {
        let mut set = ParamSet::new();
        for d in &self.defs {
            set.values.insert(d.name.clone(), d.default.clone());
        }
        set
    }

    /// Defaults overlaid with `overrides`, validated.
    pub fn materialize(&self, overrides: &ParamSet) -> Result<ParamSet> {
        self.validate(overrides)?;
        let mut set = self.defaults();
        for (k, v) in &overrides.values {
            set.values.insert(k.clone(), v.clone());
        }
        Ok(set)
    }
}

/// A concrete parameter assignment (name -> value), ordered for stable output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ParamSet {
    #[serde(flatten)]
    pub values: BTreeMap<String, ParamValue>,
}

impl ParamSet {
    pub fn new() -> Self {
        ParamSet::default()
    }

    pub fn with(mut self, name: &str, value: ParamValue) -> Self {
        self.values.insert(name.into(), value);
        self
    }

    pub fn with_real(self, name: &str, v: f64) -> Self {
        self.with(name, ParamValue::Real(v))
    }

    pub fn with_int(self, name: &str, v: i64) -> Self {
        self.with(name, ParamValue::Int(v))
    }

    pub fn with_cat(self, name: &str, v: &str) -> Self {
        self.with(name, ParamValue::Cat(v.into()))
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.values.get(name)
    }

    pub fn f64(&self, name: &str) -> Result<f64> {
        self.get(name)
            .and_then(ParamValue::as_f64)
            .ok_or_else(|| Error::Config(format!("missing real parameter `{name}`")))
    }

    pub fn usize(&self, name: &str) -> Result<usize> {
        self.get(name)
            .and_then(ParamValue::as_i64)
            .filter(|v| *v >= 0)
            .map(|v| v as usize)
            .ok_or_else(|| Error::Config(format!("missing integer parameter `{name}`")))
    }

    pub fn str(&self, name: &str) -> Result<&str> {
        self.get(name)
            .and_then(ParamValue::as_str)
            .ok_or_else(|| Error::Config(format!("missing categorical parameter `{name}`")))
    }

    /// `k=v` pairs joined by `,`, stable order.
    pub fn compact(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Helpers for building definitions tersely.
pub fn real(name: &str, lo: f64, hi: f64, default: f64) -> ParamDef {
    ParamDef {
        name: name.into(),
        kind: ParamKind::Real { lo, hi },
        default: ParamValue::Real(default),
    }
}

pub fn int(name: &str, lo: i64, hi: i64, default: i64) -> ParamDef {
    ParamDef {
        name: name.into(),
        kind: ParamKind::Int { lo, hi },
        default: ParamValue::Int(default),
    }
}

pub fn cat(name: &str, choices: &[&str], default: &str) -> ParamDef {
    ParamDef {
        name: name.into(),
        kind: ParamKind::Cat {
            choices: choices.iter().map(|s| s.to_string()).collect(),
        },
        default: ParamValue::Cat(default.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> ParamSpace {
        ParamSpace::new(vec![
            real("f", 0.0, 1.0, 0.5),
            int("pop_size", 4, 256, 50),
            cat("strategy", &["rand/1", "best/1"], "rand/1"),
        ])
    }

    #[test]
    fn defaults_validate() {
        let s = space();
        s.validate(&s.defaults()).unwrap();
    }

    #[test]
    fn out_of_range_names_offender() {
        let s = space();
        let bad = ParamSet::new().with_real("f", 1.5);
        let err = s.validate(&bad).unwrap_err().to_string();
        assert!(err.contains("`f`"), "{err}");
    }

    #[test]
    fn unknown_parameter_rejected() {
        let s = space();
        let bad = ParamSet::new().with_real("nope", 0.1);
        assert!(s.validate(&bad).is_err());
    }

    #[test]
    fn materialize_overlays_defaults() {
        let s = space();
        let set = s
            .materialize(&ParamSet::new().with_int("pop_size", 8))
            .unwrap();
        assert_eq!(set.usize("pop_size").unwrap(), 8);
        assert_eq!(set.f64("f").unwrap(), 0.5);
        assert_eq!(set.str("strategy").unwrap(), "rand/1");
    }

    #[test]
    fn json_round_trip() {
        let set = space().defaults();
        let j = serde_json::to_string(&set).unwrap();
        let back: ParamSet = serde_json::from_str(&j).unwrap();
        // integers may come back as Real(50.0); compare through accessors
        assert_eq!(back.usize("pop_size").unwrap(), 50);
        assert_eq!(back.f64("f").unwrap(), 0.5);
    }
}
