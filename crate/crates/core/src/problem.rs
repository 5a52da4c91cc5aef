//! The JSON problem-file format read by the command-line tool.
//!
//! Spaces are ordered label arrays. `Z` names the terminal object and cannot
//! be declared. Morphisms carry one payload shaped for their category;
//! relations are tables on a pair of spaces and serve as goodness tables and
//! joint distributions (for LINEAR, the full joint covariance).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::finite::Variant;
use crate::informativeness::{CoveringMode, Method, Order, DEFAULT_BUDGET};
use crate::kernel::CategoryTag;
use crate::space::Space;

pub const FORMAT_VERSION: u32 = 1;
pub const TERMINAL: &str = "Z";

/// A problem file rejected before any computation, with the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invalid {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

pub(crate) fn invalid(field: impl Into<String>, message: impl std::fmt::Display) -> Invalid {
    Invalid {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub category: CategoryTag,
    pub spaces: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relations: BTreeMap<String, RelationSpec>,
    pub problem: Problem,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub source: String,
    pub target: String,
    pub payload: Payload,
}

/// Category-shaped contents of a morphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    /// SET: the image label of every source element.
    Map(Vec<String>),
    /// MULTI: the image set of every source element.
    Sets(Vec<Vec<String>>),
    /// FMT, FPT, STOCH: one row per source element.
    Rows(Vec<Vec<f64>>),
    /// LINEAR: `gain` is target × source, `noise` is target × target.
    Linear {
        gain: Vec<Vec<f64>>,
        noise: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub first: String,
    pub second: String,
    pub table: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparatorKind {
    ExpectedGoodness,
    FuzzyGoodness,
    Accuracy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Problem {
    /// Optimal strategy for prior `Z → X`, experiment `X → Y`, goodness on `X × D`.
    Bayes {
        prior: String,
        experiment: String,
        goodness: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        comparator: Option<ComparatorKind>,
    },
    /// Both conditionals of a joint distribution.
    Conditional { joint: String },
    /// Informativeness of `a` against `b`.
    Compare {
        a: String,
        b: String,
        #[serde(default)]
        order: Order,
        #[serde(default)]
        method: Method,
    },
    /// Informativeness classes of the listed morphisms.
    Classes { morphisms: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default = "default_covering")]
    pub covering: CoveringMode,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_covering() -> CoveringMode {
    CoveringMode::Weak
}

impl Default for Options {
    fn default() -> Self {
        Options {
            variant: Variant::Raw,
            seed: 0,
            budget: DEFAULT_BUDGET,
            covering: CoveringMode::Weak,
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, Invalid> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| {
            invalid(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        file.validate()?;
        Ok(file)
    }

    /// Canonical JSON: sorted keys, two-space indentation.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("serializable");
        serde_json::to_string_pretty(&value).expect("serializable")
    }

    /// Structural checks that do not depend on the category's payload laws.
    pub fn validate(&self) -> Result<(), Invalid> {
        if self.version != FORMAT_VERSION {
            return Err(invalid(
                "version",
                format!(
                    "unsupported version {}, expected {FORMAT_VERSION}",
                    self.version
                ),
            ));
        }
        for (name, labels) in &self.spaces {
            let field = format!("spaces.{name}");
            if name == TERMINAL {
                return Err(invalid(field, "`Z` is reserved for the terminal object"));
            }
            Space::new(name.clone(), labels.clone()).map_err(|e| invalid(field, e))?;
        }
        for (name, m) in &self.morphisms {
            let field = format!("morphisms.{name}");
            self.space_ref(&format!("{field}.source"), &m.source)?;
            self.space_ref(&format!("{field}.target"), &m.target)?;
            let expected = match (self.category, &m.payload) {
                (CategoryTag::Set, Payload::Map(_))
                | (CategoryTag::Multi, Payload::Sets(_))
                | (CategoryTag::Fmt | CategoryTag::Fpt | CategoryTag::Stoch, Payload::Rows(_))
                | (CategoryTag::Linear, Payload::Linear { .. }) => None,
                (CategoryTag::Set, _) => Some("map"),
                (CategoryTag::Multi, _) => Some("sets"),
                (CategoryTag::Linear, _) => Some("linear"),
                _ => Some("rows"),
            };
            if let Some(kind) = expected {
                return Err(invalid(
                    format!("{field}.payload"),
                    format!("{} morphisms need a `{kind}` payload", self.category),
                ));
            }
            if let Payload::Rows(rows) = &m.payload {
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        let ok = match self.category {
                            CategoryTag::Stoch => v.is_finite() && *v >= 0.0,
                            _ => (0.0..=1.0).contains(v),
                        };
                        if !ok {
                            return Err(invalid(
                                format!("{field}.payload.rows[{i}][{j}]"),
                                format!("{v} outside the legal range"),
                            ));
                        }
                    }
                }
            }
        }
        for (name, r) in &self.relations {
            let field = format!("relations.{name}");
            self.space_ref(&format!("{field}.first"), &r.first)?;
            self.space_ref(&format!("{field}.second"), &r.second)?;
            if self.category != CategoryTag::Linear {
                for (i, row) in r.table.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        if !(0.0..=1.0).contains(v) {
                            return Err(invalid(
                                format!("{field}.table[{i}][{j}]"),
                                format!("membership {v} outside [0,1]"),
                            ));
                        }
                    }
                }
            }
        }
        match &self.problem {
            Problem::Bayes {
                prior,
                experiment,
                goodness,
                comparator,
            } => {
                if !self.category.is_finite() {
                    return Err(invalid("problem.kind", "bayes needs a finite category"));
                }
                self.morphism_ref("problem.prior", prior)?;
                self.morphism_ref("problem.experiment", experiment)?;
                self.relation_ref("problem.goodness", goodness)?;
                if comparator.is_none() && self.category != CategoryTag::Fmt {
                    return Err(invalid(
                        "problem.comparator",
                        format!("{} problems must declare a comparator", self.category),
                    ));
                }
            }
            Problem::Conditional { joint } => {
                self.relation_ref("problem.joint", joint)?;
            }
            Problem::Compare { a, b, .. } => {
                self.morphism_ref("problem.a", a)?;
                self.morphism_ref("problem.b", b)?;
            }
            Problem::Classes { morphisms } => {
                if morphisms.is_empty() {
                    return Err(invalid("problem.morphisms", "no morphisms listed"));
                }
                for (i, m) in morphisms.iter().enumerate() {
                    self.morphism_ref(&format!("problem.morphisms[{i}]"), m)?;
                }
            }
        }
        Ok(())
    }

    fn space_ref(&self, field: &str, name: &str) -> Result<(), Invalid> {
        if name == TERMINAL || self.spaces.contains_key(name) {
            Ok(())
        } else {
            Err(invalid(field, format!("unknown space `{name}`")))
        }
    }

    fn morphism_ref(&self, field: &str, name: &str) -> Result<(), Invalid> {
        if self.morphisms.contains_key(name) {
            Ok(())
        } else {
            Err(invalid(field, format!("unknown morphism `{name}`")))
        }
    }

    fn relation_ref(&self, field: &str, name: &str) -> Result<(), Invalid> {
        if self.relations.contains_key(name) {
            Ok(())
        } else {
            Err(invalid(field, format!("unknown relation `{name}`")))
        }
    }

    /// The declared space, or the terminal object for `Z`.
    pub fn space(&self, name: &str) -> Space {
        if name == TERMINAL {
            Space::terminal()
        } else {
            Space::new(name, self.spaces[name].clone()).expect("validated")
        }
    }
}
