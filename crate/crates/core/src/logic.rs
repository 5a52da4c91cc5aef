//! First-order fuzzy logic over the truth-value interval `[0, 1]`.
//!
//! Connectives are the min/max/1−x family; quantifiers are inf/sup; bounded
//! quantifiers take a fuzzy bound and evaluate
//!
//! ```text
//! ∀x∈A B(x) = inf_x max(1 − A(x), B(x))
//! ∃x∈A B(x) = sup_x min(A(x), B(x))
//! ```
//!
//! The slice functions ([`forall`], [`exists`], [`forall_in`], [`exists_in`])
//! are the workhorses used by every other module; the typed wrappers validate
//! their inputs.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::Space;

/// A fuzzy truth value in `[0, 1]`.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct TruthValue(f64);

impl TruthValue {
    pub const FALSE: TruthValue = TruthValue(0.0);
    pub const TRUE: TruthValue = TruthValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        check_unit(value)?;
        Ok(TruthValue(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Debug for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<TruthValue> for f64 {
    fn from(t: TruthValue) -> f64 {
        t.0
    }
}

pub(crate) fn check_unit(value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain(value))
    }
}

pub(crate) fn check_all_unit(values: &[f64]) -> Result<()> {
    values.iter().try_for_each(|&v| check_unit(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    Conj,
    Disj,
    Neg,
    Impl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[inline]
pub fn conj(a: f64, b: f64) -> f64 {
    a.min(b)
}

#[inline]
pub fn disj(a: f64, b: f64) -> f64 {
    a.max(b)
}

#[inline]
pub fn neg(a: f64) -> f64 {
    1.0 - a
}

#[inline]
pub fn implies(a: f64, b: f64) -> f64 {
    disj(neg(a), b)
}

/// Applies a connective. `Neg` takes exactly one operand.
pub fn apply_connective(
    kind: Connective,
    a: TruthValue,
    b: Option<TruthValue>,
) -> Result<TruthValue> {
    let binary = |b: Option<TruthValue>| {
        b.ok_or_else(|| Error::Unsupported(format!("{kind:?} needs two operands")))
    };
    let v = match kind {
        Connective::Neg => {
            if b.is_some() {
                return Err(Error::Unsupported("negation takes one operand".into()));
            }
            neg(a.0)
        }
        Connective::Conj => conj(a.0, binary(b)?.0),
        Connective::Disj => disj(a.0, binary(b)?.0),
        Connective::Impl => implies(a.0, binary(b)?.0),
    };
    Ok(TruthValue(v))
}

/// `inf` over the family; `1` on an empty family.
pub fn forall(values: &[f64]) -> f64 {
    values.iter().copied().fold(1.0, f64::min)
}

/// `sup` over the family; `0` on an empty family.
pub fn exists(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// `∀x∈bound pred(x)`. Panics if the slices differ in length.
pub fn forall_in(bound: &[f64], pred: &[f64]) -> f64 {
    assert_eq!(bound.len(), pred.len(), "bound/predicate length mismatch");
    bound
        .iter()
        .zip(pred)
        .fold(1.0, |acc, (&a, &b)| acc.min(implies(a, b)))
}

/// `∃x∈bound pred(x)`. Panics if the slices differ in length.
pub fn exists_in(bound: &[f64], pred: &[f64]) -> f64 {
    assert_eq!(bound.len(), pred.len(), "bound/predicate length mismatch");
    bound
        .iter()
        .zip(pred)
        .fold(0.0, |acc, (&a, &b)| acc.max(conj(a, b)))
}

/// A family of truth values indexed by the elements of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthFamily {
    space: Space,
    values: Vec<f64>,
}

impl TruthFamily {
    pub fn new(space: Space, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        check_all_unit(&values)?;
        Ok(TruthFamily { space, values })
    }

    pub fn constant(space: Space, value: TruthValue) -> Self {
        let values = vec![value.0; space.len()];
        TruthFamily { space, values }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> TruthValue {
        TruthValue(self.values[i])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        TruthFamily {
            space: self.space.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

pub fn quantify(kind: Quantifier, family: &TruthFamily) -> TruthValue {
    TruthValue(match kind {
        Quantifier::Forall => forall(&family.values),
        Quantifier::Exists => exists(&family.values),
    })
}

pub fn bounded_quantify(
    kind: Quantifier,
    bound: &TruthFamily,
    pred: &TruthFamily,
) -> Result<TruthValue> {
    bound.space.ensure_same(&pred.space)?;
    Ok(TruthValue(match kind {
        Quantifier::Forall => forall_in(&bound.values, &pred.values),
        Quantifier::Exists => exists_in(&bound.values, &pred.values),
    }))
}
