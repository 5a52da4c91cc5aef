//! Fuzzy sets over finite spaces: comprehension, pointwise algebra, families
//! indexed by crisp or fuzzy index sets, and graded containment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{self, Quantifier, TruthFamily, TruthValue};
use crate::space::Space;

/// A membership vector over a space. Doubles as a possibility distribution
/// and as a fuzzy predicate. Normedness is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet {
    membership: TruthFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Complement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyOp {
    Union,
    Intersect,
}

impl FuzzySet {
    pub fn new(space: Space, membership: Vec<f64>) -> Result<Self> {
        Ok(FuzzySet {
            membership: TruthFamily::new(space, membership)?,
        })
    }

    pub fn empty(space: Space) -> Self {
        FuzzySet {
            membership: TruthFamily::constant(space, TruthValue::FALSE),
        }
    }

    pub fn whole(space: Space) -> Self {
        FuzzySet {
            membership: TruthFamily::constant(space, TruthValue::TRUE),
        }
    }

    /// Crisp singleton `{label}`.
    pub fn singleton(space: Space, index: usize) -> Self {
        let mut m = vec![0.0; space.len()];
        m[index] = 1.0;
        FuzzySet {
            membership: TruthFamily::new(space, m).expect("crisp values"),
        }
    }

    pub fn space(&self) -> &Space {
        self.membership.space()
    }

    pub fn membership(&self) -> &[f64] {
        self.membership.values()
    }

    pub fn grade(&self, i: usize) -> f64 {
        self.membership.values()[i]
    }

    pub fn family(&self) -> &TruthFamily {
        &self.membership
    }

    pub fn height(&self) -> f64 {
        logic::exists(self.membership())
    }

    pub fn is_normed(&self) -> bool {
        self.height() == 1.0
    }

    pub fn complement(&self) -> FuzzySet {
        FuzzySet {
            membership: self.membership.map(logic::neg),
        }
    }
}

/// `{x | φ(x)}`: the fuzzy set whose membership is the truth of `φ`.
pub fn comprehend(space: &Space, phi: &TruthFamily) -> Result<FuzzySet> {
    space.ensure_same(phi.space())?;
    Ok(FuzzySet {
        membership: phi.clone(),
    })
}

fn pointwise(a: &FuzzySet, b: &FuzzySet, f: impl Fn(f64, f64) -> f64) -> Result<FuzzySet> {
    a.space().ensure_same(b.space())?;
    let values = a
        .membership()
        .iter()
        .zip(b.membership())
        .map(|(&x, &y)| f(x, y))
        .collect();
    FuzzySet::new(a.space().clone(), values)
}

pub fn set_op(kind: SetOp, a: &FuzzySet, b: Option<&FuzzySet>) -> Result<FuzzySet> {
    let other = || b.ok_or_else(|| Error::Unsupported(format!("{kind:?} needs two operands")));
    match kind {
        SetOp::Complement => {
            if b.is_some() {
                return Err(Error::Unsupported("complement takes one operand".into()));
            }
            Ok(a.complement())
        }
        SetOp::Union => pointwise(a, other()?, logic::disj),
        SetOp::Intersect => pointwise(a, other()?, logic::conj),
    }
}

/// Union or intersection of a family `α(y)` of fuzzy sets. With an index
/// bound `Y`, the bounded quantifiers are used: union is `∃y∈Y x∈α(y)` and
/// intersection is `∀y∈Y x∈α(y)`.
pub fn family_op(
    kind: FamilyOp,
    family: &[FuzzySet],
    index_bound: Option<&FuzzySet>,
) -> Result<FuzzySet> {
    let first = family
        .first()
        .ok_or_else(|| Error::Unsupported("family operations need a nonempty family".into()))?;
    let space = first.space().clone();
    for member in family {
        space.ensure_same(member.space())?;
    }
    let bound: Vec<f64> = match index_bound {
        Some(b) => {
            if b.space().len() != family.len() {
                return Err(Error::LengthMismatch {
                    expected: family.len(),
                    found: b.space().len(),
                });
            }
            b.membership().to_vec()
        }
        None => vec![1.0; family.len()],
    };
    let values = (0..space.len())
        .map(|x| {
            let column: Vec<f64> = family.iter().map(|m| m.grade(x)).collect();
            match kind {
                FamilyOp::Union => logic::exists_in(&bound, &column),
                FamilyOp::Intersect => logic::forall_in(&bound, &column),
            }
        })
        .collect();
    FuzzySet::new(space, values)
}

/// Graded containment `A ⊂̇ B := ∀x∈A (x ∈ B)`.
pub fn containment(a: &FuzzySet, b: &FuzzySet) -> Result<TruthValue> {
    logic::bounded_quantify(Quantifier::Forall, a.family(), b.family())
}

/// Wire form: membership vector keyed by the space name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzySetRecord {
    pub space: String,
    pub membership: Vec<f64>,
}

impl From<&FuzzySet> for FuzzySetRecord {
    fn from(s: &FuzzySet) -> Self {
        FuzzySetRecord {
            space: s.space().name().to_string(),
            membership: s.membership().to_vec(),
        }
    }
}
