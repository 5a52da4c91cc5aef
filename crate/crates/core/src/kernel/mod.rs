//! The category-of-information-transformers interface.
//!
//! [`ItCategory`] is the dispatch table each concrete category implements:
//! composition, identities, the terminal object, projections and the
//! extended morphism product, plus an accuracy order and conditional ITs.
//! Everything else (the parallel product `⋇`, the swap `σ`, the associator
//! `α`, generated joints, marginals, reconstruction) is derived here once,
//! generically, from those primitives.

pub mod axioms;

use std::fmt;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CategoryTag {
    Set,
    Fmt,
    Fpt,
    Multi,
    Stoch,
    Linear,
}

impl CategoryTag {
    pub const ALL: [CategoryTag; 6] = [
        CategoryTag::Set,
        CategoryTag::Fmt,
        CategoryTag::Fpt,
        CategoryTag::Multi,
        CategoryTag::Stoch,
        CategoryTag::Linear,
    ];

    pub fn is_finite(self) -> bool {
        self != CategoryTag::Linear
    }
}

impl fmt::Display for CategoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CategoryTag::Set => "SET",
            CategoryTag::Fmt => "FMT",
            CategoryTag::Fpt => "FPT",
            CategoryTag::Multi => "MULTI",
            CategoryTag::Stoch => "STOCH",
            CategoryTag::Linear => "LINEAR",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for CategoryTag {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        CategoryTag::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::error::Error::Unsupported(format!("unknown category `{s}`")))
    }
}

/// Verdict of the accuracy order `⊵` on two ITs with the same source and target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accuracy {
    MoreAccurate,
    Equal,
    LessAccurate,
    Incomparable,
}

impl Accuracy {
    pub fn from_flags(a_le_b: bool, b_le_a: bool) -> Self {
        match (a_le_b, b_le_a) {
            (true, true) => Accuracy::Equal,
            (true, false) => Accuracy::MoreAccurate,
            (false, true) => Accuracy::LessAccurate,
            (false, false) => Accuracy::Incomparable,
        }
    }

    /// `a ⊵ b` (at least as accurate).
    pub fn at_least(self) -> bool {
        matches!(self, Accuracy::MoreAccurate | Accuracy::Equal)
    }
}

/// Which marginal a conditional IT is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `a: A → B` with `h = (i * a) ∘ π ∘ h`
    WrtFirst,
    /// `b: B → A` with `h = (b * i) ∘ ν ∘ h`
    WrtSecond,
}

pub trait ItCategory {
    type Object: Clone + PartialEq + fmt::Debug;
    type Morphism: Clone + fmt::Debug;

    fn tag(&self) -> CategoryTag;

    fn source(&self, m: &Self::Morphism) -> Self::Object;

    fn target(&self, m: &Self::Morphism) -> Self::Object;

    fn identity(&self, obj: &Self::Object) -> Self::Morphism;

    /// `after ∘ before`.
    fn compose(&self, after: &Self::Morphism, before: &Self::Morphism) -> Result<Self::Morphism>;

    fn terminal_object(&self) -> Self::Object;

    /// The unique `z_A: A → Z`.
    fn terminal_morphism(&self, obj: &Self::Object) -> Self::Morphism;

    fn product_object(&self, first: &Self::Object, second: &Self::Object) -> Self::Object;

    /// `π_{A,B}: A × B → A`.
    fn projection_first(&self, first: &Self::Object, second: &Self::Object) -> Self::Morphism;

    /// `ν_{A,B}: A × B → B`.
    fn projection_second(&self, first: &Self::Object, second: &Self::Object) -> Self::Morphism;

    /// The extended product `a * b: D → A × B` for `a: D → A`, `b: D → B`.
    fn product(&self, a: &Self::Morphism, b: &Self::Morphism) -> Result<Self::Morphism>;

    fn is_deterministic(&self, m: &Self::Morphism) -> bool;

    fn accuracy(&self, a: &Self::Morphism, b: &Self::Morphism) -> Result<Accuracy>;

    /// Payload equality at the category's tolerance.
    fn approx_eq(&self, a: &Self::Morphism, b: &Self::Morphism) -> bool;

    /// The designated conditional IT of a joint `h: Z → first × second`.
    fn conditional(
        &self,
        joint: &Self::Morphism,
        first: &Self::Object,
        second: &Self::Object,
        side: Side,
    ) -> Result<Self::Morphism>;
}

/// Seeded sampling of objects and morphisms, used by the axiom harness and
/// the property suites.
pub trait SampleMorphisms: ItCategory {
    fn random_object(&self, rng: &mut ChaCha8Rng) -> Self::Object;

    fn random_morphism(
        &self,
        rng: &mut ChaCha8Rng,
        source: &Self::Object,
        target: &Self::Object,
    ) -> Self::Morphism;

    fn random_deterministic(
        &self,
        rng: &mut ChaCha8Rng,
        source: &Self::Object,
        target: &Self::Object,
    ) -> Self::Morphism;
}

/// `a ⋇ b := (a ∘ π) * (b ∘ ν)`.
pub fn tensor<C: ItCategory>(cat: &C, a: &C::Morphism, b: &C::Morphism) -> Result<C::Morphism> {
    let (sa, sb) = (cat.source(a), cat.source(b));
    let left = cat.compose(a, &cat.projection_first(&sa, &sb))?;
    let right = cat.compose(b, &cat.projection_second(&sa, &sb))?;
    cat.product(&left, &right)
}

/// `σ_{A,B} := ν * π : A × B → B × A`.
pub fn swap<C: ItCategory>(cat: &C, first: &C::Object, second: &C::Object) -> C::Morphism {
    cat.product(
        &cat.projection_second(first, second),
        &cat.projection_first(first, second),
    )
    .expect("projections share a source")
}

/// `α_{A,B,C} := (π_{A,B} ∘ π) * ((ν_{A,B} ∘ π) * ν) : (A × B) × C → A × (B × C)`.
pub fn associator<C: ItCategory>(
    cat: &C,
    a: &C::Object,
    b: &C::Object,
    c: &C::Object,
) -> C::Morphism {
    let ab = cat.product_object(a, b);
    let outer_first = cat.projection_first(&ab, c);
    let outer_second = cat.projection_second(&ab, c);
    let to_a = cat
        .compose(&cat.projection_first(a, b), &outer_first)
        .expect("composable");
    let to_b = cat
        .compose(&cat.projection_second(a, b), &outer_first)
        .expect("composable");
    let to_bc = cat.product(&to_b, &outer_second).expect("common source");
    cat.product(&to_a, &to_bc).expect("common source")
}

/// Inverse of the associator: `A × (B × C) → (A × B) × C`.
pub fn associator_inverse<C: ItCategory>(
    cat: &C,
    a: &C::Object,
    b: &C::Object,
    c: &C::Object,
) -> C::Morphism {
    let bc = cat.product_object(b, c);
    let outer_first = cat.projection_first(a, &bc);
    let outer_second = cat.projection_second(a, &bc);
    let to_b = cat
        .compose(&cat.projection_first(b, c), &outer_second)
        .expect("composable");
    let to_c = cat
        .compose(&cat.projection_second(b, c), &outer_second)
        .expect("composable");
    let to_ab = cat.product(&outer_first, &to_b).expect("common source");
    cat.product(&to_ab, &to_c).expect("common source")
}

/// The joint distribution generated by `f: Z → A` and `a: A → B`: `h = (i * a) ∘ f`.
pub fn generated_joint<C: ItCategory>(
    cat: &C,
    f: &C::Morphism,
    a: &C::Morphism,
) -> Result<C::Morphism> {
    let first = cat.target(f);
    let stacked = cat.product(&cat.identity(&first), a)?;
    cat.compose(&stacked, f)
}

/// `(π ∘ h, ν ∘ h)`.
pub fn marginals<C: ItCategory>(
    cat: &C,
    joint: &C::Morphism,
    first: &C::Object,
    second: &C::Object,
) -> Result<(C::Morphism, C::Morphism)> {
    Ok((
        cat.compose(&cat.projection_first(first, second), joint)?,
        cat.compose(&cat.projection_second(first, second), joint)?,
    ))
}

/// Rebuilds the joint from a conditional: `(i * a) ∘ π ∘ h` or `(b * i) ∘ ν ∘ h`.
pub fn reconstruct<C: ItCategory>(
    cat: &C,
    joint: &C::Morphism,
    conditional: &C::Morphism,
    first: &C::Object,
    second: &C::Object,
    side: Side,
) -> Result<C::Morphism> {
    let (f, g) = marginals(cat, joint, first, second)?;
    match side {
        Side::WrtFirst => generated_joint(cat, &f, conditional),
        Side::WrtSecond => {
            let stacked = cat.product(conditional, &cat.identity(second))?;
            cat.compose(&stacked, &g)
        }
    }
}

/// Conditional of `joint` followed by the reconstruction check.
pub fn checked_conditional<C: ItCategory>(
    cat: &C,
    joint: &C::Morphism,
    first: &C::Object,
    second: &C::Object,
    side: Side,
) -> Result<(C::Morphism, bool)> {
    let cond = cat.conditional(joint, first, second, side)?;
    let rebuilt = reconstruct(cat, joint, &cond, first, second, side)?;
    Ok((cond.clone(), cat.approx_eq(&rebuilt, joint)))
}
