//! Randomised checking of the IT-category laws.
//!
//! Each law draws its own seeded stream, so a report is a pure function of
//! `(category, seed, samples)`. Failures carry the offending morphisms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    associator, associator_inverse, generated_joint, swap, tensor, CategoryTag, ItCategory,
    SampleMorphisms,
};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// `c∘(b∘a) = (c∘b)∘a`
    Associativity,
    /// `a∘i = a = i∘a`
    Identity,
    /// every IT into `Z` is `z`
    Terminal,
    /// `π∘(a*b) = a`, `ν∘(a*b) = b`
    Projection,
    /// `(a*b)∘d = (a∘d)*(b∘d)` for deterministic `d`
    DeterministicDistributivity,
    /// `π∘(a⋇b) = a∘π`, `ν∘(a⋇b) = b∘ν`
    Tensor,
    /// `(a⋇b)∘(c*d) = (a∘c)*(b∘d)`
    Interchange,
    /// `σ∘(a*b) = b*a`, `σ∘σ = i`, `σ` deterministic
    Swap,
    /// `α∘((a*b)*c) = a*(b*c)`, `α⁻¹∘α = i`, `α` deterministic
    Associator,
    /// `π∘h = f` and `ν∘h = a∘f` for `h = (i*a)∘f`
    Marginals,
}

impl Law {
    pub const ALL: [Law; 10] = [
        Law::Associativity,
        Law::Identity,
        Law::Terminal,
        Law::Projection,
        Law::DeterministicDistributivity,
        Law::Tensor,
        Law::Interchange,
        Law::Swap,
        Law::Associator,
        Law::Marginals,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawResult {
    pub law: Law,
    pub samples: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub category: CategoryTag,
    pub seed: u64,
    pub samples: usize,
    pub laws: Vec<LawResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }
}

fn law_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs every law `samples` times.
pub fn verify_axioms<C: SampleMorphisms>(cat: &C, seed: u64, samples: usize) -> AxiomReport {
    let laws = Law::ALL
        .iter()
        .enumerate()
        .map(|(i, &law)| {
            let mut rng = law_rng(seed, i);
            let mut counterexample = None;
            for _ in 0..samples {
                match check(cat, law, &mut rng) {
                    Ok(None) => {}
                    Ok(Some(ce)) => {
                        counterexample = Some(ce);
                        break;
                    }
                    Err(e) => {
                        counterexample = Some(format!("error: {e}"));
                        break;
                    }
                }
            }
            LawResult {
                law,
                samples,
                passed: counterexample.is_none(),
                counterexample,
            }
        })
        .collect();
    AxiomReport {
        category: cat.tag(),
        seed,
        samples,
        laws,
    }
}

fn mismatch<C: ItCategory>(
    cat: &C,
    lhs: &C::Morphism,
    rhs: &C::Morphism,
    inputs: &[&C::Morphism],
) -> Option<String> {
    (!cat.approx_eq(lhs, rhs)).then(|| format!("inputs: {inputs:?}; lhs: {lhs:?}; rhs: {rhs:?}"))
}

/// One sample of one law. `Ok(Some(_))` is a counterexample.
fn check<C: SampleMorphisms>(cat: &C, law: Law, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let mut obj = || cat.random_object(rng);
    let (o1, o2, o3, o4) = (obj(), obj(), obj(), obj());
    Ok(match law {
        Law::Associativity => {
            let a = cat.random_morphism(rng, &o1, &o2);
            let b = cat.random_morphism(rng, &o2, &o3);
            let c = cat.random_morphism(rng, &o3, &o4);
            let lhs = cat.compose(&c, &cat.compose(&b, &a)?)?;
            let rhs = cat.compose(&cat.compose(&c, &b)?, &a)?;
            mismatch(cat, &lhs, &rhs, &[&a, &b, &c])
        }
        Law::Identity => {
            let a = cat.random_morphism(rng, &o1, &o2);
            let left = cat.compose(&cat.identity(&o2), &a)?;
            let right = cat.compose(&a, &cat.identity(&o1))?;
            mismatch(cat, &left, &a, &[&a]).or_else(|| mismatch(cat, &right, &a, &[&a]))
        }
        Law::Terminal => {
            let a = cat.random_morphism(rng, &o1, &o2);
            let z = cat.terminal_object();
            let via = cat.compose(&cat.terminal_morphism(&o2), &a)?;
            let any = cat.random_morphism(rng, &o1, &z);
            let direct = cat.terminal_morphism(&o1);
            mismatch(cat, &via, &direct, &[&a]).or_else(|| mismatch(cat, &any, &direct, &[&any]))
        }
        Law::Projection => {
            let a = cat.random_morphism(rng, &o1, &o2);
            let b = cat.random_morphism(rng, &o1, &o3);
            let p = cat.product(&a, &b)?;
            let pa = cat.compose(&cat.projection_first(&o2, &o3), &p)?;
            let pb = cat.compose(&cat.projection_second(&o2, &o3), &p)?;
            mismatch(cat, &pa, &a, &[&a, &b]).or_else(|| mismatch(cat, &pb, &b, &[&a, &b]))
        }
        Law::DeterministicDistributivity => {
            let d = cat.random_deterministic(rng, &o4, &o1);
            let a = cat.random_morphism(rng, &o1, &o2);
            let b = cat.random_morphism(rng, &o1, &o3);
            let lhs = cat.compose(&cat.product(&a, &b)?, &d)?;
            let rhs = cat.product(&cat.compose(&a, &d)?, &cat.compose(&b, &d)?)?;
            mismatch(cat, &lhs, &rhs, &[&a, &b, &d])
        }
        Law::Tensor => {
            let a = cat.random_morphism(rng, &o1, &o2);
            let b = cat.random_morphism(rng, &o3, &o4);
            let t = tensor(cat, &a, &b)?;
            let lhs1 = cat.compose(&cat.projection_first(&o2, &o4), &t)?;
            let rhs1 = cat.compose(&a, &cat.projection_first(&o1, &o3))?;
            let lhs2 = cat.compose(&cat.projection_second(&o2, &o4), &t)?;
            let rhs2 = cat.compose(&b, &cat.projection_second(&o1, &o3))?;
            mismatch(cat, &lhs1, &rhs1, &[&a, &b])
                .or_else(|| mismatch(cat, &lhs2, &rhs2, &[&a, &b]))
        }
        Law::Interchange => {
            let o5 = cat.random_object(rng);
            let c = cat.random_morphism(rng, &o5, &o1);
            let d = cat.random_morphism(rng, &o5, &o2);
            let a = cat.random_morphism(rng, &o1, &o3);
            let b = cat.random_morphism(rng, &o2, &o4);
            let lhs = cat.compose(&tensor(cat, &a, &b)?, &cat.product(&c, &d)?)?;
            let rhs = cat.product(&cat.compose(&a, &c)?, &cat.compose(&b, &d)?)?;
            mismatch(cat, &lhs, &rhs, &[&a, &b, &c, &d])
        }
        Law::Swap => {
            let a = cat.random_morphism(rng, &o1, &o2);
            let b = cat.random_morphism(rng, &o1, &o3);
            let s = swap(cat, &o2, &o3);
            let lhs = cat.compose(&s, &cat.product(&a, &b)?)?;
            let rhs = cat.product(&b, &a)?;
            let back = cat.compose(&swap(cat, &o3, &o2), &s)?;
            let id = cat.identity(&cat.product_object(&o2, &o3));
            mismatch(cat, &lhs, &rhs, &[&a, &b])
                .or_else(|| mismatch(cat, &back, &id, &[&s]))
                .or_else(|| {
                    (!cat.is_deterministic(&s)).then(|| format!("swap not deterministic: {s:?}"))
                })
        }
        Law::Associator => {
            let a = cat.random_morphism(rng, &o4, &o1);
            let b = cat.random_morphism(rng, &o4, &o2);
            let c = cat.random_morphism(rng, &o4, &o3);
            let al = associator(cat, &o1, &o2, &o3);
            let lhs = cat.compose(&al, &cat.product(&cat.product(&a, &b)?, &c)?)?;
            let rhs = cat.product(&a, &cat.product(&b, &c)?)?;
            let round = cat.compose(&associator_inverse(cat, &o1, &o2, &o3), &al)?;
            let id = cat.identity(&cat.product_object(&cat.product_object(&o1, &o2), &o3));
            mismatch(cat, &lhs, &rhs, &[&a, &b, &c])
                .or_else(|| mismatch(cat, &round, &id, &[&al]))
                .or_else(|| {
                    (!cat.is_deterministic(&al))
                        .then(|| format!("associator not deterministic: {al:?}"))
                })
        }
        Law::Marginals => {
            let z = cat.terminal_object();
            let f = cat.random_morphism(rng, &z, &o1);
            let a = cat.random_morphism(rng, &o1, &o2);
            let h = generated_joint(cat, &f, &a)?;
            let (mf, mg) = super::marginals(cat, &h, &o1, &o2)?;
            let g = cat.compose(&a, &f)?;
            mismatch(cat, &mf, &f, &[&f, &a]).or_else(|| mismatch(cat, &mg, &g, &[&f, &a]))
        }
    })
}
