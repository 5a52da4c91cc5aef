//! The commutative monoid of informativeness classes.

use std::fmt::Display;

use nalgebra::DMatrix;
use serde::Serialize;

use super::covering::{Covering, CoveringMode};
use super::partition::Partition;
use crate::error::Result;
use crate::kernel::ItCategory;
use crate::linear::{info_class, InfoClass, LinearCat, LinearIt};

/// Classes with a product and a domination preorder.
pub trait ClassMonoid {
    type Class: Clone + Display;

    /// The least informative class (terminal map).
    fn zero(&self) -> Self::Class;

    /// The most informative class (identity).
    fn one(&self) -> Self::Class;

    fn mul(&self, a: &Self::Class, b: &Self::Class) -> Result<Self::Class>;

    /// `a ⪰ b`.
    fn dominates(&self, a: &Self::Class, b: &Self::Class) -> bool;

    fn equivalent(&self, a: &Self::Class, b: &Self::Class) -> bool {
        self.dominates(a, b) && self.dominates(b, a)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoidLaw {
    pub name: &'static str,
    pub checked: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoidReport {
    pub classes: usize,
    pub laws: Vec<MonoidLaw>,
}

impl MonoidReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> MonoidLaw {
        MonoidLaw {
            name: self.name,
            checked: self.checked,
            passed: self.counterexample.is_none(),
            counterexample: self.counterexample,
        }
    }
}

/// Checks, over all pairs and triples drawn from `classes`:
/// (a) `0 * a ~ a`, (b) `1 * a ~ 1`, (c) `1 ⪰ a ⪰ 0`, (d) `a * b ⪰ a` and `⪰ b`,
/// (e) `a ⪰ b ⇒ a * c ⪰ b * c`, plus commutativity and associativity up to `~`.
pub fn class_monoid_check<M: ClassMonoid>(
    monoid: &M,
    classes: &[M::Class],
) -> Result<MonoidReport> {
    let zero = monoid.zero();
    let one = monoid.one();
    let mut neutral = Tally::new("zero_is_neutral");
    let mut absorbing = Tally::new("one_is_absorbing");
    let mut bounds = Tally::new("bounds");
    let mut dominates = Tally::new("product_dominates_factors");
    let mut monotone = Tally::new("monotone");
    let mut commutative = Tally::new("commutative");
    let mut associative = Tally::new("associative");

    let products: Vec<Vec<M::Class>> = classes
        .iter()
        .map(|a| {
            classes
                .iter()
                .map(|b| monoid.mul(a, b))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    for a in classes {
        neutral.record(monoid.equivalent(&monoid.mul(&zero, a)?, a), || {
            format!("a = {a}")
        });
        absorbing.record(monoid.equivalent(&monoid.mul(&one, a)?, &one), || {
            format!("a = {a}")
        });
        bounds.record(
            monoid.dominates(&one, a) && monoid.dominates(a, &zero),
            || format!("a = {a}"),
        );
    }
    for (i, a) in classes.iter().enumerate() {
        for (j, b) in classes.iter().enumerate() {
            let ab = &products[i][j];
            dominates.record(monoid.dominates(ab, a) && monoid.dominates(ab, b), || {
                format!("a = {a}, b = {b}")
            });
            commutative.record(monoid.equivalent(ab, &products[j][i]), || {
                format!("a = {a}, b = {b}")
            });
            let a_over_b = monoid.dominates(a, b);
            for (k, c) in classes.iter().enumerate() {
                if a_over_b {
                    monotone.record(monoid.dominates(&products[i][k], &products[j][k]), || {
                        format!("a = {a}, b = {b}, c = {c}")
                    });
                }
                let left = monoid.mul(ab, c)?;
                let right = monoid.mul(a, &products[j][k])?;
                associative.record(monoid.equivalent(&left, &right), || {
                    format!("a = {a}, b = {b}, c = {c}")
                });
            }
        }
    }
    Ok(MonoidReport {
        classes: classes.len(),
        laws: [
            neutral,
            absorbing,
            bounds,
            dominates,
            monotone,
            commutative,
            associative,
        ]
        .into_iter()
        .map(Tally::finish)
        .collect(),
    })
}

/// Partitions of an `n`-set under refinement.
pub struct PartitionMonoid(pub usize);

impl ClassMonoid for PartitionMonoid {
    type Class = Partition;

    fn zero(&self) -> Partition {
        Partition::single(self.0)
    }

    fn one(&self) -> Partition {
        Partition::discrete(self.0)
    }

    fn mul(&self, a: &Partition, b: &Partition) -> Result<Partition> {
        a.product(b)
    }

    fn dominates(&self, a: &Partition, b: &Partition) -> bool {
        a.refines(b)
    }
}

/// Coverings of an `n`-set in one mode.
pub struct CoveringMonoid {
    pub n: usize,
    pub mode: CoveringMode,
}

impl ClassMonoid for CoveringMonoid {
    type Class = Covering;

    fn zero(&self) -> Covering {
        Covering::zero(self.n, self.mode)
    }

    fn one(&self) -> Covering {
        Covering::one(self.n, self.mode)
    }

    fn mul(&self, a: &Covering, b: &Covering) -> Result<Covering> {
        a.product(b)
    }

    fn dominates(&self, a: &Covering, b: &Covering) -> bool {
        a.dominates(b)
    }
}

/// `⟨Q, S⟩` classes on `R^n`. The product is the class of the stacked
/// observations `⟨U₁ᵀ, S₁⟩ * ⟨U₂ᵀ, S₂⟩`.
pub struct LinearMonoid(pub usize);

fn representative(c: &InfoClass) -> Result<LinearIt> {
    LinearIt::new(c.basis.transpose(), c.s.clone())
}

impl ClassMonoid for LinearMonoid {
    type Class = InfoClass;

    fn zero(&self) -> InfoClass {
        info_class(&LinearIt::deterministic(DMatrix::zeros(0, self.0)))
    }

    fn one(&self) -> InfoClass {
        info_class(&LinearIt::deterministic(DMatrix::identity(self.0, self.0)))
    }

    fn mul(&self, a: &InfoClass, b: &InfoClass) -> Result<InfoClass> {
        Ok(info_class(
            &LinearCat.product(&representative(a)?, &representative(b)?)?,
        ))
    }

    fn dominates(&self, a: &InfoClass, b: &InfoClass) -> bool {
        a.dominates(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{MultiCat, MultiMap};
    use crate::kernel::SampleMorphisms;
    use crate::space::Space;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_partitions_of_four_form_the_monoid() {
        let report = class_monoid_check(&PartitionMonoid(4), &Partition::all(4)).unwrap();
        assert_eq!(report.classes, 15);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(
            report
                .laws
                .iter()
                .find(|l| l.name == "associative")
                .unwrap()
                .checked,
            15 * 15 * 15
        );
    }

    #[test]
    fn sampled_coverings_form_the_monoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = Space::indexed("D", "d", 3).unwrap();
        for mode in [CoveringMode::Weak, CoveringMode::Strong] {
            let mut classes: Vec<Covering> = Vec::new();
            for k in 1..=3 {
                let r = Space::indexed("R", "r", k).unwrap();
                for _ in 0..8 {
                    let a: MultiMap = MultiCat.random_morphism(&mut rng, &d, &r);
                    classes.push(Covering::of_map(&a, mode).unwrap());
                }
            }
            let report = class_monoid_check(&CoveringMonoid { n: 3, mode }, &classes).unwrap();
            assert!(report.all_passed(), "{mode:?}: {report:?}");
        }
    }

    #[test]
    fn linear_classes_form_the_monoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let classes: Vec<InfoClass> = (0..6)
            .map(|_| {
                let m = rand::Rng::gen_range(&mut rng, 1..=3);
                info_class(&LinearCat.random_morphism(&mut rng, &3, &m))
            })
            .collect();
        let report = class_monoid_check(&LinearMonoid(3), &classes).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn broken_product_is_caught() {
        struct Broken;
        impl ClassMonoid for Broken {
            type Class = Partition;
            fn zero(&self) -> Partition {
                Partition::single(3)
            }
            fn one(&self) -> Partition {
                Partition::discrete(3)
            }
            fn mul(&self, a: &Partition, _: &Partition) -> Result<Partition> {
                Ok(a.clone())
            }
            fn dominates(&self, a: &Partition, b: &Partition) -> bool {
                a.refines(b)
            }
        }
        let report = class_monoid_check(&Broken, &Partition::all(3)).unwrap();
        assert!(!report.all_passed());
    }
}
