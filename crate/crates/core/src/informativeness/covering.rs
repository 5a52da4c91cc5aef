//! Coverings: the informativeness classes of MULTI.
//!
//! Subsets of the source `D` are bitmasks. A multivalued map `a: D → R`
//! generates the family of preimages `a⁻(y)`. The weak class (pointwise
//! accuracy) closes it downward; the strong class (equality accuracy) keeps
//! the subsets of some generator that are unions of the generators they contain.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::MultiMap;

pub const MAX_COVERING_SOURCE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringMode {
    Weak,
    Strong,
}

/// A closed family of subsets of `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Covering {
    n: usize,
    mode: CoveringMode,
    sets: BTreeSet<u32>,
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

fn subset(a: u32, b: u32) -> bool {
    a & !b == 0
}

impl Covering {
    /// Closure of an arbitrary generating family.
    pub fn generated(n: usize, mode: CoveringMode, generators: &[u32]) -> Result<Self> {
        if n > MAX_COVERING_SOURCE {
            return Err(Error::Unsupported(format!(
                "coverings need |D| ≤ {MAX_COVERING_SOURCE}, got {n}"
            )));
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        if let Some(g) = generators.iter().find(|&&g| !subset(g, full)) {
            return Err(Error::InvalidSpace(format!(
                "subset {g:#b} outside a {n}-element set"
            )));
        }
        let mut sets = BTreeSet::new();
        for &g in generators {
            for s in submasks(g) {
                let keep = match mode {
                    CoveringMode::Weak => true,
                    CoveringMode::Strong => {
                        generators
                            .iter()
                            .filter(|&&h| subset(h, s))
                            .fold(0, |acc, &h| acc | h)
                            == s
                    }
                };
                if keep {
                    sets.insert(s);
                }
            }
        }
        sets.insert(0);
        Ok(Covering { n, mode, sets })
    }

    /// The class of `a`: closure of its preimages.
    pub fn of_map(a: &MultiMap, mode: CoveringMode) -> Result<Self> {
        let gens: Vec<u32> = (0..a.target().len())
            .map(|y| a.preimage(y).iter().fold(0u32, |acc, &x| acc | 1 << x))
            .collect();
        Covering::generated(a.source().len(), mode, &gens)
    }

    /// Class of the terminal map (least informative).
    pub fn zero(n: usize, mode: CoveringMode) -> Self {
        Covering::generated(n, mode, &[(1u32 << n) - 1]).expect("in range")
    }

    /// Class of the identity (most informative).
    pub fn one(n: usize, mode: CoveringMode) -> Self {
        let singles: Vec<u32> = (0..n).map(|x| 1u32 << x).collect();
        Covering::generated(n, mode, &singles).expect("in range")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mode(&self) -> CoveringMode {
        self.mode
    }

    pub fn sets(&self) -> &BTreeSet<u32> {
        &self.sets
    }

    /// Members as sorted element lists.
    pub fn members(&self) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|&s| (0..self.n).filter(|&x| s >> x & 1 == 1).collect())
            .collect()
    }

    /// `self ⪰ other`. Weak: `P₁ ⊆ P₂`. Strong: every member of `P₁` lies in a
    /// member of `P₂`, and every member of `P₂` is a union of members of `P₁`.
    pub fn dominates(&self, other: &Covering) -> bool {
        if self.n != other.n || self.mode != other.mode {
            return false;
        }
        match self.mode {
            CoveringMode::Weak => self.sets.is_subset(&other.sets),
            CoveringMode::Strong => {
                self.sets
                    .iter()
                    .all(|&a| other.sets.iter().any(|&b| subset(a, b)))
                    && other.sets.iter().all(|&b| {
                        self.sets
                            .iter()
                            .filter(|&&a| subset(a, b))
                            .fold(0, |acc, &a| acc | a)
                            == b
                    })
            }
        }
    }

    /// Class of a product: closure of the pairwise intersections.
    pub fn product(&self, other: &Covering) -> Result<Covering> {
        if self.n != other.n || self.mode != other.mode {
            return Err(Error::DimensionMismatch(
                "coverings of different sets or modes".into(),
            ));
        }
        let gens: Vec<u32> = self
            .sets
            .iter()
            .flat_map(|&a| other.sets.iter().map(move |&b| a & b))
            .collect();
        Covering::generated(self.n, self.mode, &gens)
    }
}

impl fmt::Display for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self
            .members()
            .iter()
            .map(|s| {
                format!(
                    "{{{}}}",
                    s.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", sets.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::MultiCat;
    use crate::kernel::ItCategory;
    use crate::space::Space;

    /// Every multivalued map `D → R` (nonempty rows).
    fn all_maps(d: &Space, r: &Space) -> Vec<MultiMap> {
        let k = r.len();
        let options: Vec<Vec<bool>> = (1u32..1 << k)
            .map(|m| (0..k).map(|y| m >> y & 1 == 1).collect())
            .collect();
        let mut out = vec![Vec::new()];
        for _ in 0..d.len() {
            out = out
                .into_iter()
                .flat_map(|rows: Vec<Vec<bool>>| {
                    options.iter().map(move |o| {
                        let mut next = rows.clone();
                        next.push(o.clone());
                        next
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|rows| MultiMap::new(d.clone(), r.clone(), rows).unwrap())
            .collect()
    }

    /// Brute-force oracle: some `c` with `c ∘ a ⊆ b` (weak) or `= b` (strong).
    fn exists_witness(a: &MultiMap, b: &MultiMap, mode: CoveringMode) -> bool {
        all_maps(a.target(), b.target()).iter().any(|c| {
            let ca = MultiCat.compose(c, a).unwrap();
            match mode {
                CoveringMode::Weak => MultiCat::subset(&ca, b),
                CoveringMode::Strong => ca == *b,
            }
        })
    }

    #[test]
    fn bounds() {
        for mode in [CoveringMode::Weak, CoveringMode::Strong] {
            assert!(Covering::one(3, mode).dominates(&Covering::zero(3, mode)));
            assert!(!Covering::zero(3, mode).dominates(&Covering::one(3, mode)));
        }
        assert_eq!(Covering::zero(2, CoveringMode::Weak).sets().len(), 4);
        assert_eq!(
            Covering::zero(2, CoveringMode::Strong).members(),
            vec![vec![], vec![0, 1]]
        );
    }

    #[test]
    fn covering_order_matches_brute_force() {
        let d = Space::indexed("D", "d", 2).unwrap();
        let r = Space::indexed("R", "r", 2).unwrap();
        let maps = all_maps(&d, &r);
        for mode in [CoveringMode::Weak, CoveringMode::Strong] {
            for a in &maps {
                for b in &maps {
                    let by_class = Covering::of_map(a, mode)
                        .unwrap()
                        .dominates(&Covering::of_map(b, mode).unwrap());
                    assert_eq!(
                        by_class,
                        exists_witness(a, b, mode),
                        "{mode:?} a={:?} b={:?}",
                        a.rows(),
                        b.rows()
                    );
                }
            }
        }
    }

    #[test]
    fn covering_order_matches_brute_force_on_three_points() {
        let d = Space::indexed("D", "d", 3).unwrap();
        let r = Space::indexed("R", "r", 2).unwrap();
        let maps = all_maps(&d, &r);
        for mode in [CoveringMode::Weak, CoveringMode::Strong] {
            for a in maps.iter().step_by(3) {
                for b in maps.iter().step_by(5) {
                    let by_class = Covering::of_map(a, mode)
                        .unwrap()
                        .dominates(&Covering::of_map(b, mode).unwrap());
                    assert_eq!(by_class, exists_witness(a, b, mode));
                }
            }
        }
    }

    #[test]
    fn product_class_is_class_of_product() {
        let d = Space::indexed("D", "d", 3).unwrap();
        let r = Space::indexed("R", "r", 2).unwrap();
        let maps = all_maps(&d, &r);
        for mode in [CoveringMode::Weak, CoveringMode::Strong] {
            for a in maps.iter().step_by(4) {
                for b in maps.iter().step_by(7) {
                    let joint = MultiCat.product(a, b).unwrap();
                    let lhs = Covering::of_map(&joint, mode).unwrap();
                    let rhs = Covering::of_map(a, mode)
                        .unwrap()
                        .product(&Covering::of_map(b, mode).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
