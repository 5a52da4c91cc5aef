//! Partitions of a finite set: the informativeness classes of SET.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::DetMap;

/// A partition of `{0, …, n-1}`, stored canonically: elements sorted inside
/// each block, blocks ordered by their least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidSpace("empty block".into()));
            }
            for &x in block {
                if x >= n || label[x] != usize::MAX {
                    return Err(Error::InvalidSpace(format!(
                        "element {x} out of range or repeated"
                    )));
                }
                label[x] = b;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(Error::InvalidSpace("blocks do not cover the set".into()));
        }
        Ok(Partition::from_labels(&label))
    }

    /// The kernel of a labelling: `x ~ x'` iff `labels[x] == labels[x']`.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<usize> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            match reps.iter().position(|&r| labels[r] == *l) {
                Some(b) => blocks[b].push(x),
                None => {
                    reps.push(x);
                    blocks.push(vec![x]);
                }
            }
        }
        Partition {
            n: labels.len(),
            blocks,
        }
    }

    /// The partition a map induces on its source.
    pub fn of_map(f: &DetMap) -> Self {
        Partition::from_labels(f.table())
    }

    /// Singletons: the class of the identity.
    pub fn discrete(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// One block: the class of a terminal map.
    pub fn single(n: usize) -> Self {
        Partition::from_labels(&vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                label[x] = b;
            }
        }
        label
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let theirs = other.labels();
        self.n == other.n
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|&x| theirs[x] == theirs[b[0]]))
    }

    /// Common refinement: the class of a product of maps.
    pub fn product(&self, other: &Partition) -> Result<Partition> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let pairs: Vec<(usize, usize)> = self.labels().into_iter().zip(other.labels()).collect();
        Ok(Partition::from_labels(&pairs))
    }

    /// All partitions of an `n`-set, via restricted growth strings.
    pub fn all(n: usize) -> Vec<Partition> {
        fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Partition>) {
            if prefix.len() == n {
                out.push(Partition::from_labels(prefix));
                return;
            }
            let top = prefix.iter().max().map_or(0, |m| m + 1);
            for l in 0..=top {
                prefix.push(l);
                grow(prefix, n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        grow(&mut Vec::new(), n, &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                format!(
                    "{{{}}}",
                    b.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "{}", blocks.join("|"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Space;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let p = Partition::from_labels(&["b", "a", "b", "c"]);
        let q = Partition::new(4, vec![vec![3], vec![1], vec![2, 0]]).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "{0,2}|{1}|{3}");
    }

    #[test]
    fn invalid_blocks_rejected() {
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn product_of_maps_is_common_refinement() {
        let d = Space::indexed("D", "d", 4).unwrap();
        let r = Space::indexed("R", "r", 2).unwrap();
        for f in DetMap::enumerate(&d, &r) {
            for g in DetMap::enumerate(&d, &r) {
                let joint = f.pair(&g).unwrap();
                let expected = Partition::of_map(&f)
                    .product(&Partition::of_map(&g))
                    .unwrap();
                assert_eq!(Partition::of_map(&joint), expected);
            }
        }
    }

    #[test]
    fn refinement_is_a_partial_order_with_bounds() {
        let all = Partition::all(4);
        for p in &all {
            assert!(p.refines(p));
            assert!(Partition::discrete(4).refines(p));
            assert!(p.refines(&Partition::single(4)));
            for q in &all {
                if p.refines(q) && q.refines(p) {
                    assert_eq!(p, q);
                }
            }
        }
    }
}
