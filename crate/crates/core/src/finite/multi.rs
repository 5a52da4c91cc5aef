use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{check_joint, check_rows, random_space, DetMap, FiniteCategory};
use crate::error::{Error, Result};
use crate::kernel::{Accuracy, CategoryTag, ItCategory, SampleMorphisms, Side};
use crate::space::Space;

/// An everywhere-defined multivalued map, rows as indicator vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    source: Space,
    target: Space,
    rows: Vec<Vec<bool>>,
}

impl MultiMap {
    pub fn new(source: Space, target: Space, rows: Vec<Vec<bool>>) -> Result<Self> {
        check_rows(&rows, &source, &target)?;
        if let Some(row) = rows.iter().position(|r| !r.contains(&true)) {
            return Err(Error::EmptyRow(row));
        }
        Ok(MultiMap {
            source,
            target,
            rows,
        })
    }

    pub fn from_sets(source: Space, target: Space, sets: &[Vec<usize>]) -> Result<Self> {
        if sets.len() != source.len() {
            return Err(Error::LengthMismatch {
                expected: source.len(),
                found: sets.len(),
            });
        }
        let mut rows = vec![vec![false; target.len()]; source.len()];
        for (row, set) in rows.iter_mut().zip(sets) {
            for &y in set {
                *row.get_mut(y).ok_or_else(|| Error::UnknownElement {
                    space: target.name().to_string(),
                    element: y.to_string(),
                })? = true;
            }
        }
        MultiMap::new(source, target, rows)
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x][y]
    }

    /// `a(x)` as a sorted index list.
    pub fn set(&self, x: usize) -> Vec<usize> {
        (0..self.target.len())
            .filter(|&y| self.rows[x][y])
            .collect()
    }

    /// `a⁻(y) = {x | y ∈ a(x)}`.
    pub fn preimage(&self, y: usize) -> Vec<usize> {
        (0..self.source.len())
            .filter(|&x| self.rows[x][y])
            .collect()
    }
}

/// Multivalued maps with relational composition. Accuracy is row inclusion.
#[derive(Debug, Clone, Copy, Default)]
pub struct MultiCat;

impl MultiCat {
    pub fn subset(a: &MultiMap, b: &MultiMap) -> bool {
        a.rows
            .iter()
            .zip(&b.rows)
            .all(|(r, s)| r.iter().zip(s).all(|(&p, &q)| !p || q))
    }
}

impl ItCategory for MultiCat {
    type Object = Space;
    type Morphism = MultiMap;

    fn tag(&self) -> CategoryTag {
        CategoryTag::Multi
    }

    fn source(&self, m: &MultiMap) -> Space {
        m.source.clone()
    }

    fn target(&self, m: &MultiMap) -> Space {
        m.target.clone()
    }

    fn identity(&self, obj: &Space) -> MultiMap {
        self.embed(&DetMap::identity(obj))
    }

    /// `(b∘a)(x) = ∪_{y∈a(x)} b(y)`.
    fn compose(&self, after: &MultiMap, before: &MultiMap) -> Result<MultiMap> {
        after.source.ensure_same(&before.target)?;
        let rows = before
            .rows
            .iter()
            .map(|row| {
                (0..after.target.len())
                    .map(|z| row.iter().zip(&after.rows).any(|(&p, b)| p && b[z]))
                    .collect()
            })
            .collect();
        Ok(MultiMap {
            source: before.source.clone(),
            target: after.target.clone(),
            rows,
        })
    }

    fn terminal_object(&self) -> Space {
        Space::terminal()
    }

    fn terminal_morphism(&self, obj: &Space) -> MultiMap {
        self.embed(&DetMap::terminal(obj))
    }

    fn product_object(&self, first: &Space, second: &Space) -> Space {
        Space::product(first, second)
    }

    fn projection_first(&self, first: &Space, second: &Space) -> MultiMap {
        self.embed(&DetMap::projection_first(first, second))
    }

    fn projection_second(&self, first: &Space, second: &Space) -> MultiMap {
        self.embed(&DetMap::projection_second(first, second))
    }

    /// `(a*b)(x) = a(x) × b(x)`.
    fn product(&self, a: &MultiMap, b: &MultiMap) -> Result<MultiMap> {
        a.source.ensure_same(&b.source)?;
        let rows = a
            .rows
            .iter()
            .zip(&b.rows)
            .map(|(r, s)| {
                r.iter()
                    .flat_map(|&p| s.iter().map(move |&q| p && q))
                    .collect()
            })
            .collect();
        Ok(MultiMap {
            source: a.source.clone(),
            target: Space::product(&a.target, &b.target),
            rows,
        })
    }

    fn is_deterministic(&self, m: &MultiMap) -> bool {
        m.rows.iter().all(|r| r.iter().filter(|&&v| v).count() == 1)
    }

    fn accuracy(&self, a: &MultiMap, b: &MultiMap) -> Result<Accuracy> {
        a.source.ensure_same(&b.source)?;
        a.target.ensure_same(&b.target)?;
        Ok(Accuracy::from_flags(
            MultiCat::subset(a, b),
            MultiCat::subset(b, a),
        ))
    }

    fn approx_eq(&self, a: &MultiMap, b: &MultiMap) -> bool {
        a == b
    }

    /// Sections of the joint's support, with the whole target outside its projection.
    fn conditional(
        &self,
        joint: &MultiMap,
        first: &Space,
        second: &Space,
        side: Side,
    ) -> Result<MultiMap> {
        check_joint(&joint.source, &joint.target, first, second)?;
        let m = second.len();
        let h = |x: usize, y: usize| joint.rows[0][Space::pair_index(x, y, m)];
        let (src, tgt) = match side {
            Side::WrtFirst => (first, second),
            Side::WrtSecond => (second, first),
        };
        let rows = (0..src.len())
            .map(|u| {
                let row: Vec<bool> = (0..tgt.len())
                    .map(|v| match side {
                        Side::WrtFirst => h(u, v),
                        Side::WrtSecond => h(v, u),
                    })
                    .collect();
                if row.contains(&true) {
                    row
                } else {
                    vec![true; tgt.len()]
                }
            })
            .collect();
        MultiMap::new(src.clone(), tgt.clone(), rows)
    }
}

impl FiniteCategory for MultiCat {
    fn embed(&self, f: &DetMap) -> MultiMap {
        let rows = f
            .table()
            .iter()
            .map(|&t| (0..f.target().len()).map(|j| j == t).collect())
            .collect();
        MultiMap {
            source: f.source().clone(),
            target: f.target().clone(),
            rows,
        }
    }

    fn as_deterministic(&self, m: &MultiMap) -> Option<DetMap> {
        if !self.is_deterministic(m) {
            return None;
        }
        let table = m
            .rows
            .iter()
            .map(|r| r.iter().position(|&v| v).expect("one element"))
            .collect();
        DetMap::new(m.source.clone(), m.target.clone(), table).ok()
    }
}

impl SampleMorphisms for MultiCat {
    fn random_object(&self, rng: &mut ChaCha8Rng) -> Space {
        random_space(rng)
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, source: &Space, target: &Space) -> MultiMap {
        let rows = (0..source.len())
            .map(|_| {
                let mut row: Vec<bool> = (0..target.len()).map(|_| rng.gen_bool(0.4)).collect();
                let forced = rng.gen_range(0..target.len());
                row[forced] = true;
                row
            })
            .collect();
        MultiMap {
            source: source.clone(),
            target: target.clone(),
            rows,
        }
    }

    fn random_deterministic(
        &self,
        rng: &mut ChaCha8Rng,
        source: &Space,
        target: &Space,
    ) -> MultiMap {
        self.embed(&DetMap::random(rng, source, target))
    }
}
