//! The five finite IT categories.
//!
//! Objects are [`Space`]s. Every category embeds deterministic maps
//! ([`DetMap`]) and builds its identities, projections and terminal
//! morphisms from that embedding, so all five agree on the row-major
//! product layout of [`Space::product`].

mod fuzzy;
mod multi;
mod set;
mod stoch;

pub use fuzzy::{FuzzyCat, FuzzyMap, TNorm, Variant};
pub use multi::{MultiCat, MultiMap};
pub use set::{det_map_from_labels, SetCat};
pub use stoch::{StochCat, StochMatrix};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::ItCategory;
use crate::space::Space;

pub const STOCH_TOL: f64 = 1e-12;

/// A total map between finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetMap {
    source: Space,
    target: Space,
    table: Vec<usize>,
}

impl DetMap {
    pub fn new(source: Space, target: Space, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::LengthMismatch {
                expected: source.len(),
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= target.len()) {
            return Err(Error::UnknownElement {
                space: target.name().to_string(),
                element: bad.to_string(),
            });
        }
        Ok(DetMap {
            source,
            target,
            table,
        })
    }

    pub fn identity(space: &Space) -> Self {
        DetMap {
            source: space.clone(),
            target: space.clone(),
            table: (0..space.len()).collect(),
        }
    }

    pub fn terminal(space: &Space) -> Self {
        DetMap {
            source: space.clone(),
            target: Space::terminal(),
            table: vec![0; space.len()],
        }
    }

    pub fn constant(source: &Space, target: &Space, value: usize) -> Self {
        DetMap {
            source: source.clone(),
            target: target.clone(),
            table: vec![value; source.len()],
        }
    }

    pub fn projection_first(first: &Space, second: &Space) -> Self {
        let m = second.len();
        DetMap {
            source: Space::product(first, second),
            target: first.clone(),
            table: (0..first.len() * m).map(|k| k / m).collect(),
        }
    }

    pub fn projection_second(first: &Space, second: &Space) -> Self {
        let m = second.len();
        DetMap {
            source: Space::product(first, second),
            target: second.clone(),
            table: (0..first.len() * m).map(|k| k % m).collect(),
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ before`.
    pub fn after(&self, before: &DetMap) -> Result<DetMap> {
        self.source.ensure_same(&before.target)?;
        Ok(DetMap {
            source: before.source.clone(),
            target: self.target.clone(),
            table: before.table.iter().map(|&y| self.table[y]).collect(),
        })
    }

    /// `x ↦ (self(x), other(x))`.
    pub fn pair(&self, other: &DetMap) -> Result<DetMap> {
        self.source.ensure_same(&other.source)?;
        let m = other.target.len();
        Ok(DetMap {
            source: self.source.clone(),
            target: Space::product(&self.target, &other.target),
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(&a, &b)| Space::pair_index(a, b, m))
                .collect(),
        })
    }

    /// Every map `source → target`, in lexicographic order of tables.
    pub fn enumerate(source: &Space, target: &Space) -> impl Iterator<Item = DetMap> {
        let (source, target) = (source.clone(), target.clone());
        let n = source.len();
        let m = target.len();
        let total = (m as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        (0..total).map(move |mut code| {
            let mut table = vec![0; n];
            for slot in table.iter_mut().rev() {
                *slot = (code % m as u64) as usize;
                code /= m as u64;
            }
            DetMap {
                source: source.clone(),
                target: target.clone(),
                table,
            }
        })
    }

    pub fn random(rng: &mut ChaCha8Rng, source: &Space, target: &Space) -> Self {
        let table = (0..source.len())
            .map(|_| rng.gen_range(0..target.len()))
            .collect();
        DetMap {
            source: source.clone(),
            target: target.clone(),
            table,
        }
    }
}

/// Finite categories: objects are spaces and deterministic maps embed.
pub trait FiniteCategory: ItCategory<Object = Space> {
    fn embed(&self, f: &DetMap) -> Self::Morphism;

    /// The deterministic map underlying a deterministic morphism.
    fn as_deterministic(&self, m: &Self::Morphism) -> Option<DetMap>;
}

/// Source/target checks shared by the table-backed payloads.
pub(crate) fn check_rows<T>(rows: &[Vec<T>], source: &Space, target: &Space) -> Result<()> {
    if rows.len() != source.len() {
        return Err(Error::LengthMismatch {
            expected: source.len(),
            found: rows.len(),
        });
    }
    for row in rows {
        if row.len() != target.len() {
            return Err(Error::LengthMismatch {
                expected: target.len(),
                found: row.len(),
            });
        }
    }
    Ok(())
}

pub(crate) fn check_joint(
    joint_source: &Space,
    joint_target: &Space,
    first: &Space,
    second: &Space,
) -> Result<()> {
    Space::terminal().ensure_same(joint_source)?;
    Space::product(first, second).ensure_same(joint_target)
}

pub(crate) fn random_space(rng: &mut ChaCha8Rng) -> Space {
    let n = rng.gen_range(1..=4);
    Space::indexed(&format!("S{n}"), "s", n).expect("nonempty")
}

/// A random entry biased towards 0, 1 and a coarse grid so ties occur.
pub(crate) fn random_grade(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..4) {
        0 => 0.0,
        1 => 1.0,
        2 => rng.gen_range(0..=4) as f64 / 4.0,
        _ => rng.gen::<f64>(),
    }
}

pub(crate) fn close(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(r, s)| r.len() == s.len() && r.iter().zip(s).all(|(x, y)| (x - y).abs() <= tol))
}

/// Index of the first maximum.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}
