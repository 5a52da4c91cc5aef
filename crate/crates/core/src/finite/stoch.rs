use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{check_joint, check_rows, close, random_space, DetMap, FiniteCategory, STOCH_TOL};
use crate::error::{Error, Result};
use crate::kernel::{Accuracy, CategoryTag, ItCategory, SampleMorphisms, Side};
use crate::space::Space;

/// A row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochMatrix {
    source: Space,
    target: Space,
    rows: Vec<Vec<f64>>,
}

impl StochMatrix {
    pub fn new(source: Space, target: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_rows(&rows, &source, &target)?;
        for (i, row) in rows.iter().enumerate() {
            if let Some(&v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::NotStochastic {
                    row: i,
                    reason: format!("entry {v} is negative or not finite"),
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCH_TOL {
                return Err(Error::NotStochastic {
                    row: i,
                    reason: format!("row sums to {sum}"),
                });
            }
        }
        Ok(StochMatrix {
            source,
            target,
            rows,
        })
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }
}

/// Finite Markov kernels. Accuracy is equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct StochCat;

impl ItCategory for StochCat {
    type Object = Space;
    type Morphism = StochMatrix;

    fn tag(&self) -> CategoryTag {
        CategoryTag::Stoch
    }

    fn source(&self, m: &StochMatrix) -> Space {
        m.source.clone()
    }

    fn target(&self, m: &StochMatrix) -> Space {
        m.target.clone()
    }

    fn identity(&self, obj: &Space) -> StochMatrix {
        self.embed(&DetMap::identity(obj))
    }

    /// Matrix product `a · b`.
    fn compose(&self, after: &StochMatrix, before: &StochMatrix) -> Result<StochMatrix> {
        after.source.ensure_same(&before.target)?;
        let rows = before
            .rows
            .iter()
            .map(|row| {
                (0..after.target.len())
                    .map(|z| row.iter().zip(&after.rows).map(|(&p, b)| p * b[z]).sum())
                    .collect()
            })
            .collect();
        Ok(StochMatrix {
            source: before.source.clone(),
            target: after.target.clone(),
            rows,
        })
    }

    fn terminal_object(&self) -> Space {
        Space::terminal()
    }

    fn terminal_morphism(&self, obj: &Space) -> StochMatrix {
        self.embed(&DetMap::terminal(obj))
    }

    fn product_object(&self, first: &Space, second: &Space) -> Space {
        Space::product(first, second)
    }

    fn projection_first(&self, first: &Space, second: &Space) -> StochMatrix {
        self.embed(&DetMap::projection_first(first, second))
    }

    fn projection_second(&self, first: &Space, second: &Space) -> StochMatrix {
        self.embed(&DetMap::projection_second(first, second))
    }

    /// Independent coupling: row-wise outer product.
    fn product(&self, a: &StochMatrix, b: &StochMatrix) -> Result<StochMatrix> {
        a.source.ensure_same(&b.source)?;
        let rows = a
            .rows
            .iter()
            .zip(&b.rows)
            .map(|(r, s)| {
                r.iter()
                    .flat_map(|&p| s.iter().map(move |&q| p * q))
                    .collect()
            })
            .collect();
        Ok(StochMatrix {
            source: a.source.clone(),
            target: Space::product(&a.target, &b.target),
            rows,
        })
    }

    fn is_deterministic(&self, m: &StochMatrix) -> bool {
        self.as_deterministic(m).is_some()
    }

    fn accuracy(&self, a: &StochMatrix, b: &StochMatrix) -> Result<Accuracy> {
        a.source.ensure_same(&b.source)?;
        a.target.ensure_same(&b.target)?;
        let eq = self.approx_eq(a, b);
        Ok(Accuracy::from_flags(eq, eq))
    }

    fn approx_eq(&self, a: &StochMatrix, b: &StochMatrix) -> bool {
        a.source == b.source && a.target == b.target && close(&a.rows, &b.rows, STOCH_TOL)
    }

    /// Finite Bayes rule `a(x)(y) = h(x, y) / f(x)`, uniform where `f(x) = 0`.
    fn conditional(
        &self,
        joint: &StochMatrix,
        first: &Space,
        second: &Space,
        side: Side,
    ) -> Result<StochMatrix> {
        check_joint(&joint.source, &joint.target, first, second)?;
        let m = second.len();
        let h = |x: usize, y: usize| joint.rows[0][Space::pair_index(x, y, m)];
        let (src, tgt) = match side {
            Side::WrtFirst => (first, second),
            Side::WrtSecond => (second, first),
        };
        let rows = (0..src.len())
            .map(|u| {
                let cells: Vec<f64> = (0..tgt.len())
                    .map(|v| match side {
                        Side::WrtFirst => h(u, v),
                        Side::WrtSecond => h(v, u),
                    })
                    .collect();
                let mass: f64 = cells.iter().sum();
                if mass > 0.0 {
                    cells.iter().map(|&c| c / mass).collect()
                } else {
                    vec![1.0 / tgt.len() as f64; tgt.len()]
                }
            })
            .collect();
        Ok(StochMatrix {
            source: src.clone(),
            target: tgt.clone(),
            rows,
        })
    }
}

impl FiniteCategory for StochCat {
    fn embed(&self, f: &DetMap) -> StochMatrix {
        let rows = f
            .table()
            .iter()
            .map(|&t| {
                (0..f.target().len())
                    .map(|j| if j == t { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        StochMatrix {
            source: f.source().clone(),
            target: f.target().clone(),
            rows,
        }
    }

    fn as_deterministic(&self, m: &StochMatrix) -> Option<DetMap> {
        let table = m
            .rows
            .iter()
            .map(|r| {
                let hit = r.iter().position(|&v| (v - 1.0).abs() <= STOCH_TOL)?;
                r.iter()
                    .enumerate()
                    .all(|(j, &v)| j == hit || v.abs() <= STOCH_TOL)
                    .then_some(hit)
            })
            .collect::<Option<Vec<_>>>()?;
        DetMap::new(m.source.clone(), m.target.clone(), table).ok()
    }
}

/// A random probability vector of length `n`, with occasional zeros.
pub(crate) fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen::<f64>()
            }
        })
        .collect();
    let forced = rng.gen_range(0..n);
    w[forced] += 0.1;
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    w
}

impl SampleMorphisms for StochCat {
    fn random_object(&self, rng: &mut ChaCha8Rng) -> Space {
        random_space(rng)
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, source: &Space, target: &Space) -> StochMatrix {
        let rows = (0..source.len())
            .map(|_| random_distribution(rng, target.len()))
            .collect();
        StochMatrix {
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
    ) -> StochMatrix {
        self.embed(&DetMap::random(rng, source, target))
    }
}
