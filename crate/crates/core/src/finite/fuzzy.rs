use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_joint, check_rows, close, random_grade, random_space, DetMap, FiniteCategory, STOCH_TOL,
};
use crate::error::{Error, Result};
use crate::kernel::{Accuracy, CategoryTag, ItCategory, SampleMorphisms, Side};
use crate::logic::check_all_unit;
use crate::space::Space;

/// The t-norm used for composition and products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TNorm {
    Min,
    Product,
}

impl TNorm {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Min => a.min(b),
            TNorm::Product => a * b,
        }
    }

    /// The residuum `R(p, q) = sup{c | T(p, c) ≤ q}`.
    #[inline]
    pub fn residuum(self, p: f64, q: f64) -> f64 {
        if p <= q {
            1.0
        } else {
            match self {
                TNorm::Min => q,
                TNorm::Product => q / p,
            }
        }
    }
}

/// Which conditional a fuzzy category designates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `a(x)(y) = H(x, y)`; rows may be subnormed.
    #[default]
    Raw,
    /// Row maxima raised to 1, so rows are normed.
    Normed,
}

/// A fuzzy IT: one membership row on the target per source element.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMap {
    source: Space,
    target: Space,
    rows: Vec<Vec<f64>>,
}

impl FuzzyMap {
    /// Rows must be normed (attain 1).
    pub fn new(source: Space, target: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = FuzzyMap::subnormed(source, target, rows)?;
        if let Some((row, r)) = m.rows.iter().enumerate().find(|(_, r)| !r.contains(&1.0)) {
            return Err(Error::NotNormed {
                row,
                sup: crate::logic::exists(r),
            });
        }
        Ok(m)
    }

    /// Rows only need entries in `[0, 1]`. Used for raw conditionals.
    pub fn subnormed(source: Space, target: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_rows(&rows, &source, &target)?;
        for row in &rows {
            check_all_unit(row)?;
        }
        Ok(FuzzyMap {
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

    pub fn is_normed(&self) -> bool {
        self.rows.iter().all(|r| r.contains(&1.0))
    }
}

/// FMT (`TNorm::Min`) or FPT (`TNorm::Product`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzyCat {
    pub norm: TNorm,
    pub variant: Variant,
}

impl FuzzyCat {
    pub const FMT: FuzzyCat = FuzzyCat {
        norm: TNorm::Min,
        variant: Variant::Raw,
    };
    pub const FPT: FuzzyCat = FuzzyCat {
        norm: TNorm::Product,
        variant: Variant::Raw,
    };

    pub fn with_variant(self, variant: Variant) -> Self {
        FuzzyCat { variant, ..self }
    }

    pub fn tolerance(&self) -> f64 {
        match self.norm {
            TNorm::Min => 0.0,
            TNorm::Product => STOCH_TOL,
        }
    }

    /// `a(x)(y) ≤ b(x)(y)` everywhere.
    pub fn pointwise_le(&self, a: &FuzzyMap, b: &FuzzyMap) -> bool {
        let tol = self.tolerance();
        a.rows
            .iter()
            .zip(&b.rows)
            .all(|(r, s)| r.iter().zip(s).all(|(&p, &q)| p <= q + tol))
    }
}

impl ItCategory for FuzzyCat {
    type Object = Space;
    type Morphism = FuzzyMap;

    fn tag(&self) -> CategoryTag {
        match self.norm {
            TNorm::Min => CategoryTag::Fmt,
            TNorm::Product => CategoryTag::Fpt,
        }
    }

    fn source(&self, m: &FuzzyMap) -> Space {
        m.source.clone()
    }

    fn target(&self, m: &FuzzyMap) -> Space {
        m.target.clone()
    }

    fn identity(&self, obj: &Space) -> FuzzyMap {
        self.embed(&DetMap::identity(obj))
    }

    /// `(b∘a)(x)(z) = sup_y T(a(x)(y), b(y)(z))`.
    fn compose(&self, after: &FuzzyMap, before: &FuzzyMap) -> Result<FuzzyMap> {
        after.source.ensure_same(&before.target)?;
        let rows = before
            .rows
            .iter()
            .map(|row| {
                (0..after.target.len())
                    .map(|z| {
                        row.iter()
                            .zip(&after.rows)
                            .fold(0.0, |acc, (&p, b)| f64::max(acc, self.norm.apply(p, b[z])))
                    })
                    .collect()
            })
            .collect();
        Ok(FuzzyMap {
            source: before.source.clone(),
            target: after.target.clone(),
            rows,
        })
    }

    fn terminal_object(&self) -> Space {
        Space::terminal()
    }

    fn terminal_morphism(&self, obj: &Space) -> FuzzyMap {
        self.embed(&DetMap::terminal(obj))
    }

    fn product_object(&self, first: &Space, second: &Space) -> Space {
        Space::product(first, second)
    }

    fn projection_first(&self, first: &Space, second: &Space) -> FuzzyMap {
        self.embed(&DetMap::projection_first(first, second))
    }

    fn projection_second(&self, first: &Space, second: &Space) -> FuzzyMap {
        self.embed(&DetMap::projection_second(first, second))
    }

    /// `(a*b)(x)(y, z) = T(a(x)(y), b(x)(z))`.
    fn product(&self, a: &FuzzyMap, b: &FuzzyMap) -> Result<FuzzyMap> {
        a.source.ensure_same(&b.source)?;
        let rows = a
            .rows
            .iter()
            .zip(&b.rows)
            .map(|(r, s)| {
                r.iter()
                    .flat_map(|&p| s.iter().map(move |&q| self.norm.apply(p, q)))
                    .collect()
            })
            .collect();
        Ok(FuzzyMap {
            source: a.source.clone(),
            target: Space::product(&a.target, &b.target),
            rows,
        })
    }

    fn is_deterministic(&self, m: &FuzzyMap) -> bool {
        self.as_deterministic(m).is_some()
    }

    fn accuracy(&self, a: &FuzzyMap, b: &FuzzyMap) -> Result<Accuracy> {
        a.source.ensure_same(&b.source)?;
        a.target.ensure_same(&b.target)?;
        Ok(Accuracy::from_flags(
            self.pointwise_le(a, b),
            self.pointwise_le(b, a),
        ))
    }

    fn approx_eq(&self, a: &FuzzyMap, b: &FuzzyMap) -> bool {
        a.source == b.source && a.target == b.target && close(&a.rows, &b.rows, self.tolerance())
    }

    /// FMT: `a(x)(y) = H(x, y)` (normed variant raises row maxima to 1).
    /// FPT: `a(x)(y) = H(x, y) / sup_z H(x, z)`, all ones when the sup is 0.
    fn conditional(
        &self,
        joint: &FuzzyMap,
        first: &Space,
        second: &Space,
        side: Side,
    ) -> Result<FuzzyMap> {
        check_joint(&joint.source, &joint.target, first, second)?;
        let (n, m) = (first.len(), second.len());
        let h = |x: usize, y: usize| joint.rows[0][Space::pair_index(x, y, m)];
        let (src, tgt, raw): (&Space, &Space, Vec<Vec<f64>>) = match side {
            Side::WrtFirst => (
                first,
                second,
                (0..n).map(|x| (0..m).map(|y| h(x, y)).collect()).collect(),
            ),
            Side::WrtSecond => (
                second,
                first,
                (0..m).map(|y| (0..n).map(|x| h(x, y)).collect()).collect(),
            ),
        };
        let rows = raw
            .into_iter()
            .map(|row| {
                let top = crate::logic::exists(&row);
                match (self.norm, self.variant) {
                    (TNorm::Min, Variant::Raw) => row,
                    (TNorm::Min, Variant::Normed) => row
                        .iter()
                        .map(|&v| if v == top { 1.0 } else { v })
                        .collect(),
                    (TNorm::Product, _) if top == 0.0 => vec![1.0; row.len()],
                    (TNorm::Product, _) => row
                        .iter()
                        .map(|&v| if v == top { 1.0 } else { v / top })
                        .collect(),
                }
            })
            .collect();
        FuzzyMap::subnormed(src.clone(), tgt.clone(), rows)
    }
}

impl FiniteCategory for FuzzyCat {
    /// Kronecker-delta rows.
    fn embed(&self, f: &DetMap) -> FuzzyMap {
        let rows = f
            .table()
            .iter()
            .map(|&t| {
                (0..f.target().len())
                    .map(|j| if j == t { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        FuzzyMap {
            source: f.source().clone(),
            target: f.target().clone(),
            rows,
        }
    }

    fn as_deterministic(&self, m: &FuzzyMap) -> Option<DetMap> {
        let table = m
            .rows
            .iter()
            .map(|r| {
                let ones: Vec<usize> = (0..r.len()).filter(|&j| r[j] == 1.0).collect();
                (ones.len() == 1 && r.iter().all(|&v| v == 0.0 || v == 1.0)).then(|| ones[0])
            })
            .collect::<Option<Vec<_>>>()?;
        DetMap::new(m.source.clone(), m.target.clone(), table).ok()
    }
}

impl SampleMorphisms for FuzzyCat {
    fn random_object(&self, rng: &mut ChaCha8Rng) -> Space {
        random_space(rng)
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, source: &Space, target: &Space) -> FuzzyMap {
        let rows = (0..source.len())
            .map(|_| {
                let mut row: Vec<f64> = (0..target.len()).map(|_| random_grade(rng)).collect();
                let peak = rng.gen_range(0..target.len());
                row[peak] = 1.0;
                row
            })
            .collect();
        FuzzyMap {
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
    ) -> FuzzyMap {
        self.embed(&DetMap::random(rng, source, target))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{checked_conditional, generated_joint};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn sp(name: &str, n: usize) -> Space {
        Space::indexed(name, &name.to_lowercase(), n).unwrap()
    }

    fn fm(s: &Space, t: &Space, rows: Vec<Vec<f64>>) -> FuzzyMap {
        FuzzyMap::new(s.clone(), t.clone(), rows).unwrap()
    }

    /// Direct enumeration of `sup_y T(a(x)(y), b(y)(z))`.
    fn compose_oracle(t: TNorm, a: &FuzzyMap, b: &FuzzyMap) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; b.target.len()]; a.source.len()];
        for (x, row) in out.iter_mut().enumerate() {
            for (z, cell) in row.iter_mut().enumerate() {
                for y in 0..a.target.len() {
                    *cell = f64::max(*cell, t.apply(a.get(x, y), b.get(y, z)));
                }
            }
        }
        out
    }

    #[test]
    fn fmt_composition_examples() {
        let (x, y, z) = (sp("X", 1), sp("Y", 2), sp("Z", 1));
        let a = fm(&x, &y, vec![vec![1.0, 0.2]]);
        let b = FuzzyMap::subnormed(y.clone(), z.clone(), vec![vec![0.5], vec![1.0]]).unwrap();
        let c = FuzzyCat::FMT.compose(&b, &a).unwrap();
        assert_eq!(c.rows(), compose_oracle(TNorm::Min, &a, &b).as_slice());
        assert_eq!(c.get(0, 0), 0.5);
        assert_eq!(
            FuzzyCat::FMT
                .compose(&FuzzyCat::FMT.identity(&y), &a)
                .unwrap(),
            a
        );

        let z2 = sp("Z", 2);
        let a = fm(&x, &y, vec![vec![1.0, 0.4]]);
        let b = fm(&y, &z2, vec![vec![0.0, 1.0], vec![1.0, 0.3]]);
        let c = FuzzyCat::FMT.compose(&b, &a).unwrap();
        assert_eq!(c.rows(), compose_oracle(TNorm::Min, &a, &b).as_slice());
        assert_eq!(c.rows(), &[vec![0.4, 1.0]]);
    }

    #[test]
    fn fpt_composition_examples() {
        let (x, y, z) = (sp("X", 1), sp("Y", 2), sp("Z", 1));
        let a = fm(&x, &y, vec![vec![1.0, 0.5]]);
        let b = FuzzyMap::subnormed(y.clone(), z.clone(), vec![vec![0.6], vec![1.0]]).unwrap();
        let c = FuzzyCat::FPT.compose(&b, &a).unwrap();
        assert_eq!(c.rows(), compose_oracle(TNorm::Product, &a, &b).as_slice());
        assert_eq!(c.get(0, 0), 0.6);
        assert_eq!(
            FuzzyCat::FPT
                .compose(&a, &FuzzyCat::FPT.identity(&x))
                .unwrap(),
            a
        );
    }

    #[test]
    fn product_examples() {
        let (x, y, z) = (sp("X", 1), sp("Y", 2), sp("Z", 2));
        let a = fm(&x, &y, vec![vec![0.6, 1.0]]);
        let b = fm(&x, &z, vec![vec![0.9, 1.0]]);
        assert_eq!(FuzzyCat::FMT.product(&a, &b).unwrap().get(0, 0), 0.6);
        assert!((FuzzyCat::FPT.product(&a, &b).unwrap().get(0, 0) - 0.54).abs() < 1e-12);
        let t = FuzzyCat::FMT.terminal_morphism(&x);
        let p = FuzzyCat::FMT.product(&a, &t).unwrap();
        assert_eq!(p.rows(), a.rows());
        let back = FuzzyCat::FMT
            .compose(
                &FuzzyCat::FMT.projection_first(&y, &z),
                &FuzzyCat::FMT.product(&a, &b).unwrap(),
            )
            .unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_subnormed_rows() {
        let (x, y) = (sp("X", 1), sp("Y", 2));
        assert!(matches!(
            FuzzyMap::new(x.clone(), y.clone(), vec![vec![0.5, 0.2]]),
            Err(Error::NotNormed { row: 0, .. })
        ));
        assert!(FuzzyMap::subnormed(x, y, vec![vec![0.5, 0.2]]).is_ok());
    }

    #[test]
    fn accuracy_is_pointwise_order() {
        let (x, y) = (sp("X", 1), sp("Y", 2));
        let a = fm(&x, &y, vec![vec![1.0, 0.2]]);
        let b = fm(&x, &y, vec![vec![1.0, 0.7]]);
        assert_eq!(
            FuzzyCat::FMT.accuracy(&a, &b).unwrap(),
            Accuracy::MoreAccurate
        );
        assert_eq!(
            FuzzyCat::FMT.accuracy(&b, &a).unwrap(),
            Accuracy::LessAccurate
        );
        assert_eq!(FuzzyCat::FMT.accuracy(&a, &a).unwrap(), Accuracy::Equal);
        let c = fm(&x, &y, vec![vec![0.1, 1.0]]);
        assert_eq!(
            FuzzyCat::FMT.accuracy(&a, &c).unwrap(),
            Accuracy::Incomparable
        );
    }

    #[test]
    fn generated_joint_example() {
        let (x, y) = (sp("X", 2), sp("Y", 2));
        let f = fm(&Space::terminal(), &x, vec![vec![1.0, 0.3]]);
        let a = fm(&x, &y, vec![vec![1.0, 0.5], vec![1.0, 1.0]]);
        let h = generated_joint(&FuzzyCat::FMT, &f, &a).unwrap();
        let oracle: Vec<f64> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| f.get(0, i).min(a.get(i, j)))
            .collect();
        assert_eq!(h.rows()[0], oracle);
        assert_eq!(h.rows()[0], vec![1.0, 0.5, 0.3, 0.3]);
    }

    #[test]
    fn conditional_examples() {
        let (x, y) = (sp("X", 2), sp("Y", 2));
        let xy = Space::product(&x, &y);
        let h = fm(&Space::terminal(), &xy, vec![vec![0.5, 1.0, 0.3, 0.2]]);
        let (a, ok) = checked_conditional(&FuzzyCat::FMT, &h, &x, &y, Side::WrtFirst).unwrap();
        assert!(ok);
        assert_eq!(a.rows(), &[vec![0.5, 1.0], vec![0.3, 0.2]]);
        let normed = FuzzyCat::FMT.with_variant(Variant::Normed);
        let (a, ok) = checked_conditional(&normed, &h, &x, &y, Side::WrtFirst).unwrap();
        assert!(ok && a.is_normed());
        assert_eq!(a.rows(), &[vec![0.5, 1.0], vec![1.0, 0.2]]);

        let h = fm(&Space::terminal(), &xy, vec![vec![0.5, 1.0, 0.15, 0.3]]);
        let (a, ok) = checked_conditional(&FuzzyCat::FPT, &h, &x, &y, Side::WrtFirst).unwrap();
        assert!(ok);
        assert_eq!(a.rows()[0], vec![0.5, 1.0]);
        assert!((a.rows()[1][0] - 0.5).abs() < 1e-12 && a.rows()[1][1] == 1.0);
    }

    #[test]
    fn bridge_matches_theorem1_on_normed_joints() {
        use crate::possibility::{conditional_theorem1, JointRelation};
        let (x, y) = (sp("X", 2), sp("Y", 3));
        let table = vec![vec![0.5, 1.0, 0.0], vec![0.3, 0.2, 0.7]];
        let rel = JointRelation::new(x.clone(), y.clone(), table.clone()).unwrap();
        let h = fm(
            &Space::terminal(),
            &Space::product(&x, &y),
            vec![table.concat()],
        );
        let a = FuzzyCat::FMT
            .conditional(&h, &x, &y, Side::WrtFirst)
            .unwrap();
        let (alpha, beta) = conditional_theorem1(&rel);
        assert_eq!(a.rows(), alpha.rows());
        let b = FuzzyCat::FMT
            .conditional(&h, &x, &y, Side::WrtSecond)
            .unwrap();
        assert_eq!(b.rows(), beta.rows());
    }

    fn cat() -> impl Strategy<Value = FuzzyCat> {
        prop_oneof![Just(FuzzyCat::FMT), Just(FuzzyCat::FPT)]
    }

    proptest! {
        #[test]
        fn normedness_is_preserved(c in cat(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b, d) = (random_space(&mut rng), random_space(&mut rng), random_space(&mut rng));
            let f = c.random_morphism(&mut rng, &a, &b);
            let g = c.random_morphism(&mut rng, &b, &d);
            let h = c.random_morphism(&mut rng, &a, &d);
            prop_assert!(c.compose(&g, &f).unwrap().is_normed());
            prop_assert!(c.product(&f, &h).unwrap().is_normed());
            let (got, want) = (c.compose(&g, &f).unwrap(), compose_oracle(c.norm, &f, &g));
            prop_assert_eq!(got.rows(), want.as_slice());
        }

        #[test]
        fn fmt_accuracy_is_monotone(seed in any::<u64>()) {
            let c = FuzzyCat::FMT;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b, d) = (random_space(&mut rng), random_space(&mut rng), random_space(&mut rng));
            let f = c.random_morphism(&mut rng, &a, &b);
            let g = c.random_morphism(&mut rng, &b, &d);
            let loosen = |m: &FuzzyMap, rng: &mut ChaCha8Rng| {
                let rows = m.rows().iter().map(|r| r.iter().map(|&v| v.max(random_grade(rng))).collect()).collect();
                FuzzyMap::new(m.source().clone(), m.target().clone(), rows).unwrap()
            };
            let (f2, g2) = (loosen(&f, &mut rng), loosen(&g, &mut rng));
            prop_assert!(c.accuracy(&c.compose(&g, &f).unwrap(), &c.compose(&g2, &f2).unwrap()).unwrap().at_least());
            let h = c.random_morphism(&mut rng, &a, &d);
            let h2 = loosen(&h, &mut rng);
            prop_assert!(c.accuracy(&c.product(&f, &h).unwrap(), &c.product(&f2, &h2).unwrap()).unwrap().at_least());
        }

        #[test]
        fn embedding_is_functorial(c in cat(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b, d) = (random_space(&mut rng), random_space(&mut rng), random_space(&mut rng));
            let f = DetMap::random(&mut rng, &a, &b);
            let g = DetMap::random(&mut rng, &b, &d);
            prop_assert_eq!(c.embed(&g.after(&f).unwrap()), c.compose(&c.embed(&g), &c.embed(&f)).unwrap());
            prop_assert_eq!(c.as_deterministic(&c.embed(&f)), Some(f));
        }

        #[test]
        fn deterministic_selection_is_never_less_accurate(seed in any::<u64>()) {
            let c = FuzzyCat::FMT;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = (random_space(&mut rng), random_space(&mut rng));
            let m = c.random_morphism(&mut rng, &a, &b);
            let table = m.rows().iter().map(|r| super::super::argmax(r)).collect();
            let d = c.embed(&DetMap::new(a, b, table).unwrap());
            prop_assert!(c.accuracy(&d, &m).unwrap().at_least());
        }
    }
}
