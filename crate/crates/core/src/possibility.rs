//! Possibility calculus over finite spaces: joint distributions (fuzzy
//! relations), transition distributions, images, generated joints and the
//! conditional distributions that always exist for a min-based joint.
//!
//! Nothing here requires normedness; that is the job of the FMT/FPT
//! categories in [`crate::finite`]. [`TransitionDistribution::to_fuzzy_map`]
//! is the checked bridge between the two.

use crate::error::{Error, Result};
use crate::finite::FuzzyMap;
use crate::fuzzy_set::FuzzySet;
use crate::logic::{self, check_all_unit};
use crate::space::Space;

/// A fuzzy joint distribution `C(x, y)` on `X × Y`, stored as an `|X| × |Y|` table.
#[derive(Debug, Clone, PartialEq)]
pub struct JointRelation {
    first: Space,
    second: Space,
    table: Vec<Vec<f64>>,
}

/// A fuzzy transition distribution: one fuzzy set on the target per source element.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDistribution {
    source: Space,
    target: Space,
    rows: Vec<Vec<f64>>,
}

fn check_table(rows: &[Vec<f64>], n_rows: usize, n_cols: usize) -> Result<()> {
    if rows.len() != n_rows {
        return Err(Error::LengthMismatch {
            expected: n_rows,
            found: rows.len(),
        });
    }
    for row in rows {
        if row.len() != n_cols {
            return Err(Error::LengthMismatch {
                expected: n_cols,
                found: row.len(),
            });
        }
        check_all_unit(row)?;
    }
    Ok(())
}

impl JointRelation {
    pub fn new(first: Space, second: Space, table: Vec<Vec<f64>>) -> Result<Self> {
        check_table(&table, first.len(), second.len())?;
        Ok(JointRelation {
            first,
            second,
            table,
        })
    }

    pub fn first(&self) -> &Space {
        &self.first
    }

    pub fn second(&self) -> &Space {
        &self.second
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.table[x][y]
    }

    /// `C•(y, x) = C(x, y)`.
    pub fn converse(&self) -> JointRelation {
        let table = (0..self.second.len())
            .map(|y| (0..self.first.len()).map(|x| self.table[x][y]).collect())
            .collect();
        JointRelation {
            first: self.second.clone(),
            second: self.first.clone(),
            table,
        }
    }

    /// Row-wise and column-wise suprema.
    pub fn marginals(&self) -> (FuzzySet, FuzzySet) {
        let x = self.table.iter().map(|row| logic::exists(row)).collect();
        let y = (0..self.second.len())
            .map(|j| self.table.iter().map(|row| row[j]).fold(0.0, f64::max))
            .collect();
        (
            FuzzySet::new(self.first.clone(), x).expect("sup of unit values"),
            FuzzySet::new(self.second.clone(), y).expect("sup of unit values"),
        )
    }

    pub fn complement(&self) -> JointRelation {
        let table = self
            .table
            .iter()
            .map(|r| r.iter().map(|&v| logic::neg(v)).collect())
            .collect();
        JointRelation {
            first: self.first.clone(),
            second: self.second.clone(),
            table,
        }
    }

    /// The transition distribution `α(x) = {y | C(x, y)}` with the same table.
    pub fn sections(&self) -> TransitionDistribution {
        TransitionDistribution {
            source: self.first.clone(),
            target: self.second.clone(),
            rows: self.table.clone(),
        }
    }

    /// Flattened membership on the registered product `X × Y`.
    pub fn to_fuzzy_set(&self) -> FuzzySet {
        let space = Space::product(&self.first, &self.second);
        FuzzySet::new(space, self.table.concat()).expect("unit values")
    }
}

impl TransitionDistribution {
    pub fn new(source: Space, target: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_table(&rows, source.len(), target.len())?;
        Ok(TransitionDistribution {
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

    /// The FMT/FPT morphism with these rows. Fails unless every row is normed.
    pub fn to_fuzzy_map(&self) -> Result<FuzzyMap> {
        FuzzyMap::new(self.source.clone(), self.target.clone(), self.rows.clone())
    }

    pub fn row(&self, x: usize) -> FuzzySet {
        FuzzySet::new(self.target.clone(), self.rows[x].clone()).expect("unit values")
    }

    /// `A(x, y) = α(x)(y)`.
    pub fn to_joint(&self) -> JointRelation {
        JointRelation {
            first: self.source.clone(),
            second: self.target.clone(),
            table: self.rows.clone(),
        }
    }

    /// `ᾱ(x) = complement of α(x)`.
    pub fn complement(&self) -> TransitionDistribution {
        TransitionDistribution {
            source: self.source.clone(),
            target: self.target.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| logic::neg(v)).collect())
                .collect(),
        }
    }

    /// A deterministic map viewed as a crisp transition distribution.
    pub fn crisp(source: Space, target: Space, table: &[usize]) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::LengthMismatch {
                expected: source.len(),
                found: table.len(),
            });
        }
        let rows = table
            .iter()
            .map(|&t| {
                (0..target.len())
                    .map(|j| if j == t { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        TransitionDistribution::new(source, target, rows)
    }
}

fn column(alpha: &TransitionDistribution, y: usize) -> Vec<f64> {
    alpha.rows.iter().map(|r| r[y]).collect()
}

/// `αX = {y | ∃x∈X y∈α(x)}`.
pub fn image(alpha: &TransitionDistribution, prior: &FuzzySet) -> Result<FuzzySet> {
    alpha.source.ensure_same(prior.space())?;
    let values = (0..alpha.target.len())
        .map(|y| logic::exists_in(prior.membership(), &column(alpha, y)))
        .collect();
    FuzzySet::new(alpha.target.clone(), values)
}

/// `α∘X = {y | ∀x∈X y∈α(x)}`.
pub fn lower_image(alpha: &TransitionDistribution, prior: &FuzzySet) -> Result<FuzzySet> {
    alpha.source.ensure_same(prior.space())?;
    let values = (0..alpha.target.len())
        .map(|y| logic::forall_in(prior.membership(), &column(alpha, y)))
        .collect();
    FuzzySet::new(alpha.target.clone(), values)
}

/// `(α * X)(x, y) = min(X(x), α(x)(y))`.
pub fn generate_joint(alpha: &TransitionDistribution, prior: &FuzzySet) -> Result<JointRelation> {
    alpha.source.ensure_same(prior.space())?;
    let table = alpha
        .rows
        .iter()
        .zip(prior.membership())
        .map(|(row, &p)| row.iter().map(|&v| logic::conj(p, v)).collect())
        .collect();
    JointRelation::new(alpha.source.clone(), alpha.target.clone(), table)
}

/// Conditional distributions `α(x) = {y | A(x,y)}` and `β(y) = {x | A(x,y)}`.
/// They satisfy `A = α * X` and `A• = β * Y` exactly.
pub fn conditional_theorem1(
    joint: &JointRelation,
) -> (TransitionDistribution, TransitionDistribution) {
    (joint.sections(), joint.converse().sections())
}

/// Normed variant of a conditional: in each row every cell attaining the row
/// maximum is raised to 1. Reconstruction `min(X(x), α'(x)(y)) = A(x,y)` still holds.
pub fn promote_row_maxima(alpha: &TransitionDistribution) -> TransitionDistribution {
    let rows = alpha
        .rows
        .iter()
        .map(|row| {
            let top = logic::exists(row);
            row.iter()
                .map(|&v| if v == top { 1.0 } else { v })
                .collect()
        })
        .collect();
    TransitionDistribution {
        source: alpha.source.clone(),
        target: alpha.target.clone(),
        rows,
    }
}

/// The six values of the iterated-quantifier identities for `(A, φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedQuantifiers {
    /// `∀⟨x,y⟩∈A φ`, `∀x∈X ∀y∈α(x) φ`, `∀y∈Y ∀x∈β(y) φ`
    pub forall: [f64; 3],
    /// the same with `∃`
    pub exists: [f64; 3],
    pub forall_agree: bool,
    pub exists_agree: bool,
}

/// Evaluates `φ` (a table over `X × Y`) under the three quantifier orderings.
pub fn iterated_quantifiers(
    joint: &JointRelation,
    phi: &[Vec<f64>],
) -> Result<IteratedQuantifiers> {
    check_table(phi, joint.first.len(), joint.second.len())?;
    let (mx, my) = joint.marginals();
    let (alpha, beta) = conditional_theorem1(joint);
    let phi_t: Vec<Vec<f64>> = (0..joint.second.len())
        .map(|y| phi.iter().map(|r| r[y]).collect())
        .collect();

    let flat_a = joint.table.concat();
    let flat_phi = phi.concat();
    let forall_pair = logic::forall_in(&flat_a, &flat_phi);
    let exists_pair = logic::exists_in(&flat_a, &flat_phi);

    let inner_x: Vec<f64> = (0..joint.first.len())
        .map(|x| logic::forall_in(&alpha.rows[x], &phi[x]))
        .collect();
    let inner_y: Vec<f64> = (0..joint.second.len())
        .map(|y| logic::forall_in(&beta.rows[y], &phi_t[y]))
        .collect();
    let forall_x = logic::forall_in(mx.membership(), &inner_x);
    let forall_y = logic::forall_in(my.membership(), &inner_y);

    let inner_x: Vec<f64> = (0..joint.first.len())
        .map(|x| logic::exists_in(&alpha.rows[x], &phi[x]))
        .collect();
    let inner_y: Vec<f64> = (0..joint.second.len())
        .map(|y| logic::exists_in(&beta.rows[y], &phi_t[y]))
        .collect();
    let exists_x = logic::exists_in(mx.membership(), &inner_x);
    let exists_y = logic::exists_in(my.membership(), &inner_y);

    let forall = [forall_pair, forall_x, forall_y];
    let exists = [exists_pair, exists_x, exists_y];
    Ok(IteratedQuantifiers {
        forall_agree: forall.iter().all(|&v| v == forall[0]),
        exists_agree: exists.iter().all(|&v| v == exists[0]),
        forall,
        exists,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy_set::{family_op, FamilyOp};
    use proptest::prelude::*;

    fn spaces(n: usize, m: usize) -> (Space, Space) {
        (
            Space::indexed("X", "x", n).unwrap(),
            Space::indexed("Y", "y", m).unwrap(),
        )
    }

    fn joint(table: Vec<Vec<f64>>) -> JointRelation {
        let (x, y) = spaces(table.len(), table[0].len());
        JointRelation::new(x, y, table).unwrap()
    }

    #[test]
    fn bridge_requires_normed_rows() {
        let (x, y) = spaces(2, 2);
        let normed =
            TransitionDistribution::new(x.clone(), y.clone(), vec![vec![1.0, 0.5], vec![0.2, 1.0]])
                .unwrap();
        assert_eq!(normed.to_fuzzy_map().unwrap().rows(), normed.rows());
        let sub = TransitionDistribution::new(x, y, vec![vec![0.4, 0.5], vec![0.2, 1.0]]).unwrap();
        assert!(matches!(
            sub.to_fuzzy_map(),
            Err(Error::NotNormed { row: 0, .. })
        ));
    }

    #[test]
    fn converse_examples() {
        let a = joint(vec![vec![0.5, 1.0], vec![0.3, 0.2]]);
        assert_eq!(a.converse().table(), &[vec![0.5, 0.3], vec![1.0, 0.2]]);
        assert_eq!(a.converse().converse(), a);
        let (x, _) = spaces(2, 2);
        let sym = JointRelation::new(x.clone(), x, vec![vec![0.1, 0.4], vec![0.4, 0.9]]).unwrap();
        assert_eq!(sym.converse(), sym);
    }

    #[test]
    fn marginal_examples() {
        let a = joint(vec![vec![0.5, 1.0], vec![0.3, 0.2]]);
        let (mx, my) = a.marginals();
        // enumeration oracle
        let ox: Vec<f64> = (0..2)
            .map(|x| (0..2).map(|y| a.get(x, y)).fold(0.0, f64::max))
            .collect();
        let oy: Vec<f64> = (0..2)
            .map(|y| (0..2).map(|x| a.get(x, y)).fold(0.0, f64::max))
            .collect();
        assert_eq!(mx.membership(), ox.as_slice());
        assert_eq!(my.membership(), oy.as_slice());
        assert_eq!(mx.membership(), &[1.0, 0.3]);
        assert_eq!(my.membership(), &[0.5, 1.0]);
        let zero = joint(vec![vec![0.0; 3]; 2]);
        assert!(zero.marginals().0.membership().iter().all(|&v| v == 0.0));
        // Y = ∪̇_x α(x)
        let rows: Vec<FuzzySet> = (0..2).map(|x| a.sections().row(x)).collect();
        assert_eq!(family_op(FamilyOp::Union, &rows, None).unwrap(), my);
    }

    #[test]
    fn image_examples() {
        let (x, y) = spaces(2, 2);
        let alpha =
            TransitionDistribution::new(x.clone(), y.clone(), vec![vec![0.3, 0.9], vec![1.0, 0.2]])
                .unwrap();
        let prior = FuzzySet::new(x.clone(), vec![1.0, 0.4]).unwrap();
        let img = image(&alpha, &prior).unwrap();
        let oracle: Vec<f64> = (0..2)
            .map(|j| {
                (0..2)
                    .map(|i| prior.grade(i).min(alpha.rows()[i][j]))
                    .fold(0.0, f64::max)
            })
            .collect();
        assert_eq!(img.membership(), oracle.as_slice());
        assert_eq!(img.membership(), &[0.4, 0.9]);
        assert_eq!(
            image(&alpha, &FuzzySet::singleton(x.clone(), 1)).unwrap(),
            alpha.row(1)
        );
        assert!(image(&alpha, &FuzzySet::empty(x.clone()))
            .unwrap()
            .membership()
            .iter()
            .all(|&v| v == 0.0));
        assert_eq!(generate_joint(&alpha, &prior).unwrap().marginals().1, img);
    }

    #[test]
    fn lower_image_examples() {
        let (x, y) = spaces(2, 2);
        let alpha =
            TransitionDistribution::new(x.clone(), y.clone(), vec![vec![0.3, 0.9], vec![1.0, 0.2]])
                .unwrap();
        let prior = FuzzySet::new(x.clone(), vec![1.0, 0.4]).unwrap();
        assert_eq!(
            lower_image(&alpha, &FuzzySet::whole(x.clone()))
                .unwrap()
                .membership(),
            &[0.3, 0.2]
        );
        let lhs = lower_image(&alpha, &prior).unwrap().complement();
        let rhs = image(&alpha.complement(), &prior).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(
            lower_image(&alpha, &FuzzySet::empty(x)).unwrap(),
            FuzzySet::whole(y)
        );
    }

    #[test]
    fn generated_joint_examples() {
        let (x, y) = spaces(2, 2);
        let alpha =
            TransitionDistribution::new(x.clone(), y.clone(), vec![vec![1.0, 0.5], vec![1.0, 1.0]])
                .unwrap();
        let ones = FuzzySet::whole(x.clone());
        assert_eq!(generate_joint(&alpha, &ones).unwrap().table(), alpha.rows());
        let f = FuzzySet::new(x.clone(), vec![1.0, 0.3]).unwrap();
        assert_eq!(
            generate_joint(&alpha, &f).unwrap().table(),
            &[vec![1.0, 0.5], vec![0.3, 0.3]]
        );
        let capped = FuzzySet::new(x.clone(), vec![0.2, 0.2]).unwrap();
        assert!(generate_joint(&alpha, &capped)
            .unwrap()
            .table()
            .iter()
            .flatten()
            .all(|&v| v <= 0.2));
        let wrong = FuzzySet::whole(y);
        assert!(generate_joint(&alpha, &wrong).is_err());
    }

    #[test]
    fn theorem1_examples() {
        let a = joint(vec![vec![0.5, 1.0], vec![0.3, 0.2]]);
        let (alpha, beta) = conditional_theorem1(&a);
        assert_eq!(alpha.rows(), a.table());
        let (mx, my) = a.marginals();
        assert_eq!(generate_joint(&alpha, &mx).unwrap(), a);
        assert_eq!(generate_joint(&beta, &my).unwrap(), a.converse());

        let crisp = joint(vec![vec![1.0, 0.0], vec![1.0, 1.0]]);
        let (alpha, _) = conditional_theorem1(&crisp);
        assert_eq!(alpha.rows(), &[vec![1.0, 0.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn rank_one_reconstruction() {
        let u = [0.9, 0.4, 0.6];
        let v = [0.7, 0.2];
        let table: Vec<Vec<f64>> = u
            .iter()
            .map(|&a| v.iter().map(|&b| f64::min(a, b)).collect())
            .collect();
        let a = joint(table);
        let (mx, my) = a.marginals();
        let sup_u = 0.9f64;
        let sup_v = 0.7f64;
        let ox: Vec<f64> = u.iter().map(|&a| a.min(sup_v)).collect();
        let oy: Vec<f64> = v.iter().map(|&b| b.min(sup_u)).collect();
        assert_eq!(mx.membership(), ox.as_slice());
        assert_eq!(my.membership(), oy.as_slice());
        let (alpha, _) = conditional_theorem1(&a);
        let rebuilt = generate_joint(&alpha, &mx).unwrap();
        for x in 0..3 {
            for y in 0..2 {
                assert_eq!(rebuilt.get(x, y), a.get(x, y));
            }
        }
    }

    #[test]
    fn normed_variant_reconstructs() {
        let a = joint(vec![vec![0.5, 0.25], vec![0.3, 0.3]]);
        let (alpha, _) = conditional_theorem1(&a);
        let normed = promote_row_maxima(&alpha);
        assert_eq!(normed.rows(), &[vec![1.0, 0.25], vec![1.0, 1.0]]);
        assert_eq!(generate_joint(&normed, &a.marginals().0).unwrap(), a);
    }

    #[test]
    fn iterated_quantifier_examples() {
        let a = joint(vec![vec![0.5, 1.0], vec![0.3, 0.2]]);
        let phi = vec![vec![0.6, 0.6], vec![0.6, 0.6]];
        let r = iterated_quantifiers(&a, &phi).unwrap();
        assert!(r.forall_agree && r.exists_agree);
        // ∀ with constant c: max(1 − sup A, c); ∃: min(sup A, c)
        assert_eq!(r.forall[0], 0.6);
        assert_eq!(r.exists[0], 0.6);
    }

    #[test]
    fn iterated_quantifiers_crisp_reduce_to_boolean() {
        let a = joint(vec![vec![1.0, 0.0, 1.0], vec![0.0, 0.0, 1.0]]);
        let phi = vec![vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        let r = iterated_quantifiers(&a, &phi).unwrap();
        let graph: Vec<(usize, usize)> = vec![(0, 0), (0, 2), (1, 2)];
        let all = graph.iter().all(|&(x, y)| phi[x][y] == 1.0);
        let any = graph.iter().any(|&(x, y)| phi[x][y] == 1.0);
        assert_eq!(r.forall, [all as u8 as f64; 3]);
        assert_eq!(r.exists, [any as u8 as f64; 3]);
    }

    fn table(n: usize, m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(crate::testutil::unit(), m), n)
    }

    fn dims() -> impl Strategy<Value = (usize, usize)> {
        (1usize..=4, 1usize..=4)
    }

    proptest! {
        #[test]
        fn duality_and_theorem1((n, m) in dims(), seed in table(4, 4), prior in prop::collection::vec(crate::testutil::unit(), 4)) {
            let rows: Vec<Vec<f64>> = seed.iter().take(n).map(|r| r[..m].to_vec()).collect();
            let (x, y) = spaces(n, m);
            let alpha = TransitionDistribution::new(x.clone(), y, rows).unwrap();
            let prior = FuzzySet::new(x, prior[..n].to_vec()).unwrap();
            prop_assert_eq!(lower_image(&alpha, &prior).unwrap().complement(), image(&alpha.complement(), &prior).unwrap());
            let a = generate_joint(&alpha, &prior).unwrap();
            prop_assert_eq!(a.marginals().1, image(&alpha, &prior).unwrap());
            let (c, d) = conditional_theorem1(&a);
            let (mx, my) = a.marginals();
            prop_assert_eq!(generate_joint(&c, &mx).unwrap(), a.clone());
            prop_assert_eq!(generate_joint(&d, &my).unwrap(), a.converse());
        }

        #[test]
        fn image_is_join_preserving(rows in table(3, 3), p in prop::collection::vec(crate::testutil::unit(), 3), q in prop::collection::vec(crate::testutil::unit(), 3)) {
            let (x, y) = spaces(3, 3);
            let alpha = TransitionDistribution::new(x.clone(), y, rows).unwrap();
            let p = FuzzySet::new(x.clone(), p).unwrap();
            let q = FuzzySet::new(x, q).unwrap();
            let pq = crate::fuzzy_set::set_op(crate::fuzzy_set::SetOp::Union, &p, Some(&q)).unwrap();
            let lhs = image(&alpha, &pq).unwrap();
            let rhs = crate::fuzzy_set::set_op(crate::fuzzy_set::SetOp::Union, &image(&alpha, &p).unwrap(), Some(&image(&alpha, &q).unwrap())).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            let ip = image(&alpha, &p).unwrap();
            for (a, b) in ip.membership().iter().zip(lhs.membership()) {
                prop_assert!(a <= b);
            }
        }

        #[test]
        fn theorem2_triples_agree((n, m) in dims(), a in table(4, 4), phi in table(4, 4)) {
            let cut = |t: &Vec<Vec<f64>>| t.iter().take(n).map(|r| r[..m].to_vec()).collect::<Vec<_>>();
            let rel = joint(cut(&a));
            let r = iterated_quantifiers(&rel, &cut(&phi)).unwrap();
            prop_assert!(r.forall_agree, "{:?}", r);
            prop_assert!(r.exists_agree, "{:?}", r);
        }
    }
}
