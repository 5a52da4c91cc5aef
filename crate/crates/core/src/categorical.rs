//! Decision problems stated inside an IT category: the Bayesian principle
//! over optimal-strategy sets and the reduction to deterministic strategies.
//!
//! A problem fixes a prior `f: Z → D`, an experiment `a: D → R`, a decision
//! object `U` and a preorder on joints `Z → D × U` whose `D`-marginal is `f`.
//! A strategy `r: R → U` is optimal when `(i * (r ∘ a)) ∘ f` is maximal.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{
    argmax, DetMap, FiniteCategory, FuzzyCat, FuzzyMap, MultiCat, MultiMap, SetCat, StochCat,
    StochMatrix,
};
use crate::kernel::{generated_joint, CategoryTag, ItCategory, SampleMorphisms, Side};
use crate::linear::{LinearCat, LinearIt};
use crate::logic;
use crate::space::Space;

/// Score tolerance for categories whose joints are computed with rounding.
pub const SCORE_TOL: f64 = 1e-9;

/// Membership grades of a distribution `Z → A`, one entry per element of `A`.
pub trait JointGrades: FiniteCategory {
    fn grades(&self, h: &Self::Morphism) -> Vec<f64>;

    fn score_tolerance(&self) -> f64 {
        match self.tag() {
            CategoryTag::Stoch | CategoryTag::Fpt => SCORE_TOL,
            _ => 0.0,
        }
    }
}

impl JointGrades for SetCat {
    fn grades(&self, h: &DetMap) -> Vec<f64> {
        (0..h.target().len())
            .map(|k| if k == h.apply(0) { 1.0 } else { 0.0 })
            .collect()
    }
}

impl JointGrades for FuzzyCat {
    fn grades(&self, h: &FuzzyMap) -> Vec<f64> {
        h.rows()[0].clone()
    }
}

impl JointGrades for MultiCat {
    fn grades(&self, h: &MultiMap) -> Vec<f64> {
        h.rows()[0]
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect()
    }
}

impl JointGrades for StochCat {
    fn grades(&self, h: &StochMatrix) -> Vec<f64> {
        h.rows()[0].clone()
    }
}

/// A preorder on joints over `D × U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// `Σ h(d, u) G(d, u)`, larger is better.
    ExpectedGoodness(Vec<Vec<f64>>),
    /// `∀̇(d, u)∈h G(d, u)`, larger is better.
    FuzzyGoodness(Vec<Vec<f64>>),
    /// The category's accuracy order on joints.
    Accuracy,
}

impl Comparator {
    fn check(&self, decisions: &Space, actions: &Space) -> Result<()> {
        if let Comparator::ExpectedGoodness(g) | Comparator::FuzzyGoodness(g) = self {
            crate::finite::check_rows(g, decisions, actions)?;
            if let Comparator::FuzzyGoodness(_) = self {
                for row in g {
                    logic::check_all_unit(row)?;
                }
            }
        }
        Ok(())
    }

    fn score(&self, grades: &[f64]) -> Option<f64> {
        let flat = |g: &[Vec<f64>]| g.iter().flatten().copied().collect::<Vec<f64>>();
        match self {
            Comparator::ExpectedGoodness(g) => {
                Some(grades.iter().zip(flat(g)).map(|(h, v)| h * v).sum())
            }
            Comparator::FuzzyGoodness(g) => Some(logic::forall_in(grades, &flat(g))),
            Comparator::Accuracy => None,
        }
    }
}

/// `Opt_f(a ∘ f)` and `Opt_{b ∘ g}(g)` over deterministic strategies.
#[derive(Debug, Clone)]
pub struct OptReport<M> {
    pub strategies: usize,
    /// Strategies whose joint `(i * (r ∘ a)) ∘ f` is maximal.
    pub prior_side: Vec<DetMap>,
    /// Strategies whose joint `(b * r) ∘ g` is maximal.
    pub posterior_side: Vec<DetMap>,
    /// The conditional `b: R → D` of `(i * a) ∘ f`.
    pub conditional: M,
    /// `b ∘ g` reproduces `f`.
    pub prior_recovered: bool,
    /// The comparator was reflexive and transitive on every joint seen.
    pub preorder: bool,
}

impl<M> OptReport<M> {
    pub fn sets_equal(&self) -> bool {
        self.prior_side == self.posterior_side
    }
}

/// The preorder relation `rel[i][j] = (h_i ⪰ h_j)` on a family of joints.
fn relation<C: JointGrades>(
    cat: &C,
    cmp: &Comparator,
    joints: &[C::Morphism],
) -> Result<Vec<Vec<bool>>> {
    let tol = cat.score_tolerance();
    match cmp {
        Comparator::Accuracy => joints
            .iter()
            .map(|p| {
                joints
                    .iter()
                    .map(|q| Ok(cat.accuracy(p, q)?.at_least()))
                    .collect()
            })
            .collect(),
        _ => {
            let scores: Vec<f64> = joints
                .iter()
                .map(|h| cmp.score(&cat.grades(h)).expect("scalar"))
                .collect();
            Ok(scores
                .iter()
                .map(|p| scores.iter().map(|q| *p >= q - tol).collect())
                .collect())
        }
    }
}

fn is_preorder(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    (0..n).all(|i| rel[i][i])
        && (0..n).all(|i| (0..n).all(|j| !rel[i][j] || (0..n).all(|k| !rel[j][k] || rel[i][k])))
}

/// Indices `i` in `block` with no `j` in `block` strictly above.
fn maximal(rel: &[Vec<bool>], block: std::ops::Range<usize>) -> Vec<usize> {
    block
        .clone()
        .filter(|&i| !block.clone().any(|j| rel[j][i] && !rel[i][j]))
        .map(|i| i - block.start)
        .collect()
}

/// Enumerates every deterministic strategy `R → U` and compares the two
/// optimal sets of the Bayesian principle.
pub fn categorical_bayes<C: JointGrades>(
    cat: &C,
    prior: &C::Morphism,
    experiment: &C::Morphism,
    decisions: &Space,
    comparator: &Comparator,
    budget: u64,
) -> Result<OptReport<C::Morphism>> {
    let d = cat.target(prior);
    let r_space = cat.target(experiment);
    cat.source(experiment).ensure_same(&d)?;
    cat.terminal_object().ensure_same(&cat.source(prior))?;
    comparator.check(&d, decisions)?;
    let needed = (decisions.len() as f64).powi(r_space.len() as i32);
    if needed > budget as f64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let h = generated_joint(cat, prior, experiment)?;
    let b = cat.conditional(&h, &d, &r_space, Side::WrtSecond)?;
    let g = cat.compose(experiment, prior)?;
    let prior_recovered = cat.approx_eq(&cat.compose(&b, &g)?, prior);

    let strategies: Vec<DetMap> = DetMap::enumerate(&r_space, decisions).collect();
    let mut joints = Vec::with_capacity(2 * strategies.len());
    for r in &strategies {
        let r = cat.embed(r);
        joints.push(generated_joint(cat, prior, &cat.compose(&r, experiment)?)?);
    }
    for r in &strategies {
        let stacked = cat.product(&b, &cat.embed(r))?;
        joints.push(cat.compose(&stacked, &g)?);
    }
    let rel = relation(cat, comparator, &joints)?;
    let n = strategies.len();
    let pick = |ix: Vec<usize>| ix.into_iter().map(|i| strategies[i].clone()).collect();
    Ok(OptReport {
        strategies: n,
        prior_side: pick(maximal(&rel, 0..n)),
        posterior_side: pick(maximal(&rel, n..2 * n)),
        conditional: b,
        prior_recovered,
        preorder: is_preorder(&rel),
    })
}

/// A deterministic IT proposed to dominate a given one.
pub trait DeterministicSelection: ItCategory {
    fn deterministic_candidate(&self, c: &Self::Morphism) -> Self::Morphism;
}

impl DeterministicSelection for SetCat {
    fn deterministic_candidate(&self, c: &DetMap) -> DetMap {
        c.clone()
    }
}

impl DeterministicSelection for MultiCat {
    /// The first element of every row.
    fn deterministic_candidate(&self, c: &MultiMap) -> MultiMap {
        let table = (0..c.source().len()).map(|x| c.set(x)[0]).collect();
        self.embed(&DetMap::new(c.source().clone(), c.target().clone(), table).expect("in range"))
    }
}

impl DeterministicSelection for FuzzyCat {
    /// A maximal-membership selection.
    fn deterministic_candidate(&self, c: &FuzzyMap) -> FuzzyMap {
        let table = c.rows().iter().map(|r| argmax(r)).collect();
        self.embed(&DetMap::new(c.source().clone(), c.target().clone(), table).expect("in range"))
    }
}

impl DeterministicSelection for StochCat {
    /// The mode of every row.
    fn deterministic_candidate(&self, c: &StochMatrix) -> StochMatrix {
        let table = c.rows().iter().map(|r| argmax(r)).collect();
        self.embed(&DetMap::new(c.source().clone(), c.target().clone(), table).expect("in range"))
    }
}

impl DeterministicSelection for LinearCat {
    /// The noise-free part `⟨A, 0⟩`.
    fn deterministic_candidate(&self, c: &LinearIt) -> LinearIt {
        LinearIt::deterministic(c.gain().clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub sampled: usize,
    /// Samples with a deterministic `d ⊵ c`.
    pub premise_held: usize,
    /// Of those, samples with `d ∘ a ⊵ c ∘ a` and a dominating joint.
    pub conclusion_held: usize,
    /// First sample whose candidate failed the premise.
    pub counterexample: Option<String>,
}

impl DominationReport {
    /// Every premise that held carried its conclusion.
    pub fn sound(&self) -> bool {
        self.premise_held == self.conclusion_held
    }

    /// The premise held on every sample.
    pub fn premise_universal(&self) -> bool {
        self.premise_held == self.sampled
    }
}

/// Samples strategies `c: R → U` and checks that the deterministic candidate
/// `d` satisfies `d ⊵ c`, `d ∘ a ⊵ c ∘ a` and
/// `(i * (d ∘ a)) ∘ f ⊵ (i * (c ∘ a)) ∘ f`.
pub fn deterministic_domination_check<C>(
    cat: &C,
    prior: &C::Morphism,
    experiment: &C::Morphism,
    decisions: &C::Object,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DominationReport>
where
    C: DeterministicSelection + SampleMorphisms,
{
    let r_space = cat.target(experiment);
    let mut report = DominationReport {
        sampled: samples,
        premise_held: 0,
        conclusion_held: 0,
        counterexample: None,
    };
    for k in 0..samples {
        let c = if rng.gen_bool(0.25) {
            cat.random_deterministic(rng, &r_space, decisions)
        } else {
            cat.random_morphism(rng, &r_space, decisions)
        };
        let d = cat.deterministic_candidate(&c);
        if !cat.is_deterministic(&d) {
            return Err(Error::Unsupported(format!(
                "{} candidate is not deterministic",
                cat.tag()
            )));
        }
        if !cat.accuracy(&d, &c)?.at_least() {
            report.counterexample.get_or_insert_with(|| {
                format!("sample {k}: no deterministic strategy is at least as accurate as {c:?}")
            });
            continue;
        }
        report.premise_held += 1;
        let (da, ca) = (cat.compose(&d, experiment)?, cat.compose(&c, experiment)?);
        let joints = cat.accuracy(
            &generated_joint(cat, prior, &da)?,
            &generated_joint(cat, prior, &ca)?,
        )?;
        if cat.accuracy(&da, &ca)?.at_least() && joints.at_least() {
            report.conclusion_held += 1;
        }
    }
    Ok(report)
}
