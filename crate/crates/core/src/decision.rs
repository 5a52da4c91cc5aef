//! Fuzzy games with a priori information, decision strategies and the
//! fuzzy Bayes principle, plus an exhaustive strategy oracle.
//!
//! A game is `⟨𝒳, 𝒟, G⟩` with `G(x, d)` the truth of "`d` is a good decision
//! for `x`". A prior is a fuzzy set `X` on `𝒳`; an experiment is a transition
//! distribution `α: 𝒳 → 𝒴`; a strategy is a map `r: 𝒴 → 𝒟`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{argmax, DetMap, Variant};
use crate::fuzzy_set::{containment, FuzzySet};
use crate::logic;
use crate::possibility::{
    conditional_theorem1, generate_joint, image, lower_image, promote_row_maxima, JointRelation,
    TransitionDistribution,
};
use crate::space::Space;

pub use crate::informativeness::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyGame {
    /// `G` on `𝒳 × 𝒟`.
    pub goodness: JointRelation,
}

impl FuzzyGame {
    pub fn new(goodness: JointRelation) -> Self {
        FuzzyGame { goodness }
    }

    pub fn objects(&self) -> &Space {
        self.goodness.first()
    }

    pub fn decisions(&self) -> &Space {
        self.goodness.second()
    }

    /// `γ(x) = {d | G(x, d)}`.
    pub fn gamma(&self) -> TransitionDistribution {
        self.goodness.sections()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorGame {
    pub game: FuzzyGame,
    pub prior: FuzzySet,
}

impl PriorGame {
    pub fn new(game: FuzzyGame, prior: FuzzySet) -> Result<Self> {
        game.objects().ensure_same(prior.space())?;
        Ok(PriorGame { game, prior })
    }

    fn check_experiment(&self, exp: &Experiment) -> Result<()> {
        self.game.objects().ensure_same(exp.alpha.source())
    }

    fn check_strategy(&self, exp: &Experiment, r: &DetMap) -> Result<()> {
        self.check_experiment(exp)?;
        exp.alpha.target().ensure_same(r.source())?;
        self.game.decisions().ensure_same(r.target())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub alpha: TransitionDistribution,
}

/// `G_X(d) = ∀̇x∈X G(x, d)`.
pub fn goodness_of_decision(pg: &PriorGame, d: usize) -> Result<f64> {
    let decisions = pg.game.decisions();
    if d >= decisions.len() {
        return Err(Error::UnknownElement {
            space: decisions.name().to_string(),
            element: d.to_string(),
        });
    }
    let column: Vec<f64> = pg.game.goodness.table().iter().map(|row| row[d]).collect();
    Ok(logic::forall_in(pg.prior.membership(), &column))
}

/// `G_X` over all decisions.
pub fn goodness_profile(pg: &PriorGame) -> Vec<f64> {
    (0..pg.game.decisions().len())
        .map(|d| goodness_of_decision(pg, d).expect("in range"))
        .collect()
}

/// `G_X = γ∘X` computed as a lower image.
pub fn goodness_via_lower_image(pg: &PriorGame) -> Result<FuzzySet> {
    lower_image(&pg.game.gamma(), &pg.prior)
}

/// `B_X(d) = ∃̇x∈X B(x, d)` for the bad-decision relation `B = complement(G)`.
pub fn badness_profile(pg: &PriorGame) -> Result<FuzzySet> {
    image(&pg.game.goodness.complement().sections(), &pg.prior)
}

/// A decision maximising `G_X`, lowest index on ties, with its value.
pub fn bayes_decision(pg: &PriorGame) -> (usize, f64) {
    let profile = goodness_profile(pg);
    let d = argmax(&profile);
    (d, profile[d])
}

/// `H(x, r) = ∀̇y∈α(x) G(x, r(y))`.
pub fn strategy_goodness(pg: &PriorGame, exp: &Experiment, r: &DetMap, x: usize) -> Result<f64> {
    pg.check_strategy(exp, r)?;
    if x >= pg.game.objects().len() {
        return Err(Error::UnknownElement {
            space: pg.game.objects().name().to_string(),
            element: x.to_string(),
        });
    }
    let pred: Vec<f64> = (0..r.source().len())
        .map(|y| pg.game.goodness.get(x, r.apply(y)))
        .collect();
    Ok(logic::forall_in(&exp.alpha.rows()[x], &pred))
}

/// `H(x, r)` as the containment `rα(x) ⊂̇ γ(x)`, with `rα(x)` the image of
/// `α(x)` under `r`.
pub fn strategy_goodness_via_containment(
    pg: &PriorGame,
    exp: &Experiment,
    r: &DetMap,
    x: usize,
) -> Result<f64> {
    pg.check_strategy(exp, r)?;
    let crisp = TransitionDistribution::crisp(r.source().clone(), r.target().clone(), r.table())?;
    let pushed = image(&crisp, &exp.alpha.row(x))?;
    Ok(containment(&pushed, &pg.game.gamma().row(x))?.get())
}

/// `H_X(r) = ∀̇x∈X H(x, r)`.
pub fn bayes_goodness(pg: &PriorGame, exp: &Experiment, r: &DetMap) -> Result<f64> {
    let per_x = (0..pg.game.objects().len())
        .map(|x| strategy_goodness(pg, exp, r, x))
        .collect::<Result<Vec<f64>>>()?;
    Ok(logic::forall_in(pg.prior.membership(), &per_x))
}

/// The optimal strategy of the fuzzy Bayes principle and both ways of
/// computing its goodness.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesStrategy {
    pub strategy: DetMap,
    /// `∀̇y∈Y G_{β(y)}(d_{β(y)})`.
    pub value: f64,
    /// `H_X(r_X)` evaluated directly.
    pub direct: f64,
    /// The conditional `β: 𝒴 → 𝒳` of `α * X`.
    pub posterior: TransitionDistribution,
    /// The observation marginal `Y`.
    pub observations: FuzzySet,
}

impl BayesStrategy {
    pub fn consistent(&self) -> bool {
        self.value == self.direct
    }
}

/// `r_X(y) = d_{β(y)}`: the Bayes decision for the posterior prior `β(y)`.
pub fn bayes_strategy(pg: &PriorGame, exp: &Experiment, variant: Variant) -> Result<BayesStrategy> {
    pg.check_experiment(exp)?;
    let joint = generate_joint(&exp.alpha, &pg.prior)?;
    let (_, observations) = joint.marginals();
    let (_, raw) = conditional_theorem1(&joint);
    let posterior = match variant {
        Variant::Raw => raw,
        Variant::Normed => promote_row_maxima(&raw),
    };
    let mut table = Vec::with_capacity(posterior.source().len());
    let mut per_y = Vec::with_capacity(posterior.source().len());
    for y in 0..posterior.source().len() {
        let local = PriorGame {
            game: pg.game.clone(),
            prior: posterior.row(y),
        };
        let (d, v) = bayes_decision(&local);
        table.push(d);
        per_y.push(v);
    }
    let value = logic::forall_in(observations.membership(), &per_y);
    let strategy = DetMap::new(
        exp.alpha.target().clone(),
        pg.game.decisions().clone(),
        table,
    )?;
    let direct = bayes_goodness(pg, exp, &strategy)?;
    Ok(BayesStrategy {
        strategy,
        value,
        direct,
        posterior,
        observations,
    })
}

/// Exhaustive maximiser of `H_X` over all `|𝒟|^|𝒴|` strategies; the
/// lexicographically first one on ties.
pub fn brute_force_strategy(
    pg: &PriorGame,
    exp: &Experiment,
    budget: u64,
) -> Result<(DetMap, f64)> {
    pg.check_experiment(exp)?;
    let (obs, dec) = (exp.alpha.target(), pg.game.decisions());
    let needed = (dec.len() as f64).powi(obs.len() as i32);
    if needed > budget as f64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut best: Option<(DetMap, f64)> = None;
    for r in DetMap::enumerate(obs, dec) {
        let v = bayes_goodness(pg, exp, &r)?;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((r, v));
        }
    }
    Ok(best.expect("at least one strategy"))
}

/// Wire form of a strategy evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyRecord {
    /// Decision label per observation label, in observation order.
    pub table: Vec<(String, String)>,
    pub goodness: f64,
}

impl StrategyRecord {
    pub fn new(r: &DetMap, goodness: f64) -> Self {
        let table = (0..r.source().len())
            .map(|y| {
                (
                    r.source().labels()[y].clone(),
                    r.target().labels()[r.apply(y)].clone(),
                )
            })
            .collect();
        StrategyRecord { table, goodness }
    }
}
