//! The informativeness preorder `a ⪰ b :⇔ ∃c. c∘a ⊵ b` and its classes.
//!
//! Each category decides the preorder its own way and hands back the
//! post-processing `c` it found. Every witness is recomposed and checked
//! before a verdict is reported.

pub mod covering;
pub mod monoid;
pub mod partition;
pub mod semantic;

use std::collections::BTreeMap;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{
    DetMap, FuzzyCat, FuzzyMap, MultiCat, MultiMap, SetCat, StochCat, StochMatrix, TNorm,
};
use crate::kernel::ItCategory;
use crate::linear::{informativeness_witness, LinearCat, LinearIt};

pub use covering::{Covering, CoveringMode};
pub use monoid::{
    class_monoid_check, ClassMonoid, CoveringMonoid, LinearMonoid, MonoidReport, PartitionMonoid,
};
pub use partition::Partition;
pub use semantic::{semantic_compare, ProblemFamily, SemanticVerdict};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Grid resolution of the approximate searches: values `k / GRID_STEPS`.
pub const GRID_STEPS: usize = 8;
/// Reverification tolerance for LP witnesses.
pub const LP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// The category's decision procedure.
    #[default]
    Exact,
    /// Quantized search where no exact procedure exists.
    Grid,
    /// Exhaustive enumeration of post-processings (an oracle for small inputs).
    Brute,
}

/// Which accuracy order the witness must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    /// The category's own `⊵`.
    #[default]
    Native,
    /// The trivial order: `c∘a = b`.
    Equality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Search {
    pub method: Method,
    pub order: Order,
    pub budget: u64,
}

impl Default for Search {
    fn default() -> Self {
        Search {
            method: Method::Exact,
            order: Order::Native,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Search {
    pub fn with_order(self, order: Order) -> Self {
        Search { order, ..self }
    }

    pub fn with_method(self, method: Method) -> Self {
        Search { method, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    More,
    Less,
    Equivalent,
    Incomparable,
}

impl Relation {
    pub fn from_flags(a_over_b: bool, b_over_a: bool) -> Self {
        match (a_over_b, b_over_a) {
            (true, true) => Relation::Equivalent,
            (true, false) => Relation::More,
            (false, true) => Relation::Less,
            (false, false) => Relation::Incomparable,
        }
    }

    /// `a ⪰ b`.
    pub fn at_least(self) -> bool {
        matches!(self, Relation::More | Relation::Equivalent)
    }
}

#[derive(Debug, Clone)]
pub struct InfoVerdict<M> {
    pub relation: Relation,
    /// `c` with `c∘a ⊵ b`.
    pub forward: Option<M>,
    /// `c` with `c∘b ⊵ a`.
    pub backward: Option<M>,
    /// Every witness found survived recomposition.
    pub verified: bool,
    /// A negative direction may be a false negative of a quantized search.
    pub approximate: bool,
}

pub trait Informativeness: ItCategory {
    /// Some `c` with `c∘a ⊵ b` under `search.order`, if the search finds one.
    fn find_witness(
        &self,
        a: &Self::Morphism,
        b: &Self::Morphism,
        search: &Search,
    ) -> Result<Option<Self::Morphism>>;

    /// Whether `find_witness` can miss an existing witness.
    fn approximate(&self, _search: &Search) -> bool {
        false
    }

    fn reverify(
        &self,
        c: &Self::Morphism,
        a: &Self::Morphism,
        b: &Self::Morphism,
        order: Order,
    ) -> Result<bool> {
        let ca = self.compose(c, a)?;
        Ok(match order {
            Order::Native => self.accuracy(&ca, b)?.at_least(),
            Order::Equality => self.approx_eq(&ca, b),
        })
    }
}

/// Decides `a ⪰ b` and `b ⪰ a` for two ITs out of the same object.
pub fn is_more_informative<C: Informativeness>(
    cat: &C,
    a: &C::Morphism,
    b: &C::Morphism,
    search: &Search,
) -> Result<InfoVerdict<C::Morphism>> {
    let (sa, sb) = (cat.source(a), cat.source(b));
    if sa != sb {
        return Err(Error::DimensionMismatch(format!(
            "sources differ: {sa:?} vs {sb:?}"
        )));
    }
    let forward = cat.find_witness(a, b, search)?;
    let backward = cat.find_witness(b, a, search)?;
    let mut verified = true;
    if let Some(c) = &forward {
        verified &= cat.reverify(c, a, b, search.order)?;
    }
    if let Some(c) = &backward {
        verified &= cat.reverify(c, b, a, search.order)?;
    }
    Ok(InfoVerdict {
        relation: Relation::from_flags(forward.is_some(), backward.is_some()),
        forward,
        backward,
        verified,
        approximate: cat.approximate(search),
    })
}

fn check_budget(needed: f64, budget: u64) -> Result<()> {
    if needed > budget as f64 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// First candidate `c` that passes `reverify`.
fn first_passing<C: Informativeness>(
    cat: &C,
    candidates: impl Iterator<Item = C::Morphism>,
    a: &C::Morphism,
    b: &C::Morphism,
    order: Order,
) -> Result<Option<C::Morphism>> {
    for c in candidates {
        if cat.reverify(&c, a, b, order)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// All vectors of `len` entries from `values`, in lexicographic order.
fn vectors<T: Clone>(values: &[T], len: usize) -> Vec<Vec<T>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                values.iter().map(move |x| {
                    let mut next = v.clone();
                    next.push(x.clone());
                    next
                })
            })
            .collect()
    })
}

/// Cartesian product of per-row options, materialised lazily.
fn row_choices<T: Clone>(options: &[T], rows: usize) -> impl Iterator<Item = Vec<T>> + '_ {
    let k = options.len() as u64;
    let total = k.checked_pow(rows as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut out = vec![options[0].clone(); rows];
        for slot in out.iter_mut().rev() {
            *slot = options[(code % k) as usize].clone();
            code /= k;
        }
        out
    })
}

fn grid() -> Vec<f64> {
    (0..=GRID_STEPS)
        .map(|k| k as f64 / GRID_STEPS as f64)
        .collect()
}

// ---------------------------------------------------------------- SET

/// `c(a(x)) = b(x)` when `a`'s partition refines `b`'s; unreached points go to 0.
pub fn set_witness(a: &DetMap, b: &DetMap) -> Option<DetMap> {
    if !Partition::of_map(a).refines(&Partition::of_map(b)) {
        return None;
    }
    let mut table = vec![0; a.target().len()];
    for x in 0..a.source().len() {
        table[a.apply(x)] = b.apply(x);
    }
    DetMap::new(a.target().clone(), b.target().clone(), table).ok()
}

impl Informativeness for SetCat {
    fn find_witness(&self, a: &DetMap, b: &DetMap, search: &Search) -> Result<Option<DetMap>> {
        match search.method {
            Method::Exact | Method::Grid => Ok(set_witness(a, b)),
            Method::Brute => {
                check_budget(
                    (b.target().len() as f64).powi(a.target().len() as i32),
                    search.budget,
                )?;
                first_passing(
                    self,
                    DetMap::enumerate(a.target(), b.target()),
                    a,
                    b,
                    search.order,
                )
            }
        }
    }
}

// ---------------------------------------------------------------- MULTI

/// The greatest `c` with `c∘a ⊆ b`: `ĉ(y) = ∩_{x: y ∈ a(x)} b(x)`.
/// Rows may be empty, so this is a raw table rather than a [`MultiMap`].
pub fn multi_residual(a: &MultiMap, b: &MultiMap) -> Vec<Vec<bool>> {
    (0..a.target().len())
        .map(|y| {
            (0..b.target().len())
                .map(|z| a.preimage(y).iter().all(|&x| b.contains(x, z)))
                .collect()
        })
        .collect()
}

impl Informativeness for MultiCat {
    fn find_witness(
        &self,
        a: &MultiMap,
        b: &MultiMap,
        search: &Search,
    ) -> Result<Option<MultiMap>> {
        match search.method {
            Method::Exact | Method::Grid => {
                let rows = multi_residual(a, b);
                if rows.iter().any(|r| !r.contains(&true)) {
                    return Ok(None);
                }
                let c = MultiMap::new(a.target().clone(), b.target().clone(), rows)?;
                let holds = match search.order {
                    Order::Native => true,
                    Order::Equality => self.compose(&c, a)? == *b,
                };
                Ok(holds.then_some(c))
            }
            Method::Brute => {
                let l = b.target().len();
                let options: Vec<Vec<bool>> = (1u64..1 << l)
                    .map(|m| (0..l).map(|z| m >> z & 1 == 1).collect())
                    .collect();
                check_budget(
                    (options.len() as f64).powi(a.target().len() as i32),
                    search.budget,
                )?;
                let candidates = row_choices(&options, a.target().len()).map(|rows| {
                    MultiMap::new(a.target().clone(), b.target().clone(), rows)
                        .expect("nonempty rows")
                });
                first_passing(self, candidates, a, b, search.order)
            }
        }
    }
}

// ---------------------------------------------------------------- FMT / FPT

/// The greatest `c` with `c∘a ≤ b`: `ĉ(y)(z) = inf_x R(a(x)(y), b(x)(z))`.
pub fn fuzzy_residual(norm: TNorm, a: &FuzzyMap, b: &FuzzyMap) -> Vec<Vec<f64>> {
    (0..a.target().len())
        .map(|y| {
            (0..b.target().len())
                .map(|z| {
                    (0..a.source().len())
                        .map(|x| norm.residuum(a.get(x, y), b.get(x, z)))
                        .fold(1.0, f64::min)
                })
                .collect()
        })
        .collect()
}

impl FuzzyCat {
    /// Equality-order search with every entry of `c` on the grid (or equal
    /// to the residual). Columns of `c` are solved independently; normedness
    /// couples them only through which rows reach 1.
    fn grid_equality(&self, a: &FuzzyMap, b: &FuzzyMap, budget: u64) -> Result<Option<FuzzyMap>> {
        let (n, k, l) = (a.source().len(), a.target().len(), b.target().len());
        let levels = grid();
        check_budget((levels.len() as f64).powi(k as i32) * l as f64, budget)?;
        if k > 32 {
            return Err(Error::Unsupported(
                "grid search needs at most 32 observations".into(),
            ));
        }
        let hat = fuzzy_residual(self.norm, a, b);
        let tol = self.tolerance();
        let solves = |v: &[f64], z: usize| {
            (0..n).all(|x| {
                let got = (0..k)
                    .map(|y| self.norm.apply(a.get(x, y), v[y]))
                    .fold(0.0, f64::max);
                (got - b.get(x, z)).abs() <= tol
            })
        };
        let mut columns: Vec<Vec<(u32, Vec<f64>)>> = Vec::with_capacity(l);
        for z in 0..l {
            let top: Vec<f64> = (0..k).map(|y| hat[y][z]).collect();
            let mut by_pattern: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            let candidates = std::iter::once(top.clone()).chain(
                vectors(&levels, k)
                    .into_iter()
                    .filter(|v| v.iter().zip(&top).all(|(p, q)| *p <= q + tol)),
            );
            for v in candidates {
                if solves(&v, z) {
                    let pattern = (0..k)
                        .filter(|&y| v[y] == 1.0)
                        .fold(0u32, |acc, y| acc | 1 << y);
                    by_pattern.entry(pattern).or_insert(v);
                }
            }
            if by_pattern.is_empty() {
                return Ok(None);
            }
            columns.push(by_pattern.into_iter().collect());
        }
        let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        fn cover(
            columns: &[Vec<(u32, Vec<f64>)>],
            acc: u32,
            full: u32,
            chosen: &mut Vec<usize>,
        ) -> bool {
            if chosen.len() == columns.len() {
                return acc == full;
            }
            for (i, (p, _)) in columns[chosen.len()].iter().enumerate() {
                chosen.push(i);
                if cover(columns, acc | p, full, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut chosen = Vec::new();
        if !cover(&columns, 0, full, &mut chosen) {
            return Ok(None);
        }
        let rows = (0..k)
            .map(|y| (0..l).map(|z| columns[z][chosen[z]].1[y]).collect())
            .collect();
        Ok(Some(FuzzyMap::new(
            a.target().clone(),
            b.target().clone(),
            rows,
        )?))
    }
}

impl Informativeness for FuzzyCat {
    fn find_witness(
        &self,
        a: &FuzzyMap,
        b: &FuzzyMap,
        search: &Search,
    ) -> Result<Option<FuzzyMap>> {
        match (search.method, search.order) {
            (Method::Exact | Method::Grid, Order::Native) => {
                let rows = fuzzy_residual(self.norm, a, b);
                if rows.iter().all(|r| r.contains(&1.0)) {
                    Ok(Some(FuzzyMap::new(
                        a.target().clone(),
                        b.target().clone(),
                        rows,
                    )?))
                } else {
                    Ok(None)
                }
            }
            (Method::Exact | Method::Grid, Order::Equality) => {
                self.grid_equality(a, b, search.budget)
            }
            (Method::Brute, order) => {
                let options: Vec<Vec<f64>> = vectors(&grid(), b.target().len())
                    .into_iter()
                    .filter(|v| v.contains(&1.0))
                    .collect();
                check_budget(
                    (options.len() as f64).powi(a.target().len() as i32),
                    search.budget,
                )?;
                let candidates = row_choices(&options, a.target().len()).map(|rows| {
                    FuzzyMap::new(a.target().clone(), b.target().clone(), rows)
                        .expect("normed rows")
                });
                first_passing(self, candidates, a, b, order)
            }
        }
    }

    fn approximate(&self, search: &Search) -> bool {
        search.method == Method::Brute || search.order == Order::Equality
    }
}

// ---------------------------------------------------------------- STOCH

/// Feasibility of `a C = b` over row-stochastic `C`, solved as an LP.
pub fn stoch_lp_witness(a: &StochMatrix, b: &StochMatrix) -> Result<Option<StochMatrix>> {
    let (n, k, l) = (a.source().len(), a.target().len(), b.target().len());
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<_>> = (0..k)
        .map(|_| {
            (0..l)
                .map(|_| lp.add_var(0.0, (0.0, f64::INFINITY)))
                .collect()
        })
        .collect();
    for row in &vars {
        lp.add_constraint(
            row.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>().as_slice(),
            ComparisonOp::Eq,
            1.0,
        );
    }
    for x in 0..n {
        for z in 0..l {
            let terms: Vec<_> = (0..k)
                .filter(|&y| a.get(x, y) != 0.0)
                .map(|y| (vars[y][z], a.get(x, y)))
                .collect();
            lp.add_constraint(terms.as_slice(), ComparisonOp::Eq, b.get(x, z));
        }
    }
    let solution = match lp.solve() {
        Ok(s) => s,
        Err(minilp::Error::Infeasible) => return Ok(None),
        Err(e) => return Err(Error::Unsupported(format!("linear program failed: {e}"))),
    };
    let rows = vars
        .iter()
        .map(|row| {
            let clipped: Vec<f64> = row.iter().map(|&v| solution[v].max(0.0)).collect();
            let s: f64 = clipped.iter().sum();
            clipped.iter().map(|v| v / s).collect()
        })
        .collect();
    Ok(Some(StochMatrix::new(
        a.target().clone(),
        b.target().clone(),
        rows,
    )?))
}

/// Probability vectors of length `len` with entries in multiples of `1/steps`.
fn grid_distributions(len: usize, steps: usize) -> Vec<Vec<f64>> {
    fn go(len: usize, left: usize, prefix: &mut Vec<usize>, steps: usize, out: &mut Vec<Vec<f64>>) {
        if prefix.len() + 1 == len {
            prefix.push(left);
            out.push(prefix.iter().map(|&c| c as f64 / steps as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            go(len, left - c, prefix, steps, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, steps, &mut Vec::new(), steps, &mut out);
    out
}

impl Informativeness for StochCat {
    fn find_witness(
        &self,
        a: &StochMatrix,
        b: &StochMatrix,
        search: &Search,
    ) -> Result<Option<StochMatrix>> {
        match search.method {
            Method::Exact | Method::Grid => stoch_lp_witness(a, b),
            Method::Brute => {
                let options = grid_distributions(b.target().len(), GRID_STEPS);
                check_budget(
                    (options.len() as f64).powi(a.target().len() as i32),
                    search.budget,
                )?;
                let candidates = row_choices(&options, a.target().len()).map(|rows| {
                    StochMatrix::new(a.target().clone(), b.target().clone(), rows)
                        .expect("grid rows")
                });
                first_passing(self, candidates, a, b, search.order)
            }
        }
    }

    fn approximate(&self, search: &Search) -> bool {
        search.method == Method::Brute
    }

    fn reverify(
        &self,
        c: &StochMatrix,
        a: &StochMatrix,
        b: &StochMatrix,
        _order: Order,
    ) -> Result<bool> {
        let ca = self.compose(c, a)?;
        Ok(ca
            .rows()
            .iter()
            .zip(b.rows())
            .all(|(r, s)| r.iter().zip(s).all(|(p, q)| (p - q).abs() <= LP_TOL)))
    }
}

// ---------------------------------------------------------------- LINEAR

impl Informativeness for LinearCat {
    /// The class comparison already yields `c∘a = b`, so both orders agree.
    fn find_witness(
        &self,
        a: &LinearIt,
        b: &LinearIt,
        search: &Search,
    ) -> Result<Option<LinearIt>> {
        match search.method {
            Method::Exact => Ok(informativeness_witness(a, b)),
            m => Err(Error::Unsupported(format!("method {m:?} for LINEAR"))),
        }
    }
}
