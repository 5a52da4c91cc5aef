//! Semantic informativeness in SET: `a ⪰̂ b` on a family of decision
//! problems when every strategy on `b`'s observations is matched or beaten
//! by some strategy on `a`'s.
//!
//! Decisions range over `U = D`. The universal problem compares decision
//! maps by equality. An indicator problem with target `t: D → D` scores a
//! decision map `d` by `x ↦ [d(x) = t(x)]` and compares scores pointwise.

use serde::{Deserialize, Serialize};

use super::{Partition, Relation};
use crate::error::{Error, Result};
use crate::finite::DetMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemFamily {
    Universal,
    Indicator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemanticVerdict {
    pub family: ProblemFamily,
    pub relation: Relation,
    /// The refinement verdict on partitions.
    pub structural: Relation,
    pub agrees: bool,
    pub problems_checked: u64,
    /// A problem and `b`-strategy that no `a`-strategy answers, if `a ⋡̂ b`.
    pub counterexample: Option<String>,
}

/// Whether some `r_a` makes `r_a(a(x))` take the forced value on every `x`
/// where `forced(x)` is `Some`. Strategies are chosen observation by observation.
fn answerable(a: &DetMap, forced: impl Fn(usize) -> Option<usize>) -> bool {
    let mut choice: Vec<Option<usize>> = vec![None; a.target().len()];
    for x in 0..a.source().len() {
        if let Some(u) = forced(x) {
            match choice[a.apply(x)] {
                Some(v) if v != u => return false,
                _ => choice[a.apply(x)] = Some(u),
            }
        }
    }
    true
}

fn dominates(a: &DetMap, b: &DetMap, family: ProblemFamily, checked: &mut u64) -> Option<String> {
    let d = a.source();
    let targets: Vec<DetMap> = match family {
        ProblemFamily::Universal => vec![DetMap::identity(d)],
        ProblemFamily::Indicator => DetMap::enumerate(d, d).collect(),
    };
    for t in &targets {
        for rb in DetMap::enumerate(b.target(), d) {
            *checked += 1;
            let decide_b = |x: usize| rb.apply(b.apply(x));
            let ok = match family {
                ProblemFamily::Universal => answerable(a, |x| Some(decide_b(x))),
                ProblemFamily::Indicator => {
                    answerable(a, |x| (decide_b(x) == t.apply(x)).then_some(t.apply(x)))
                }
            };
            if !ok {
                return Some(match family {
                    ProblemFamily::Universal => format!("r_b = {:?}", rb.table()),
                    ProblemFamily::Indicator => {
                        format!("t = {:?}, r_b = {:?}", t.table(), rb.table())
                    }
                });
            }
        }
    }
    None
}

/// Compares `a` and `b` on a problem family and against partition refinement.
pub fn semantic_compare(
    a: &DetMap,
    b: &DetMap,
    family: ProblemFamily,
    budget: u64,
) -> Result<SemanticVerdict> {
    a.source().ensure_same(b.source())?;
    let n = a.source().len() as f64;
    let per_target = |m: &DetMap| n.powi(m.target().len() as i32);
    let targets = match family {
        ProblemFamily::Universal => 1.0,
        ProblemFamily::Indicator => n.powi(n as i32),
    };
    let needed = targets * (per_target(a) + per_target(b));
    if needed > budget as f64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut checked = 0;
    let forward = dominates(a, b, family, &mut checked);
    let backward = dominates(b, a, family, &mut checked);
    let relation = Relation::from_flags(forward.is_none(), backward.is_none());
    let (pa, pb) = (Partition::of_map(a), Partition::of_map(b));
    let structural = Relation::from_flags(pa.refines(&pb), pb.refines(&pa));
    Ok(SemanticVerdict {
        family,
        relation,
        structural,
        agrees: relation == structural,
        problems_checked: checked,
        counterexample: forward.or(backward),
    })
}
