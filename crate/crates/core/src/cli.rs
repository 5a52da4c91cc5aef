//! Command execution behind the `itcat` binary. Every command returns an
//! [`Outcome`] holding the exit code and the full report, so the binary only
//! prints.

use serde_json::{json, Value};

use crate::categorical::{categorical_bayes, Comparator, JointGrades, OptReport};
use crate::decision::{
    bayes_strategy, brute_force_strategy, Experiment, FuzzyGame, PriorGame, StrategyRecord,
};
use crate::error::Error;
use crate::finite::{
    det_map_from_labels, DetMap, FuzzyCat, FuzzyMap, MultiCat, MultiMap, SetCat, StochCat,
    StochMatrix, Variant,
};
use crate::fuzzy_set::FuzzySet;
use crate::informativeness::{
    is_more_informative, Covering, Informativeness, Partition, Relation, Search,
};
use crate::kernel::axioms::verify_axioms;
use crate::kernel::{reconstruct, CategoryTag, ItCategory, SampleMorphisms, Side};
use crate::linear::{self, info_class, LinearCat, LinearIt, LinearRecord};
use crate::possibility::{JointRelation, TransitionDistribution};
use crate::problem::{
    invalid, ComparatorKind, Invalid, MorphismSpec, Payload, Problem, ProblemFile, RelationSpec,
};
use crate::space::Space;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Bayes,
    Conditional,
    Compare,
    Classes,
}

impl Verb {
    fn name(self) -> &'static str {
        match self {
            Verb::Bayes => "bayes",
            Verb::Conditional => "conditional",
            Verb::Compare => "compare",
            Verb::Classes => "classes",
        }
    }
}

/// Command-line overrides of the file's options.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub variant: Option<Variant>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Failure modes that stop a command before a report is produced.
enum Stop {
    Invalid(Invalid),
    Budget(String),
}

impl From<Invalid> for Stop {
    fn from(e: Invalid) -> Self {
        Stop::Invalid(e)
    }
}

fn at(field: impl Into<String>) -> impl FnOnce(Error) -> Stop {
    let field = field.into();
    move |e| match e {
        Error::BudgetExceeded { .. } => Stop::Budget(format!("{field}: {e}")),
        other => Stop::Invalid(invalid(field, other)),
    }
}

/// A computed report: machine results, text lines and whether every internal
/// check held.
struct Report {
    results: Value,
    lines: Vec<String>,
    verified: bool,
}

pub fn run_file(verb: Verb, text: &str, overrides: Overrides, format: Format) -> Outcome {
    let mut file = match ProblemFile::parse(text) {
        Ok(f) => f,
        Err(e) => return Outcome::failure(EXIT_INVALID, e.to_string()),
    };
    if let Some(seed) = overrides.seed {
        file.options.seed = seed;
    }
    if let Some(budget) = overrides.budget {
        file.options.budget = budget;
    }
    if let Some(variant) = overrides.variant {
        file.options.variant = variant;
    }
    let kind_matches = matches!(
        (verb, &file.problem),
        (Verb::Bayes, Problem::Bayes { .. })
            | (Verb::Conditional, Problem::Conditional { .. })
            | (Verb::Compare, Problem::Compare { .. })
            | (Verb::Classes, Problem::Classes { .. })
    );
    if !kind_matches {
        return Outcome::failure(
            EXIT_INVALID,
            format!(
                "problem.kind: `{}` needs a {} problem",
                verb.name(),
                verb.name()
            ),
        );
    }
    match dispatch(&file) {
        Ok(report) => render(&file, verb, report, format),
        Err(Stop::Invalid(e)) => Outcome::failure(EXIT_INVALID, e.to_string()),
        Err(Stop::Budget(m)) => Outcome::failure(EXIT_BUDGET, m),
    }
}

fn render(file: &ProblemFile, verb: Verb, report: Report, format: Format) -> Outcome {
    let status = if report.verified {
        "ok"
    } else {
        "verification failed"
    };
    let stdout = match format {
        Format::Machine => {
            let mut doc = serde_json::to_value(file).expect("serializable");
            doc["results"] = report.results;
            doc["status"] = json!(status);
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut out = format!("{} ({})\n", verb.name(), file.category);
            for line in &report.lines {
                out.push_str(line);
                out.push('\n');
            }
            out.push_str(&format!("status: {status}\n"));
            out
        }
    };
    Outcome {
        code: if report.verified {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        },
        stdout,
        stderr: String::new(),
    }
}

fn dispatch(file: &ProblemFile) -> Result<Report, Stop> {
    let fuzzy = |norm: FuzzyCat| norm.with_variant(file.options.variant);
    match &file.problem {
        Problem::Bayes { .. } => match file.category {
            CategoryTag::Fmt => fuzzy_bayes(file),
            CategoryTag::Fpt => categorical_report(&fuzzy(FuzzyCat::FPT), file),
            CategoryTag::Set => categorical_report(&SetCat, file),
            CategoryTag::Multi => categorical_report(&MultiCat, file),
            CategoryTag::Stoch => categorical_report(&StochCat, file),
            CategoryTag::Linear => unreachable!("validated"),
        },
        Problem::Conditional { joint } => match file.category {
            CategoryTag::Set => conditional(&SetCat, file, joint),
            CategoryTag::Fmt => conditional(&fuzzy(FuzzyCat::FMT), file, joint),
            CategoryTag::Fpt => conditional(&fuzzy(FuzzyCat::FPT), file, joint),
            CategoryTag::Multi => conditional(&MultiCat, file, joint),
            CategoryTag::Stoch => conditional(&StochCat, file, joint),
            CategoryTag::Linear => conditional(&LinearCat, file, joint),
        },
        Problem::Compare {
            a,
            b,
            order,
            method,
        } => {
            let search = Search {
                method: *method,
                order: *order,
                budget: file.options.budget,
            };
            match file.category {
                CategoryTag::Set => compare(&SetCat, file, a, b, &search),
                CategoryTag::Fmt => compare(&fuzzy(FuzzyCat::FMT), file, a, b, &search),
                CategoryTag::Fpt => compare(&fuzzy(FuzzyCat::FPT), file, a, b, &search),
                CategoryTag::Multi => compare(&MultiCat, file, a, b, &search),
                CategoryTag::Stoch => compare(&StochCat, file, a, b, &search),
                CategoryTag::Linear => compare(&LinearCat, file, a, b, &search),
            }
        }
        Problem::Classes { morphisms } => classes(file, morphisms),
    }
}

/// Reading and writing a category's payloads.
trait Wire: ItCategory {
    fn object(&self, space: &Space) -> Self::Object;

    fn build(&self, file: &ProblemFile, spec: &MorphismSpec) -> crate::Result<Self::Morphism>;

    /// A joint distribution `Z → first × second` from a relation table.
    fn joint(
        &self,
        first: &Space,
        second: &Space,
        table: &[Vec<f64>],
    ) -> crate::Result<Self::Morphism>;

    fn payload(&self, m: &Self::Morphism) -> Value;

    /// Largest entrywise difference.
    fn residual(&self, a: &Self::Morphism, b: &Self::Morphism) -> f64;
}

fn flat(first: &Space, second: &Space, table: &[Vec<f64>]) -> crate::Result<Vec<f64>> {
    crate::finite::check_rows(table, first, second)?;
    Ok(table.iter().flatten().copied().collect())
}

fn rows_residual(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

fn rows_of(spec: &MorphismSpec) -> &[Vec<f64>] {
    match &spec.payload {
        Payload::Rows(r) => r,
        _ => unreachable!("validated"),
    }
}

impl Wire for SetCat {
    fn object(&self, space: &Space) -> Space {
        space.clone()
    }

    fn build(&self, file: &ProblemFile, spec: &MorphismSpec) -> crate::Result<DetMap> {
        let Payload::Map(labels) = &spec.payload else {
            unreachable!("validated")
        };
        det_map_from_labels(&file.space(&spec.source), &file.space(&spec.target), labels)
    }

    fn joint(&self, first: &Space, second: &Space, table: &[Vec<f64>]) -> crate::Result<DetMap> {
        let cells = flat(first, second, table)?;
        let ones: Vec<usize> = (0..cells.len()).filter(|&k| cells[k] == 1.0).collect();
        if ones.len() != 1 || cells.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidSpace(
                "a SET joint has exactly one cell equal to 1 and zeros elsewhere".into(),
            ));
        }
        DetMap::new(Space::terminal(), Space::product(first, second), ones)
    }

    fn payload(&self, m: &DetMap) -> Value {
        let labels: Vec<&String> = m.table().iter().map(|&t| &m.target().labels()[t]).collect();
        json!({ "map": labels })
    }

    fn residual(&self, a: &DetMap, b: &DetMap) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }
}

impl Wire for MultiCat {
    fn object(&self, space: &Space) -> Space {
        space.clone()
    }

    fn build(&self, file: &ProblemFile, spec: &MorphismSpec) -> crate::Result<MultiMap> {
        let Payload::Sets(sets) = &spec.payload else {
            unreachable!("validated")
        };
        let target = file.space(&spec.target);
        let indices = sets
            .iter()
            .map(|s| s.iter().map(|l| target.index_of(l)).collect())
            .collect::<crate::Result<Vec<Vec<usize>>>>()?;
        MultiMap::from_sets(file.space(&spec.source), target, &indices)
    }

    fn joint(&self, first: &Space, second: &Space, table: &[Vec<f64>]) -> crate::Result<MultiMap> {
        let cells = flat(first, second, table)?;
        if cells.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidSpace("a MULTI joint has 0/1 entries".into()));
        }
        MultiMap::new(
            Space::terminal(),
            Space::product(first, second),
            vec![cells.iter().map(|&v| v == 1.0).collect()],
        )
    }

    fn payload(&self, m: &MultiMap) -> Value {
        let sets: Vec<Vec<&String>> = (0..m.source().len())
            .map(|x| {
                m.set(x)
                    .into_iter()
                    .map(|y| &m.target().labels()[y])
                    .collect()
            })
            .collect();
        json!({ "sets": sets })
    }

    fn residual(&self, a: &MultiMap, b: &MultiMap) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }
}

impl Wire for FuzzyCat {
    fn object(&self, space: &Space) -> Space {
        space.clone()
    }

    fn build(&self, file: &ProblemFile, spec: &MorphismSpec) -> crate::Result<FuzzyMap> {
        FuzzyMap::new(
            file.space(&spec.source),
            file.space(&spec.target),
            rows_of(spec).to_vec(),
        )
    }

    fn joint(&self, first: &Space, second: &Space, table: &[Vec<f64>]) -> crate::Result<FuzzyMap> {
        let cells = flat(first, second, table)?;
        FuzzyMap::new(
            Space::terminal(),
            Space::product(first, second),
            vec![cells],
        )
    }

    fn payload(&self, m: &FuzzyMap) -> Value {
        json!({ "rows": m.rows() })
    }

    fn residual(&self, a: &FuzzyMap, b: &FuzzyMap) -> f64 {
        rows_residual(a.rows(), b.rows())
    }
}

impl Wire for StochCat {
    fn object(&self, space: &Space) -> Space {
        space.clone()
    }

    fn build(&self, file: &ProblemFile, spec: &MorphismSpec) -> crate::Result<StochMatrix> {
        StochMatrix::new(
            file.space(&spec.source),
            file.space(&spec.target),
            rows_of(spec).to_vec(),
        )
    }

    fn joint(
        &self,
        first: &Space,
        second: &Space,
        table: &[Vec<f64>],
    ) -> crate::Result<StochMatrix> {
        let cells = flat(first, second, table)?;
        StochMatrix::new(
            Space::terminal(),
            Space::product(first, second),
            vec![cells],
        )
    }

    fn payload(&self, m: &StochMatrix) -> Value {
        json!({ "rows": m.rows() })
    }

    fn residual(&self, a: &StochMatrix, b: &StochMatrix) -> f64 {
        rows_residual(a.rows(), b.rows())
    }
}

impl Wire for LinearCat {
    /// Coordinates are the space's labels.
    fn object(&self, space: &Space) -> usize {
        if space.name() == crate::problem::TERMINAL {
            0
        } else {
            space.len()
        }
    }

    fn build(&self, file: &ProblemFile, spec: &MorphismSpec) -> crate::Result<LinearIt> {
        let Payload::Linear { gain, noise } = &spec.payload else {
            unreachable!("validated")
        };
        let record = LinearRecord {
            source_dim: self.object(&file.space(&spec.source)),
            target_dim: self.object(&file.space(&spec.target)),
            gain: gain.clone(),
            noise: noise.clone(),
        };
        LinearIt::try_from(&record)
    }

    fn joint(&self, first: &Space, second: &Space, table: &[Vec<f64>]) -> crate::Result<LinearIt> {
        let n = first.len() + second.len();
        LinearIt::distribution(linear::matrix_from_rows(table, n, n)?)
    }

    fn payload(&self, m: &LinearIt) -> Value {
        let r = LinearRecord::from(m);
        json!({ "linear": { "gain": r.gain, "noise": r.noise } })
    }

    fn residual(&self, a: &LinearIt, b: &LinearIt) -> f64 {
        if a.gain().shape() != b.gain().shape() {
            return f64::INFINITY;
        }
        linear::max_abs(&(a.gain() - b.gain())).max(linear::max_abs(&(a.noise() - b.noise())))
    }
}

fn morphism<C: Wire>(cat: &C, file: &ProblemFile, name: &str) -> Result<C::Morphism, Stop> {
    cat.build(file, &file.morphisms[name])
        .map_err(at(format!("morphisms.{name}")))
}

fn relation<'f>(file: &'f ProblemFile, name: &str) -> &'f RelationSpec {
    &file.relations[name]
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn conditional<C: Wire>(cat: &C, file: &ProblemFile, joint: &str) -> Result<Report, Stop> {
    let rel = relation(file, joint);
    let field = format!("relations.{joint}");
    let (first_space, second_space) = (file.space(&rel.first), file.space(&rel.second));
    let h = cat
        .joint(&first_space, &second_space, &rel.table)
        .map_err(at(field.clone()))?;
    let (first, second) = (cat.object(&first_space), cat.object(&second_space));
    let mut results = serde_json::Map::new();
    let mut lines = Vec::new();
    let mut verified = true;
    for (side, key, label) in [
        (
            Side::WrtFirst,
            "wrt_first",
            format!("{} -> {}", rel.first, rel.second),
        ),
        (
            Side::WrtSecond,
            "wrt_second",
            format!("{} -> {}", rel.second, rel.first),
        ),
    ] {
        let cond = cat
            .conditional(&h, &first, &second, side)
            .map_err(at(field.clone()))?;
        let rebuilt =
            reconstruct(cat, &h, &cond, &first, &second, side).map_err(at(field.clone()))?;
        let residual = cat.residual(&rebuilt, &h);
        let ok = cat.approx_eq(&rebuilt, &h);
        verified &= ok;
        lines.push(format!("conditional {label}: {}", cat.payload(&cond)));
        lines.push(format!(
            "  reconstruction residual: {residual:e} ({})",
            if ok { "ok" } else { "FAILED" }
        ));
        results.insert(
            key.into(),
            json!({ "conditional": cat.payload(&cond), "residual": residual, "reconstructs": ok }),
        );
    }
    Ok(Report {
        results: Value::Object(results),
        lines,
        verified,
    })
}

fn compare<C: Wire + Informativeness>(
    cat: &C,
    file: &ProblemFile,
    a: &str,
    b: &str,
    search: &Search,
) -> Result<Report, Stop> {
    let (ma, mb) = (morphism(cat, file, a)?, morphism(cat, file, b)?);
    let verdict = is_more_informative(cat, &ma, &mb, search).map_err(at("problem"))?;
    let relation = match verdict.relation {
        Relation::More => "more",
        Relation::Less => "less",
        Relation::Equivalent => "equivalent",
        Relation::Incomparable => "incomparable",
    };
    let witness = |w: &Option<C::Morphism>| w.as_ref().map(|c| cat.payload(c));
    let mut lines = vec![format!("{a} vs {b}: {relation}")];
    if let Some(c) = &verdict.forward {
        lines.push(format!("  witness c with c∘{a} ⊵ {b}: {}", cat.payload(c)));
    }
    if let Some(c) = &verdict.backward {
        lines.push(format!("  witness c with c∘{b} ⊵ {a}: {}", cat.payload(c)));
    }
    lines.push(format!("  witnesses reverified: {}", yes(verdict.verified)));
    if verdict.approximate {
        lines.push("  negative answers come from a quantized search".into());
    }
    Ok(Report {
        results: json!({
            "relation": relation,
            "forward": witness(&verdict.forward),
            "backward": witness(&verdict.backward),
            "verified": verdict.verified,
            "approximate": verdict.approximate,
        }),
        lines,
        verified: verdict.verified,
    })
}

fn dominance_lines(
    names: &[String],
    dominates: impl Fn(usize, usize) -> bool,
) -> (Vec<String>, Value) {
    let matrix: Vec<Vec<bool>> = (0..names.len())
        .map(|i| (0..names.len()).map(|j| dominates(i, j)).collect())
        .collect();
    let mut lines = vec!["dominance (row ⪰ column):".to_string()];
    for (i, row) in matrix.iter().enumerate() {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        lines.push(format!("  {}: {}", names[i], cells.join(" ")));
    }
    (lines, json!(matrix))
}

fn classes(file: &ProblemFile, names: &[String]) -> Result<Report, Stop> {
    let (shown, (dom_lines, matrix)): (Vec<String>, _) = match file.category {
        CategoryTag::Set => {
            let parts = names
                .iter()
                .map(|n| morphism(&SetCat, file, n).map(|m| Partition::of_map(&m)))
                .collect::<Result<Vec<_>, _>>()?;
            let shown = parts.iter().map(|p| p.to_string()).collect();
            (
                shown,
                dominance_lines(names, |i, j| parts[i].refines(&parts[j])),
            )
        }
        CategoryTag::Multi => {
            let covs = names
                .iter()
                .map(|n| {
                    let m = morphism(&MultiCat, file, n)?;
                    Covering::of_map(&m, file.options.covering)
                        .map_err(at(format!("morphisms.{n}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let shown = covs.iter().map(|c| c.to_string()).collect();
            (
                shown,
                dominance_lines(names, |i, j| covs[i].dominates(&covs[j])),
            )
        }
        CategoryTag::Linear => {
            let cls = names
                .iter()
                .map(|n| morphism(&LinearCat, file, n).map(|m| info_class(&m)))
                .collect::<Result<Vec<_>, _>>()?;
            let shown = cls.iter().map(|c| c.to_string()).collect();
            (
                shown,
                dominance_lines(names, |i, j| cls[i].dominates(&cls[j])),
            )
        }
        other => {
            return Err(Stop::Invalid(invalid(
                "category",
                format!("no class representation for {other}"),
            )))
        }
    };
    let mut lines: Vec<String> = names
        .iter()
        .zip(&shown)
        .map(|(n, c)| format!("{n}: {c}"))
        .collect();
    lines.extend(dom_lines);
    let listed: serde_json::Map<String, Value> = names
        .iter()
        .zip(&shown)
        .map(|(n, c)| (n.clone(), json!(c)))
        .collect();
    Ok(Report {
        results: json!({ "classes": listed, "dominates": matrix }),
        lines,
        verified: true,
    })
}

fn strategy_text(r: &DetMap) -> String {
    (0..r.source().len())
        .map(|y| {
            format!(
                "{}->{}",
                r.source().labels()[y],
                r.target().labels()[r.apply(y)]
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn opt_json<M>(rep: &OptReport<M>) -> Value {
    let side = |v: &[DetMap]| v.iter().map(strategy_text).collect::<Vec<_>>();
    json!({
        "strategies": rep.strategies,
        "prior_side": side(&rep.prior_side),
        "posterior_side": side(&rep.posterior_side),
        "sets_equal": rep.sets_equal(),
        "prior_recovered": rep.prior_recovered,
        "preorder": rep.preorder,
    })
}

fn opt_lines<M>(rep: &OptReport<M>, lines: &mut Vec<String>) {
    let side = |v: &[DetMap]| {
        v.iter()
            .map(|r| format!("[{}]", strategy_text(r)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    lines.push(format!("optimal set over a∘f: {}", side(&rep.prior_side)));
    lines.push(format!(
        "optimal set over g with prior b∘g: {}",
        side(&rep.posterior_side)
    ));
    lines.push(format!("optimal sets equal: {}", yes(rep.sets_equal())));
    lines.push(format!(
        "comparator is a preorder on all joints: {}",
        yes(rep.preorder)
    ));
}

fn opt_verified<M>(rep: &OptReport<M>) -> bool {
    rep.sets_equal() && rep.preorder && rep.prior_recovered
}

struct BayesInputs<'f> {
    prior: &'f MorphismSpec,
    experiment: &'f MorphismSpec,
    goodness: &'f RelationSpec,
    comparator: Option<ComparatorKind>,
}

fn bayes_inputs(file: &ProblemFile) -> Result<BayesInputs<'_>, Stop> {
    let Problem::Bayes {
        prior,
        experiment,
        goodness,
        comparator,
    } = &file.problem
    else {
        unreachable!("dispatched on kind")
    };
    let inputs = BayesInputs {
        prior: &file.morphisms[prior],
        experiment: &file.morphisms[experiment],
        goodness: &file.relations[goodness],
        comparator: *comparator,
    };
    let x = &inputs.experiment.source;
    if inputs.prior.source != crate::problem::TERMINAL || &inputs.prior.target != x {
        return Err(Stop::Invalid(invalid(
            format!("morphisms.{prior}"),
            format!("a prior runs from Z to `{x}`"),
        )));
    }
    if &inputs.goodness.first != x {
        return Err(Stop::Invalid(invalid(
            format!("relations.{goodness}.first"),
            format!("goodness is a relation on `{x}` × decisions"),
        )));
    }
    Ok(inputs)
}

fn comparator(kind: ComparatorKind, table: &[Vec<f64>]) -> Comparator {
    match kind {
        ComparatorKind::ExpectedGoodness => Comparator::ExpectedGoodness(table.to_vec()),
        ComparatorKind::FuzzyGoodness => Comparator::FuzzyGoodness(table.to_vec()),
        ComparatorKind::Accuracy => Comparator::Accuracy,
    }
}

fn categorical_report<C: Wire + JointGrades>(cat: &C, file: &ProblemFile) -> Result<Report, Stop> {
    let inputs = bayes_inputs(file)?;
    let f = cat.build(file, inputs.prior).map_err(at("problem.prior"))?;
    let a = cat
        .build(file, inputs.experiment)
        .map_err(at("problem.experiment"))?;
    let decisions = file.space(&inputs.goodness.second);
    let cmp = comparator(
        inputs.comparator.expect("validated"),
        &inputs.goodness.table,
    );
    let rep = categorical_bayes(cat, &f, &a, &decisions, &cmp, file.options.budget)
        .map_err(at("problem"))?;
    let mut lines = vec![format!("conditional b: {}", cat.payload(&rep.conditional))];
    opt_lines(&rep, &mut lines);
    let mut results = opt_json(&rep);
    results["conditional"] = cat.payload(&rep.conditional);
    Ok(Report {
        results: json!({ "categorical": results }),
        lines,
        verified: opt_verified(&rep),
    })
}

fn fuzzy_bayes(file: &ProblemFile) -> Result<Report, Stop> {
    let inputs = bayes_inputs(file)?;
    let x = file.space(&inputs.experiment.source);
    let y = file.space(&inputs.experiment.target);
    let d = file.space(&inputs.goodness.second);
    let prior =
        FuzzySet::new(x.clone(), rows_of(inputs.prior)[0].clone()).map_err(at("problem.prior"))?;
    let alpha = TransitionDistribution::new(x.clone(), y, rows_of(inputs.experiment).to_vec())
        .map_err(at("problem.experiment"))?;
    let g = JointRelation::new(x, d.clone(), inputs.goodness.table.clone())
        .map_err(at("problem.goodness"))?;
    let pg = PriorGame::new(FuzzyGame::new(g), prior).map_err(at("problem"))?;
    let exp = Experiment { alpha };
    let best = bayes_strategy(&pg, &exp, file.options.variant).map_err(at("problem"))?;

    let mut lines = vec!["strategy:".to_string()];
    for yi in 0..best.strategy.source().len() {
        lines.push(format!(
            "  {} -> {}",
            best.strategy.source().labels()[yi],
            d.labels()[best.strategy.apply(yi)]
        ));
    }
    lines.push(format!("goodness (posterior formula): {}", best.value));
    lines.push(format!("goodness (direct): {}", best.direct));
    lines.push(format!(
        "formulas agree exactly: {}",
        yes(best.consistent())
    ));
    let mut verified = best.consistent();
    let mut results = json!({
        "strategy": StrategyRecord::new(&best.strategy, best.value),
        "theorem_value": best.value,
        "direct_value": best.direct,
        "consistent": best.consistent(),
    });

    match brute_force_strategy(&pg, &exp, file.options.budget) {
        Ok((r, v)) => {
            let agrees = v == best.value;
            verified &= agrees;
            lines.push(format!(
                "brute force: {v} at [{}] ({})",
                strategy_text(&r),
                if agrees { "agrees" } else { "DISAGREES" }
            ));
            results["brute_force"] = json!({ "value": v, "agrees": agrees });
        }
        Err(Error::BudgetExceeded { needed, .. }) => {
            lines.push(format!(
                "brute force: skipped ({needed} strategies exceed the budget)"
            ));
            results["brute_force"] = Value::Null;
        }
        Err(e) => return Err(at("problem")(e)),
    }

    let fmt = FuzzyCat::FMT.with_variant(file.options.variant);
    let categorical = (|| {
        let f = fmt.build(file, inputs.prior)?;
        let a = fmt.build(file, inputs.experiment)?;
        let cmp = comparator(
            inputs.comparator.unwrap_or(ComparatorKind::FuzzyGoodness),
            &inputs.goodness.table,
        );
        categorical_bayes(&fmt, &f, &a, &d, &cmp, file.options.budget)
    })();
    match categorical {
        Ok(rep) => {
            let contains = rep.prior_side.contains(&best.strategy);
            verified &= opt_verified(&rep);
            opt_lines(&rep, &mut lines);
            lines.push(format!(
                "optimal set contains the strategy: {}",
                yes(contains)
            ));
            let mut c = opt_json(&rep);
            c["contains_strategy"] = json!(contains);
            results["categorical"] = c;
        }
        Err(Error::BudgetExceeded { .. }) => results["categorical"] = Value::Null,
        // subnormed priors or experiments have no FMT morphism
        Err(_) => {
            lines.push("optimal sets: skipped (inputs are not normed FMT morphisms)".into());
            results["categorical"] = Value::Null;
        }
    }
    Ok(Report {
        results,
        lines,
        verified,
    })
}

/// The axiom table for one category.
pub fn run_verify(category: CategoryTag, seed: u64, samples: usize, format: Format) -> Outcome {
    fn go<C: SampleMorphisms>(
        cat: &C,
        seed: u64,
        samples: usize,
    ) -> crate::kernel::axioms::AxiomReport {
        verify_axioms(cat, seed, samples)
    }
    let report = match category {
        CategoryTag::Set => go(&SetCat, seed, samples),
        CategoryTag::Fmt => go(&FuzzyCat::FMT, seed, samples),
        CategoryTag::Fpt => go(&FuzzyCat::FPT, seed, samples),
        CategoryTag::Multi => go(&MultiCat, seed, samples),
        CategoryTag::Stoch => go(&StochCat, seed, samples),
        CategoryTag::Linear => go(&LinearCat, seed, samples),
    };
    let passed = report.all_passed();
    let stdout = match format {
        Format::Machine => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => {
            let mut out = format!("verify ({category}) seed {seed}, {samples} samples per law\n");
            for law in &report.laws {
                let name = serde_json::to_value(law.law).expect("serializable");
                out.push_str(&format!(
                    "  {:<30} {}\n",
                    name.as_str().expect("string"),
                    if law.passed { "pass" } else { "FAIL" }
                ));
                if let Some(ce) = &law.counterexample {
                    out.push_str(&format!("    counterexample: {ce}\n"));
                }
            }
            out.push_str(&format!(
                "status: {}\n",
                if passed { "ok" } else { "verification failed" }
            ));
            out
        }
    };
    Outcome {
        code: if passed { EXIT_OK } else { EXIT_VERIFICATION },
        stdout,
        stderr: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(verb: Verb, text: &str) -> Outcome {
        run_file(verb, text, Overrides::default(), Format::Text)
    }

    const FMT_BAYES: &str = r#"{
      "version": 1, "category": "FMT",
      "spaces": { "X": ["x1", "x2"], "Y": ["y1", "y2"], "D": ["d1", "d2"] },
      "morphisms": {
        "prior": { "source": "Z", "target": "X", "payload": { "rows": [[1.0, 0.3]] } },
        "alpha": { "source": "X", "target": "Y", "payload": { "rows": [[1.0, 0.5], [0.3, 1.0]] } }
      },
      "relations": { "G": { "first": "X", "second": "D", "table": [[1.0, 0.2], [0.0, 0.9]] } },
      "problem": { "kind": "bayes", "prior": "prior", "experiment": "alpha", "goodness": "G" }
    }"#;

    #[test]
    fn fuzzy_bayes_report() {
        let out = run(Verb::Bayes, FMT_BAYES);
        assert_eq!(out.code, EXIT_OK, "{}{}", out.stdout, out.stderr);
        assert!(out.stdout.contains("formulas agree exactly: yes"));
        assert!(out.stdout.contains("agrees"));
        assert!(out
            .stdout
            .contains("optimal set contains the strategy: yes"));
        let machine = run_file(
            Verb::Bayes,
            FMT_BAYES,
            Overrides::default(),
            Format::Machine,
        );
        let doc: Value = serde_json::from_str(&machine.stdout).unwrap();
        assert_eq!(doc["results"]["consistent"], json!(true));
        assert_eq!(doc["status"], json!("ok"));
    }

    #[test]
    fn verb_must_match_problem_kind() {
        let out = run(Verb::Compare, FMT_BAYES);
        assert_eq!(out.code, EXIT_INVALID);
        assert!(out.stderr.contains("problem.kind"));
    }

    #[test]
    fn budget_exit_code() {
        let out = run_file(
            Verb::Bayes,
            &FMT_BAYES
                .replace(
                    r#""goodness": "G" }"#,
                    r#""goodness": "G", "comparator": "fuzzy_goodness" }"#,
                )
                .replace(r#""category": "FMT""#, r#""category": "FPT""#),
            Overrides {
                budget: Some(2),
                ..Overrides::default()
            },
            Format::Text,
        );
        assert_eq!(out.code, EXIT_BUDGET, "{}", out.stderr);
    }

    #[test]
    fn linear_conditional() {
        let text = r#"{
          "version": 1, "category": "LINEAR",
          "spaces": { "F": ["f"], "G": ["g"] },
          "relations": { "h": { "first": "F", "second": "G", "table": [[1.0, 1.0], [1.0, 2.0]] } },
          "problem": { "kind": "conditional", "joint": "h" }
        }"#;
        let out = run_file(
            Verb::Conditional,
            text,
            Overrides::default(),
            Format::Machine,
        );
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        let b = &doc["results"]["wrt_second"]["conditional"]["linear"];
        assert!((b["gain"][0][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!((b["noise"][0][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!(doc["results"]["wrt_second"]["residual"].as_f64().unwrap() <= 1e-9);
    }

    #[test]
    fn set_compare_and_classes() {
        let text = r#"{
          "version": 1, "category": "SET",
          "spaces": { "D": ["a", "b", "c"], "R": ["p", "q", "r"], "S": ["s", "t"] },
          "morphisms": {
            "fine": { "source": "D", "target": "R", "payload": { "map": ["p", "q", "r"] } },
            "coarse": { "source": "D", "target": "S", "payload": { "map": ["s", "s", "t"] } }
          },
          "problem": { "kind": "compare", "a": "fine", "b": "coarse" }
        }"#;
        let out = run(Verb::Compare, text);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("fine vs coarse: more"));
        assert!(out.stdout.contains(r#"{"map":["s","s","t"]}"#));
        let classes = text.replace(
            r#""kind": "compare", "a": "fine", "b": "coarse""#,
            r#""kind": "classes", "morphisms": ["fine", "coarse"]"#,
        );
        let out = run(Verb::Classes, &classes);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("coarse: {0,1}|{2}"));
        assert!(out.stdout.contains("fine: 1 1"));
        assert!(out.stdout.contains("coarse: 0 1"));
    }

    #[test]
    fn payload_errors_name_the_morphism() {
        let bad = FMT_BAYES.replace("[[1.0, 0.5], [0.3, 1.0]]", "[[0.9, 0.5], [0.3, 1.0]]");
        let text = bad.replace(
            r#""kind": "bayes", "prior": "prior", "experiment": "alpha", "goodness": "G""#,
            r#""kind": "compare", "a": "alpha", "b": "alpha""#,
        );
        let out = run(Verb::Compare, &text);
        assert_eq!(out.code, EXIT_INVALID);
        assert!(out.stderr.contains("morphisms.alpha"), "{}", out.stderr);
    }

    #[test]
    fn verify_table() {
        let out = run_verify(CategoryTag::Set, 1, 20, Format::Text);
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.stdout.matches("pass").count(), 10);
    }
}
