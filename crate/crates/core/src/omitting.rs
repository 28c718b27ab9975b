//! Partial types, δ-thickening, and brute-force principality over a finite
//! registry of structures.
//!
//! Every verdict here is relative to the registry (and, for principality, to
//! the witness pool): the registry plays the role of the class of all
//! structures, which is not searchable.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational01;
use crate::semantics::{
    eval_term, evaluate, holds_at, models, EvalConfig, EvalError, Registry, SatStrictness, Theory, Verdict,
};
use crate::structure::{tuples, Assignment, MetricStructure, Point};
use crate::syntax::{and, fresh_name, leq, substitute_many, Formula, RatExpr, Schema, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmittingError {
    #[error("free variable `{0}` is not among the declared variables")]
    UndeclaredVariable(String),
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("expected a tuple of {expected} point(s), got {found}")]
    Arity { expected: usize, found: usize },
    #[error("δ = {0} must lie strictly between 0 and 1")]
    DeltaOutOfRange(Rational01),
    #[error("threshold {0} must lie strictly between 0 and 1")]
    ThresholdOutOfRange(Rational01),
    #[error("term tuple has {found} term(s), the type has {expected} variable(s)")]
    TermTupleLength { expected: usize, found: usize },
    #[error("the registry is empty")]
    EmptyRegistry,
    #[error("registry and type use different signatures")]
    SignatureMismatch,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TypeMember {
    Formula(Formula),
    /// Every instance `body[i := n]`, `n ∈ ℕ`.
    Schema {
        index: String,
        body: Formula,
    },
}

impl TypeMember {
    fn map(&self, f: impl Fn(&Formula) -> Formula) -> TypeMember {
        match self {
            TypeMember::Formula(phi) => TypeMember::Formula(f(phi)),
            TypeMember::Schema { index, body } => TypeMember::Schema { index: index.clone(), body: f(body) },
        }
    }

    fn body(&self) -> &Formula {
        match self {
            TypeMember::Formula(phi) | TypeMember::Schema { body: phi, .. } => phi,
        }
    }
}

/// A set of formulas in the fixed free variables `variables`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialType {
    name: String,
    variables: Vec<String>,
    members: Vec<TypeMember>,
}

fn distinct(vars: &[String]) -> Result<(), OmittingError> {
    let mut seen = BTreeSet::new();
    for v in vars {
        if !seen.insert(v) {
            return Err(OmittingError::DuplicateVariable(v.clone()));
        }
    }
    Ok(())
}

fn covered(phi: &Formula, vars: &[String]) -> Result<(), OmittingError> {
    match phi.free_variables().into_iter().find(|v| !vars.contains(v)) {
        Some(v) => Err(OmittingError::UndeclaredVariable(v)),
        None => Ok(()),
    }
}

impl PartialType {
    pub fn new(name: &str, variables: Vec<String>, members: Vec<TypeMember>) -> Result<Self, OmittingError> {
        distinct(&variables)?;
        for m in &members {
            covered(m.body(), &variables)?;
            let allowed: BTreeSet<String> = match m {
                TypeMember::Formula(_) => BTreeSet::new(),
                TypeMember::Schema { index, .. } => BTreeSet::from([index.clone()]),
            };
            if let Some(i) = m.body().free_index_variables().difference(&allowed).next() {
                return Err(EvalError::Syntax(crate::syntax::SyntaxError::UnboundIndex(i.clone())).into());
            }
        }
        Ok(PartialType { name: name.to_string(), variables, members })
    }

    /// A type with plain formula members.
    pub fn of_formulas(name: &str, variables: &[&str], formulas: Vec<Formula>) -> Result<Self, OmittingError> {
        Self::new(
            name,
            variables.iter().map(|v| v.to_string()).collect(),
            formulas.into_iter().map(TypeMember::Formula).collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn members(&self) -> &[TypeMember] {
        &self.members
    }

    pub fn arity(&self) -> usize {
        self.variables.len()
    }

    fn assignment(&self, tuple: &[Point]) -> Result<Assignment, OmittingError> {
        if tuple.len() != self.variables.len() {
            return Err(OmittingError::Arity { expected: self.variables.len(), found: tuple.len() });
        }
        let mut a = Assignment::new();
        for (v, &p) in self.variables.iter().zip(tuple) {
            a.bind(v, p).expect("variables are distinct");
        }
        Ok(a)
    }
}

fn member_verdict(
    m: &MetricStructure,
    member: &TypeMember,
    a: &Assignment,
    cfg: &EvalConfig,
) -> Result<Verdict, EvalError> {
    match member {
        TypeMember::Formula(phi) => holds_at(m, phi, a, cfg),
        TypeMember::Schema { index, body } => {
            let schema = Schema::indexed(index, body.clone());
            if !body.free_index_variables().contains(index) {
                return holds_at(m, body, a, cfg);
            }
            let mut seen = Verdict::Yes;
            for i in 0..cfg.depth as u64 {
                let v = holds_at(m, &schema.instance(i)?, a, cfg)?;
                if v == Verdict::No {
                    return Ok(Verdict::No);
                }
                seen = seen.and(v);
            }
            // instances past the depth are unchecked
            Ok(seen.and(Verdict::Unknown))
        }
    }
}

/// Whether `tuple` realizes every member of `sigma` in `m`.
pub fn realizes(
    m: &MetricStructure,
    sigma: &PartialType,
    tuple: &[Point],
    cfg: &EvalConfig,
) -> Result<Verdict, OmittingError> {
    let a = sigma.assignment(tuple)?;
    let mut verdict = Verdict::Yes;
    for member in &sigma.members {
        verdict = verdict.and(member_verdict(m, member, &a, cfg)?);
        if verdict == Verdict::No {
            break;
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmitReport {
    pub verdict: Verdict,
    /// Tuples (point names) that realize the type.
    pub realizing: Vec<Vec<String>>,
    /// Tuples whose realization is undecided at this depth.
    pub undecided: Vec<Vec<String>>,
}

fn names(m: &MetricStructure, tuple: &[Point]) -> Vec<String> {
    tuple.iter().map(|&p| m.point_name(p).to_string()).collect()
}

/// `Yes` iff no tuple of `m` realizes `sigma`.
pub fn omits(m: &MetricStructure, sigma: &PartialType, cfg: &EvalConfig) -> Result<OmitReport, OmittingError> {
    let mut realizing = Vec::new();
    let mut undecided = Vec::new();
    for t in tuples(m.size(), sigma.arity()) {
        match realizes(m, sigma, &t, cfg)? {
            Verdict::Yes => realizing.push(names(m, &t)),
            Verdict::Unknown => undecided.push(names(m, &t)),
            Verdict::No => {}
        }
    }
    let verdict = if !realizing.is_empty() {
        Verdict::No
    } else if !undecided.is_empty() {
        Verdict::Unknown
    } else {
        Verdict::Yes
    };
    Ok(OmitReport { verdict, realizing, undecided })
}

fn check_delta(delta: &Rational01) -> Result<(), OmittingError> {
    if delta.is_zero() || delta.is_one() {
        return Err(OmittingError::DeltaOutOfRange(delta.clone()));
    }
    Ok(())
}

/// `Σ^δ`: each member `σ(x̄)` becomes
/// `sup y_1 … sup y_n ((d(x_1, y_1) ≤ δ ∧ … ∧ d(x_n, y_n) ≤ δ) ∧ σ(ȳ))`
/// with fresh `ȳ`. A type without variables is returned unchanged.
pub fn thicken(sigma: &PartialType, delta: &Rational01) -> Result<PartialType, OmittingError> {
    check_delta(delta)?;
    if sigma.variables.is_empty() {
        return Ok(sigma.clone());
    }
    let mut taken: BTreeSet<String> = sigma.variables.iter().cloned().collect();
    for m in &sigma.members {
        taken.extend(m.body().free_variables());
    }
    let n = sigma.variables.len();
    let ys: Vec<String> = (0..n)
        .map(|k| {
            let base = if n == 1 { "y".to_string() } else { format!("y{}", k + 1) };
            let name = if taken.contains(&base) { fresh_name(&base, &taken) } else { base };
            taken.insert(name.clone());
            name
        })
        .collect();
    let renaming: BTreeMap<String, Term> =
        sigma.variables.iter().zip(&ys).map(|(x, y)| (x.clone(), Term::var(y))).collect();
    let ball = sigma
        .variables
        .iter()
        .zip(&ys)
        .map(|(x, y)| leq(Formula::dist(Term::var(x), Term::var(y)), RatExpr::fixed(delta.clone())))
        .reduce(and)
        .expect("at least one variable");
    let wrap = |body: &Formula| {
        let inner = and(ball.clone(), substitute_many(body, &renaming));
        ys.iter().rev().fold(inner, |acc, y| Formula::sup(y, acc))
    };
    Ok(PartialType {
        name: format!("{}_d{}_{}", sigma.name, delta.numer(), delta.denom()),
        variables: sigma.variables.clone(),
        members: sigma.members.iter().map(|m| m.map(wrap)).collect(),
    })
}

/// Candidate witnesses for principality: formulas `φ(ȳ)`, term tuples
/// `t̄(ȳ)` and thresholds `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalityWitnessPool {
    variables: Vec<String>,
    formulas: Vec<Formula>,
    term_tuples: Vec<Vec<Term>>,
    thresholds: Vec<Rational01>,
}

impl PrincipalityWitnessPool {
    pub fn new(
        variables: Vec<String>,
        formulas: Vec<Formula>,
        term_tuples: Vec<Vec<Term>>,
        thresholds: Vec<Rational01>,
    ) -> Result<Self, OmittingError> {
        distinct(&variables)?;
        for phi in &formulas {
            covered(phi, &variables)?;
        }
        for t in term_tuples.iter().flatten() {
            if let Some(v) = t.free_variables().into_iter().find(|v| !variables.contains(v)) {
                return Err(OmittingError::UndeclaredVariable(v));
            }
        }
        for r in &thresholds {
            if r.is_zero() || r.is_one() {
                return Err(OmittingError::ThresholdOutOfRange(r.clone()));
            }
        }
        Ok(PrincipalityWitnessPool { variables, formulas, term_tuples, thresholds })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn term_tuples(&self) -> &[Vec<Term>] {
        &self.term_tuples
    }

    pub fn thresholds(&self) -> &[Rational01] {
        &self.thresholds
    }

    /// All `(formula, terms, threshold)` index triples in search order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.formulas.len()).flat_map(move |f| {
            (0..self.term_tuples.len()).flat_map(move |t| (0..self.thresholds.len()).map(move |r| (f, t, r)))
        })
    }
}

/// A structure of the registry together with a tuple of its points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointWitness {
    pub structure: usize,
    pub structure_name: String,
    pub tuple: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub formula: String,
    pub terms: Vec<String>,
    pub threshold: Rational01,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum TripleFailure {
    /// No registry model of `T` has a tuple satisfying `φ` with definite evidence.
    Unsatisfied,
    /// `φ(b̄) ≥ r` may hold but `t̄(b̄)` is not shown to realize the type.
    NotEntailed {
        at: PointWitness,
        /// `models(M, T)`; `unknown` models are kept as possible models.
        model: Verdict,
        condition: Verdict,
        realization: Verdict,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleResult {
    pub triple: Triple,
    pub satisfied_at: Option<PointWitness>,
    pub failure: Option<TripleFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Principality {
    /// Some pool triple witnesses principality over the registry.
    Principal,
    /// No pool triple does.
    NotPrincipalRelative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalityReport {
    pub verdict: Principality,
    /// The accepted triple, if any.
    pub witness: Option<TripleResult>,
    /// Every triple tried, in pool order, up to and including the accepted one.
    pub trials: Vec<TripleResult>,
    /// Whether the type is realized in some registry model of `T`.
    pub is_type: Verdict,
    /// Set when the type is realized in no registry model of `T`, so any
    /// acceptance is vacuous.
    pub vacuous: bool,
}

fn check_registry(registry: &Registry, sigma: &PartialType) -> Result<(), OmittingError> {
    if registry.is_empty() {
        return Err(OmittingError::EmptyRegistry);
    }
    let sig = registry.signature().expect("nonempty");
    for m in &sigma.members {
        m.body().check(sig).map_err(EvalError::from)?;
    }
    Ok(())
}

/// `φ ≥ r` at the assignment, as a three-valued verdict.
fn at_least(
    m: &MetricStructure,
    phi: &Formula,
    a: &Assignment,
    r: &Rational01,
    cfg: &EvalConfig,
) -> Result<Verdict, EvalError> {
    let v = evaluate(m, phi, a, cfg)?;
    Ok(if v.lo() >= r {
        Verdict::Yes
    } else if v.hi() < r {
        Verdict::No
    } else {
        Verdict::Unknown
    })
}

fn satisfied(m: &MetricStructure, phi: &Formula, a: &Assignment, cfg: &EvalConfig) -> Result<bool, EvalError> {
    let v = evaluate(m, phi, a, cfg)?;
    Ok(match cfg.strictness {
        SatStrictness::Eq1 => v.lo().is_one(),
        SatStrictness::Gt0 => !v.lo().is_zero(),
    })
}

fn pool_assignment(pool: &PrincipalityWitnessPool, tuple: &[Point]) -> Assignment {
    Assignment::from_pairs(pool.variables.iter().map(String::as_str).zip(tuple.iter().copied()))
        .expect("pool variables are distinct")
}

/// Whether `Σ` is principal over `T`, relative to the registry and the pool.
///
/// A triple `(φ, t̄, r)` is accepted when
/// 1. some registry structure with `M ⊨ T` (definitely) has `b̄` with
///    `φ(b̄) = 1` (or `> 0` under [`SatStrictness::Gt0`]), and
/// 2. for every structure not definitely failing `T` and every `b̄` where
///    `φ(b̄) ≥ r` may hold, `t̄(b̄)` definitely realizes `Σ`.
///
/// Triples are tried in pool order (formula, then terms, then threshold).
pub fn principal_over(
    theory: &Theory,
    sigma: &PartialType,
    pool: &PrincipalityWitnessPool,
    registry: &Registry,
    cfg: &EvalConfig,
) -> Result<PrincipalityReport, OmittingError> {
    check_registry(registry, sigma)?;
    for t in &pool.term_tuples {
        if t.len() != sigma.arity() {
            return Err(OmittingError::TermTupleLength { expected: sigma.arity(), found: t.len() });
        }
    }
    let structures = registry.structures();
    let model_verdicts: Vec<Verdict> =
        structures.iter().map(|m| models(m, theory, cfg).map(|r| r.verdict)).collect::<Result<_, _>>()?;

    let mut is_type = Verdict::No;
    for (m, mv) in structures.iter().zip(&model_verdicts) {
        if *mv == Verdict::No {
            continue;
        }
        for t in tuples(m.size(), sigma.arity()) {
            is_type = is_type.or(mv.and(realizes(m, sigma, &t, cfg)?));
        }
    }

    let n = pool.variables.len();
    let witness_of = |k: usize, b: &[Point]| PointWitness {
        structure: k,
        structure_name: structures[k].name().to_string(),
        tuple: names(&structures[k], b),
    };
    let mut trials = Vec::new();
    let mut accepted = None;
    'triples: for (fi, ti, ri) in pool.triples() {
        let (phi, terms, r) = (&pool.formulas[fi], &pool.term_tuples[ti], &pool.thresholds[ri]);
        let triple = Triple {
            formula: phi.to_string(),
            terms: terms.iter().map(Term::to_string).collect(),
            threshold: r.clone(),
        };
        let mut satisfied_at = None;
        'sat: for (k, m) in structures.iter().enumerate() {
            if model_verdicts[k] != Verdict::Yes {
                continue;
            }
            for b in tuples(m.size(), n) {
                if satisfied(m, phi, &pool_assignment(pool, &b), cfg)? {
                    satisfied_at = Some(witness_of(k, &b));
                    break 'sat;
                }
            }
        }
        if satisfied_at.is_none() {
            trials.push(TripleResult { triple, satisfied_at, failure: Some(TripleFailure::Unsatisfied) });
            continue;
        }
        for (k, m) in structures.iter().enumerate() {
            if model_verdicts[k] == Verdict::No {
                continue;
            }
            for b in tuples(m.size(), n) {
                let a = pool_assignment(pool, &b);
                let condition = at_least(m, phi, &a, r, cfg)?;
                if condition == Verdict::No {
                    continue;
                }
                let image = terms.iter().map(|t| eval_term(m, t, &a)).collect::<Result<Vec<_>, _>>()?;
                let realization = realizes(m, sigma, &image, cfg)?;
                if realization != Verdict::Yes {
                    let failure = TripleFailure::NotEntailed {
                        at: witness_of(k, &b),
                        model: model_verdicts[k],
                        condition,
                        realization,
                    };
                    trials.push(TripleResult { triple, satisfied_at, failure: Some(failure) });
                    continue 'triples;
                }
            }
        }
        let result = TripleResult { triple, satisfied_at, failure: None };
        trials.push(result.clone());
        accepted = Some(result);
        break;
    }
    Ok(PrincipalityReport {
        verdict: if accepted.is_some() { Principality::Principal } else { Principality::NotPrincipalRelative },
        witness: accepted,
        trials,
        is_type,
        vacuous: is_type == Verdict::No,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaResult {
    pub delta: Rational01,
    pub report: PrincipalityReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricPrincipality {
    /// `Σ^δ` is principal (relative to registry and pool) for every listed δ.
    MetricallyPrincipalRelative,
    NotMetricallyPrincipal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricPrincipalityReport {
    pub verdict: MetricPrincipality,
    /// First δ whose thickening is not principal.
    pub failing_delta: Option<Rational01>,
    pub per_delta: Vec<DeltaResult>,
    /// Set when the δ list is empty: the verdict then carries no evidence.
    pub vacuous: bool,
}

/// Runs [`principal_over`] on `Σ^δ` for each supplied δ.
pub fn metrically_principal_over(
    theory: &Theory,
    sigma: &PartialType,
    pool: &PrincipalityWitnessPool,
    registry: &Registry,
    deltas: &[Rational01],
    cfg: &EvalConfig,
) -> Result<MetricPrincipalityReport, OmittingError> {
    check_registry(registry, sigma)?;
    let mut per_delta = Vec::with_capacity(deltas.len());
    let mut failing_delta = None;
    for delta in deltas {
        let thick = thicken(sigma, delta)?;
        let report = principal_over(theory, &thick, pool, registry, cfg)?;
        if report.verdict != Principality::Principal && failing_delta.is_none() {
            failing_delta = Some(delta.clone());
        }
        per_delta.push(DeltaResult { delta: delta.clone(), report });
    }
    Ok(MetricPrincipalityReport {
        verdict: if failing_delta.is_some() {
            MetricPrincipality::NotMetricallyPrincipal
        } else {
            MetricPrincipality::MetricallyPrincipalRelative
        },
        failing_delta,
        per_delta,
        vacuous: deltas.is_empty(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureScan {
    pub structure: usize,
    pub structure_name: String,
    pub model: Verdict,
    /// One entry per type, in order; empty when the structure is not a model.
    pub omissions: Vec<OmitReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmitSearchReport {
    /// Index of the first structure that models `T` and omits every type.
    pub found: Option<usize>,
    /// Every structure inspected, in registry order, up to the one found.
    pub scanned: Vec<StructureScan>,
}

/// Scans the registry for a model of `T` omitting every type.
pub fn omit_search(
    theory: &Theory,
    types: &[PartialType],
    registry: &Registry,
    cfg: &EvalConfig,
) -> Result<OmitSearchReport, OmittingError> {
    let mut scanned = Vec::new();
    for (k, m) in registry.structures().iter().enumerate() {
        let model = models(m, theory, cfg)?.verdict;
        let mut omissions = Vec::new();
        if model == Verdict::Yes {
            for t in types {
                omissions.push(omits(m, t, cfg)?);
            }
        }
        let found = model == Verdict::Yes && omissions.iter().all(|o| o.verdict == Verdict::Yes);
        scanned.push(StructureScan { structure: k, structure_name: m.name().to_string(), model, omissions });
        if found {
            return Ok(OmitSearchReport { found: Some(k), scanned });
        }
    }
    Ok(OmitSearchReport { found: None, scanned })
}

/// The family `Σ(t̄(ȳ))`, one type per term tuple, in the variables `ȳ`.
pub fn term_instances(
    sigma: &PartialType,
    variables: &[String],
    term_tuples: &[Vec<Term>],
) -> Result<Vec<PartialType>, OmittingError> {
    let mut out = Vec::with_capacity(term_tuples.len());
    for (k, terms) in term_tuples.iter().enumerate() {
        if terms.len() != sigma.arity() {
            return Err(OmittingError::TermTupleLength { expected: sigma.arity(), found: terms.len() });
        }
        let map: BTreeMap<String, Term> = sigma.variables.iter().cloned().zip(terms.iter().cloned()).collect();
        let members = sigma.members.iter().map(|m| m.map(|phi| substitute_many(phi, &map))).collect();
        out.push(PartialType::new(&format!("{}_{k}", sigma.name), variables.to_vec(), members)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{Modulus, Signature};
    use crate::structure::StructureBuilder;
    use crate::syntax::IndexExpr;

    fn q(p: i64, d: i64) -> Rational01 {
        Rational01::of(p, d)
    }

    fn sig() -> Signature {
        Signature::new().with_predicate("P", 1, Modulus::Identity).unwrap()
    }

    fn one_point(p: Rational01) -> MetricStructure {
        let mut b = StructureBuilder::new(format!("P={p}"), sig(), &["a"]).unwrap();
        b.predicate("P", &["a"], p).unwrap();
        b.build().unwrap()
    }

    fn px(v: &str) -> Formula {
        Formula::pred("P", vec![Term::var(v)])
    }

    fn sigma() -> PartialType {
        PartialType::of_formulas("Sigma", &["x"], vec![px("x")]).unwrap()
    }

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn realization_examples() {
        let top = PartialType::of_formulas("Top", &["x"], vec![Formula::constant(Rational01::one())]).unwrap();
        assert_eq!(realizes(&one_point(q(1, 2)), &top, &[0], &cfg()).unwrap(), Verdict::Yes);
        assert_eq!(realizes(&one_point(q(1, 2)), &sigma(), &[0], &cfg()).unwrap(), Verdict::No);
        assert_eq!(realizes(&one_point(Rational01::one()), &sigma(), &[0], &cfg()).unwrap(), Verdict::Yes);
        assert!(matches!(
            realizes(&one_point(Rational01::one()), &sigma(), &[], &cfg()),
            Err(OmittingError::Arity { .. })
        ));
    }

    #[test]
    fn omission_examples() {
        assert_eq!(omits(&one_point(q(1, 2)), &sigma(), &cfg()).unwrap().verdict, Verdict::Yes);
        assert_eq!(omits(&one_point(Rational01::one()), &sigma(), &cfg()).unwrap().verdict, Verdict::No);
        let schema = PartialType::new(
            "S",
            vec!["x".into()],
            vec![TypeMember::Schema {
                index: "i".into(),
                body: Formula::implies(Formula::rat(RatExpr::enumerated(IndexExpr::var("i"))), px("x")),
            }],
        )
        .unwrap();
        assert_eq!(omits(&one_point(Rational01::one()), &schema, &cfg()).unwrap().verdict, Verdict::Unknown);
    }

    #[test]
    fn thickening_shape() {
        let t = thicken(&sigma(), &q(1, 4)).unwrap();
        let expected = Formula::sup(
            "y",
            and(leq(Formula::dist(Term::var("x"), Term::var("y")), RatExpr::fixed(q(1, 4))), px("y")),
        );
        assert_eq!(t.members(), &[TypeMember::Formula(expected)]);
        assert_eq!(t.variables(), sigma().variables());
        assert!(thicken(&sigma(), &Rational01::one()).is_err());
        let sentence = PartialType::of_formulas("S", &[], vec![Formula::constant(q(1, 2))]).unwrap();
        assert_eq!(thicken(&sentence, &q(1, 2)).unwrap(), sentence);
    }

    #[test]
    fn worked_principality_example() {
        let reg =
            Registry::new("R", vec![one_point(Rational01::zero()), one_point(q(1, 2)), one_point(Rational01::one())])
                .unwrap();
        let pool =
            PrincipalityWitnessPool::new(vec!["y".into()], vec![px("y")], vec![vec![Term::var("y")]], vec![q(3, 4)])
                .unwrap();
        let report = principal_over(&Theory::empty(), &sigma(), &pool, &reg, &cfg()).unwrap();
        assert_eq!(report.verdict, Principality::Principal);
        assert!(!report.vacuous);

        let constants = PrincipalityWitnessPool::new(
            vec!["y".into()],
            vec![Formula::constant(Rational01::one()), Formula::constant(q(1, 2))],
            vec![vec![Term::var("y")]],
            vec![q(1, 4), q(3, 4)],
        )
        .unwrap();
        let report = principal_over(&Theory::empty(), &sigma(), &constants, &reg, &cfg()).unwrap();
        assert_eq!(report.verdict, Principality::NotPrincipalRelative);
        assert_eq!(report.trials.len(), 4);
    }

    #[test]
    fn vacuous_and_empty_cases() {
        let reg = Registry::new("R", vec![one_point(Rational01::zero())]).unwrap();
        let pool =
            PrincipalityWitnessPool::new(vec!["y".into()], vec![px("y")], vec![vec![Term::var("y")]], vec![q(1, 2)])
                .unwrap();
        let report = principal_over(&Theory::empty(), &sigma(), &pool, &reg, &cfg()).unwrap();
        assert!(report.vacuous);
        let empty = Registry::new("E", vec![]).unwrap();
        assert_eq!(
            principal_over(&Theory::empty(), &sigma(), &pool, &empty, &cfg()),
            Err(OmittingError::EmptyRegistry)
        );
        let m = metrically_principal_over(&Theory::empty(), &sigma(), &pool, &reg, &[], &cfg()).unwrap();
        assert!(m.vacuous);
        assert_eq!(m.verdict, MetricPrincipality::MetricallyPrincipalRelative);
    }

    #[test]
    fn search_finds_first_omitting_model() {
        let reg = Registry::new("R", vec![one_point(Rational01::one()), one_point(q(1, 2))]).unwrap();
        let report = omit_search(&Theory::empty(), &[sigma()], &reg, &cfg()).unwrap();
        assert_eq!(report.found, Some(1));
        let none = omit_search(
            &Theory::empty(),
            &[sigma()],
            &Registry::new("R", vec![one_point(Rational01::one())]).unwrap(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(none.found, None);
        assert_eq!(none.scanned[0].omissions[0].realizing, vec![vec!["a".to_string()]]);
        let first = omit_search(&Theory::empty(), &[], &reg, &cfg()).unwrap();
        assert_eq!(first.found, Some(0));
    }
}
