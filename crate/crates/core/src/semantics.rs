//! Truth values.
//!
//! Finitary formulas evaluate exactly. A countable supremum given by an
//! infinite schema is truncated to its first `depth` instances; the result is
//! then an interval `[lo, hi]` guaranteed to contain the true value.

use rustc_hash::FxHashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational01;
use crate::signature::Signature;
use crate::structure::{Assignment, MetricStructure, Point};
use crate::syntax::{Formula, IndexEnv, Schema, SyntaxError, Term};

pub const DEFAULT_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
    #[error("formula has free variable `{0}` where a sentence is required")]
    NotASentence(String),
    #[error("truncation depth must be at least 1")]
    ZeroDepth,
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("structures do not share a signature")]
    SignatureMismatch,
    #[error("interval bounds out of order: r = {r} > s = {s}")]
    BadInterval { r: Rational01, s: Rational01 },
}

/// A sound enclosure `[lo, hi]` of a truth value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueInterval {
    lo: Rational01,
    hi: Rational01,
}

impl ValueInterval {
    pub fn exact(value: Rational01) -> Self {
        ValueInterval { lo: value.clone(), hi: value }
    }

    /// Panics if `lo > hi`.
    pub fn new(lo: Rational01, hi: Rational01) -> Self {
        assert!(lo <= hi, "interval [{lo}, {hi}] is empty");
        ValueInterval { lo, hi }
    }

    pub fn lo(&self) -> &Rational01 {
        &self.lo
    }

    pub fn hi(&self) -> &Rational01 {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// The value, when the interval is a point.
    pub fn value(&self) -> Option<&Rational01> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn contains(&self, v: &Rational01) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// `self ⊆ other`.
    pub fn within(&self, other: &ValueInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn disjoint(&self, other: &ValueInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }
}

impl fmt::Display for ValueInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lo={} hi={} exact={}", self.lo, self.hi, self.is_exact())
    }
}

impl Serialize for ValueInterval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ValueInterval", 3)?;
        s.serialize_field("lo", &self.lo)?;
        s.serialize_field("hi", &self.hi)?;
        s.serialize_field("exact", &self.is_exact())?;
        s.end()
    }
}

/// Three-valued answer to "is the value exactly 1?".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn of_interval(iv: &ValueInterval) -> Self {
        if iv.lo.is_one() {
            Verdict::Yes
        } else if !iv.hi.is_one() {
            Verdict::No
        } else {
            Verdict::Unknown
        }
    }

    /// Conjunction: `No` dominates, then `Unknown`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Yes,
        }
    }

    /// Disjunction: `Yes` dominates, then `Unknown`.
    pub fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Yes, _) | (_, Verdict::Yes) => Verdict::Yes,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::No,
        }
    }

    pub fn all(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        vs.into_iter().fold(Verdict::Yes, Verdict::and)
    }

    pub fn any(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        vs.into_iter().fold(Verdict::No, Verdict::or)
    }

    pub fn negate(self) -> Verdict {
        match self {
            Verdict::Yes => Verdict::No,
            Verdict::No => Verdict::Yes,
            Verdict::Unknown => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

/// What "the formula is satisfiable" means for principality witnesses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SatStrictness {
    /// Some tuple gives value exactly 1.
    #[default]
    Eq1,
    /// Some tuple gives a positive value.
    Gt0,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalConfig {
    /// Number of schema instances inspected (`0..depth`).
    pub depth: usize,
    pub strictness: SatStrictness,
    /// Cache quantifier and schema nodes within one evaluation.
    pub memoize: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { depth: DEFAULT_DEPTH, strictness: SatStrictness::Eq1, memoize: true }
    }
}

impl EvalConfig {
    pub fn with_depth(depth: usize) -> Self {
        EvalConfig { depth, ..Self::default() }
    }
}

type MemoKey = (usize, Vec<Option<Point>>, Vec<(String, u64)>);

/// Variable bindings during evaluation, innermost last.
struct Scope<'f>(Vec<(&'f str, Point)>);

impl Scope<'_> {
    fn get(&self, var: &str) -> Option<Point> {
        self.0.iter().rev().find(|(v, _)| *v == var).map(|&(_, p)| p)
    }
}

struct Evaluator<'a> {
    m: &'a MetricStructure,
    depth: u64,
    memoize: bool,
    memo: FxHashMap<MemoKey, ValueInterval>,
    free: FxHashMap<usize, Vec<String>>,
}

impl Evaluator<'_> {
    fn term(&self, t: &Term, a: &Scope, env: &IndexEnv) -> Result<Point, EvalError> {
        match t {
            Term::Var { name } => a.get(name).ok_or_else(|| EvalError::UnboundVariable(name.clone())),
            Term::Const { name } => {
                self.m.constant(name).ok_or_else(|| SyntaxError::UnknownSymbol(name.clone()).into())
            }
            Term::Indexed { family, index } => {
                let fam = self.m.family(family).ok_or_else(|| SyntaxError::UnknownSymbol(family.clone()))?;
                Ok(fam.at(index.eval(env)?))
            }
            Term::Apply { function, args } => {
                let points = args.iter().map(|x| self.term(x, a, env)).collect::<Result<Vec<_>, _>>()?;
                self.m.apply(function, &points).ok_or_else(|| SyntaxError::UnknownSymbol(function.clone()).into())
            }
        }
    }

    fn key(&mut self, phi: &Formula, a: &Scope, env: &IndexEnv) -> MemoKey {
        let id = phi as *const Formula as usize;
        let vars = self.free.entry(id).or_insert_with(|| phi.free_variables().into_iter().collect());
        let restricted = vars.iter().map(|v| a.get(v)).collect();
        (id, restricted, env.iter().map(|(k, v)| (k.clone(), *v)).collect())
    }

    fn eval<'f>(
        &mut self,
        phi: &'f Formula,
        a: &mut Scope<'f>,
        env: &mut IndexEnv,
    ) -> Result<ValueInterval, EvalError> {
        match phi {
            Formula::Dist { left, right } => {
                let (x, y) = (self.term(left, a, env)?, self.term(right, a, env)?);
                Ok(ValueInterval::exact(self.m.dist(x, y).clone()))
            }
            Formula::Pred { predicate, args } => {
                let points = args.iter().map(|t| self.term(t, a, env)).collect::<Result<Vec<_>, _>>()?;
                let v = self
                    .m
                    .predicate(predicate, &points)
                    .ok_or_else(|| SyntaxError::UnknownSymbol(predicate.clone()))?;
                Ok(ValueInterval::exact(v.clone()))
            }
            Formula::Const { value } => Ok(ValueInterval::exact(value.eval(env)?)),
            Formula::Implies { antecedent, consequent } => {
                let p = self.eval(antecedent, a, env)?;
                let q = self.eval(consequent, a, env)?;
                if p.is_exact() && q.is_exact() {
                    return Ok(ValueInterval::exact(p.lo.implies(&q.lo)));
                }
                // antitone in the antecedent, monotone in the consequent
                Ok(ValueInterval::new(p.hi.implies(&q.lo), p.lo.implies(&q.hi)))
            }
            Formula::SupVar { .. } | Formula::SupSeq { .. } if self.memoize => {
                let key = self.key(phi, a, env);
                if let Some(v) = self.memo.get(&key) {
                    return Ok(v.clone());
                }
                let v = self.eval_sup(phi, a, env)?;
                self.memo.insert(key, v.clone());
                Ok(v)
            }
            _ => self.eval_sup(phi, a, env),
        }
    }

    fn eval_sup<'f>(
        &mut self,
        phi: &'f Formula,
        a: &mut Scope<'f>,
        env: &mut IndexEnv,
    ) -> Result<ValueInterval, EvalError> {
        match phi {
            Formula::SupVar { var, body } => {
                let mut acc: Option<ValueInterval> = None;
                for p in 0..self.m.size() {
                    a.0.push((var, p));
                    let v = self.eval(body, a, env);
                    a.0.pop();
                    acc = Some(join(acc, v?));
                }
                Ok(acc.expect("structures are nonempty"))
            }
            Formula::SupSeq { schema: Schema::Explicit { members } } => {
                let mut acc = None;
                for m in members {
                    acc = Some(join(acc, self.eval(m, a, env)?));
                }
                acc.ok_or(EvalError::Syntax(SyntaxError::EmptySchema))
            }
            Formula::SupSeq { schema: Schema::Indexed { index, body } } => {
                let previous = env.get(index).copied();
                let mut lo = Rational01::zero();
                let mut result = Ok(());
                for i in 0..self.depth {
                    env.insert(index.clone(), i);
                    match self.eval(body, a, env) {
                        Ok(v) => {
                            if v.lo > lo {
                                lo = v.lo;
                            }
                            if lo.is_one() {
                                break;
                            }
                        }
                        Err(e) => {
                            result = Err(e);
                            break;
                        }
                    }
                }
                match previous {
                    Some(p) => env.insert(index.clone(), p),
                    None => env.remove(index),
                };
                result?;
                Ok(ValueInterval::new(lo, Rational01::one()))
            }
            _ => unreachable!("only binders reach eval_sup"),
        }
    }
}

fn join(acc: Option<ValueInterval>, v: ValueInterval) -> ValueInterval {
    match acc {
        None => v,
        Some(acc) => ValueInterval { lo: acc.lo.max(v.lo), hi: acc.hi.max(v.hi) },
    }
}

/// The truth value of `phi` in `m` at `a`, or an interval containing it.
pub fn evaluate(
    m: &MetricStructure,
    phi: &Formula,
    a: &Assignment,
    cfg: &EvalConfig,
) -> Result<ValueInterval, EvalError> {
    if cfg.depth == 0 {
        return Err(EvalError::ZeroDepth);
    }
    phi.check(m.signature())?;
    if let Some(v) = phi.free_variables().into_iter().find(|v| a.get(v).is_none()) {
        return Err(EvalError::UnboundVariable(v));
    }
    if let Some(i) = phi.free_index_variables().into_iter().next() {
        return Err(SyntaxError::UnboundIndex(i).into());
    }
    let mut ev = Evaluator {
        m,
        depth: cfg.depth as u64,
        memoize: cfg.memoize,
        memo: FxHashMap::default(),
        free: FxHashMap::default(),
    };
    ev.eval(phi, &mut Scope(a.iter().collect()), &mut IndexEnv::new())
}

/// The point denoted by a term (no schema indices) under `a`.
pub fn eval_term(m: &MetricStructure, t: &Term, a: &Assignment) -> Result<Point, EvalError> {
    t.check(m.signature())?;
    let ev = Evaluator { m, depth: 1, memoize: false, memo: FxHashMap::default(), free: FxHashMap::default() };
    ev.term(t, &Scope(a.iter().collect()), &IndexEnv::new())
}

/// Whether `phi` holds (value exactly 1) at `a`.
pub fn holds_at(m: &MetricStructure, phi: &Formula, a: &Assignment, cfg: &EvalConfig) -> Result<Verdict, EvalError> {
    Ok(Verdict::of_interval(&evaluate(m, phi, a, cfg)?))
}

fn require_sentence(phi: &Formula) -> Result<(), EvalError> {
    match phi.free_variables().into_iter().next() {
        Some(v) => Err(EvalError::NotASentence(v)),
        None => Ok(()),
    }
}

/// `M ⊨ σ`: `Yes` iff the value is exactly 1, `No` iff it is certainly below
/// 1, `Unknown` when truncation leaves both open.
pub fn satisfies(m: &MetricStructure, sigma: &Formula, cfg: &EvalConfig) -> Result<Verdict, EvalError> {
    require_sentence(sigma)?;
    holds_at(m, sigma, &Assignment::new(), cfg)
}

/// A finite set of sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theory {
    name: String,
    sentences: Vec<Formula>,
}

impl Theory {
    pub fn new(name: &str, sentences: Vec<Formula>) -> Result<Self, EvalError> {
        sentences.iter().try_for_each(require_sentence)?;
        Ok(Theory { name: name.to_string(), sentences })
    }

    pub fn empty() -> Self {
        Theory { name: "empty".into(), sentences: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sentences(&self) -> &[Formula] {
        &self.sentences
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceResult {
    pub sentence: String,
    pub value: ValueInterval,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelsReport {
    pub verdict: Verdict,
    pub sentences: Vec<SentenceResult>,
}

/// `M ⊨ T` sentence by sentence.
pub fn models(m: &MetricStructure, t: &Theory, cfg: &EvalConfig) -> Result<ModelsReport, EvalError> {
    let mut sentences = Vec::with_capacity(t.sentences.len());
    for s in &t.sentences {
        let value = evaluate(m, s, &Assignment::new(), cfg)?;
        let verdict = Verdict::of_interval(&value);
        sentences.push(SentenceResult { sentence: s.to_string(), value, verdict });
    }
    Ok(ModelsReport { verdict: Verdict::all(sentences.iter().map(|r| r.verdict)), sentences })
}

/// A finite, ordered stand-in for the class of all structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Registry {
    name: String,
    structures: Vec<MetricStructure>,
}

impl Registry {
    pub fn new(name: &str, structures: Vec<MetricStructure>) -> Result<Self, EvalError> {
        if let Some(first) = structures.first() {
            if structures.iter().any(|m| m.signature() != first.signature()) {
                return Err(EvalError::SignatureMismatch);
            }
        }
        Ok(Registry { name: name.to_string(), structures })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structures(&self) -> &[MetricStructure] {
        &self.structures
    }

    pub fn signature(&self) -> Option<&Signature> {
        self.structures.first().map(MetricStructure::signature)
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModIntervalReport {
    pub r: Rational01,
    pub s: Rational01,
    /// Registry indices whose value interval lies inside `[r, s]`.
    pub inside: Vec<usize>,
    /// Registry indices whose value interval misses `[r, s]`.
    pub outside: Vec<usize>,
    pub unknown: Vec<usize>,
    pub values: Vec<ValueInterval>,
}

/// Splits a registry by whether `σ^M ∈ [r, s]`, i.e. by membership in
/// `Mod(σ ≥ r ∧ σ ≤ s)`.
pub fn mod_interval(
    registry: &Registry,
    sigma: &Formula,
    r: &Rational01,
    s: &Rational01,
    cfg: &EvalConfig,
) -> Result<ModIntervalReport, EvalError> {
    if r > s {
        return Err(EvalError::BadInterval { r: r.clone(), s: s.clone() });
    }
    require_sentence(sigma)?;
    let target = ValueInterval::new(r.clone(), s.clone());
    let mut report = ModIntervalReport {
        r: r.clone(),
        s: s.clone(),
        inside: Vec::new(),
        outside: Vec::new(),
        unknown: Vec::new(),
        values: Vec::new(),
    };
    for (k, m) in registry.structures.iter().enumerate() {
        let v = evaluate(m, sigma, &Assignment::new(), cfg)?;
        if v.within(&target) {
            report.inside.push(k);
        } else if v.disjoint(&target) {
            report.outside.push(k);
        } else {
            report.unknown.push(k);
        }
        report.values.push(v);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    Different,
    Unknown,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Equal => "equal",
            Comparison::Different => "different",
            Comparison::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareRow {
    pub sentence: String,
    pub left: ValueInterval,
    pub right: ValueInterval,
    pub verdict: Comparison,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub verdict: Comparison,
    pub rows: Vec<CompareRow>,
}

/// `M ≡ N` restricted to a finite pool of sentences.
pub fn compare_l(
    m: &MetricStructure,
    n: &MetricStructure,
    pool: &[Formula],
    cfg: &EvalConfig,
) -> Result<CompareReport, EvalError> {
    if m.signature() != n.signature() {
        return Err(EvalError::SignatureMismatch);
    }
    let mut rows = Vec::with_capacity(pool.len());
    for s in pool {
        require_sentence(s)?;
        let left = evaluate(m, s, &Assignment::new(), cfg)?;
        let right = evaluate(n, s, &Assignment::new(), cfg)?;
        let verdict = if left.is_exact() && left == right {
            Comparison::Equal
        } else if left.disjoint(&right) {
            Comparison::Different
        } else {
            Comparison::Unknown
        };
        rows.push(CompareRow { sentence: s.to_string(), left, right, verdict });
    }
    let verdict = if rows.iter().any(|r| r.verdict == Comparison::Different) {
        Comparison::Different
    } else if rows.iter().all(|r| r.verdict == Comparison::Equal) {
        Comparison::Equal
    } else {
        Comparison::Unknown
    };
    Ok(CompareReport { verdict, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Modulus;
    use crate::structure::StructureBuilder;
    use crate::syntax::{half, inf, neg, or, IndexExpr};

    fn q(p: i64, d: i64) -> Rational01 {
        Rational01::of(p, d)
    }

    fn c(v: Rational01) -> Formula {
        Formula::constant(v)
    }

    fn value(phi: &Formula) -> Rational01 {
        let m = StructureBuilder::new("M", Signature::new(), &["a"]).unwrap().build().unwrap();
        evaluate(&m, phi, &Assignment::new(), &EvalConfig::default()).unwrap().value().unwrap().clone()
    }

    fn two_points() -> MetricStructure {
        let sig = Signature::new().with_predicate("P", 1, Modulus::Identity).unwrap();
        let mut b = StructureBuilder::new("M", sig, &["a", "b"]).unwrap();
        b.dist("a", "b", Rational01::one()).unwrap();
        b.predicate("P", &["a"], q(1, 5)).unwrap();
        b.predicate("P", &["b"], q(9, 10)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn implication_examples() {
        assert_eq!(value(&Formula::implies(c(q(7, 10)), c(q(2, 5)))), q(7, 10));
        assert_eq!(value(&Formula::implies(c(q(1, 3)), c(q(1, 3)))), Rational01::one());
        assert_eq!(value(&or(c(q(3, 10)), c(q(4, 5)))), q(4, 5));
    }

    #[test]
    fn half_examples() {
        assert_eq!(value(&half(c(q(1, 2)), 2)), Rational01::zero());
        assert_eq!(value(&half(c(q(1, 2)), 4)), q(1, 4));
    }

    #[test]
    fn quantifier_is_a_maximum() {
        let m = two_points();
        let phi = Formula::sup("x", Formula::pred("P", vec![Term::var("x")]));
        let v = evaluate(&m, &phi, &Assignment::new(), &EvalConfig::default()).unwrap();
        assert_eq!(v, ValueInterval::exact(q(9, 10)));
        let inf_p = inf("x", Formula::pred("P", vec![Term::var("x")]));
        assert_eq!(
            evaluate(&m, &inf_p, &Assignment::new(), &EvalConfig::default()).unwrap(),
            ValueInterval::exact(q(1, 5))
        );
    }

    #[test]
    fn satisfaction_examples() {
        let m = two_points();
        let cfg = EvalConfig::default();
        assert_eq!(satisfies(&m, &c(Rational01::one()), &cfg).unwrap(), Verdict::Yes);
        assert_eq!(satisfies(&m, &c(q(9, 10)), &cfg).unwrap(), Verdict::No);
        let tail = Formula::sup_seq(Schema::indexed(
            "i",
            Formula::rat(crate::syntax::RatExpr::recip(1, 2, crate::syntax::Affine::var("i")).unwrap()),
        ));
        assert_eq!(satisfies(&m, &tail, &cfg).unwrap(), Verdict::Unknown);
        assert!(matches!(
            satisfies(&m, &Formula::pred("P", vec![Term::var("x")]), &cfg),
            Err(EvalError::NotASentence(_))
        ));
    }

    #[test]
    fn models_lattice() {
        let m = two_points();
        let cfg = EvalConfig::default();
        assert_eq!(models(&m, &Theory::empty(), &cfg).unwrap().verdict, Verdict::Yes);
        let t = Theory::new("T", vec![c(Rational01::one()), c(q(9, 10))]).unwrap();
        assert_eq!(models(&m, &t, &cfg).unwrap().verdict, Verdict::No);
        let unknown = Formula::sup_seq(Schema::indexed(
            "i",
            Formula::rat(crate::syntax::RatExpr::enumerated(IndexExpr::var("i"))),
        ));
        let t = Theory::new("T", vec![c(Rational01::one()), unknown]).unwrap();
        assert_eq!(models(&m, &t, &cfg).unwrap().verdict, Verdict::Unknown);
    }

    #[test]
    fn mod_interval_examples() {
        let reg = Registry::new("R", vec![two_points(), two_points()]).unwrap();
        let cfg = EvalConfig::default();
        let half = c(q(1, 2));
        let all = mod_interval(&reg, &half, &Rational01::zero(), &Rational01::one(), &cfg).unwrap();
        assert_eq!((all.inside.len(), all.outside.len(), all.unknown.len()), (2, 0, 0));
        let none = mod_interval(&reg, &half, &q(3, 4), &Rational01::one(), &cfg).unwrap();
        assert_eq!((none.inside.len(), none.outside.len()), (0, 2));
        assert!(mod_interval(&reg, &half, &q(3, 4), &q(1, 4), &cfg).is_err());
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let m = two_points();
        let phi = neg(Formula::pred("P", vec![Term::var("z")]));
        assert_eq!(
            evaluate(&m, &phi, &Assignment::new(), &EvalConfig::default()),
            Err(EvalError::UnboundVariable("z".into()))
        );
    }
}
