//! Ultraproducts in the cases where they can be computed: principal
//! ultrafilters, and non-principal ultrafilters on ω applied to eventually
//! constant sequences, where every such ultrafilter gives the same answer.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational01;
use crate::semantics::{evaluate, EvalConfig, EvalError, ValueInterval};
use crate::structure::{tuples, Assignment, MetricStructure, Point, StructureBuilder, StructureError};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UltraError {
    #[error("principal index {index} is out of range for a family of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("the structure family is empty")]
    EmptyFamily,
    #[error("structures in a sequence must share one signature")]
    SignatureMismatch,
    #[error("not computable: non-principal ultraproduct of varying structures")]
    NotComputable,
    #[error("a finite index set carries no non-principal ultrafilter")]
    FiniteFrechet,
    #[error("`{symbol}` is not constant on a d = 0 class of `{structure}`")]
    IllDefined { structure: String, symbol: String },
    #[error("value of the sentence in `{structure}` is not exact: {interval}")]
    Inexact { structure: String, interval: ValueInterval },
    #[error("the sentence has free variables")]
    NotASentence,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The ultrafilter `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UltrafilterSpec {
    /// The principal ultrafilter at `index`.
    Principal { index: usize },
    /// Any non-principal ultrafilter on ω.
    FrechetLimit,
}

impl UltrafilterSpec {
    pub fn principal(index: usize) -> Self {
        UltrafilterSpec::Principal { index }
    }
}

impl fmt::Display for UltrafilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltrafilterSpec::Principal { index } => write!(f, "principal({index})"),
            UltrafilterSpec::FrechetLimit => f.write_str("frechet"),
        }
    }
}

/// A family `⟨M_n⟩` indexed by a finite set or by ω.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureSequence {
    /// `M_0, …, M_{k-1}`.
    Finite { structures: Vec<MetricStructure> },
    /// `M_n = prefix[n]` for `n < prefix.len()`, `tail` afterwards.
    Eventually { prefix: Vec<MetricStructure>, tail: Box<MetricStructure> },
    /// `M_n = period[n mod period.len()]`.
    Cyclic { period: Vec<MetricStructure> },
}

impl StructureSequence {
    pub fn finite(structures: Vec<MetricStructure>) -> Result<Self, UltraError> {
        Self::check(&structures)?;
        Ok(StructureSequence::Finite { structures })
    }

    pub fn eventually(prefix: Vec<MetricStructure>, tail: MetricStructure) -> Result<Self, UltraError> {
        let all: Vec<MetricStructure> = prefix.iter().cloned().chain([tail.clone()]).collect();
        Self::check(&all)?;
        Ok(StructureSequence::Eventually { prefix, tail: Box::new(tail) })
    }

    pub fn constant(m: MetricStructure) -> Self {
        StructureSequence::Eventually { prefix: Vec::new(), tail: Box::new(m) }
    }

    pub fn cyclic(period: Vec<MetricStructure>) -> Result<Self, UltraError> {
        Self::check(&period)?;
        Ok(StructureSequence::Cyclic { period })
    }

    fn check(structures: &[MetricStructure]) -> Result<(), UltraError> {
        let first = structures.first().ok_or(UltraError::EmptyFamily)?;
        if structures.iter().any(|m| m.signature() != first.signature()) {
            return Err(UltraError::SignatureMismatch);
        }
        Ok(())
    }

    /// `M_index`, if the index exists.
    pub fn at(&self, index: usize) -> Option<&MetricStructure> {
        match self {
            StructureSequence::Finite { structures } => structures.get(index),
            StructureSequence::Eventually { prefix, tail } => Some(prefix.get(index).unwrap_or(&**tail)),
            StructureSequence::Cyclic { period } => period.get(index % period.len()),
        }
    }

    /// The structure every non-principal ultrafilter concentrates on.
    fn eventual(&self) -> Result<&MetricStructure, UltraError> {
        match self {
            StructureSequence::Finite { .. } => Err(UltraError::FiniteFrechet),
            StructureSequence::Eventually { tail, .. } => Ok(&**tail),
            StructureSequence::Cyclic { period } => {
                let first = &period[0];
                if period.iter().all(|m| m.same_interpretation(first)) {
                    Ok(first)
                } else {
                    Err(UltraError::NotComputable)
                }
            }
        }
    }

    fn len_hint(&self) -> usize {
        match self {
            StructureSequence::Finite { structures } => structures.len(),
            _ => usize::MAX,
        }
    }

    /// The factor `∏_D M_n` is computed from.
    pub fn factor(&self, d: UltrafilterSpec) -> Result<&MetricStructure, UltraError> {
        match d {
            UltrafilterSpec::Principal { index } => {
                self.at(index).ok_or(UltraError::IndexOutOfRange { index, len: self.len_hint() })
            }
            UltrafilterSpec::FrechetLimit => self.eventual(),
        }
    }
}

/// An ultraproduct together with the surjection from its factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ultraproduct {
    pub structure: MetricStructure,
    /// `witness[p]` is the point of `structure` that point `p` of the factor
    /// is sent to.
    pub witness: Vec<Point>,
}

impl Ultraproduct {
    /// Rechecks that the witness preserves distances and interpretations.
    pub fn verify(&self, factor: &MetricStructure) -> bool {
        factor.maps_onto(&self.structure, &self.witness)
    }
}

/// `∏_D M_n`, with points named after the least point of each d = 0 class.
pub fn ultraproduct(seq: &StructureSequence, d: UltrafilterSpec) -> Result<Ultraproduct, UltraError> {
    let factor = seq.factor(d)?;
    let (structure, witness) = metric_quotient(factor, &format!("ultra_{}", factor.name()))?;
    Ok(Ultraproduct { structure, witness })
}

fn find(parent: &mut [Point], mut p: Point) -> Point {
    while parent[p] != p {
        parent[p] = parent[parent[p]];
        p = parent[p];
    }
    p
}

/// Identifies points at distance 0 and returns the quotient with the class
/// map. Errors if some interpretation does not respect the identification.
pub fn metric_quotient(m: &MetricStructure, name: &str) -> Result<(MetricStructure, Vec<Point>), UltraError> {
    let n = m.size();
    let mut parent: Vec<Point> = (0..n).collect();
    for a in 0..n {
        for b in a + 1..n {
            if m.dist(a, b).is_zero() || m.dist(b, a).is_zero() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
        }
    }
    let roots: Vec<Point> = (0..n).map(|p| find(&mut parent, p)).collect();
    let reps: Vec<Point> = (0..n).filter(|&p| roots[p] == p).collect();
    let class: Vec<Point> = roots.iter().map(|r| reps.binary_search(r).expect("root is a representative")).collect();
    let ill = |symbol: &str| UltraError::IllDefined { structure: m.name().to_string(), symbol: symbol.to_string() };

    for a in 0..n {
        for b in 0..n {
            if m.dist(a, b) != m.dist(reps[class[a]], reps[class[b]]) {
                return Err(ill("d"));
            }
        }
    }
    let sig = m.signature();
    for decl in sig.functions() {
        for args in tuples(n, decl.arity) {
            let canon: Vec<Point> = args.iter().map(|&p| reps[class[p]]).collect();
            let image = |t: &[Point]| class[m.apply(&decl.name, t).expect("interpreted")];
            if image(&args) != image(&canon) {
                return Err(ill(&decl.name));
            }
        }
    }
    for decl in sig.predicates() {
        for args in tuples(n, decl.arity) {
            let canon: Vec<Point> = args.iter().map(|&p| reps[class[p]]).collect();
            if m.predicate(&decl.name, &args) != m.predicate(&decl.name, &canon) {
                return Err(ill(&decl.name));
            }
        }
    }

    let names: Vec<String> = reps.iter().map(|&p| m.point_name(p).to_string()).collect();
    let mut b = StructureBuilder::with_points(name, sig.clone(), names.clone())?;
    b.metric_fn(|x, y| m.dist(reps[x], reps[y]).clone());
    for decl in sig.functions() {
        b.function_fn(&decl.name, |args| {
            let lifted: Vec<Point> = args.iter().map(|&x| reps[x]).collect();
            class[m.apply(&decl.name, &lifted).expect("interpreted")]
        })?;
    }
    for decl in sig.predicates() {
        b.predicate_fn(&decl.name, |args| {
            let lifted: Vec<Point> = args.iter().map(|&x| reps[x]).collect();
            m.predicate(&decl.name, &lifted).expect("interpreted").clone()
        })?;
    }
    for c in sig.constants() {
        b.constant(c, &names[class[m.constant(c).expect("interpreted")]])?;
    }
    for f in sig.families() {
        let fam = m.family(f).expect("interpreted");
        let prefix: Vec<&str> = fam.prefix.iter().map(|&p| names[class[p]].as_str()).collect();
        b.family(f, &prefix, &names[class[fam.tail]])?;
    }
    Ok((b.build()?, class))
}

/// Tail of an ω-sequence of values.
#[derive(Clone)]
pub enum ValueTail {
    Constant(Rational01),
    /// `x_n = term(n)` for every `n` past the prefix, converging to `limit`:
    /// `|x_n - limit| ≤ ε` whenever `n ≥ modulus(ε)`.
    Convergent {
        limit: Rational01,
        term: Arc<dyn Fn(u64) -> Rational01 + Send + Sync>,
        modulus: Arc<dyn Fn(&Rational01) -> u64 + Send + Sync>,
    },
}

impl fmt::Debug for ValueTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueTail::Constant(v) => write!(f, "Constant({v})"),
            ValueTail::Convergent { limit, .. } => write!(f, "Convergent {{ limit: {limit} }}"),
        }
    }
}

/// An ω-sequence of values in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct ValueSequence {
    pub prefix: Vec<Rational01>,
    pub tail: ValueTail,
}

impl ValueSequence {
    pub fn constant(v: Rational01) -> Self {
        ValueSequence { prefix: Vec::new(), tail: ValueTail::Constant(v) }
    }

    pub fn at(&self, n: u64) -> Rational01 {
        if let Some(v) = usize::try_from(n).ok().and_then(|i| self.prefix.get(i)) {
            return v.clone();
        }
        match &self.tail {
            ValueTail::Constant(v) => v.clone(),
            ValueTail::Convergent { term, .. } => term(n),
        }
    }

    /// Checks the declared modulus at each `ε`, over `span` terms starting
    /// at `max(modulus(ε), prefix.len())`. Returns the first bad `(ε, n)`.
    pub fn check_modulus(&self, epsilons: &[Rational01], span: u64) -> Option<(Rational01, u64)> {
        let ValueTail::Convergent { limit, modulus, .. } = &self.tail else {
            return None;
        };
        for eps in epsilons {
            let start = modulus(eps).max(self.prefix.len() as u64);
            for n in start..start + span {
                if self.at(n).abs_diff(limit) > *eps {
                    return Some((eps.clone(), n));
                }
            }
        }
        None
    }
}

/// `lim_{n → D} x_n`.
pub fn value_limit(values: &ValueSequence, d: UltrafilterSpec) -> Rational01 {
    match d {
        UltrafilterSpec::Principal { index } => values.at(index as u64),
        UltrafilterSpec::FrechetLimit => match &values.tail {
            ValueTail::Constant(v) => v.clone(),
            ValueTail::Convergent { limit, .. } => limit.clone(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim3Report {
    pub ultrafilter: UltrafilterSpec,
    /// `σ` evaluated in the ultraproduct.
    pub ultraproduct_value: Rational01,
    /// `lim_{n → D}` of `σ` evaluated factorwise.
    pub limit_value: Rational01,
    pub equal: bool,
}

fn exact_value(m: &MetricStructure, sigma: &Formula, cfg: &EvalConfig) -> Result<Rational01, UltraError> {
    let iv = evaluate(m, sigma, &Assignment::new(), cfg)?;
    match iv.value() {
        Some(v) => Ok(v.clone()),
        None => Err(UltraError::Inexact { structure: m.name().to_string(), interval: iv }),
    }
}

/// Compares `σ` in `∏_D M_n` with the `D`-limit of the factor values.
pub fn check_claim3(
    seq: &StructureSequence,
    d: UltrafilterSpec,
    sigma: &Formula,
    cfg: &EvalConfig,
) -> Result<Claim3Report, UltraError> {
    if !sigma.is_sentence() {
        return Err(UltraError::NotASentence);
    }
    let product = ultraproduct(seq, d)?;
    let ultraproduct_value = exact_value(&product.structure, sigma, cfg)?;
    let values = match seq {
        StructureSequence::Finite { structures } => ValueSequence {
            prefix: structures.iter().map(|m| exact_value(m, sigma, cfg)).collect::<Result<_, _>>()?,
            tail: ValueTail::Constant(Rational01::zero()),
        },
        StructureSequence::Eventually { prefix, tail } => ValueSequence {
            prefix: prefix.iter().map(|m| exact_value(m, sigma, cfg)).collect::<Result<_, _>>()?,
            tail: ValueTail::Constant(exact_value(tail, sigma, cfg)?),
        },
        StructureSequence::Cyclic { period } => {
            let vs: Vec<Rational01> = period.iter().map(|m| exact_value(m, sigma, cfg)).collect::<Result<_, _>>()?;
            let k = vs.len() as u64;
            let first = vs[0].clone();
            let cycle = vs.clone();
            ValueSequence {
                prefix: vs,
                tail: ValueTail::Convergent {
                    limit: first,
                    term: Arc::new(move |n| cycle[(n % k) as usize].clone()),
                    modulus: Arc::new(|_| 0),
                },
            }
        }
    };
    let limit_value = value_limit(&values, d);
    Ok(Claim3Report { ultrafilter: d, equal: ultraproduct_value == limit_value, ultraproduct_value, limit_value })
}
