//! Finite metric structures and their validation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::rational::{simplest_between, Rational01};
use crate::signature::{Signature, SymbolKind};

/// Index of a point in [`MetricStructure::points`].
pub type Point = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a structure needs at least one point")]
    NoPoints,
    #[error("point `{0}` is declared twice")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), got {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("distance d({0}, {1}) is given twice")]
    DuplicateDistance(String, String),
    #[error("distance d({0}, {1}) is missing")]
    MissingDistance(String, String),
    #[error("interpretation of `{symbol}` is missing at ({args})")]
    MissingValue { symbol: String, args: String },
    #[error("`{0}` is interpreted twice")]
    DuplicateInterpretation(String),
    #[error("`{0}` has no interpretation")]
    Uninterpreted(String),
    #[error("family `{0}` needs a tail point")]
    MissingTail(String),
}

/// Interpretation of an indexed constant family: `c[i] = prefix[i]` for
/// `i < prefix.len()`, and `c[i] = tail` afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyInterp {
    pub prefix: Vec<Point>,
    pub tail: Point,
}

impl FamilyInterp {
    pub fn at(&self, index: u64) -> Point {
        usize::try_from(index).ok().and_then(|i| self.prefix.get(i).copied()).unwrap_or(self.tail)
    }
}

/// A finite metric structure: points, a rational distance table and
/// interpretations of every symbol of its signature.
///
/// The distance table is stored as given; whether it is a metric is a
/// question for [`validate_metric`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricStructure {
    name: String,
    signature: Signature,
    points: Vec<String>,
    metric: Vec<Rational01>,
    functions: BTreeMap<String, Vec<Point>>,
    predicates: BTreeMap<String, Vec<Rational01>>,
    constants: BTreeMap<String, Point>,
    families: BTreeMap<String, FamilyInterp>,
}

/// Row-major offset of an argument tuple in an interpretation table.
fn table_offset(n: usize, args: &[Point]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

impl MetricStructure {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn point_named(&self, name: &str) -> Option<Point> {
        self.points.iter().position(|p| p == name)
    }

    pub fn point_name(&self, p: Point) -> &str {
        &self.points[p]
    }

    pub fn dist(&self, a: Point, b: Point) -> &Rational01 {
        &self.metric[a * self.size() + b]
    }

    pub fn apply(&self, function: &str, args: &[Point]) -> Option<Point> {
        self.functions.get(function).map(|t| t[table_offset(self.size(), args)])
    }

    pub fn predicate(&self, predicate: &str, args: &[Point]) -> Option<&Rational01> {
        self.predicates.get(predicate).map(|t| &t[table_offset(self.size(), args)])
    }

    pub fn constant(&self, name: &str) -> Option<Point> {
        self.constants.get(name).copied()
    }

    pub fn family(&self, name: &str) -> Option<&FamilyInterp> {
        self.families.get(name)
    }

    /// All distinct values in the distance table, sorted.
    pub fn distance_values(&self) -> BTreeSet<Rational01> {
        self.metric.iter().cloned().collect()
    }

    /// Same points, table and interpretations, ignoring the name.
    pub fn same_interpretation(&self, other: &MetricStructure) -> bool {
        self.signature == other.signature
            && self.points == other.points
            && self.metric == other.metric
            && self.functions == other.functions
            && self.predicates == other.predicates
            && self.constants == other.constants
            && self.families == other.families
    }

    /// Checks that `map` (a point of `self` ↦ a point of `other`) is a
    /// surjection preserving distances and every interpretation.
    pub fn maps_onto(&self, other: &MetricStructure, map: &[Point]) -> bool {
        if map.len() != self.size() || self.signature != other.signature {
            return false;
        }
        let hit: BTreeSet<Point> = map.iter().copied().collect();
        if hit.len() != other.size() || map.iter().any(|&p| p >= other.size()) {
            return false;
        }
        let n = self.size();
        for a in 0..n {
            for b in 0..n {
                if self.dist(a, b) != other.dist(map[a], map[b]) {
                    return false;
                }
            }
        }
        for decl in self.signature.functions() {
            for args in tuples(n, decl.arity) {
                let image: Vec<Point> = args.iter().map(|&a| map[a]).collect();
                if other.apply(&decl.name, &image) != self.apply(&decl.name, &args).map(|p| map[p]) {
                    return false;
                }
            }
        }
        for decl in self.signature.predicates() {
            for args in tuples(n, decl.arity) {
                let image: Vec<Point> = args.iter().map(|&a| map[a]).collect();
                if other.predicate(&decl.name, &image) != self.predicate(&decl.name, &args) {
                    return false;
                }
            }
        }
        let constants_ok = self.constants.iter().all(|(c, &p)| other.constant(c) == Some(map[p]));
        let families_ok = self.families.iter().all(|(name, fam)| {
            other.family(name).is_some_and(|o| {
                o.tail == map[fam.tail]
                    && (0..fam.prefix.len().max(o.prefix.len()) as u64).all(|i| o.at(i) == map[fam.at(i)])
            })
        });
        constants_ok && families_ok
    }
}

/// All tuples of `len` points out of `n`, in lexicographic order.
pub fn tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<Point>> {
    let total = if n == 0 && len > 0 { 0 } else { n.pow(len as u32) };
    (0..total).map(move |mut k| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        t
    })
}

/// Incremental construction of a [`MetricStructure`].
#[derive(Debug, Clone)]
pub struct StructureBuilder {
    name: String,
    signature: Signature,
    points: Vec<String>,
    metric: Vec<Option<Rational01>>,
    explicit: Vec<bool>,
    functions: BTreeMap<String, Vec<Option<Point>>>,
    predicates: BTreeMap<String, Vec<Option<Rational01>>>,
    constants: BTreeMap<String, Point>,
    families: BTreeMap<String, FamilyInterp>,
}

impl StructureBuilder {
    pub fn new(name: impl Into<String>, signature: Signature, points: &[&str]) -> Result<Self, StructureError> {
        Self::with_points(name, signature, points.iter().map(|p| p.to_string()).collect())
    }

    pub fn with_points(
        name: impl Into<String>,
        signature: Signature,
        points: Vec<String>,
    ) -> Result<Self, StructureError> {
        if points.is_empty() {
            return Err(StructureError::NoPoints);
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(StructureError::DuplicatePoint(p.clone()));
            }
        }
        let n = points.len();
        let mut metric = vec![None; n * n];
        for i in 0..n {
            metric[i * n + i] = Some(Rational01::zero());
        }
        let functions =
            signature.functions().iter().map(|f| (f.name.clone(), vec![None; n.pow(f.arity as u32)])).collect();
        let predicates =
            signature.predicates().iter().map(|p| (p.name.clone(), vec![None; n.pow(p.arity as u32)])).collect();
        Ok(StructureBuilder {
            name: name.into(),
            signature,
            points,
            metric,
            explicit: vec![false; n * n],
            functions,
            predicates,
            constants: BTreeMap::new(),
            families: BTreeMap::new(),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn point(&self, name: &str) -> Result<Point, StructureError> {
        self.points.iter().position(|p| p == name).ok_or_else(|| StructureError::UnknownPoint(name.to_string()))
    }

    fn points_of(&self, names: &[&str]) -> Result<Vec<Point>, StructureError> {
        names.iter().map(|n| self.point(n)).collect()
    }

    /// Sets `d(a, b)`. The mirrored entry `d(b, a)` is filled too unless it
    /// was given explicitly.
    pub fn dist(&mut self, a: &str, b: &str, value: Rational01) -> Result<&mut Self, StructureError> {
        let n = self.points.len();
        let (i, j) = (self.point(a)?, self.point(b)?);
        if self.explicit[i * n + j] {
            return Err(StructureError::DuplicateDistance(a.into(), b.into()));
        }
        self.explicit[i * n + j] = true;
        if !self.explicit[j * n + i] {
            self.metric[j * n + i] = Some(value.clone());
        }
        self.metric[i * n + j] = Some(value);
        Ok(self)
    }

    pub fn function(&mut self, name: &str, args: &[&str], value: &str) -> Result<&mut Self, StructureError> {
        let n = self.points.len();
        let args = self.points_of(args)?;
        let value = self.point(value)?;
        let arity = self.arity(name, SymbolKind::Function)?;
        check_arity(name, arity, args.len())?;
        let slot = &mut self.functions.get_mut(name).expect("declared function")[table_offset(n, &args)];
        if slot.is_some() {
            return Err(StructureError::DuplicateInterpretation(name.into()));
        }
        *slot = Some(value);
        Ok(self)
    }

    pub fn predicate(&mut self, name: &str, args: &[&str], value: Rational01) -> Result<&mut Self, StructureError> {
        let n = self.points.len();
        let args = self.points_of(args)?;
        let arity = self.arity(name, SymbolKind::Predicate)?;
        check_arity(name, arity, args.len())?;
        let slot = &mut self.predicates.get_mut(name).expect("declared predicate")[table_offset(n, &args)];
        if slot.is_some() {
            return Err(StructureError::DuplicateInterpretation(name.into()));
        }
        *slot = Some(value);
        Ok(self)
    }

    /// Fills a whole function table from a closure over point indices.
    pub fn function_fn(&mut self, name: &str, f: impl Fn(&[Point]) -> Point) -> Result<&mut Self, StructureError> {
        let n = self.points.len();
        let arity = self.arity(name, SymbolKind::Function)?;
        let table = self.functions.get_mut(name).expect("declared function");
        for args in tuples(n, arity) {
            let v = f(&args);
            if v >= n {
                return Err(StructureError::UnknownPoint(v.to_string()));
            }
            table[table_offset(n, &args)] = Some(v);
        }
        Ok(self)
    }

    /// Fills a whole predicate table from a closure over point indices.
    pub fn predicate_fn(
        &mut self,
        name: &str,
        f: impl Fn(&[Point]) -> Rational01,
    ) -> Result<&mut Self, StructureError> {
        let n = self.points.len();
        let arity = self.arity(name, SymbolKind::Predicate)?;
        let table = self.predicates.get_mut(name).expect("declared predicate");
        for args in tuples(n, arity) {
            table[table_offset(n, &args)] = Some(f(&args));
        }
        Ok(self)
    }

    /// Fills the distance table from a closure over point indices.
    pub fn metric_fn(&mut self, f: impl Fn(Point, Point) -> Rational01) -> &mut Self {
        let n = self.points.len();
        for a in 0..n {
            for b in 0..n {
                self.metric[a * n + b] = Some(f(a, b));
                self.explicit[a * n + b] = true;
            }
        }
        self
    }

    pub fn constant(&mut self, name: &str, point: &str) -> Result<&mut Self, StructureError> {
        self.arity(name, SymbolKind::Constant)?;
        let p = self.point(point)?;
        if self.constants.insert(name.to_string(), p).is_some() {
            return Err(StructureError::DuplicateInterpretation(name.into()));
        }
        Ok(self)
    }

    pub fn family(&mut self, name: &str, prefix: &[&str], tail: &str) -> Result<&mut Self, StructureError> {
        self.arity(name, SymbolKind::Family)?;
        let prefix = self.points_of(prefix)?;
        let tail = self.point(tail)?;
        if self.families.insert(name.to_string(), FamilyInterp { prefix, tail }).is_some() {
            return Err(StructureError::DuplicateInterpretation(name.into()));
        }
        Ok(self)
    }

    fn arity(&self, name: &str, kind: SymbolKind) -> Result<usize, StructureError> {
        let unknown = || StructureError::UnknownSymbol(name.to_string());
        match kind {
            SymbolKind::Function => self.signature.function(name).map(|f| f.arity).ok_or_else(unknown),
            SymbolKind::Predicate => self.signature.predicate(name).map(|p| p.arity).ok_or_else(unknown),
            _ if self.signature.kind_of(name) == Some(kind) => Ok(0),
            _ => Err(unknown()),
        }
    }

    pub fn build(&self) -> Result<MetricStructure, StructureError> {
        let n = self.points.len();
        let mut metric = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                match &self.metric[a * n + b] {
                    Some(v) => metric.push(v.clone()),
                    None => {
                        return Err(StructureError::MissingDistance(self.points[a].clone(), self.points[b].clone()))
                    }
                }
            }
        }
        let missing = |symbol: &str, offset: usize, arity: usize| {
            let args = tuples(n, arity).nth(offset).expect("offset within table");
            StructureError::MissingValue {
                symbol: symbol.to_string(),
                args: args.iter().map(|&p| self.points[p].as_str()).collect::<Vec<_>>().join(", "),
            }
        };
        let mut functions = BTreeMap::new();
        for decl in self.signature.functions() {
            let table = &self.functions[&decl.name];
            let mut out = Vec::with_capacity(table.len());
            for (offset, v) in table.iter().enumerate() {
                out.push(v.ok_or_else(|| missing(&decl.name, offset, decl.arity))?);
            }
            functions.insert(decl.name.clone(), out);
        }
        let mut predicates = BTreeMap::new();
        for decl in self.signature.predicates() {
            let table = &self.predicates[&decl.name];
            let mut out = Vec::with_capacity(table.len());
            for (offset, v) in table.iter().enumerate() {
                out.push(v.clone().ok_or_else(|| missing(&decl.name, offset, decl.arity))?);
            }
            predicates.insert(decl.name.clone(), out);
        }
        for c in self.signature.constants() {
            if !self.constants.contains_key(c) {
                return Err(StructureError::Uninterpreted(c.clone()));
            }
        }
        for f in self.signature.families() {
            if !self.families.contains_key(f) {
                return Err(StructureError::Uninterpreted(f.clone()));
            }
        }
        Ok(MetricStructure {
            name: self.name.clone(),
            signature: self.signature.clone(),
            points: self.points.clone(),
            metric,
            functions,
            predicates,
            constants: self.constants.clone(),
            families: self.families.clone(),
        })
    }
}

fn check_arity(symbol: &str, expected: usize, found: usize) -> Result<(), StructureError> {
    if expected != found {
        return Err(StructureError::Arity { symbol: symbol.to_string(), expected, found });
    }
    Ok(())
}

/// A variable assignment: variable name ↦ point.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Assignment(BTreeMap<String, Point>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("variable `{0}` is bound twice")]
    Rebound(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("malformed assignment entry `{0}` (expected var=point)")]
    Malformed(String),
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: &str, point: Point) -> Result<(), AssignmentError> {
        if self.0.insert(var.to_string(), point).is_some() {
            return Err(AssignmentError::Rebound(var.to_string()));
        }
        Ok(())
    }

    pub fn with(mut self, var: &str, point: Point) -> Result<Self, AssignmentError> {
        self.bind(var, point)?;
        Ok(self)
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, Point)>) -> Result<Self, AssignmentError> {
        let mut a = Self::new();
        for (v, p) in pairs {
            a.bind(v, p)?;
        }
        Ok(a)
    }

    /// Parses `x=a,y=b` against the point names of `m`.
    pub fn parse(text: &str, m: &MetricStructure) -> Result<Self, AssignmentError> {
        let mut a = Self::new();
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (var, point) = entry.split_once('=').ok_or_else(|| AssignmentError::Malformed(entry.to_string()))?;
            let p =
                m.point_named(point.trim()).ok_or_else(|| AssignmentError::UnknownPoint(point.trim().to_string()))?;
            a.bind(var.trim(), p)?;
        }
        Ok(a)
    }

    pub fn get(&self, var: &str) -> Option<Point> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Point)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    /// `d(a, a) != 0`.
    Reflexivity { point: String, value: Rational01 },
    /// `d(a, b) != d(b, a)`.
    Symmetry { a: String, b: String, ab: Rational01, ba: Rational01 },
    /// `d(a, b) > d(a, via) + d(via, b)`.
    Triangle { a: String, b: String, via: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum MetricWarning {
    /// Distinct points at distance 0: a pseudometric. Kept as given; only the
    /// ultraproduct construction identifies such points.
    ZeroDistance { a: String, b: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MetricReport {
    pub violations: Vec<MetricViolation>,
    pub warnings: Vec<MetricWarning>,
}

impl MetricReport {
    pub fn is_metric(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks reflexivity, symmetry and the triangle inequality over every
/// point, pair and ordered triple. The bound `d <= 1` holds by construction
/// of [`Rational01`].
pub fn validate_metric(m: &MetricStructure) -> MetricReport {
    let n = m.size();
    let name = |p: Point| m.point_name(p).to_string();
    let mut report = MetricReport::default();
    for a in 0..n {
        if !m.dist(a, a).is_zero() {
            report.violations.push(MetricViolation::Reflexivity { point: name(a), value: m.dist(a, a).clone() });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if m.dist(a, b) != m.dist(b, a) {
                report.violations.push(MetricViolation::Symmetry {
                    a: name(a),
                    b: name(b),
                    ab: m.dist(a, b).clone(),
                    ba: m.dist(b, a).clone(),
                });
            }
            if m.dist(a, b).is_zero() || m.dist(b, a).is_zero() {
                report.warnings.push(MetricWarning::ZeroDistance { a: name(a), b: name(b) });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for via in 0..n {
                if m.dist(a, b) > &m.dist(a, via).bounded_sum(m.dist(via, b)) {
                    report.violations.push(MetricViolation::Triangle { a: name(a), b: name(b), via: name(via) });
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error("tuples have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("tuples must be nonempty")]
    Empty,
    #[error("point index {0} out of range")]
    OutOfRange(Point),
}

/// The sup-metric on `M^n`: `max_i d(x_i, y_i)`.
pub fn product_metric(m: &MetricStructure, xs: &[Point], ys: &[Point]) -> Result<Rational01, TupleError> {
    if xs.len() != ys.len() {
        return Err(TupleError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.is_empty() {
        return Err(TupleError::Empty);
    }
    if let Some(&p) = xs.iter().chain(ys).find(|&&p| p >= m.size()) {
        return Err(TupleError::OutOfRange(p));
    }
    Ok(sup_distance(m, xs, ys))
}

pub(crate) fn sup_distance(m: &MetricStructure, xs: &[Point], ys: &[Point]) -> Rational01 {
    xs.iter().zip(ys).map(|(&x, &y)| m.dist(x, y)).max().cloned().unwrap_or_else(Rational01::zero)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulusCounterexample {
    pub left: Vec<String>,
    pub right: Vec<String>,
    /// An `ε` with `distance < δ(ε)` but `variation > ε`.
    pub epsilon: Rational01,
    pub distance: Rational01,
    pub variation: Rational01,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulusReport {
    pub symbol: String,
    pub counterexamples: Vec<ModulusCounterexample>,
}

impl ModulusReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModulusCheckError {
    #[error("`{0}` is not a function or predicate symbol of the signature")]
    UnknownSymbol(String),
}

/// Checks the declared modulus of a function or predicate symbol against its
/// interpretation.
///
/// For each unordered pair of argument tuples with sup-distance `D` and output
/// variation `V`, the implication fails for some `ε` exactly when some
/// `ε < min(V, 1)` has `δ(ε) > D`. Since every modulus family is
/// nondecreasing, that set of `ε` is an interval computed in closed form, so
/// the check is exact; the reported `ε` is the simplest rational in it.
pub fn check_modulus(m: &MetricStructure, symbol: &str) -> Result<ModulusReport, ModulusCheckError> {
    let sig = m.signature();
    let (decl, is_function) = match (sig.function(symbol), sig.predicate(symbol)) {
        (Some(f), _) => (f, true),
        (None, Some(p)) => (p, false),
        _ => return Err(ModulusCheckError::UnknownSymbol(symbol.to_string())),
    };
    let all: Vec<Vec<Point>> = tuples(m.size(), decl.arity).collect();
    let names = |t: &[Point]| t.iter().map(|&p| m.point_name(p).to_string()).collect::<Vec<_>>();
    let mut counterexamples = Vec::new();
    for (i, left) in all.iter().enumerate() {
        for right in &all[i + 1..] {
            let distance = sup_distance(m, left, right);
            let variation = if is_function {
                let a = m.apply(symbol, left).expect("total interpretation");
                let b = m.apply(symbol, right).expect("total interpretation");
                m.dist(a, b).clone()
            } else {
                let a = m.predicate(symbol, left).expect("total interpretation");
                let b = m.predicate(symbol, right).expect("total interpretation");
                a.abs_diff(b)
            };
            if let Some(epsilon) = modulus_witness(&decl.modulus, &distance, &variation) {
                counterexamples.push(ModulusCounterexample {
                    left: names(left),
                    right: names(right),
                    epsilon,
                    distance,
                    variation,
                });
            }
        }
    }
    Ok(ModulusReport { symbol: symbol.to_string(), counterexamples })
}

fn modulus_witness(
    modulus: &crate::signature::Modulus,
    distance: &Rational01,
    variation: &Rational01,
) -> Option<Rational01> {
    // ε must lie in (0, 1) and below the variation.
    let upper = variation.as_big();
    let lower = modulus.violation_threshold(distance)?;
    if lower >= upper {
        return None;
    }
    let eps = Rational01::from_big(simplest_between(&lower, Some(&upper))).expect("inside (0, 1)");
    debug_assert!(distance < &modulus.delta(&eps) && variation > &eps);
    Some(eps)
}

/// Runs [`check_modulus`] for every function and predicate symbol.
pub fn check_all_moduli(m: &MetricStructure) -> Vec<ModulusReport> {
    let sig = m.signature();
    sig.functions()
        .iter()
        .chain(sig.predicates())
        .map(|decl| check_modulus(m, &decl.name).expect("declared symbol"))
        .collect()
}

/// Metric values and predicate values all lie in `{0, 1}`.
pub fn is_discrete(m: &MetricStructure) -> bool {
    let crisp = |q: &Rational01| q.is_zero() || q.is_one();
    m.metric.iter().all(crisp) && m.predicates.values().flatten().all(crisp)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub metric: MetricReport,
    pub moduli: Vec<ModulusReport>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.metric.is_metric() && self.moduli.iter().all(ModulusReport::holds)
    }
}

/// Metric axioms plus every declared modulus.
pub fn validate(m: &MetricStructure) -> ValidationReport {
    ValidationReport { metric: validate_metric(m), moduli: check_all_moduli(m) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{Modulus, PositiveRational};

    fn q(p: i64, d: i64) -> Rational01 {
        Rational01::of(p, d)
    }

    fn unary_p() -> Signature {
        Signature::new().with_predicate("P", 1, Modulus::Identity).unwrap()
    }

    fn three_points(ab: Rational01, bc: Rational01, ac: Rational01) -> MetricStructure {
        let mut b = StructureBuilder::new("M", Signature::new(), &["a", "b", "c"]).unwrap();
        b.dist("a", "b", ab).unwrap();
        b.dist("b", "c", bc).unwrap();
        b.dist("a", "c", ac).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn single_point_is_a_metric_space() {
        let m = StructureBuilder::new("M", Signature::new(), &["a"]).unwrap().build().unwrap();
        assert_eq!(validate_metric(&m), MetricReport::default());
    }

    #[test]
    fn triangle_violation_is_reported() {
        let m = three_points(q(1, 1), q(1, 4), q(1, 2));
        let report = validate_metric(&m);
        assert!(report.violations.contains(&MetricViolation::Triangle {
            a: "a".into(),
            b: "b".into(),
            via: "c".into()
        }));
        // 1 > 1/4 + 1/2 is the only failing detour (both orientations)
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn zero_distance_is_a_warning_not_a_violation() {
        let mut b = StructureBuilder::new("M", Signature::new(), &["a", "b"]).unwrap();
        b.dist("a", "b", Rational01::zero()).unwrap();
        let report = validate_metric(&b.build().unwrap());
        assert!(report.is_metric());
        assert_eq!(report.warnings, vec![MetricWarning::ZeroDistance { a: "a".into(), b: "b".into() }]);
    }

    #[test]
    fn asymmetric_and_irreflexive_tables() {
        let mut b = StructureBuilder::new("M", Signature::new(), &["a", "b"]).unwrap();
        b.dist("a", "b", q(1, 2)).unwrap();
        b.dist("b", "a", q(1, 4)).unwrap();
        b.dist("a", "a", q(1, 8)).unwrap();
        let report = validate_metric(&b.build().unwrap());
        assert!(report.violations.iter().any(|v| matches!(v, MetricViolation::Symmetry { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, MetricViolation::Reflexivity { .. })));
    }

    #[test]
    fn missing_distance_is_an_error() {
        let mut b = StructureBuilder::new("M", Signature::new(), &["a", "b", "c"]).unwrap();
        b.dist("a", "b", q(1, 2)).unwrap();
        assert!(matches!(b.build(), Err(StructureError::MissingDistance(..))));
    }

    #[test]
    fn product_metric_is_coordinatewise_max() {
        let m = three_points(q(1, 4), q(3, 4), q(1, 2));
        assert_eq!(product_metric(&m, &[0], &[1]).unwrap(), q(1, 4));
        assert_eq!(product_metric(&m, &[0, 1, 2], &[0, 1, 2]).unwrap(), Rational01::zero());
        // coordinates (a,b), (b,c), (a,c) → 1/4, 3/4, 1/2
        assert_eq!(product_metric(&m, &[0, 1, 0], &[1, 2, 2]).unwrap(), q(3, 4));
        assert_eq!(product_metric(&m, &[0], &[0, 1]), Err(TupleError::LengthMismatch(1, 2)));
    }

    #[test]
    fn lipschitz_predicate_passes_identity_modulus() {
        let mut b = StructureBuilder::new("M", unary_p(), &["a", "b"]).unwrap();
        b.dist("a", "b", q(1, 2)).unwrap();
        b.predicate("P", &["a"], q(1, 4)).unwrap();
        b.predicate("P", &["b"], q(3, 4)).unwrap();
        assert!(check_modulus(&b.build().unwrap(), "P").unwrap().holds());
    }

    #[test]
    fn jump_violates_identity_modulus_at_one_half() {
        let mut b = StructureBuilder::new("M", unary_p(), &["a", "b"]).unwrap();
        b.dist("a", "b", q(1, 4)).unwrap();
        b.predicate("P", &["a"], Rational01::zero()).unwrap();
        b.predicate("P", &["b"], Rational01::one()).unwrap();
        let report = check_modulus(&b.build().unwrap(), "P").unwrap();
        assert_eq!(
            report.counterexamples,
            vec![ModulusCounterexample {
                left: vec!["a".into()],
                right: vec!["b".into()],
                epsilon: q(1, 2),
                distance: q(1, 4),
                variation: Rational01::one(),
            }]
        );
    }

    #[test]
    fn constant_function_satisfies_any_modulus() {
        for modulus in [
            Modulus::Identity,
            Modulus::constant(q(9, 10)).unwrap(),
            Modulus::linear(PositiveRational::integer(1000).unwrap()),
        ] {
            let sig = Signature::new().with_function("f", 2, modulus).unwrap();
            let mut b = StructureBuilder::new("M", sig, &["a", "b", "c"]).unwrap();
            b.metric_fn(|x, y| if x == y { Rational01::zero() } else { q(1, 3) });
            b.function_fn("f", |_| 1).unwrap();
            assert!(check_modulus(&b.build().unwrap(), "f").unwrap().holds());
        }
    }

    #[test]
    fn unknown_symbol_is_an_error() {
        let m = StructureBuilder::new("M", Signature::new(), &["a"]).unwrap().build().unwrap();
        assert_eq!(check_modulus(&m, "Q"), Err(ModulusCheckError::UnknownSymbol("Q".into())));
    }

    #[test]
    fn discreteness() {
        let mut one = StructureBuilder::new("M", unary_p(), &["a"]).unwrap();
        one.predicate("P", &["a"], Rational01::one()).unwrap();
        assert!(is_discrete(&one.build().unwrap()));

        let mut two = StructureBuilder::new("M", unary_p(), &["a", "b"]).unwrap();
        two.dist("a", "b", Rational01::one()).unwrap();
        two.predicate("P", &["a"], Rational01::zero()).unwrap();
        two.predicate("P", &["b"], Rational01::one()).unwrap();
        assert!(is_discrete(&two.build().unwrap()));

        let mut half = StructureBuilder::new("M", unary_p(), &["a"]).unwrap();
        half.predicate("P", &["a"], q(1, 2)).unwrap();
        assert!(!is_discrete(&half.build().unwrap()));
    }

    #[test]
    fn family_tail_is_total() {
        let sig = Signature::new().with_family("c").unwrap();
        let mut b = StructureBuilder::new("M", sig, &["a", "b"]).unwrap();
        b.dist("a", "b", q(1, 2)).unwrap();
        b.family("c", &["b", "a"], "b").unwrap();
        let m = b.build().unwrap();
        let fam = m.family("c").unwrap();
        assert_eq!((fam.at(0), fam.at(1), fam.at(2), fam.at(u64::MAX)), (1, 0, 1, 1));
    }

    #[test]
    fn tuples_enumerate_lexicographically() {
        assert_eq!(tuples(2, 2).collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(tuples(3, 0).collect::<Vec<_>>(), vec![Vec::<Point>::new()]);
    }
}
