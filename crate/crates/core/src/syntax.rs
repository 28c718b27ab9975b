//! Terms, formulas, infinitary schemas and the derived-connective macros.
//!
//! The core AST has five formula constructors: metric and predicate atoms,
//! rational constants, Łukasiewicz implication, countable suprema given by a
//! [`Schema`], and the quantifier `sup x`. Every other connective is a
//! function in this module that builds core AST eagerly.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::rational::{enumerate_open_unit, Rational01};
use crate::signature::{Signature, SymbolKind};

/// Largest index accepted by `rat[...]`; the enumeration is walked linearly.
pub const MAX_ENUMERATION_INDEX: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("index variable `{0}` is not bound by an enclosing schema")]
    UnboundIndex(String),
    #[error("index expression overflows")]
    IndexOverflow,
    #[error("index coefficient must be at least 1")]
    ZeroCoefficient,
    #[error("`{num}/(i+{shift})` needs 1 <= {num} <= {shift}")]
    InvalidRecip { num: u64, shift: u64 },
    #[error("rational enumeration index {0} exceeds the supported bound")]
    EnumerationTooLarge(u64),
    #[error("a schema needs at least one member")]
    EmptySchema,
    #[error("schema has {len} members, instance {index} requested")]
    InstanceOutOfRange { index: u64, len: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{name}` is not a {expected}")]
    WrongKind { name: String, expected: &'static str },
    #[error("`{symbol}` expects {expected} argument(s), got {found}")]
    Arity { symbol: String, expected: usize, found: usize },
}

/// `coeff * var + offset` with `coeff >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Affine {
    pub var: String,
    pub coeff: u64,
    pub offset: u64,
}

impl Affine {
    pub fn var(name: &str) -> Self {
        Affine { var: name.to_string(), coeff: 1, offset: 0 }
    }

    pub fn new(name: &str, coeff: u64, offset: u64) -> Result<Self, SyntaxError> {
        if coeff == 0 {
            return Err(SyntaxError::ZeroCoefficient);
        }
        Ok(Affine { var: name.to_string(), coeff, offset })
    }

    pub fn at(&self, value: u64) -> Result<u64, SyntaxError> {
        self.coeff.checked_mul(value).and_then(|v| v.checked_add(self.offset)).ok_or(SyntaxError::IndexOverflow)
    }

    pub fn eval(&self, env: &IndexEnv) -> Result<u64, SyntaxError> {
        let value = env.get(&self.var).ok_or_else(|| SyntaxError::UnboundIndex(self.var.clone()))?;
        self.at(*value)
    }
}

/// Values of schema index variables.
pub type IndexEnv = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexExpr {
    Lit { value: u64 },
    Affine(Affine),
}

impl IndexExpr {
    pub fn lit(value: u64) -> Self {
        IndexExpr::Lit { value }
    }

    pub fn var(name: &str) -> Self {
        IndexExpr::Affine(Affine::var(name))
    }

    pub fn eval(&self, env: &IndexEnv) -> Result<u64, SyntaxError> {
        match self {
            IndexExpr::Lit { value } => Ok(*value),
            IndexExpr::Affine(a) => a.eval(env),
        }
    }

    fn index_var(&self) -> Option<&str> {
        match self {
            IndexExpr::Lit { .. } => None,
            IndexExpr::Affine(a) => Some(&a.var),
        }
    }

    fn bind(&self, var: &str, value: u64) -> Result<IndexExpr, SyntaxError> {
        match self {
            IndexExpr::Affine(a) if a.var == var => Ok(IndexExpr::lit(a.at(value)?)),
            other => Ok(other.clone()),
        }
    }

    fn rename(&self, old: &str, new: &str) -> IndexExpr {
        match self {
            IndexExpr::Affine(a) if a.var == old => IndexExpr::Affine(Affine { var: new.to_string(), ..a.clone() }),
            other => other.clone(),
        }
    }
}

/// A rational constant, possibly depending on a schema index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RatExpr {
    Fixed {
        value: Rational01,
    },
    /// `num / (index + shift)`.
    Recip {
        num: u64,
        shift: u64,
        index: Affine,
    },
    /// `1 - num / (index + shift)`.
    OneMinusRecip {
        num: u64,
        shift: u64,
        index: Affine,
    },
    /// The `index`-th element of the fixed enumeration of `Q ∩ (0, 1)`.
    Enumerated {
        index: IndexExpr,
    },
}

impl RatExpr {
    pub fn fixed(value: Rational01) -> Self {
        RatExpr::Fixed { value }
    }

    pub fn recip(num: u64, shift: u64, index: Affine) -> Result<Self, SyntaxError> {
        check_recip(num, shift)?;
        Ok(RatExpr::Recip { num, shift, index })
    }

    pub fn one_minus_recip(num: u64, shift: u64, index: Affine) -> Result<Self, SyntaxError> {
        check_recip(num, shift)?;
        Ok(RatExpr::OneMinusRecip { num, shift, index })
    }

    pub fn enumerated(index: IndexExpr) -> Self {
        RatExpr::Enumerated { index }
    }

    pub fn eval(&self, env: &IndexEnv) -> Result<Rational01, SyntaxError> {
        match self {
            RatExpr::Fixed { value } => Ok(value.clone()),
            RatExpr::Recip { num, shift, index } => recip_value(*num, *shift, index.eval(env)?),
            RatExpr::OneMinusRecip { num, shift, index } => {
                Ok(recip_value(*num, *shift, index.eval(env)?)?.complement())
            }
            RatExpr::Enumerated { index } => enumerated_value(index.eval(env)?),
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, RatExpr::Fixed { .. })
    }

    fn index_var(&self) -> Option<&str> {
        match self {
            RatExpr::Fixed { .. } => None,
            RatExpr::Recip { index, .. } | RatExpr::OneMinusRecip { index, .. } => Some(&index.var),
            RatExpr::Enumerated { index } => index.index_var(),
        }
    }

    fn bind(&self, var: &str, value: u64) -> Result<RatExpr, SyntaxError> {
        let env = IndexEnv::from([(var.to_string(), value)]);
        match self {
            RatExpr::Fixed { .. } => Ok(self.clone()),
            _ if self.index_var() == Some(var) => Ok(RatExpr::fixed(self.eval(&env)?)),
            _ => Ok(self.clone()),
        }
    }

    fn rename(&self, old: &str, new: &str) -> RatExpr {
        let rn = |a: &Affine| if a.var == old { Affine { var: new.to_string(), ..a.clone() } } else { a.clone() };
        match self {
            RatExpr::Fixed { .. } => self.clone(),
            RatExpr::Recip { num, shift, index } => RatExpr::Recip { num: *num, shift: *shift, index: rn(index) },
            RatExpr::OneMinusRecip { num, shift, index } => {
                RatExpr::OneMinusRecip { num: *num, shift: *shift, index: rn(index) }
            }
            RatExpr::Enumerated { index } => RatExpr::Enumerated { index: index.rename(old, new) },
        }
    }
}

fn check_recip(num: u64, shift: u64) -> Result<(), SyntaxError> {
    if num == 0 || num > shift {
        return Err(SyntaxError::InvalidRecip { num, shift });
    }
    Ok(())
}

fn recip_value(num: u64, shift: u64, index: u64) -> Result<Rational01, SyntaxError> {
    let denom = index.checked_add(shift).ok_or(SyntaxError::IndexOverflow)?;
    Ok(Rational01::from_big(BigRational::new(num.into(), denom.into())).expect("num <= shift <= denominator"))
}

fn enumerated_value(index: u64) -> Result<Rational01, SyntaxError> {
    if index > MAX_ENUMERATION_INDEX {
        return Err(SyntaxError::EnumerationTooLarge(index));
    }
    Ok(enumerate_open_unit(index))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    Var { name: String },
    Const { name: String },
    Indexed { family: String, index: IndexExpr },
    Apply { function: String, args: Vec<Term> },
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var { name: name.to_string() }
    }

    pub fn constant(name: &str) -> Self {
        Term::Const { name: name.to_string() }
    }

    pub fn indexed(family: &str, index: IndexExpr) -> Self {
        Term::Indexed { family: family.to_string(), index }
    }

    pub fn apply(function: &str, args: Vec<Term>) -> Self {
        Term::Apply { function: function.to_string(), args }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { name } => {
                out.insert(name.clone());
            }
            Term::Const { .. } | Term::Indexed { .. } => {}
            Term::Apply { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn collect_index_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Indexed { index, .. } => {
                if let Some(v) = index.index_var() {
                    out.insert(v.to_string());
                }
            }
            Term::Apply { args, .. } => args.iter().for_each(|a| a.collect_index_vars(out)),
            Term::Var { .. } | Term::Const { .. } => {}
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var { name } => map.get(name).cloned().unwrap_or_else(|| self.clone()),
            Term::Apply { function, args } => {
                Term::Apply { function: function.clone(), args: args.iter().map(|a| a.substitute(map)).collect() }
            }
            _ => self.clone(),
        }
    }

    fn map_index(&self, f: &impl Fn(&IndexExpr) -> Result<IndexExpr, SyntaxError>) -> Result<Term, SyntaxError> {
        Ok(match self {
            Term::Indexed { family, index } => Term::Indexed { family: family.clone(), index: f(index)? },
            Term::Apply { function, args } => Term::Apply {
                function: function.clone(),
                args: args.iter().map(|a| a.map_index(f)).collect::<Result<_, _>>()?,
            },
            _ => self.clone(),
        })
    }

    pub fn check(&self, sig: &Signature) -> Result<(), SyntaxError> {
        match self {
            Term::Var { .. } => Ok(()),
            Term::Const { name } => expect_kind(sig, name, SymbolKind::Constant, "constant"),
            Term::Indexed { family, .. } => expect_kind(sig, family, SymbolKind::Family, "constant family"),
            Term::Apply { function, args } => {
                let decl = match sig.function(function) {
                    Some(d) => d,
                    None if sig.kind_of(function).is_some() => {
                        return Err(SyntaxError::WrongKind { name: function.clone(), expected: "function" })
                    }
                    None => return Err(SyntaxError::UnknownSymbol(function.clone())),
                };
                if decl.arity != args.len() {
                    return Err(SyntaxError::Arity {
                        symbol: function.clone(),
                        expected: decl.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }
}

fn expect_kind(sig: &Signature, name: &str, kind: SymbolKind, expected: &'static str) -> Result<(), SyntaxError> {
    match sig.kind_of(name) {
        Some(k) if k == kind => Ok(()),
        Some(_) => Err(SyntaxError::WrongKind { name: name.to_string(), expected }),
        None => Err(SyntaxError::UnknownSymbol(name.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Formula {
    Dist { left: Term, right: Term },
    Pred { predicate: String, args: Vec<Term> },
    Const { value: RatExpr },
    Implies { antecedent: Box<Formula>, consequent: Box<Formula> },
    SupSeq { schema: Schema },
    SupVar { var: String, body: Box<Formula> },
}

/// A finite presentation of a countable family `φ_0, φ_1, …`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schema {
    /// `φ_i` for every `i ∈ ℕ`, from one body mentioning the index.
    Indexed { index: String, body: Box<Formula> },
    /// A finite list of members.
    Explicit { members: Vec<Formula> },
}

impl Schema {
    pub fn indexed(index: &str, body: Formula) -> Self {
        Schema::Indexed { index: index.to_string(), body: Box::new(body) }
    }

    pub fn explicit(members: Vec<Formula>) -> Result<Self, SyntaxError> {
        if members.is_empty() {
            return Err(SyntaxError::EmptySchema);
        }
        Ok(Schema::Explicit { members })
    }

    /// The `i`-th member, with the index replaced by the literal `i`.
    pub fn instance(&self, i: u64) -> Result<Formula, SyntaxError> {
        match self {
            Schema::Indexed { index, body } => bind_index(body, index, i),
            Schema::Explicit { members } => usize::try_from(i)
                .ok()
                .and_then(|k| members.get(k))
                .cloned()
                .ok_or(SyntaxError::InstanceOutOfRange { index: i, len: members.len() }),
        }
    }

    pub fn map_members(&self, f: impl Fn(&Formula) -> Formula) -> Schema {
        match self {
            Schema::Indexed { index, body } => Schema::Indexed { index: index.clone(), body: Box::new(f(body)) },
            Schema::Explicit { members } => Schema::Explicit { members: members.iter().map(f).collect() },
        }
    }
}

/// Free function form of [`Schema::instance`].
pub fn instantiate(schema: &Schema, i: u64) -> Result<Formula, SyntaxError> {
    schema.instance(i)
}

impl Formula {
    pub fn dist(left: Term, right: Term) -> Self {
        Formula::Dist { left, right }
    }

    pub fn pred(predicate: &str, args: Vec<Term>) -> Self {
        Formula::Pred { predicate: predicate.to_string(), args }
    }

    pub fn constant(value: Rational01) -> Self {
        Formula::Const { value: RatExpr::fixed(value) }
    }

    pub fn rat(value: RatExpr) -> Self {
        Formula::Const { value }
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Self {
        Formula::Implies { antecedent: Box::new(antecedent), consequent: Box::new(consequent) }
    }

    pub fn sup_seq(schema: Schema) -> Self {
        Formula::SupSeq { schema }
    }

    pub fn sup(var: &str, body: Formula) -> Self {
        Formula::SupVar { var: var.to_string(), body: Box::new(body) }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Dist { .. } | Formula::Pred { .. })
    }

    /// No `SupSeq` anywhere.
    pub fn is_finitary(&self) -> bool {
        match self {
            Formula::Dist { .. } | Formula::Pred { .. } | Formula::Const { .. } => true,
            Formula::Implies { antecedent, consequent } => antecedent.is_finitary() && consequent.is_finitary(),
            Formula::SupSeq { .. } => false,
            Formula::SupVar { body, .. } => body.is_finitary(),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        free_variables(self)
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Dist { .. } | Formula::Pred { .. } | Formula::Const { .. } => 1,
            Formula::Implies { antecedent, consequent } => 1 + antecedent.size() + consequent.size(),
            Formula::SupSeq { schema: Schema::Indexed { body, .. } } => 1 + body.size(),
            Formula::SupSeq { schema: Schema::Explicit { members } } => {
                1 + members.iter().map(Formula::size).sum::<usize>()
            }
            Formula::SupVar { body, .. } => 1 + body.size(),
        }
    }

    /// Checks symbols and arities against a signature.
    pub fn check(&self, sig: &Signature) -> Result<(), SyntaxError> {
        match self {
            Formula::Dist { left, right } => {
                left.check(sig)?;
                right.check(sig)
            }
            Formula::Pred { predicate, args } => {
                let decl = match sig.predicate(predicate) {
                    Some(d) => d,
                    None if sig.kind_of(predicate).is_some() => {
                        return Err(SyntaxError::WrongKind { name: predicate.clone(), expected: "predicate" })
                    }
                    None => return Err(SyntaxError::UnknownSymbol(predicate.clone())),
                };
                if decl.arity != args.len() {
                    return Err(SyntaxError::Arity {
                        symbol: predicate.clone(),
                        expected: decl.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
            Formula::Const { .. } => Ok(()),
            Formula::Implies { antecedent, consequent } => {
                antecedent.check(sig)?;
                consequent.check(sig)
            }
            Formula::SupSeq { schema: Schema::Indexed { body, .. } } => body.check(sig),
            Formula::SupSeq { schema: Schema::Explicit { members } } => members.iter().try_for_each(|m| m.check(sig)),
            Formula::SupVar { body, .. } => body.check(sig),
        }
    }

    /// Index variables used but not bound by an enclosing schema.
    pub fn free_index_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free_indices(self, &mut Vec::new(), &mut out);
        out
    }

    fn map_leaves(
        &self,
        term: &impl Fn(&Term) -> Result<Term, SyntaxError>,
        rat: &impl Fn(&RatExpr) -> Result<RatExpr, SyntaxError>,
        stop_at: Option<&str>,
    ) -> Result<Formula, SyntaxError> {
        Ok(match self {
            Formula::Dist { left, right } => Formula::Dist { left: term(left)?, right: term(right)? },
            Formula::Pred { predicate, args } => {
                Formula::Pred { predicate: predicate.clone(), args: args.iter().map(term).collect::<Result<_, _>>()? }
            }
            Formula::Const { value } => Formula::Const { value: rat(value)? },
            Formula::Implies { antecedent, consequent } => {
                Formula::implies(antecedent.map_leaves(term, rat, stop_at)?, consequent.map_leaves(term, rat, stop_at)?)
            }
            Formula::SupSeq { schema: Schema::Indexed { index, .. } } if Some(index.as_str()) == stop_at => {
                self.clone()
            }
            Formula::SupSeq { schema: Schema::Indexed { index, body } } => Formula::SupSeq {
                schema: Schema::Indexed { index: index.clone(), body: Box::new(body.map_leaves(term, rat, stop_at)?) },
            },
            Formula::SupSeq { schema: Schema::Explicit { members } } => Formula::SupSeq {
                schema: Schema::Explicit {
                    members: members.iter().map(|m| m.map_leaves(term, rat, stop_at)).collect::<Result<_, _>>()?,
                },
            },
            Formula::SupVar { var, body } => Formula::sup(var, body.map_leaves(term, rat, stop_at)?),
        })
    }
}

fn collect_free_indices(phi: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    let mut note = |v: Option<&str>, bound: &Vec<String>| {
        if let Some(v) = v {
            if !bound.iter().any(|b| b == v) {
                out.insert(v.to_string());
            }
        }
    };
    match phi {
        Formula::Dist { left, right } => {
            let mut vs = BTreeSet::new();
            left.collect_index_vars(&mut vs);
            right.collect_index_vars(&mut vs);
            vs.iter().for_each(|v| note(Some(v), bound));
        }
        Formula::Pred { args, .. } => {
            let mut vs = BTreeSet::new();
            args.iter().for_each(|a| a.collect_index_vars(&mut vs));
            vs.iter().for_each(|v| note(Some(v), bound));
        }
        Formula::Const { value } => note(value.index_var(), bound),
        Formula::Implies { antecedent, consequent } => {
            collect_free_indices(antecedent, bound, out);
            collect_free_indices(consequent, bound, out);
        }
        Formula::SupSeq { schema: Schema::Indexed { index, body } } => {
            bound.push(index.clone());
            collect_free_indices(body, bound, out);
            bound.pop();
        }
        Formula::SupSeq { schema: Schema::Explicit { members } } => {
            members.iter().for_each(|m| collect_free_indices(m, bound, out))
        }
        Formula::SupVar { body, .. } => collect_free_indices(body, bound, out),
    }
}

fn bind_index(body: &Formula, index: &str, value: u64) -> Result<Formula, SyntaxError> {
    body.map_leaves(
        &|t: &Term| t.map_index(&|e: &IndexExpr| e.bind(index, value)),
        &|r: &RatExpr| r.bind(index, value),
        Some(index),
    )
}

fn rename_index(body: &Formula, old: &str, new: &str) -> Formula {
    body.map_leaves(
        &|t: &Term| t.map_index(&|e: &IndexExpr| Ok(e.rename(old, new))),
        &|r: &RatExpr| Ok(r.rename(old, new)),
        Some(old),
    )
    .expect("renaming cannot fail")
}

/// The free logic variables of `phi`. Schema indices are not logic
/// variables; for a schema this is the union over its (finitely many
/// distinct) instance templates.
pub fn free_variables(phi: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(phi, &mut Vec::new(), &mut out);
    out
}

fn collect_free(phi: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    let mut add = |t: &Term, bound: &Vec<String>| {
        for v in t.free_variables() {
            if !bound.contains(&v) {
                out.insert(v);
            }
        }
    };
    match phi {
        Formula::Dist { left, right } => {
            add(left, bound);
            add(right, bound);
        }
        Formula::Pred { args, .. } => args.iter().for_each(|a| add(a, bound)),
        Formula::Const { .. } => {}
        Formula::Implies { antecedent, consequent } => {
            collect_free(antecedent, bound, out);
            collect_free(consequent, bound, out);
        }
        Formula::SupSeq { schema: Schema::Indexed { body, .. } } => collect_free(body, bound, out),
        Formula::SupSeq { schema: Schema::Explicit { members } } => {
            members.iter().for_each(|m| collect_free(m, bound, out))
        }
        Formula::SupVar { var, body } => {
            bound.push(var.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

/// Appends primes to `base` until the name avoids `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Capture-avoiding substitution of `t` for the free occurrences of `var`.
pub fn substitute(phi: &Formula, var: &str, t: &Term) -> Formula {
    substitute_many(phi, &BTreeMap::from([(var.to_string(), t.clone())]))
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_many(phi: &Formula, map: &BTreeMap<String, Term>) -> Formula {
    if map.is_empty() {
        return phi.clone();
    }
    match phi {
        Formula::Dist { left, right } => Formula::dist(left.substitute(map), right.substitute(map)),
        Formula::Pred { predicate, args } => Formula::pred(predicate, args.iter().map(|a| a.substitute(map)).collect()),
        Formula::Const { .. } => phi.clone(),
        Formula::Implies { antecedent, consequent } => {
            Formula::implies(substitute_many(antecedent, map), substitute_many(consequent, map))
        }
        Formula::SupVar { var, body } => {
            let free = free_variables(body);
            let active: BTreeMap<String, Term> = map
                .iter()
                .filter(|(k, _)| *k != var && free.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            if active.is_empty() {
                return phi.clone();
            }
            let danger: BTreeSet<String> = active.values().flat_map(Term::free_variables).collect();
            if danger.contains(var) {
                let mut taken = danger;
                taken.extend(free);
                taken.extend(active.keys().cloned());
                let renamed = fresh_name(var, &taken);
                let body = substitute(body, var, &Term::var(&renamed));
                Formula::sup(&renamed, substitute_many(&body, &active))
            } else {
                Formula::sup(var, substitute_many(body, &active))
            }
        }
        Formula::SupSeq { schema: Schema::Indexed { index, body } } => {
            let mut index_vars = BTreeSet::new();
            map.values().for_each(|t| t.collect_index_vars(&mut index_vars));
            if index_vars.contains(index) {
                let mut taken = index_vars;
                let mut inner = BTreeSet::new();
                collect_all_indices(body, &mut inner);
                taken.extend(inner);
                let renamed = fresh_name(index, &taken);
                let body = rename_index(body, index, &renamed);
                Formula::sup_seq(Schema::indexed(&renamed, substitute_many(&body, map)))
            } else {
                Formula::sup_seq(Schema::indexed(index, substitute_many(body, map)))
            }
        }
        Formula::SupSeq { schema: Schema::Explicit { members } } => {
            Formula::sup_seq(Schema::Explicit { members: members.iter().map(|m| substitute_many(m, map)).collect() })
        }
    }
}

fn collect_all_indices(phi: &Formula, out: &mut BTreeSet<String>) {
    collect_free_indices(phi, &mut Vec::new(), out);
    if let Formula::SupSeq { schema: Schema::Indexed { index, .. } } = phi {
        out.insert(index.clone());
    }
    match phi {
        Formula::Implies { antecedent, consequent } => {
            collect_all_indices(antecedent, out);
            collect_all_indices(consequent, out);
        }
        Formula::SupSeq { schema: Schema::Indexed { body, .. } } | Formula::SupVar { body, .. } => {
            collect_all_indices(body, out)
        }
        Formula::SupSeq { schema: Schema::Explicit { members } } => {
            members.iter().for_each(|m| collect_all_indices(m, out))
        }
        _ => {}
    }
}

/// Equality up to renaming of bound logic variables and schema indices.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    let mut matcher =
        Matcher { pattern_free: BTreeSet::new(), bindings: BTreeMap::new(), env: Vec::new(), index_env: Vec::new() };
    matcher.formula(a, b)
}

// ---------------------------------------------------------------------------
// Derived connectives

/// `¬φ := φ ⊸ 0`.
pub fn neg(phi: Formula) -> Formula {
    Formula::implies(phi, Formula::constant(Rational01::zero()))
}

/// `φ ∨ ψ := (φ ⊸ ψ) ⊸ ψ`, value `max`.
pub fn or(phi: Formula, psi: Formula) -> Formula {
    Formula::implies(Formula::implies(phi, psi.clone()), psi)
}

/// `φ ∧ ψ := ¬(¬φ ∨ ¬ψ)`, value `min`.
pub fn and(phi: Formula, psi: Formula) -> Formula {
    neg(or(neg(phi), neg(psi)))
}

/// `φ ∔ ψ := φ ⊸ ¬ψ`, value `min{2 - φ - ψ, 1}`.
pub fn trunc_plus(phi: Formula, psi: Formula) -> Formula {
    Formula::implies(phi, neg(psi))
}

/// `inf_i φ_i := ¬ sup_i ¬φ_i`.
pub fn inf_seq(schema: Schema) -> Formula {
    neg(Formula::sup_seq(schema.map_members(|m| neg(m.clone()))))
}

/// `inf x φ := ¬ sup x ¬φ`.
pub fn inf(var: &str, body: Formula) -> Formula {
    neg(Formula::sup(var, neg(body)))
}

/// `φ ≥ r := r ⊸ φ`; satisfied exactly when the value of `φ` is at least `r`.
pub fn geq(phi: Formula, r: RatExpr) -> Formula {
    Formula::implies(Formula::rat(r), phi)
}

/// `φ ≤ r := φ ⊸ r`.
pub fn leq(phi: Formula, r: RatExpr) -> Formula {
    Formula::implies(phi, Formula::rat(r))
}

/// `t = u` read as `1 - d(t, u)`.
pub fn eq(t: Term, u: Term) -> Formula {
    neg(Formula::dist(t, u))
}

/// `Disc(φ) := φ ∨ ¬φ`.
pub fn disc(phi: Formula) -> Formula {
    or(phi.clone(), neg(phi))
}

/// `⋁_{i=1..n} (i/n ∧ ¬(φ ⊸ i/n))`, whose value tends to half the value of
/// `φ` as `n` grows. `n = 0` is treated as `n = 1`.
pub fn half(phi: Formula, n: u64) -> Formula {
    let n = n.max(1) as i64;
    let step = |i: i64| Formula::constant(Rational01::of(i, n));
    let disjunct = |i: i64| and(step(i), neg(Formula::implies(phi.clone(), step(i))));
    (2..=n).fold(disjunct(1), |acc, i| or(acc, disjunct(i)))
}

// ---------------------------------------------------------------------------
// Fragment closure

/// Bounded search for a derivation of `phi` from atomic formulas, rational
/// constants and `generators` using at most `depth` nested applications of
/// `⊸`, `sup x` and term substitution (`¬` is `⊸ 0`). A substitution
/// instance of a generator costs one step per variable it moves. `false`
/// only means no derivation was found within the bound.
pub fn in_fragment_closure(phi: &Formula, generators: &[Formula], depth: usize) -> bool {
    closure_search(phi, generators, depth)
}

fn closure_search(phi: &Formula, generators: &[Formula], depth: usize) -> bool {
    if phi.is_atomic() || matches!(phi, Formula::Const { value } if value.is_fixed()) {
        return true;
    }
    if generators.iter().any(|g| generator_cost(g, phi).is_some_and(|cost| cost <= depth)) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    match phi {
        Formula::Implies { antecedent, consequent } => {
            closure_search(antecedent, generators, depth - 1) && closure_search(consequent, generators, depth - 1)
        }
        Formula::SupVar { body, .. } => closure_search(body, generators, depth - 1),
        _ => false,
    }
}

/// Number of variables moved by the cheapest substitution turning `g` into
/// `phi` up to alpha-equivalence, if any.
fn generator_cost(g: &Formula, phi: &Formula) -> Option<usize> {
    let mut matcher =
        Matcher { pattern_free: free_variables(g), bindings: BTreeMap::new(), env: Vec::new(), index_env: Vec::new() };
    if !matcher.formula(g, phi) {
        return None;
    }
    Some(matcher.bindings.iter().filter(|(v, t)| !matches!(t, Term::Var { name } if name == *v)).count())
}

/// First-order matching modulo bound-variable renaming. Free variables of
/// the pattern listed in `pattern_free` may be bound to terms; bound
/// variables must correspond one to one.
struct Matcher {
    pattern_free: BTreeSet<String>,
    bindings: BTreeMap<String, Term>,
    env: Vec<(String, String)>,
    index_env: Vec<(String, String)>,
}

impl Matcher {
    fn bound_pair(env: &[(String, String)], p: &str, t: &str) -> Option<bool> {
        for (a, b) in env.iter().rev() {
            if a == p || b == t {
                return Some(a == p && b == t);
            }
        }
        None
    }

    fn index(&self, p: &IndexExpr, t: &IndexExpr) -> bool {
        match (p, t) {
            (IndexExpr::Lit { value: a }, IndexExpr::Lit { value: b }) => a == b,
            (IndexExpr::Affine(a), IndexExpr::Affine(b)) => {
                a.coeff == b.coeff && a.offset == b.offset && self.index_var(&a.var, &b.var)
            }
            _ => false,
        }
    }

    fn index_var(&self, p: &str, t: &str) -> bool {
        Self::bound_pair(&self.index_env, p, t).unwrap_or(p == t)
    }

    fn affine(&self, p: &Affine, t: &Affine) -> bool {
        p.coeff == t.coeff && p.offset == t.offset && self.index_var(&p.var, &t.var)
    }

    fn rat(&self, p: &RatExpr, t: &RatExpr) -> bool {
        match (p, t) {
            (RatExpr::Fixed { value: a }, RatExpr::Fixed { value: b }) => a == b,
            (RatExpr::Recip { num: n1, shift: s1, index: i1 }, RatExpr::Recip { num: n2, shift: s2, index: i2 })
            | (
                RatExpr::OneMinusRecip { num: n1, shift: s1, index: i1 },
                RatExpr::OneMinusRecip { num: n2, shift: s2, index: i2 },
            ) => n1 == n2 && s1 == s2 && self.affine(i1, i2),
            (RatExpr::Enumerated { index: a }, RatExpr::Enumerated { index: b }) => self.index(a, b),
            _ => false,
        }
    }

    fn term(&mut self, p: &Term, t: &Term) -> bool {
        match (p, t) {
            (Term::Var { name }, _) => {
                if self.env.iter().any(|(a, _)| a == name) {
                    return matches!(t, Term::Var { name: tn } if Self::bound_pair(&self.env, name, tn) == Some(true));
                }
                // a free pattern variable never stands for a target-bound one
                let captured = t.free_variables().iter().any(|v| self.env.iter().any(|(_, b)| b == v));
                if captured {
                    return false;
                }
                if !self.pattern_free.contains(name) {
                    return p == t;
                }
                match self.bindings.get(name) {
                    Some(existing) => existing == t,
                    None => {
                        self.bindings.insert(name.clone(), t.clone());
                        true
                    }
                }
            }
            (Term::Const { name: a }, Term::Const { name: b }) => a == b,
            (Term::Indexed { family: f1, index: i1 }, Term::Indexed { family: f2, index: i2 }) => {
                f1 == f2 && self.index(i1, i2)
            }
            (Term::Apply { function: f1, args: a1 }, Term::Apply { function: f2, args: a2 }) => {
                f1 == f2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| self.term(x, y))
            }
            _ => false,
        }
    }

    fn formula(&mut self, p: &Formula, t: &Formula) -> bool {
        match (p, t) {
            (Formula::Dist { left: l1, right: r1 }, Formula::Dist { left: l2, right: r2 }) => {
                self.term(l1, l2) && self.term(r1, r2)
            }
            (Formula::Pred { predicate: p1, args: a1 }, Formula::Pred { predicate: p2, args: a2 }) => {
                p1 == p2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| self.term(x, y))
            }
            (Formula::Const { value: a }, Formula::Const { value: b }) => self.rat(a, b),
            (
                Formula::Implies { antecedent: a1, consequent: c1 },
                Formula::Implies { antecedent: a2, consequent: c2 },
            ) => self.formula(a1, a2) && self.formula(c1, c2),
            (Formula::SupVar { var: v1, body: b1 }, Formula::SupVar { var: v2, body: b2 }) => {
                self.env.push((v1.clone(), v2.clone()));
                let ok = self.formula(b1, b2);
                self.env.pop();
                ok
            }
            (
                Formula::SupSeq { schema: Schema::Indexed { index: i1, body: b1 } },
                Formula::SupSeq { schema: Schema::Indexed { index: i2, body: b2 } },
            ) => {
                self.index_env.push((i1.clone(), i2.clone()));
                let ok = self.formula(b1, b2);
                self.index_env.pop();
                ok
            }
            (
                Formula::SupSeq { schema: Schema::Explicit { members: m1 } },
                Formula::SupSeq { schema: Schema::Explicit { members: m2 } },
            ) => m1.len() == m2.len() && m1.iter().zip(m2).all(|(x, y)| self.formula(x, y)),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    fn p(args: Vec<Term>) -> Formula {
        Formula::pred("P", args)
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_variables_examples() {
        assert_eq!(free_variables(&Formula::dist(x(), Term::constant("c"))), set(&["x"]));
        assert_eq!(free_variables(&Formula::sup("x", p(vec![x(), Term::var("y")]))), set(&["y"]));
        let schema = Formula::sup_seq(Schema::indexed("i", eq(x(), Term::indexed("c", IndexExpr::var("i")))));
        assert_eq!(free_variables(&schema), set(&["x"]));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&p(vec![x()]), "x", &Term::constant("c")), p(vec![Term::constant("c")]));

        let phi = Formula::sup("x", p(vec![x(), Term::var("y")]));
        let fx = Term::apply("f", vec![x()]);
        assert_eq!(substitute(&phi, "y", &fx), Formula::sup("x'", p(vec![Term::var("x'"), fx])));

        let psi = p(vec![x()]);
        assert_eq!(substitute(&psi, "z", &Term::constant("c")), psi);
    }

    #[test]
    fn substitution_avoids_index_capture() {
        let body = Formula::dist(Term::var("x"), Term::indexed("c", IndexExpr::var("i")));
        let phi = Formula::sup_seq(Schema::indexed("i", body));
        let out = substitute(&phi, "x", &Term::indexed("c", IndexExpr::var("i")));
        let Formula::SupSeq { schema: Schema::Indexed { index, body } } = out else { panic!() };
        assert_eq!(index, "i'");
        assert_eq!(
            *body,
            Formula::dist(Term::indexed("c", IndexExpr::var("i")), Term::indexed("c", IndexExpr::var("i'")))
        );
    }

    #[test]
    fn instantiation_examples() {
        let s = Schema::indexed("i", eq(x(), Term::indexed("c", IndexExpr::var("i"))));
        assert_eq!(s.instance(2).unwrap(), eq(x(), Term::indexed("c", IndexExpr::lit(2))));

        let list = Schema::explicit(vec![p(vec![x()]), Formula::constant(Rational01::one())]).unwrap();
        assert_eq!(instantiate(&list, 1).unwrap(), Formula::constant(Rational01::one()));
        assert_eq!(list.instance(2), Err(SyntaxError::InstanceOutOfRange { index: 2, len: 2 }));

        let r = Schema::indexed("i", Formula::rat(RatExpr::one_minus_recip(1, 2, Affine::var("i")).unwrap()));
        assert_eq!(r.instance(0).unwrap(), Formula::constant(Rational01::of(1, 2)));
    }

    #[test]
    fn inner_schema_shadows_index() {
        let inner = Formula::sup_seq(Schema::indexed("i", Formula::rat(RatExpr::enumerated(IndexExpr::var("i")))));
        let outer = Schema::indexed(
            "i",
            Formula::implies(Formula::rat(RatExpr::enumerated(IndexExpr::var("i"))), inner.clone()),
        );
        assert_eq!(outer.instance(3).unwrap(), Formula::implies(Formula::constant(enumerate_open_unit(3)), inner));
    }

    #[test]
    fn recip_bounds() {
        assert!(RatExpr::recip(2, 1, Affine::var("i")).is_err());
        assert!(RatExpr::recip(0, 1, Affine::var("i")).is_err());
        assert!(Affine::new("i", 0, 1).is_err());
    }

    #[test]
    fn closure_examples() {
        assert!(in_fragment_closure(&p(vec![x()]), &[], 0));
        assert!(in_fragment_closure(&neg(p(vec![x()])), &[], 1));
        assert!(!in_fragment_closure(&neg(p(vec![x()])), &[], 0));
        let seq = Formula::sup_seq(Schema::indexed("i", p(vec![Term::indexed("c", IndexExpr::var("i"))])));
        for depth in 0..6 {
            assert!(!in_fragment_closure(&seq, &[], depth));
        }
        assert!(in_fragment_closure(&seq, std::slice::from_ref(&seq), 0));
        assert!(in_fragment_closure(&neg(seq.clone()), std::slice::from_ref(&seq), 1));
    }

    #[test]
    fn closure_uses_substitution_instances() {
        let g = Formula::sup_seq(Schema::indexed("i", Formula::dist(x(), Term::indexed("c", IndexExpr::var("i")))));
        let inst = substitute(&g, "x", &Term::constant("e"));
        assert!(!in_fragment_closure(&inst, std::slice::from_ref(&g), 0));
        assert!(in_fragment_closure(&inst, std::slice::from_ref(&g), 1));
        // renamed bound index is the same generator
        let renamed =
            Formula::sup_seq(Schema::indexed("j", Formula::dist(x(), Term::indexed("c", IndexExpr::var("j")))));
        assert!(in_fragment_closure(&renamed, &[g], 0));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::sup("x", p(vec![x()]));
        let b = Formula::sup("y", p(vec![Term::var("y")]));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &p(vec![x()])));
        let c = Formula::sup("y", p(vec![x()]));
        assert!(!alpha_eq(&a, &c));
    }
}
