//! Metric signatures and moduli of uniform continuity.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational01;

/// Names that the formula grammar claims for itself.
pub const RESERVED: &[&str] = &["d", "sup", "inf", "Vee", "Wedge", "rat", "each", "tail", "cycle"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared more than once")]
    Duplicate(String),
    #[error("`{0}` is reserved and cannot name a symbol")]
    Reserved(String),
    #[error("`{0}` is not a valid symbol name")]
    BadName(String),
    #[error("symbol `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("invalid modulus: {0}")]
    Modulus(String),
}

/// A modulus of uniform continuity `δ: Q∩(0,1) → Q∩(0,1)`.
///
/// The four families below are the finitely presentable ones. All of them are
/// nondecreasing in `ε`, which [`Modulus::violation_threshold`] relies on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Modulus {
    /// `δ(ε) = ε` (1-Lipschitz).
    Identity,
    /// `δ(ε) = ε / k`, capped at `(1 + ε) / 2` so it stays below 1.
    Linear { slope: PositiveRational },
    /// `δ(ε) = c` for a fixed `c ∈ (0, 1)`.
    Constant { value: Rational01 },
    /// Sampled `(ε, δ(ε))` pairs; see [`Modulus::delta`] for the extension rule.
    Table { samples: Vec<(Rational01, Rational01)> },
}

/// A strictly positive rational, used for Lipschitz slopes (which may exceed 1).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PositiveRational(BigRational);

impl PositiveRational {
    pub fn new(value: BigRational) -> Option<Self> {
        (value > BigRational::zero()).then_some(PositiveRational(value))
    }

    pub fn integer(k: u64) -> Option<Self> {
        Self::new(BigRational::from_integer(k.into()))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for PositiveRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for PositiveRational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn in_open_unit(q: &Rational01) -> bool {
    !q.is_zero() && !q.is_one()
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

impl Modulus {
    pub fn linear(slope: PositiveRational) -> Self {
        Modulus::Linear { slope }
    }

    pub fn constant(value: Rational01) -> Result<Self, SignatureError> {
        if !in_open_unit(&value) {
            return Err(SignatureError::Modulus(format!("constant modulus {value} must lie in (0, 1)")));
        }
        Ok(Modulus::Constant { value })
    }

    /// Validates a sample table: `ε` strictly increasing, `δ` nondecreasing,
    /// everything inside `(0, 1)`, at least one sample.
    pub fn table(samples: Vec<(Rational01, Rational01)>) -> Result<Self, SignatureError> {
        if samples.is_empty() {
            return Err(SignatureError::Modulus("table modulus needs at least one sample".into()));
        }
        for (eps, delta) in &samples {
            if !in_open_unit(eps) || !in_open_unit(delta) {
                return Err(SignatureError::Modulus(format!("table sample {eps}:{delta} must lie in (0, 1)")));
            }
        }
        for pair in samples.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(SignatureError::Modulus("table samples must be strictly increasing in ε".into()));
            }
            if pair[0].1 > pair[1].1 {
                return Err(SignatureError::Modulus("table samples must be nondecreasing in δ".into()));
            }
        }
        Ok(Modulus::Table { samples })
    }

    /// Evaluates `δ(ε)` for `ε ∈ (0, 1)`.
    ///
    /// Table rule: at or above the first sample, use the value at the largest
    /// sample `ε' <= ε`; below it, scale the first value by `ε / ε_1`.
    pub fn delta(&self, eps: &Rational01) -> Rational01 {
        match self {
            Modulus::Identity => eps.clone(),
            Modulus::Linear { slope } => {
                let scaled = eps.as_big() / slope.as_big();
                let cap = (BigRational::one() + eps.as_big()) / two();
                Rational01::clamp(scaled.min(cap))
            }
            Modulus::Constant { value } => value.clone(),
            Modulus::Table { samples } => {
                let (first_eps, first_delta) = &samples[0];
                if eps < first_eps {
                    return Rational01::clamp(first_delta.as_big() * eps.as_big() / first_eps.as_big());
                }
                samples
                    .iter()
                    .rev()
                    .find(|(e, _)| e <= eps)
                    .map(|(_, d)| d.clone())
                    .expect("eps at or above first sample")
            }
        }
    }

    /// `inf { ε ∈ (0,1) : δ(ε) > distance }`, or `None` when no such `ε`
    /// exists. Because every family is nondecreasing, the set of such `ε` is
    /// an up-set, so any `ε` strictly above the threshold also qualifies.
    pub fn violation_threshold(&self, distance: &Rational01) -> Option<BigRational> {
        let d = &distance.as_big();
        match self {
            Modulus::Identity => Some(d.clone()),
            Modulus::Constant { value } => (&value.as_big() > d).then(BigRational::zero),
            Modulus::Linear { slope } => {
                let by_slope = slope.as_big() * d;
                let by_cap = two() * d - BigRational::one();
                Some(by_slope.max(by_cap).max(BigRational::zero()))
            }
            Modulus::Table { samples } => {
                let (first_eps, first_delta) = &samples[0];
                if &first_delta.as_big() > d {
                    Some(d * first_eps.as_big() / first_delta.as_big())
                } else {
                    samples.iter().find(|(_, delta)| &delta.as_big() > d).map(|(eps, _)| eps.as_big())
                }
            }
        }
    }

    /// ε values a table modulus was sampled at (empty for the other kinds).
    pub fn sample_points(&self) -> Vec<Rational01> {
        match self {
            Modulus::Table { samples } => samples.iter().map(|(e, _)| e.clone()).collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Identity => write!(f, "identity"),
            Modulus::Linear { slope } => write!(f, "linear {slope}"),
            Modulus::Constant { value } => write!(f, "constant {value}"),
            Modulus::Table { samples } => {
                write!(f, "table")?;
                for (e, d) in samples {
                    write!(f, " {e}:{d}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolDecl {
    pub name: String,
    pub arity: usize,
    pub modulus: Modulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Function,
    Predicate,
    Constant,
    Family,
}

/// Function, predicate and constant symbols, plus countable constant families
/// `c[0], c[1], …`. Names are unique across all four categories.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Signature {
    functions: Vec<SymbolDecl>,
    predicates: Vec<SymbolDecl>,
    constants: Vec<String>,
    families: Vec<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn claim(&self, name: &str) -> Result<(), SignatureError> {
        if RESERVED.contains(&name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        if !is_identifier(name) {
            return Err(SignatureError::BadName(name.to_string()));
        }
        if self.kind_of(name).is_some() {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize, modulus: Modulus) -> Result<(), SignatureError> {
        self.claim(name)?;
        if arity == 0 {
            return Err(SignatureError::ZeroArity(name.to_string()));
        }
        self.functions.push(SymbolDecl { name: name.to_string(), arity, modulus });
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize, modulus: Modulus) -> Result<(), SignatureError> {
        self.claim(name)?;
        if arity == 0 {
            return Err(SignatureError::ZeroArity(name.to_string()));
        }
        self.predicates.push(SymbolDecl { name: name.to_string(), arity, modulus });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        self.claim(name)?;
        self.constants.push(name.to_string());
        Ok(())
    }

    pub fn add_family(&mut self, name: &str) -> Result<(), SignatureError> {
        self.claim(name)?;
        self.families.push(name.to_string());
        Ok(())
    }

    pub fn with_function(mut self, name: &str, arity: usize, modulus: Modulus) -> Result<Self, SignatureError> {
        self.add_function(name, arity, modulus)?;
        Ok(self)
    }

    pub fn with_predicate(mut self, name: &str, arity: usize, modulus: Modulus) -> Result<Self, SignatureError> {
        self.add_predicate(name, arity, modulus)?;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, SignatureError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn with_family(mut self, name: &str) -> Result<Self, SignatureError> {
        self.add_family(name)?;
        Ok(self)
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.function(name).is_some() {
            Some(SymbolKind::Function)
        } else if self.predicate(name).is_some() {
            Some(SymbolKind::Predicate)
        } else if self.constants.iter().any(|c| c == name) {
            Some(SymbolKind::Constant)
        } else if self.families.iter().any(|c| c == name) {
            Some(SymbolKind::Family)
        } else {
            None
        }
    }

    pub fn function(&self, name: &str) -> Option<&SymbolDecl> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn predicate(&self, name: &str) -> Option<&SymbolDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn functions(&self) -> &[SymbolDecl] {
        &self.functions
    }

    pub fn predicates(&self) -> &[SymbolDecl] {
        &self.predicates
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn families(&self) -> &[String] {
        &self.families
    }

    pub fn symbol_names(&self) -> BTreeSet<&str> {
        self.functions
            .iter()
            .chain(&self.predicates)
            .map(|s| s.name.as_str())
            .chain(self.constants.iter().map(String::as_str))
            .chain(self.families.iter().map(String::as_str))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational01 {
        Rational01::of(p, d)
    }

    #[test]
    fn names_are_unique_across_categories() {
        let sig = Signature::new().with_constant("c").unwrap();
        assert_eq!(sig.clone().with_predicate("c", 1, Modulus::Identity), Err(SignatureError::Duplicate("c".into())));
        assert_eq!(sig.with_family("d"), Err(SignatureError::Reserved("d".into())));
        assert_eq!(
            Signature::new().with_function("f", 0, Modulus::Identity),
            Err(SignatureError::ZeroArity("f".into()))
        );
    }

    #[test]
    fn table_extension_rule() {
        let m = Modulus::table(vec![(q(1, 4), q(1, 8)), (q(1, 2), q(1, 4))]).unwrap();
        // below first sample: scaled, never above the first value
        assert_eq!(m.delta(&q(1, 8)), q(1, 16));
        assert_eq!(m.delta(&q(1, 4)), q(1, 8));
        assert_eq!(m.delta(&q(3, 8)), q(1, 8));
        assert_eq!(m.delta(&q(1, 2)), q(1, 4));
        assert_eq!(m.delta(&q(9, 10)), q(1, 4));
    }

    #[test]
    fn table_rejects_bad_samples() {
        assert!(Modulus::table(vec![]).is_err());
        assert!(Modulus::table(vec![(q(1, 2), q(1, 4)), (q(1, 4), q(1, 8))]).is_err());
        assert!(Modulus::table(vec![(q(1, 4), q(1, 2)), (q(1, 2), q(1, 4))]).is_err());
        assert!(Modulus::table(vec![(q(1, 4), Rational01::one())]).is_err());
        assert!(Modulus::constant(Rational01::zero()).is_err());
    }

    #[test]
    fn linear_modulus_stays_below_one() {
        let half = PositiveRational::new(BigRational::new(1.into(), 2.into())).unwrap();
        let m = Modulus::linear(half);
        assert_eq!(m.delta(&q(1, 4)), q(1, 2));
        // ε/k = 8/5 would exceed 1; the cap gives (1 + 4/5)/2
        assert_eq!(m.delta(&q(4, 5)), q(9, 10));
        let two = Modulus::linear(PositiveRational::integer(2).unwrap());
        assert_eq!(two.delta(&q(1, 2)), q(1, 4));
    }

    /// Brute-force check of the threshold against `delta` on a fine grid.
    #[test]
    fn violation_threshold_matches_grid_scan() {
        let moduli = vec![
            Modulus::Identity,
            Modulus::constant(q(1, 3)).unwrap(),
            Modulus::linear(PositiveRational::integer(3).unwrap()),
            Modulus::linear(PositiveRational::new(BigRational::new(2.into(), 3.into())).unwrap()),
            Modulus::table(vec![(q(1, 5), q(1, 10)), (q(1, 2), q(1, 3)), (q(3, 4), q(1, 2))]).unwrap(),
        ];
        let grid: Vec<Rational01> = (1..240).map(|k| q(k, 240)).collect();
        for m in &moduli {
            for dist in [q(0, 1), q(1, 12), q(1, 5), q(1, 3), q(1, 2), q(2, 3), Rational01::one()] {
                let threshold = m.violation_threshold(&dist);
                for eps in &grid {
                    let violates = m.delta(eps) > dist;
                    match &threshold {
                        None => assert!(!violates, "{m} d={dist} eps={eps}"),
                        Some(t) => {
                            if &eps.as_big() > t {
                                assert!(violates, "{m} d={dist} eps={eps}");
                            }
                            if &eps.as_big() < t {
                                assert!(!violates, "{m} d={dist} eps={eps}");
                            }
                        }
                    }
                }
            }
        }
    }
}
