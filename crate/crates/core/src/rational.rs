//! Exact rationals restricted to the unit interval.
//!
//! Every truth value, distance and threshold in the crate is a [`Rational01`].
//! Arithmetic that can leave `[0, 1]` (for instance `1 - a + b` inside the
//! implication clause) is done on [`BigRational`] and clamped back.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("rational `{0}` is not in reduced form")]
    NotReduced(String),
    #[error("rational `{0}` lies outside [0, 1]")]
    OutOfRange(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// An exact rational number `p/q` with `0 <= p/q <= 1`, always stored reduced.
///
/// Values whose numerator and denominator fit in a `u64` are kept inline, so
/// the common case never allocates; larger ones fall back to [`BigRational`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational01(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `numer <= denom`, `denom >= 1`.
    Small { numer: u64, denom: u64 },
    /// Reduced and too large for `Small`.
    Big(Box<BigRational>),
}

impl Rational01 {
    pub fn zero() -> Self {
        Rational01(Repr::Small { numer: 0, denom: 1 })
    }

    pub fn one() -> Self {
        Rational01(Repr::Small { numer: 1, denom: 1 })
    }

    /// Builds `numer/denom`, reducing it. Fails when the value leaves `[0, 1]`.
    pub fn new(numer: i64, denom: i64) -> Result<Self, RationalError> {
        if denom == 0 {
            return Err(RationalError::ZeroDenominator(format!("{numer}/{denom}")));
        }
        Self::from_big(BigRational::new(numer.into(), denom.into()))
    }

    /// Like [`Rational01::new`] but panics on an out-of-range value. Meant for
    /// literals in tests and examples.
    pub fn of(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn from_big(value: BigRational) -> Result<Self, RationalError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(RationalError::OutOfRange(value.to_string()));
        }
        Ok(Self::from_reduced(value))
    }

    /// Clamps an arbitrary rational into `[0, 1]`.
    pub fn clamp(value: BigRational) -> Self {
        if value.is_negative() {
            Self::zero()
        } else if value > BigRational::one() {
            Self::one()
        } else {
            Self::from_reduced(value)
        }
    }

    fn from_reduced(value: BigRational) -> Self {
        match (value.numer().to_u64(), value.denom().to_u64()) {
            (Some(numer), Some(denom)) => Rational01(Repr::Small { numer, denom }),
            _ => Rational01(Repr::Big(Box::new(value))),
        }
    }

    /// `numer / denom` from an unreduced fraction in `[0, 1]`.
    fn from_wide(numer: u128, denom: u128) -> Self {
        let g = numer.gcd(&denom);
        let (n, d) = (numer / g, denom / g);
        match (u64::try_from(n), u64::try_from(d)) {
            (Ok(numer), Ok(denom)) => Rational01(Repr::Small { numer, denom }),
            _ => Rational01(Repr::Big(Box::new(BigRational::new(n.into(), d.into())))),
        }
    }

    fn small(&self) -> Option<(u128, u128)> {
        match self.0 {
            Repr::Small { numer, denom } => Some((numer as u128, denom as u128)),
            Repr::Big(_) => None,
        }
    }

    pub fn as_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { numer, denom } => BigRational::new_raw((*numer).into(), (*denom).into()),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn into_big(self) -> BigRational {
        match self.0 {
            Repr::Big(b) => *b,
            small => Rational01(small).as_big(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { numer, .. } => (*numer).into(),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { denom, .. } => (*denom).into(),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { numer: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { numer: 1, denom: 1 })
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        match self.small() {
            Some((n, d)) => Self::from_wide(d - n, d),
            None => Self::clamp(BigRational::one() - self.as_big()),
        }
    }

    /// Łukasiewicz implication `min{1 - self + other, 1}`.
    pub fn implies(&self, other: &Self) -> Self {
        if self <= other {
            return Self::one();
        }
        match (self.small(), other.small()) {
            // 1 - a + b with a > b stays inside (0, 1)
            (Some((an, ad)), Some((bn, bd))) => Self::from_wide(ad * bd - an * bd + bn * ad, ad * bd),
            _ => Self::clamp(BigRational::one() - self.as_big() + other.as_big()),
        }
    }

    /// Truncated difference `max{self - other, 0}`.
    pub fn monus(&self, other: &Self) -> Self {
        if self <= other {
            return Self::zero();
        }
        match (self.small(), other.small()) {
            (Some((an, ad)), Some((bn, bd))) => Self::from_wide(an * bd - bn * ad, ad * bd),
            _ => Self::clamp(self.as_big() - other.as_big()),
        }
    }

    /// Truncated sum `min{self + other, 1}`.
    pub fn bounded_sum(&self, other: &Self) -> Self {
        Self::clamp(self.as_big() + other.as_big())
    }

    pub fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.monus(other)
        } else {
            other.monus(self)
        }
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        Self::clamp((self.as_big() + other.as_big()) / BigRational::from_integer(2.into()))
    }

    pub fn to_f64(&self) -> f64 {
        match self.0 {
            Repr::Small { numer, denom } => numer as f64 / denom as f64,
            Repr::Big(ref b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl PartialOrd for Rational01 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational01 {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.small(), other.small()) {
            (Some((an, ad)), Some((bn, bd))) => (an * bd).cmp(&(bn * ad)),
            _ => self.as_big().cmp(&other.as_big()),
        }
    }
}

impl Default for Rational01 {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { numer, denom: 1 } => write!(f, "{numer}"),
            Repr::Small { numer, denom } => write!(f, "{numer}/{denom}"),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational01 {
    type Err = RationalError;

    /// Accepts only canonical text: `0`, `1`, or `p/q` with `q > 1` and
    /// `gcd(p, q) = 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        match s.split_once('/') {
            None => {
                if !digits(s) {
                    return Err(RationalError::Malformed(s.to_string()));
                }
                match s {
                    "0" => Ok(Self::zero()),
                    "1" => Ok(Self::one()),
                    _ => Err(RationalError::OutOfRange(s.to_string())),
                }
            }
            Some((p, q)) => {
                if !digits(p) || !digits(q) {
                    return Err(RationalError::Malformed(s.to_string()));
                }
                let p: BigInt = p.parse().map_err(|_| RationalError::Malformed(s.to_string()))?;
                let q: BigInt = q.parse().map_err(|_| RationalError::Malformed(s.to_string()))?;
                if q.is_zero() {
                    return Err(RationalError::ZeroDenominator(s.to_string()));
                }
                if q.is_one() || !p.gcd(&q).is_one() || p.is_zero() {
                    return Err(RationalError::NotReduced(s.to_string()));
                }
                if p > q {
                    return Err(RationalError::OutOfRange(s.to_string()));
                }
                Ok(Self::from_reduced(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for Rational01 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational01 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The rational with the smallest denominator strictly inside `(lo, hi)`.
/// `hi = None` stands for `+∞`. Requires `0 <= lo < hi`.
pub fn simplest_between(lo: &BigRational, hi: Option<&BigRational>) -> BigRational {
    let floor = lo.floor();
    let next = &floor + BigRational::one();
    match hi {
        None => return next,
        Some(h) if &next < h => return next,
        _ => {}
    }
    let hi = hi.expect("finite upper bound");
    let frac_lo = lo - &floor;
    let frac_hi = hi - &floor;
    // x in (frac_lo, frac_hi) iff 1/x in (1/frac_hi, 1/frac_lo)
    let inv_lo = frac_hi.recip();
    let inv_hi = if frac_lo.is_zero() { None } else { Some(frac_lo.recip()) };
    floor + simplest_between(&inv_lo, inv_hi.as_ref()).recip()
}

/// A fixed enumeration of `Q ∩ (0, 1)`: `1/2, 1/3, 2/3, 1/4, 3/4, 1/5, …`,
/// ordered by denominator then numerator, reduced fractions only.
pub fn enumerate_open_unit(index: u64) -> Rational01 {
    let mut remaining = index;
    let mut q: u64 = 2;
    loop {
        let count = (1..q).filter(|p| p.gcd(&q) == 1).count() as u64;
        if remaining < count {
            let p = (1..q).filter(|p| p.gcd(&q) == 1).nth(remaining as usize).expect("index within totient count");
            return Rational01::from_wide(p.into(), q.into());
        }
        remaining -= count;
        q += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parses_canonical_forms_only() {
        assert_eq!("1/2".parse::<Rational01>().unwrap(), Rational01::of(1, 2));
        assert_eq!("0".parse::<Rational01>().unwrap(), Rational01::zero());
        assert_eq!("1".parse::<Rational01>().unwrap(), Rational01::one());
        assert!(matches!("2/4".parse::<Rational01>(), Err(RationalError::NotReduced(_))));
        assert!(matches!("1/1".parse::<Rational01>(), Err(RationalError::NotReduced(_))));
        assert!(matches!("0/3".parse::<Rational01>(), Err(RationalError::NotReduced(_))));
        assert!(matches!("3/2".parse::<Rational01>(), Err(RationalError::OutOfRange(_))));
        assert!(matches!("2".parse::<Rational01>(), Err(RationalError::OutOfRange(_))));
        assert!(matches!("1/0".parse::<Rational01>(), Err(RationalError::ZeroDenominator(_))));
        assert!(matches!("-1/2".parse::<Rational01>(), Err(RationalError::Malformed(_))));
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(Rational01::of(2, 4).to_string(), "1/2");
        assert_eq!(Rational01::of(3, 3).to_string(), "1");
        assert_eq!(Rational01::of(0, 7).to_string(), "0");
    }

    #[test]
    fn implication_clause() {
        let a = Rational01::of(7, 10);
        let b = Rational01::of(2, 5);
        assert_eq!(a.implies(&b), Rational01::of(7, 10));
        assert_eq!(b.implies(&a), Rational01::one());
    }

    #[test]
    fn simplest_rational_inside_interval() {
        assert_eq!(simplest_between(&big(1, 4), Some(&big(1, 1))), big(1, 2));
        assert_eq!(simplest_between(&big(0, 1), Some(&big(1, 3))), big(1, 4));
        assert_eq!(simplest_between(&big(1, 3), Some(&big(1, 2))), big(2, 5));
        assert_eq!(simplest_between(&big(5, 8), None), big(1, 1));
        let lo = big(7, 19);
        let hi = big(8, 21);
        let s = simplest_between(&lo, Some(&hi));
        assert!(lo < s && s < hi);
    }

    #[test]
    fn enumeration_of_open_unit_rationals() {
        let first: Vec<String> = (0..7).map(|i| enumerate_open_unit(i).to_string()).collect();
        assert_eq!(first, ["1/2", "1/3", "2/3", "1/4", "3/4", "1/5", "2/5"]);
    }

    #[test]
    fn serde_uses_fraction_strings() {
        let json = serde_json::to_string(&Rational01::of(3, 4)).unwrap();
        assert_eq!(json, "\"3/4\"");
        let back: Rational01 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Rational01::of(3, 4));
    }

    fn reference(p: u128, q: u128) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn unit() -> impl Strategy<Value = BigRational> {
        // mixes inline values with ones that need the big fallback
        prop_oneof![
            (1u128..50).prop_flat_map(|q| (0..=q, Just(q))),
            (1u128..(1 << 100)).prop_flat_map(|q| (0..=q, Just(q))),
        ]
        .prop_map(|(p, q)| reference(p, q))
    }

    proptest! {
        #[test]
        fn arithmetic_matches_big_rationals(a in unit(), b in unit()) {
            let (x, y) = (Rational01::from_big(a.clone()).unwrap(), Rational01::from_big(b.clone()).unwrap());
            let one = BigRational::one();
            prop_assert_eq!(x.cmp(&y), a.cmp(&b));
            prop_assert_eq!(x.as_big(), a.clone());
            prop_assert_eq!(x.implies(&y).as_big(), (&one - &a + &b).min(one.clone()));
            prop_assert_eq!(x.monus(&y).as_big(), (&a - &b).max(BigRational::zero()));
            prop_assert_eq!(x.complement().as_big(), &one - &a);
            prop_assert_eq!(x.abs_diff(&y).as_big(), (&a - &b).abs());
            prop_assert_eq!(x.to_string().parse::<Rational01>().unwrap(), x.clone());
            prop_assert_eq!(x == y, a == b);
        }
    }
}
