//! Ordinals below epsilon-zero in Cantor normal form, and the cardinals used
//! as index-set sizes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::parser::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("{0} is not a successor ordinal")]
    NotSuccessor(Ordinal),
    #[error("ordinal terms are not in Cantor normal form")]
    NotNormal,
    #[error("finite cardinal arithmetic overflowed")]
    Overflow,
}

/// `sum of w^exp * coeff` with strictly decreasing exponents and positive
/// coefficients. The empty sum is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::finite(1))
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// `w^e * c`, zero when `c == 0`.
    pub fn omega_pow_mul(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    /// Builds an ordinal from explicit CNF terms, rejecting anything that is
    /// not already normal.
    pub fn from_cnf(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        let decreasing = terms.windows(2).all(|w| w[0].0 > w[1].0);
        if !decreasing || terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalError::NotNormal);
        }
        Ok(Ordinal { terms })
    }

    pub fn cnf(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn succ(&self) -> Self {
        self.add(&Self::finite(1))
    }

    pub fn pred(&self) -> Result<Self, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotSuccessor(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor is nonzero");
        if last.1 == 1 {
            terms.pop();
        } else {
            last.1 -= 1;
        }
        Ok(Ordinal { terms })
    }

    /// Ordinal sum `self + other`; terms of `self` below the leading exponent
    /// of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Self {
        let Some((lead, lead_c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> =
            self.terms.iter().take_while(|(e, _)| e > lead).cloned().collect();
        let mut rest = other.terms.iter();
        if let Some((_, c)) = self.terms.iter().find(|(e, _)| e == lead) {
            rest.next();
            terms.push((lead.clone(), c + lead_c));
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Largest element of a non-empty finite set.
    pub fn sup<'a, I: IntoIterator<Item = &'a Ordinal>>(set: I) -> Option<Ordinal> {
        set.into_iter().max().cloned()
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn is_atomic(s: &str) -> bool {
    !s.contains(['+', '*', '^'])
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            if *e == Ordinal::finite(1) {
                f.write_str("w")?;
            } else {
                let exp = e.to_string();
                if is_atomic(&exp) {
                    write!(f, "w^{exp}")?;
                } else {
                    write!(f, "w^({exp})")?;
                }
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parser::parse_ordinal(s)
    }
}

/// Cardinality of an index set: a natural number or `aleph(i)`.
///
/// The derived order puts every finite cardinal below every aleph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Finite(u64),
    Aleph(Ordinal),
}

impl Cardinal {
    pub fn aleph0() -> Self {
        Cardinal::Aleph(Ordinal::zero())
    }

    pub fn aleph1() -> Self {
        Cardinal::Aleph(Ordinal::finite(1))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cardinal::Aleph(_))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn checked_sum(&self, other: &Cardinal) -> Result<Cardinal, OrdinalError> {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => {
                a.checked_add(*b).map(Cardinal::Finite).ok_or(OrdinalError::Overflow)
            }
            _ => Ok(self.clone().max(other.clone())),
        }
    }

    pub fn checked_product(&self, other: &Cardinal) -> Result<Cardinal, OrdinalError> {
        match (self, other) {
            (Cardinal::Finite(0), _) | (_, Cardinal::Finite(0)) => Ok(Cardinal::Finite(0)),
            (Cardinal::Finite(a), Cardinal::Finite(b)) => {
                a.checked_mul(*b).map(Cardinal::Finite).ok_or(OrdinalError::Overflow)
            }
            _ => Ok(self.clone().max(other.clone())),
        }
    }

    /// Cardinal sum. Panics only if a finite sum leaves `u64`.
    pub fn sum(&self, other: &Cardinal) -> Cardinal {
        self.checked_sum(other).expect("finite cardinal sum overflowed u64")
    }

    /// Cardinal product. Panics only if a finite product leaves `u64`.
    pub fn product(&self, other: &Cardinal) -> Cardinal {
        self.checked_product(other).expect("finite cardinal product overflowed u64")
    }

    pub fn lt_kappa(&self, kappa: &KappaBound) -> bool {
        kappa.admits(self)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph(i) => match i.as_finite() {
                Some(0) => f.write_str("w"),
                Some(1) => f.write_str("w1"),
                _ => write!(f, "aleph({i})"),
            },
        }
    }
}

impl FromStr for Cardinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parser::parse_cardinal(s)
    }
}

/// Upper bound on admissible index cardinalities: a fixed infinite cardinal
/// (strict) or no bound at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum KappaBound {
    #[default]
    AllOrdinals,
    Bounded(Cardinal),
}

impl KappaBound {
    /// `None` unless `c` is infinite.
    pub fn bounded(c: Cardinal) -> Option<Self> {
        c.is_infinite().then_some(KappaBound::Bounded(c))
    }

    pub fn admits(&self, c: &Cardinal) -> bool {
        match self {
            KappaBound::AllOrdinals => true,
            KappaBound::Bounded(b) => c < b,
        }
    }
}

impl fmt::Display for KappaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaBound::AllOrdinals => f.write_str("ord"),
            KappaBound::Bounded(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for KappaBound {
    type Err = ParseError;

    /// `ord` for the unbounded hierarchy, otherwise an infinite cardinal.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "ord" {
            return Ok(KappaBound::AllOrdinals);
        }
        let c: Cardinal = s.parse()?;
        KappaBound::bounded(c).ok_or_else(|| {
            ParseError::new(0..s.len(), "kappa must be an infinite cardinal or `ord`", ["w", "w1", "aleph(", "ord"])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare() {
        assert_eq!(o("0").cmp(&o("0")), Ordering::Equal);
        assert_eq!(o("3").cmp(&o("w")), Ordering::Less);
        assert_eq!(o("w+1").cmp(&o("w*2")), Ordering::Less);
        assert!(o("w^w") > o("w^5*100+w"));
    }

    #[test]
    fn successor_and_predecessor() {
        assert_eq!(o("0").succ(), o("1"));
        assert_eq!(o("w").succ(), o("w+1"));
        assert_eq!(o("w*2+3").succ(), o("w*2+4"));
        assert_eq!(o("w*2+3").succ(), o("w*2+3").add(&o("1")));
        assert_eq!(o("1").pred().unwrap(), o("0"));
        assert_eq!(o("w+5").pred().unwrap(), o("w+4"));
        assert_eq!(o("w").pred(), Err(OrdinalError::NotSuccessor(o("w"))));
        assert!(o("0").pred().is_err());
    }

    #[test]
    fn addition() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("3")), o("w+3"));
        assert_eq!(o("w+2").add(&o("w")), o("w*2"));
        assert_eq!(o("w^2+w").add(&o("w^2")), o("w^2*2"));
    }

    #[test]
    fn supremum_and_limits() {
        assert_eq!(Ordinal::sup(&[o("0"), o("1"), o("2")]), Some(o("2")));
        assert_eq!(Ordinal::sup(&[o("w"), o("5")]), Some(o("w")));
        assert_eq!(Ordinal::sup(&[o("w+1"), o("w*2")]), Some(o("w*2")));
        assert!(!o("0").is_limit());
        assert!(o("w").is_limit());
        assert!(!o("w+1").is_limit());
    }

    #[test]
    fn rendering() {
        for s in ["0", "3", "w", "w+1", "w*2", "w^2", "w^w", "w^(w+1)*3+w^2+7"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("1+w").to_string(), "w");
    }

    #[test]
    fn cardinal_arithmetic() {
        let w = Cardinal::aleph0();
        let w1 = Cardinal::aleph1();
        assert_eq!(Cardinal::Finite(3).sum(&w), w);
        assert_eq!(w.product(&w1), w1);
        assert_eq!(Cardinal::Finite(2).sum(&Cardinal::Finite(3)), Cardinal::Finite(5));
        assert_eq!(w.product(&Cardinal::Finite(0)), Cardinal::Finite(0));
        assert!(Cardinal::Finite(u64::MAX).checked_sum(&Cardinal::Finite(1)).is_err());
        assert!(Cardinal::Finite(1_000_000) < w);
    }

    #[test]
    fn kappa() {
        let w = Cardinal::aleph0();
        assert!(w.lt_kappa(&KappaBound::AllOrdinals));
        assert!(!w.lt_kappa(&KappaBound::Bounded(w.clone())));
        assert!(Cardinal::Finite(7).lt_kappa(&KappaBound::Bounded(w.clone())));
        assert_eq!("ord".parse::<KappaBound>().unwrap(), KappaBound::AllOrdinals);
        assert_eq!("w1".parse::<KappaBound>().unwrap(), KappaBound::Bounded(Cardinal::aleph1()));
        assert!("5".parse::<KappaBound>().is_err());
        assert!(KappaBound::bounded(Cardinal::Finite(3)).is_none());
    }

    #[test]
    fn cardinal_rendering() {
        for s in ["0", "17", "w", "w1", "aleph(2)", "aleph(w+1)"] {
            assert_eq!(s.parse::<Cardinal>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn from_cnf_checks_normality() {
        assert!(Ordinal::from_cnf(vec![(o("1"), 1), (o("2"), 1)]).is_err());
        assert!(Ordinal::from_cnf(vec![(o("1"), 0)]).is_err());
        assert_eq!(Ordinal::from_cnf(vec![(o("1"), 2), (o("0"), 1)]).unwrap(), o("w*2+1"));
    }
}
