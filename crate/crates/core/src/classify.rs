//! Descriptors, Reid ranks and class membership.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ordinal::{Cardinal, KappaBound, Ordinal};
use crate::parser::{parse_ordinal, ParseError};
use crate::term::{Group, Kind, Member, Ramp, Term};

/// The complete class invariant of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Zero,
    Fin(u64),
    Pure(Kind, Ordinal),
    Mixed(Ordinal),
}

impl Descriptor {
    pub fn is_finite_dimensional(&self) -> bool {
        matches!(self, Descriptor::Zero | Descriptor::Fin(_))
    }

    /// Least `alpha` with the term in `R_alpha`.
    pub fn reid_rank(&self) -> Ordinal {
        match self {
            Descriptor::Zero | Descriptor::Fin(_) => Ordinal::zero(),
            Descriptor::Pure(_, a) => a.clone(),
            Descriptor::Mixed(a) => a.succ(),
        }
    }

    pub fn satisfies(&self, q: &ClassQuery) -> bool {
        let rank = self.reid_rank();
        match q {
            ClassQuery::Fk => self.is_finite_dimensional(),
            ClassQuery::Reid => true,
            ClassQuery::R(a) => rank <= *a,
            ClassQuery::Rbelow(a) => rank < *a,
            ClassQuery::Pi(a) => self.in_product_class(Kind::Pi, a),
            ClassQuery::Sigma(a) => self.in_product_class(Kind::Sigma, a),
            ClassQuery::Delta(a) => {
                if a.is_zero() {
                    self.is_finite_dimensional()
                } else if let Ok(p) = a.pred() {
                    rank < *a || *self == Descriptor::Mixed(p)
                } else {
                    rank < *a
                }
            }
            ClassQuery::PPi(a) => self.is_pure(Kind::Pi, a),
            ClassQuery::PSigma(a) => self.is_pure(Kind::Sigma, a),
            ClassQuery::MR(a) => {
                if a.is_zero() {
                    *self == Descriptor::Fin(2)
                } else {
                    *self == Descriptor::Mixed(a.clone())
                }
            }
        }
    }

    fn is_pure(&self, kind: Kind, a: &Ordinal) -> bool {
        if a.is_zero() {
            *self == Descriptor::Fin(1)
        } else {
            *self == Descriptor::Pure(kind, a.clone())
        }
    }

    /// `F_k u R_{<a} u MR_{<a} u P(kind)_a`.
    fn in_product_class(&self, kind: Kind, a: &Ordinal) -> bool {
        match self {
            Descriptor::Zero | Descriptor::Fin(_) => true,
            Descriptor::Mixed(r) => r < a,
            Descriptor::Pure(k, r) => r < a || (*k == kind && r == a),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Zero => f.write_str("zero"),
            Descriptor::Fin(d) => write!(f, "fin dim {d}"),
            Descriptor::Pure(k, r) => write!(f, "pure {k} rank {r}"),
            Descriptor::Mixed(r) => write!(f, "mixed rank {r}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorRepr {
    class: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    dim: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rank: Option<String>,
}

impl Serialize for Descriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (class, dim, kind, rank) = match self {
            Descriptor::Zero => ("zero", None, None, None),
            Descriptor::Fin(d) => ("fin", Some(*d), None, None),
            Descriptor::Pure(k, r) => ("pure", None, Some(k.keyword().to_string()), Some(r.to_string())),
            Descriptor::Mixed(r) => ("mixed", None, None, Some(r.to_string())),
        };
        DescriptorRepr { class: class.into(), dim, kind, rank }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Descriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = DescriptorRepr::deserialize(d)?;
        let rank = || -> Result<Ordinal, D::Error> {
            let s = r.rank.as_deref().ok_or_else(|| D::Error::missing_field("rank"))?;
            parse_ordinal(s).map_err(D::Error::custom)
        };
        match r.class.as_str() {
            "zero" => Ok(Descriptor::Zero),
            "fin" => r.dim.map(Descriptor::Fin).ok_or_else(|| D::Error::missing_field("dim")),
            "mixed" => Ok(Descriptor::Mixed(rank()?)),
            "pure" => {
                let kind = match r.kind.as_deref() {
                    Some("pi") => Kind::Pi,
                    Some("sigma") => Kind::Sigma,
                    _ => return Err(D::Error::custom("pure descriptor needs kind pi or sigma")),
                };
                Ok(Descriptor::Pure(kind, rank()?))
            }
            other => Err(D::Error::unknown_variant(other, &["zero", "fin", "pure", "mixed"])),
        }
    }
}

/// A named class of the hierarchy, parameterized by an ordinal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassQuery {
    Fk,
    Pi(Ordinal),
    Sigma(Ordinal),
    Delta(Ordinal),
    R(Ordinal),
    Rbelow(Ordinal),
    PPi(Ordinal),
    PSigma(Ordinal),
    MR(Ordinal),
    Reid,
}

impl FromStr for ClassQuery {
    type Err = ParseError;

    /// `fk`, `reid`, or `name(ordinal)` with name one of `pi`, `sigma`,
    /// `delta`, `r`, `rbelow`, `ppi`, `psigma`, `mr`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        const NAMES: [&str; 10] = ["fk", "reid", "pi(", "sigma(", "delta(", "r(", "rbelow(", "ppi(", "psigma(", "mr("];
        let t = s.trim();
        match t {
            "fk" => return Ok(ClassQuery::Fk),
            "reid" => return Ok(ClassQuery::Reid),
            _ => {}
        }
        let bad = || ParseError::new(0..s.len(), "unknown class query", NAMES);
        let (name, rest) = t.split_once('(').ok_or_else(bad)?;
        let arg = rest.strip_suffix(')').ok_or_else(bad)?;
        let a = parse_ordinal(arg).map_err(|mut e| {
            let offset = s.len() - s.trim_start().len() + name.len() + 1;
            e.span.start += offset;
            e.span.end += offset;
            e
        })?;
        Ok(match name.trim() {
            "pi" => ClassQuery::Pi(a),
            "sigma" => ClassQuery::Sigma(a),
            "delta" => ClassQuery::Delta(a),
            "r" => ClassQuery::R(a),
            "rbelow" => ClassQuery::Rbelow(a),
            "ppi" => ClassQuery::PPi(a),
            "psigma" => ClassQuery::PSigma(a),
            "mr" => ClassQuery::MR(a),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for ClassQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, a) = match self {
            ClassQuery::Fk => return f.write_str("fk"),
            ClassQuery::Reid => return f.write_str("reid"),
            ClassQuery::Pi(a) => ("pi", a),
            ClassQuery::Sigma(a) => ("sigma", a),
            ClassQuery::Delta(a) => ("delta", a),
            ClassQuery::R(a) => ("r", a),
            ClassQuery::Rbelow(a) => ("rbelow", a),
            ClassQuery::PPi(a) => ("ppi", a),
            ClassQuery::PSigma(a) => ("psigma", a),
            ClassQuery::MR(a) => ("mr", a),
        };
        write!(f, "{name}({a})")
    }
}

/// Opposite-kind members of a node after same-kind flattening, as
/// `(count, rank)` pairs, plus limit markers contributed by ramps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankProfile {
    pub entries: Vec<(Cardinal, Ordinal)>,
    pub limits: Vec<Ordinal>,
}

impl RankProfile {
    /// Least `b` with fewer than `w` members of rank at least `b`.
    pub fn beta0(&self) -> Ordinal {
        let from_entries = self.entries.iter().filter(|(c, _)| c.is_infinite()).map(|(_, r)| r.succ());
        from_entries.chain(self.limits.iter().cloned()).max().unwrap_or_default()
    }
}

/// How a single group feeds its parent's classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Contribution {
    None,
    /// Finite-dimensional member: its share of the total dimension.
    Fin(Cardinal),
    /// Pure opposite-kind part (from a pure member, or a mixed member's
    /// opposite half) plus optionally a same-kind part to be flattened.
    Parts { opposite: Option<(Cardinal, Ordinal)>, same: Option<Ordinal> },
    Limit(Ordinal),
}

/// Classification of a node together with the data the rewrite rules need.
#[derive(Debug, Clone)]
pub(crate) struct NodeAnalysis {
    pub descriptor: Descriptor,
    pub profile: RankProfile,
    /// Groups carrying an opposite-kind part of finite count and rank at
    /// least `beta0`.
    pub exceptional: Vec<usize>,
}

pub(crate) fn contribution(kind: Kind, g: &Group) -> Contribution {
    match &g.member {
        Member::Ramp(r) => {
            // Every W_n vanishes when the base does, structurally or not.
            if descriptor(r.base()) == Descriptor::Zero {
                Contribution::None
            } else {
                Contribution::Limit(ramp_limit(r))
            }
        }
        Member::Closed(t) => match descriptor(t) {
            Descriptor::Zero => Contribution::None,
            Descriptor::Fin(d) => Contribution::Fin(g.card.product(&Cardinal::Finite(d))),
            Descriptor::Pure(k, r) if k == kind => Contribution::Parts { opposite: None, same: Some(r) },
            Descriptor::Pure(_, r) => Contribution::Parts { opposite: Some((g.card.clone(), r)), same: None },
            Descriptor::Mixed(r) => Contribution::Parts { opposite: Some((g.card.clone(), r.clone())), same: Some(r) },
        },
    }
}

/// `rank(W_1) + w`, the supremum of the ranks along the ramp.
pub(crate) fn ramp_limit(r: &Ramp) -> Ordinal {
    descriptor(&r.member_at(1)).reid_rank().add(&Ordinal::omega())
}

pub(crate) fn analyze(kind: Kind, groups: &[Group]) -> NodeAnalysis {
    let contributions: Vec<Contribution> = groups.iter().map(|g| contribution(kind, g)).collect();
    analyze_contributions(kind, &contributions)
}

pub(crate) fn analyze_contributions(kind: Kind, contributions: &[Contribution]) -> NodeAnalysis {
    let mut fin_total = Cardinal::Finite(0);
    let mut any_fin = false;
    let mut any_other = false;
    let mut profile = RankProfile::default();
    for c in contributions {
        match c {
            Contribution::None => {}
            Contribution::Fin(n) => {
                any_fin = true;
                fin_total = fin_total.sum(n);
            }
            Contribution::Parts { opposite, same } => {
                any_other = true;
                if let Some(e) = opposite {
                    profile.entries.push(e.clone());
                }
                match same {
                    Some(r) if r.is_limit() => profile.limits.push(r.clone()),
                    Some(r) => profile.entries.push((Cardinal::aleph0(), r.pred().expect("pure ranks are nonzero"))),
                    None => {}
                }
            }
            Contribution::Limit(l) => {
                any_other = true;
                profile.limits.push(l.clone());
            }
        }
    }
    if fin_total.is_infinite() {
        profile.entries.push((Cardinal::aleph0(), Ordinal::zero()));
    }
    if !any_other {
        let descriptor = match fin_total {
            _ if !any_fin => Descriptor::Zero,
            Cardinal::Finite(n) => Descriptor::Fin(n),
            Cardinal::Aleph(_) => Descriptor::Pure(kind, Ordinal::finite(1)),
        };
        return NodeAnalysis { descriptor, profile, exceptional: Vec::new() };
    }
    let beta0 = profile.beta0();
    let mut exceptional = Vec::new();
    let mut rho: Option<Ordinal> = None;
    for (i, c) in contributions.iter().enumerate() {
        if let Contribution::Parts { opposite: Some((n, r)), .. } = c {
            if n.is_finite() && *r >= beta0 {
                exceptional.push(i);
                if rho.as_ref().is_none_or(|m| r > m) {
                    rho = Some(r.clone());
                }
            }
        }
    }
    let descriptor = match rho {
        None => Descriptor::Pure(kind, beta0.clone()),
        Some(rho) if rho > beta0 => Descriptor::Pure(kind.opposite(), rho),
        Some(_) => Descriptor::Mixed(beta0),
    };
    NodeAnalysis { descriptor, profile, exceptional }
}

/// The descriptor of a term, without checking admissibility.
pub fn descriptor(t: &Term) -> Descriptor {
    match t {
        Term::Scalar => Descriptor::Fin(1),
        Term::Node(n) => analyze(n.kind(), n.groups()).descriptor,
    }
}

/// The rank profile of a node's members; empty for `k` and `0`.
pub fn rank_profile(t: &Term) -> RankProfile {
    match t.as_node() {
        Some(n) => analyze(n.kind(), n.groups()).profile,
        None => RankProfile::default(),
    }
}

/// Classifies an admissible term.
pub fn classify(t: &Term, kappa: &KappaBound) -> Result<Descriptor, Error> {
    t.validate(kappa)?;
    Ok(descriptor(t))
}

/// Least `alpha` such that the term lies in `R_alpha`.
pub fn rank_reid(t: &Term, kappa: &KappaBound) -> Result<Ordinal, Error> {
    Ok(classify(t, kappa)?.reid_rank())
}

pub fn member_of(t: &Term, q: &ClassQuery, kappa: &KappaBound) -> Result<bool, Error> {
    Ok(classify(t, kappa)?.satisfies(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn d(s: &str) -> Descriptor {
        classify(&parse(s).unwrap(), &KappaBound::AllOrdinals).unwrap()
    }

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn q(s: &str) -> ClassQuery {
        s.parse().unwrap()
    }

    #[test]
    fn basic_classes() {
        assert_eq!(d("k"), Descriptor::Fin(1));
        assert_eq!(d("0"), Descriptor::Zero);
        assert_eq!(d("pi{w: k}"), Descriptor::Pure(Kind::Pi, o("1")));
        assert_eq!(d("sigma{w: pi{w: k}}"), Descriptor::Pure(Kind::Sigma, o("2")));
        assert_eq!(d("pi{1: pi{w:k}, 1: sigma{w:k}}"), Descriptor::Mixed(o("1")));
        assert_eq!(d("pi{w: sigma{w:k}, 1: sigma{w1: pi{w:k}}}"), Descriptor::Mixed(o("2")));
        assert_eq!(d("pi{3: k, 2: k}"), Descriptor::Fin(5));
        assert_eq!(d("pi{w: 0, 2: k}"), Descriptor::Fin(2));
        assert_eq!(d("sigma{w: pi{3: k}}"), Descriptor::Pure(Kind::Sigma, o("1")));
    }

    #[test]
    fn limits() {
        assert_eq!(d("pi{w: ramp(sigma, w, k)}"), Descriptor::Pure(Kind::Pi, o("w")));
        assert_eq!(d("sigma{w: ramp(pi, w, k)}"), Descriptor::Pure(Kind::Sigma, o("w")));
        assert_eq!(d("sigma{1: ramp(pi, w, pi{w: ramp(sigma, w, k)})}"), Descriptor::Pure(Kind::Sigma, o("w*2")));
        assert_eq!(d("pi{1: ramp(sigma, w, 0)}"), Descriptor::Zero);
        assert_eq!(d("pi{w: ramp(sigma, w, k), 1: sigma{w: ramp(pi, w, k)}}"), Descriptor::Mixed(o("w")));
    }

    #[test]
    fn ranks() {
        let k = KappaBound::AllOrdinals;
        assert_eq!(rank_reid(&parse("k").unwrap(), &k).unwrap(), o("0"));
        assert_eq!(rank_reid(&parse("tower(pi, 3)").unwrap(), &k).unwrap(), o("3"));
        assert_eq!(rank_reid(&parse("pi{1: pi{w:k}, 1: sigma{w:k}}").unwrap(), &k).unwrap(), o("2"));
    }

    #[test]
    fn membership() {
        let k = KappaBound::AllOrdinals;
        let m = |t: &str, c: &str| member_of(&parse(t).unwrap(), &q(c), &k).unwrap();
        assert!(!m("pi{w:k}", "sigma(1)"));
        assert!(m("pi{w:k}", "sigma(2)"));
        assert!(m("pi{w:k}", "pi(1)"));
        assert!(m("k", "delta(0)"));
        assert!(m("pi{1:pi{w:k},1:sigma{w:k}}", "delta(2)"));
        assert!(!m("pi{1:pi{w:k},1:sigma{w:k}}", "delta(1)"));
        assert!(m("k", "ppi(0)"));
        assert!(m("k^2", "mr(0)"));
        assert!(m("pi{w: ramp(sigma, w, k)}", "rbelow(w+1)"));
        assert!(!m("pi{w: ramp(sigma, w, k)}", "delta(w)"));
        assert!(m("tower(sigma, 4)", "reid"));
    }

    #[test]
    fn queries_parse() {
        assert_eq!(q("fk"), ClassQuery::Fk);
        assert_eq!(q("delta(w+1)"), ClassQuery::Delta(o("w+1")));
        assert!("delta".parse::<ClassQuery>().is_err());
        assert!("zeta(1)".parse::<ClassQuery>().is_err());
        assert!("pi(w^)".parse::<ClassQuery>().is_err());
    }

    #[test]
    fn profile() {
        let p = rank_profile(&parse("pi{w: sigma{w:k}, 1: sigma{w1: pi{w:k}}, 1: ramp(sigma, w, k)}").unwrap());
        assert_eq!(p.entries, vec![(Cardinal::aleph0(), o("1")), (Cardinal::Finite(1), o("2"))]);
        assert_eq!(p.limits, vec![o("w")]);
        assert_eq!(p.beta0(), o("w"));
    }

    #[test]
    fn json_round_trip() {
        for s in ["0", "k^3", "pi{w:k}", "pi{1: pi{w:k}, 1: sigma{w:k}}", "pi{w: ramp(sigma, w, k)}"] {
            let desc = d(s);
            let json = serde_json::to_string(&desc).unwrap();
            assert_eq!(serde_json::from_str::<Descriptor>(&json).unwrap(), desc);
        }
        assert_eq!(serde_json::to_string(&d("pi{w:k}")).unwrap(), r#"{"class":"pure","kind":"pi","rank":"1"}"#);
    }

    #[test]
    fn ramp_over_a_vanishing_base_is_zero() {
        assert_eq!(d("sigma{1: ramp(sigma, w, sigma{2: 0})}"), Descriptor::Zero);
        assert_eq!(d("pi{w: k, 1: ramp(pi, w, pi{w: 0})}"), d("pi{w: k}"));
    }

    #[test]
    fn queries_print_and_reparse() {
        for q in ["fk", "reid", "pi(2)", "delta(w+1)", "mr(w^2)", "rbelow(0)", "psigma(3)"] {
            assert_eq!(q.parse::<ClassQuery>().unwrap().to_string(), q);
        }
    }

    #[test]
    fn validation_is_enforced() {
        let t = parse("pi{w: k}").unwrap();
        assert!(matches!(classify(&t, &KappaBound::Bounded(Cardinal::aleph0())), Err(Error::Validation(_))));
    }
}
