//! Banach-space expressions: the field `k`, bounded products and completed
//! sums over finitely many `(cardinality, member)` groups, and ramp families.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ordinal::{Cardinal, KappaBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pi,
    Sigma,
}

impl Kind {
    pub fn opposite(self) -> Kind {
        match self {
            Kind::Pi => Kind::Sigma,
            Kind::Sigma => Kind::Pi,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Pi => "pi",
            Kind::Sigma => "sigma",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("group cardinality must be at least 1")]
    BadCardinality,
    #[error("ramp wrap cardinality must be infinite, got {0}")]
    FiniteWrap(Cardinal),
}

/// The zero space is `Node(Pi, [])`; every other node has at least one group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Scalar,
    Node(Node),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    kind: Kind,
    groups: Arc<[Group]>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Group {
    pub card: Cardinal,
    pub member: Member,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Member {
    Closed(Term),
    Ramp(Ramp),
}

/// The family `W_0 = base`, `W_{n+1} = kind_n{wrap: W_n}` with kinds
/// alternating from `first`, indexed by `n` in `w`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ramp {
    first: Kind,
    wrap: Cardinal,
    base: Arc<Term>,
}

impl Ord for Group {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.member.cmp(&other.member).then_with(|| self.card.cmp(&other.card))
    }
}

impl PartialOrd for Group {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Group {
    pub fn new(card: Cardinal, member: Member) -> Self {
        Group { card, member }
    }

    pub fn closed(card: Cardinal, t: Term) -> Self {
        Group { card, member: Member::Closed(t) }
    }
}

impl Ramp {
    pub fn new(first: Kind, wrap: Cardinal, base: Term) -> Result<Self, TermError> {
        if !wrap.is_infinite() {
            return Err(TermError::FiniteWrap(wrap));
        }
        Ok(Ramp { first, wrap, base: Arc::new(base) })
    }

    pub fn first(&self) -> Kind {
        self.first
    }

    pub fn wrap(&self) -> &Cardinal {
        &self.wrap
    }

    pub fn base(&self) -> &Term {
        &self.base
    }

    pub fn with_base(&self, base: Term) -> Ramp {
        Ramp { first: self.first, wrap: self.wrap.clone(), base: Arc::new(base) }
    }

    /// Materializes `W_n`.
    pub fn member_at(&self, n: usize) -> Term {
        let mut t = (*self.base).clone();
        let mut kind = self.first;
        for _ in 0..n {
            t = Term::node_unchecked(kind, vec![Group::closed(self.wrap.clone(), t)]);
            kind = kind.opposite();
        }
        t
    }
}

impl Member {
    pub fn depth(&self) -> usize {
        match self {
            Member::Closed(t) => t.depth(),
            Member::Ramp(r) => r.base.depth() + 1,
        }
    }

    pub fn as_closed(&self) -> Option<&Term> {
        match self {
            Member::Closed(t) => Some(t),
            Member::Ramp(_) => None,
        }
    }

    /// Structurally the zero space, or a ramp over it.
    pub fn is_zero(&self) -> bool {
        match self {
            Member::Closed(t) => t.is_zero(),
            Member::Ramp(r) => r.base.is_zero(),
        }
    }
}

impl Term {
    pub fn zero() -> Self {
        Term::Node(Node { kind: Kind::Pi, groups: Arc::from(Vec::new()) })
    }

    /// Builds a node with its groups sorted; an empty list gives the zero
    /// space whatever the kind.
    pub fn node(kind: Kind, groups: Vec<Group>) -> Result<Self, TermError> {
        if groups.iter().any(|g| g.card == Cardinal::Finite(0)) {
            return Err(TermError::BadCardinality);
        }
        Ok(Self::node_unchecked(kind, groups))
    }

    pub(crate) fn node_unchecked(kind: Kind, mut groups: Vec<Group>) -> Self {
        debug_assert!(groups.iter().all(|g| g.card != Cardinal::Finite(0)));
        if groups.is_empty() {
            return Self::zero();
        }
        groups.sort();
        Term::Node(Node { kind, groups: Arc::from(groups) })
    }

    /// `l_inf(c, t)`.
    pub fn l_inf(c: Cardinal, t: Term) -> Result<Self, TermError> {
        Self::node(Kind::Pi, vec![Group::closed(c, t)])
    }

    /// `c0(c, t)`.
    pub fn c0(c: Cardinal, t: Term) -> Result<Self, TermError> {
        Self::node(Kind::Sigma, vec![Group::closed(c, t)])
    }

    /// Alternating tower of height `n` with index cardinality `lambda`,
    /// outermost kind `kind`.
    pub fn tower(kind: Kind, n: usize, lambda: Cardinal) -> Self {
        let mut t = Term::Scalar;
        let mut k = if n.is_multiple_of(2) { kind.opposite() } else { kind };
        for _ in 0..n {
            t = Term::node_unchecked(k, vec![Group::closed(lambda.clone(), t)]);
            k = k.opposite();
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Term::Node(n) if n.groups.is_empty())
    }

    pub fn as_node(&self) -> Option<&Node> {
        match self {
            Term::Node(n) if !n.groups.is_empty() => Some(n),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Scalar => 0,
            Term::Node(n) => n.groups.iter().map(|g| g.member.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of nodes, scalars and ramps in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Scalar => 1,
            Term::Node(n) => {
                1 + n
                    .groups
                    .iter()
                    .map(|g| match &g.member {
                        Member::Closed(t) => t.size(),
                        Member::Ramp(r) => 1 + r.base.size(),
                    })
                    .sum::<usize>()
            }
        }
    }

    /// Checks every index cardinality against `kappa`.
    pub fn validate(&self, kappa: &KappaBound) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        validate_into(self, kappa, &mut Vec::new(), &mut out);
        if self.finite_weight().is_none() {
            out.push(Violation {
                path: Vec::new(),
                subterm: self.to_string(),
                cardinal: "finite".into(),
                reason: "finite cardinalities are too large for exact arithmetic".into(),
            });
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Product of `c + 1` over every finite group cardinality. Every finite
    /// cardinal derived from the term by sums and products of its own
    /// cardinalities is bounded by this, so `Some` means no overflow.
    pub fn finite_weight(&self) -> Option<u64> {
        let Some(node) = self.as_node() else { return Some(1) };
        node.groups.iter().try_fold(1u64, |acc, g| {
            let own = match g.card {
                Cardinal::Finite(n) => n.checked_add(1)?,
                Cardinal::Aleph(_) => 1,
            };
            let inner = match &g.member {
                Member::Closed(t) => t.finite_weight()?,
                Member::Ramp(r) => r.base.finite_weight()?,
            };
            acc.checked_mul(own)?.checked_mul(inner)
        })
    }

    /// The subterm reached by following `path`; ramp steps enter the base.
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in path {
            let g = t.as_node()?.groups.get(i)?;
            t = match &g.member {
                Member::Closed(c) => c,
                Member::Ramp(r) => &r.base,
            };
        }
        Some(t)
    }

    /// Rebuilds the term with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        let node = self.as_node()?;
        let g = node.groups.get(i)?;
        let member = match &g.member {
            Member::Closed(c) => Member::Closed(c.replace_at(rest, new)?),
            Member::Ramp(r) => Member::Ramp(r.with_base(r.base.replace_at(rest, new)?)),
        };
        let mut groups = node.groups.to_vec();
        groups[i] = Group::new(g.card.clone(), member);
        Some(Term::node_unchecked(node.kind, groups))
    }
}

impl Node {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Total index cardinality, ignoring ramp families (always infinite).
    pub fn has_finite_index(&self) -> bool {
        self.groups.iter().all(|g| g.card.is_finite() && matches!(g.member, Member::Closed(_)))
    }
}

/// One cardinality that falls outside the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: Vec<usize>,
    pub subterm: String,
    pub cardinal: String,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in `{}` at {:?}: {}", self.cardinal, self.subterm, self.path, self.reason)
    }
}

fn validate_into(t: &Term, kappa: &KappaBound, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    let Some(node) = t.as_node() else { return };
    let mut flag = |c: &Cardinal, reason: String, path: &[usize]| {
        if !kappa.admits(c) {
            out.push(Violation {
                path: path.to_vec(),
                subterm: t.to_string(),
                cardinal: c.to_string(),
                reason,
            });
        }
    };
    for g in node.groups.iter() {
        flag(&g.card, format!("index cardinality is not below {kappa}"), path);
        if let Member::Ramp(r) = &g.member {
            flag(&g.card.product(&r.wrap), format!("ramp index cardinality is not below {kappa}"), path);
            flag(&Cardinal::aleph0(), format!("ramp levels need w below {kappa}"), path);
        }
    }
    for (i, g) in node.groups.iter().enumerate() {
        path.push(i);
        match &g.member {
            Member::Closed(c) => validate_into(c, kappa, path, out),
            Member::Ramp(r) => validate_into(&r.base, kappa, path, out),
        }
        path.pop();
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.card, self.member)
    }
}

impl fmt::Debug for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Closed(t) => write!(f, "{t}"),
            Member::Ramp(r) => write!(f, "{r:?}"),
        }
    }
}

impl fmt::Debug for Ramp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ramp({}, {}, {})", self.first, self.wrap, self.base)
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.kind, self.groups)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Cardinal {
        Cardinal::aleph0()
    }

    #[test]
    fn node_construction() {
        let t = Term::node(Kind::Pi, vec![Group::closed(w(), Term::Scalar)]).unwrap();
        assert_eq!(t, Term::l_inf(w(), Term::Scalar).unwrap());
        assert_eq!(Term::node(Kind::Sigma, vec![]).unwrap(), Term::zero());
        assert_eq!(
            Term::node(Kind::Pi, vec![Group::closed(Cardinal::Finite(0), Term::Scalar)]),
            Err(TermError::BadCardinality)
        );
    }

    #[test]
    fn group_order_is_irrelevant() {
        let a = Group::closed(w(), Term::Scalar);
        let b = Group::closed(Cardinal::Finite(1), Term::c0(w(), Term::Scalar).unwrap());
        assert_eq!(
            Term::node(Kind::Pi, vec![a.clone(), b.clone()]).unwrap(),
            Term::node(Kind::Pi, vec![b, a]).unwrap()
        );
    }

    #[test]
    fn towers() {
        assert_eq!(Term::tower(Kind::Pi, 0, w()), Term::Scalar);
        assert_eq!(Term::tower(Kind::Pi, 1, w()), Term::l_inf(w(), Term::Scalar).unwrap());
        assert_eq!(
            Term::tower(Kind::Sigma, 2, w()),
            Term::c0(w(), Term::l_inf(w(), Term::Scalar).unwrap()).unwrap()
        );
        for n in 0..8 {
            assert_eq!(Term::tower(Kind::Sigma, n, w()).depth(), n);
        }
    }

    #[test]
    fn ramp_members() {
        let r = Ramp::new(Kind::Sigma, w(), Term::Scalar).unwrap();
        assert_eq!(r.member_at(0), Term::Scalar);
        assert_eq!(r.member_at(1), Term::c0(w(), Term::Scalar).unwrap());
        assert_eq!(r.member_at(2), Term::l_inf(w(), Term::c0(w(), Term::Scalar).unwrap()).unwrap());
        assert_eq!(r.member_at(5).depth(), 5);
        assert!(Ramp::new(Kind::Pi, Cardinal::Finite(3), Term::Scalar).is_err());
    }

    #[test]
    fn validation() {
        let t = Term::l_inf(w(), Term::Scalar).unwrap();
        assert!(t.validate(&KappaBound::AllOrdinals).is_ok());
        let v = t.validate(&KappaBound::Bounded(w())).unwrap_err();
        assert_eq!(v.len(), 1);
        assert!(v[0].path.is_empty());
        assert_eq!(v[0].cardinal, "w");
        let t1 = Term::l_inf(Cardinal::aleph1(), Term::Scalar).unwrap();
        let two = crate::ordinal::Ordinal::finite(2);
        assert!(t1.validate(&KappaBound::Bounded(Cardinal::Aleph(two))).is_ok());
    }

    #[test]
    fn ramp_validation_needs_omega() {
        let r = Ramp::new(Kind::Pi, w(), Term::Scalar).unwrap();
        let t = Term::node(Kind::Sigma, vec![Group::new(Cardinal::Finite(1), Member::Ramp(r))]).unwrap();
        assert!(t.validate(&KappaBound::Bounded(w())).is_err());
        assert!(t.validate(&KappaBound::Bounded(Cardinal::aleph1())).is_ok());
    }

    #[test]
    fn paths() {
        let inner = Term::c0(w(), Term::Scalar).unwrap();
        let t = Term::l_inf(w(), inner.clone()).unwrap();
        assert_eq!(t.at_path(&[0]), Some(&inner));
        assert_eq!(t.at_path(&[0, 0]), Some(&Term::Scalar));
        let swapped = t.replace_at(&[0, 0], Term::zero()).unwrap();
        assert_eq!(swapped.to_string(), "pi{w: sigma{w: 0}}");
        assert_eq!(t.at_path(&[3]), None);
    }
}
