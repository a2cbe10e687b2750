//! Canonical forms, derivation traces and the three-valued isomorphism
//! decision.

pub mod rules;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{analyze, descriptor, Descriptor};
use crate::error::Error;
use crate::ordinal::{Cardinal, KappaBound, Ordinal};
use crate::parser::parse;
use crate::term::{Group, Kind, Member, Node, Term};

pub use rules::{all_rewrites, root_rewrites, Rewrite, RootRewrite, Rule};

/// Upper bound on rewrite steps in one normalization.
pub const STEP_LIMIT: usize = 100_000;

/// Normal form of a term under the rewrite rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalTerm {
    Zero,
    Fin(u64),
    Pure(CTree),
    /// Pi part first, then the Sigma part of the same rank.
    Mixed(CTree, CTree),
}

/// A canonical pure node. Field order gives `term_order`: Pi trees before
/// Sigma trees, then by rank, then by group list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CTree {
    pub kind: Kind,
    pub rank: Ordinal,
    pub groups: Vec<CGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CGroup {
    pub child: CChild,
    pub card: Cardinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CChild {
    Scalar,
    Tree(CTree),
    Ramp(CRamp),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CRamp {
    pub first: Kind,
    pub wrap: Cardinal,
    pub base: Box<CanonicalTerm>,
}

/// Total order on canonical terms, trees and children.
pub fn term_order<T: Ord>(a: &T, b: &T) -> Ordering {
    a.cmp(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term is not in normal form: {0}")]
pub struct NotNormal(pub String);

impl CTree {
    fn from_groups(kind: Kind, rank: Ordinal, groups: &[Group]) -> Result<CTree, NotNormal> {
        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            let child = match &g.member {
                Member::Closed(Term::Scalar) => CChild::Scalar,
                Member::Closed(t) => {
                    let n = t.as_node().ok_or_else(|| NotNormal(format!("zero member in {kind} node")))?;
                    CChild::Tree(CTree::from_node(n)?)
                }
                Member::Ramp(r) => CChild::Ramp(CRamp {
                    first: r.first(),
                    wrap: r.wrap().clone(),
                    base: Box::new(CanonicalTerm::from_normal(r.base())?),
                }),
            };
            out.push(CGroup { child, card: g.card.clone() });
        }
        out.sort();
        Ok(CTree { kind, rank, groups: out })
    }

    fn from_node(n: &Node) -> Result<CTree, NotNormal> {
        match analyze(n.kind(), n.groups()).descriptor {
            Descriptor::Pure(k, r) if k == n.kind() => CTree::from_groups(k, r, n.groups()),
            d => Err(NotNormal(format!("{} node classified {d}", n.kind()))),
        }
    }

    fn groups_as_terms(&self) -> Vec<Group> {
        self.groups.iter().map(|g| Group::new(g.card.clone(), g.child.to_member())).collect()
    }

    pub fn to_term(&self) -> Term {
        Term::node_unchecked(self.kind, self.groups_as_terms())
    }

    fn write(&self, extra: Option<&CTree>, out: &mut String) {
        out.push_str(self.kind.keyword());
        out.push('{');
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("{}: ", g.card));
            g.child.write(out);
        }
        if let Some(s) = extra {
            out.push_str(", 1: ");
            s.write(None, out);
        }
        out.push('}');
    }
}

impl CChild {
    fn to_member(&self) -> Member {
        match self {
            CChild::Scalar => Member::Closed(Term::Scalar),
            CChild::Tree(t) => Member::Closed(t.to_term()),
            CChild::Ramp(r) => Member::Ramp(
                crate::term::Ramp::new(r.first, r.wrap.clone(), r.base.to_term()).expect("canonical wrap is infinite"),
            ),
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            CChild::Scalar => out.push('k'),
            CChild::Tree(t) => t.write(None, out),
            CChild::Ramp(r) => {
                out.push_str(&format!("ramp({}, {}, ", r.first, r.wrap));
                out.push_str(&r.base.to_string());
                out.push(')');
            }
        }
    }
}

impl CanonicalTerm {
    /// Reads off the canonical form of a term that no rule rewrites.
    pub fn from_normal(t: &Term) -> Result<CanonicalTerm, NotNormal> {
        let Some(n) = t.as_node() else {
            return Ok(if t.is_zero() { CanonicalTerm::Zero } else { CanonicalTerm::Fin(1) });
        };
        let analysis = analyze(n.kind(), n.groups());
        match analysis.descriptor {
            Descriptor::Zero => Err(NotNormal("zero-dimensional node".into())),
            Descriptor::Fin(d) => match n.groups() {
                [g] if n.kind() == Kind::Pi && g.member == Member::Closed(Term::Scalar) && g.card == Cardinal::Finite(d) => {
                    Ok(CanonicalTerm::Fin(d))
                }
                _ => Err(NotNormal(format!("finite-dimensional node {t}"))),
            },
            Descriptor::Pure(..) => Ok(CanonicalTerm::Pure(CTree::from_node(n)?)),
            Descriptor::Mixed(r) => {
                let gs = n.groups();
                let [e] = analysis.exceptional.as_slice() else {
                    return Err(NotNormal("mixed node with several exceptional groups".into()));
                };
                let sigma = match (&gs[*e].member, n.kind()) {
                    (Member::Closed(s), Kind::Pi) if gs[*e].card == Cardinal::Finite(1) => {
                        CTree::from_node(s.as_node().ok_or_else(|| NotNormal("zero exceptional member".into()))?)?
                    }
                    _ => return Err(NotNormal("mixed node not split as pi{.., 1: sigma{..}}".into())),
                };
                let bulk: Vec<Group> =
                    gs.iter().enumerate().filter(|(i, _)| i != e).map(|(_, g)| g.clone()).collect();
                let pi = CTree::from_groups(Kind::Pi, r, &bulk)?;
                Ok(CanonicalTerm::Mixed(pi, sigma))
            }
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            CanonicalTerm::Zero => Term::zero(),
            CanonicalTerm::Fin(1) => Term::Scalar,
            CanonicalTerm::Fin(d) => Term::node_unchecked(Kind::Pi, vec![Group::closed(Cardinal::Finite(*d), Term::Scalar)]),
            CanonicalTerm::Pure(t) => t.to_term(),
            CanonicalTerm::Mixed(p, s) => {
                let mut groups = p.groups_as_terms();
                groups.push(Group::closed(Cardinal::Finite(1), s.to_term()));
                Term::node_unchecked(Kind::Pi, groups)
            }
        }
    }

    pub fn form(&self) -> &'static str {
        match self {
            CanonicalTerm::Zero => "zero",
            CanonicalTerm::Fin(_) => "fin",
            CanonicalTerm::Pure(_) => "pure",
            CanonicalTerm::Mixed(..) => "mixed",
        }
    }

    pub fn descriptor(&self) -> Descriptor {
        match self {
            CanonicalTerm::Zero => Descriptor::Zero,
            CanonicalTerm::Fin(d) => Descriptor::Fin(*d),
            CanonicalTerm::Pure(t) => Descriptor::Pure(t.kind, t.rank.clone()),
            CanonicalTerm::Mixed(p, _) => Descriptor::Mixed(p.rank.clone()),
        }
    }

    /// Lists every violated structural invariant; empty for genuine
    /// canonical forms.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            CanonicalTerm::Zero => {}
            CanonicalTerm::Fin(d) => {
                if *d == 0 {
                    out.push("Fin(0) instead of Zero".into());
                }
            }
            CanonicalTerm::Pure(t) => check_tree(t, &mut out),
            CanonicalTerm::Mixed(p, s) => {
                check_tree(p, &mut out);
                check_tree(s, &mut out);
                if p.kind != Kind::Pi || s.kind != Kind::Sigma {
                    out.push("mixed components must be (pi, sigma)".into());
                }
                if p.rank != s.rank {
                    out.push(format!("mixed component ranks differ: {} vs {}", p.rank, s.rank));
                }
            }
        }
        out
    }
}

fn check_tree(t: &CTree, out: &mut Vec<String>) {
    let here = || {
        let mut s = String::new();
        t.write(None, &mut s);
        s
    };
    if t.groups.windows(2).any(|w| w[0] > w[1]) {
        out.push(format!("groups of {} are not sorted", here()));
    }
    if t.groups.windows(2).any(|w| w[0].child == w[1].child) {
        out.push(format!("{} repeats a child", here()));
    }
    let mut infinite_total = false;
    for g in &t.groups {
        infinite_total |= g.card.is_infinite() || matches!(g.child, CChild::Ramp(_));
        match &g.child {
            CChild::Scalar if g.card.is_finite() => out.push(format!("finite scalar group in {}", here())),
            CChild::Scalar => {}
            CChild::Tree(c) => {
                if !(g.card.is_infinite() || g.card == Cardinal::Finite(1)) {
                    out.push(format!("non-scalar group of cardinality {} in {}", g.card, here()));
                }
                if c.kind == t.kind {
                    out.push(format!("same-kind child in {}", here()));
                }
                if c.rank >= t.rank {
                    out.push(format!("child rank {} not below {} in {}", c.rank, t.rank, here()));
                }
                check_tree(c, out);
            }
            CChild::Ramp(r) => {
                if g.card != Cardinal::Finite(1) && g.card.is_finite() {
                    out.push(format!("ramp group of cardinality {} in {}", g.card, here()));
                }
                if !r.wrap.is_infinite() {
                    out.push("finite ramp wrap".into());
                }
                out.extend(r.base.check_invariants());
                if *r.base == CanonicalTerm::Zero {
                    out.push("ramp over zero".into());
                }
            }
        }
    }
    if !infinite_total {
        out.push(format!("finite total index in {}", here()));
    }
    match analyze(t.kind, &t.groups_as_terms()) {
        a if a.descriptor == Descriptor::Pure(t.kind, t.rank.clone()) && a.exceptional.is_empty() => {}
        a => out.push(format!("{} classifies as {} instead of pure {} rank {}", here(), a.descriptor, t.kind, t.rank)),
    }
}

impl fmt::Display for CanonicalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        match self {
            CanonicalTerm::Zero => s.push('0'),
            CanonicalTerm::Fin(1) => s.push('k'),
            CanonicalTerm::Fin(d) => s.push_str(&format!("pi{{{d}: k}}")),
            CanonicalTerm::Pure(t) => t.write(None, &mut s),
            CanonicalTerm::Mixed(p, sg) => p.write(Some(sg), &mut s),
        }
        f.write_str(&s)
    }
}

#[derive(Serialize, Deserialize)]
struct CanonicalRepr {
    form: String,
    term: String,
}

impl Serialize for CanonicalTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CanonicalRepr { form: self.form().into(), term: self.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonicalTerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CanonicalRepr::deserialize(d)?;
        let t = parse(&r.term).map_err(D::Error::custom)?;
        let c = CanonicalTerm::from_normal(&t).map_err(D::Error::custom)?;
        if c.form() != r.form {
            return Err(D::Error::custom(format!("form `{}` does not match term `{}`", r.form, r.term)));
        }
        Ok(c)
    }
}

/// One rewrite step: `rule` turned `before` into `after` at `path`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub cite: String,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace step {index} does not replay: {reason}")]
pub struct ReplayError {
    pub index: usize,
    pub reason: String,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-applies every step to `input`, checking each against the rules.
    pub fn replay(&self, input: &Term) -> Result<Term, ReplayError> {
        let mut t = input.clone();
        for (index, step) in self.steps.iter().enumerate() {
            let err = |reason: String| ReplayError { index, reason };
            let sub = t.at_path(&step.path).ok_or_else(|| err(format!("no subterm at {:?}", step.path)))?;
            if sub.to_string() != step.before {
                return Err(err(format!("found `{sub}`, expected `{}`", step.before)));
            }
            let after = parse(&step.after).map_err(|e| err(e.to_string()))?;
            if !rules::rewrites_of(step.rule, sub).iter().any(|rw| rw.result == after) {
                return Err(err(format!("{} does not rewrite `{sub}` to `{after}`", step.rule)));
            }
            t = t.replace_at(&step.path, after).expect("path checked above");
        }
        Ok(t)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let path: Vec<String> = s.path.iter().map(ToString::to_string).collect();
            writeln!(f, "{} at /{} [{}]: {} => {}", s.rule, path.join("/"), s.cite, s.before, s.after)?;
        }
        Ok(())
    }
}

/// Innermost-first search for the strategy's next rewrite.
fn next_rewrite(t: &Term, path: &mut Vec<usize>) -> Option<(Vec<usize>, RootRewrite)> {
    if let Some(n) = t.as_node() {
        for (i, g) in n.groups().iter().enumerate() {
            path.push(i);
            let found = match &g.member {
                Member::Closed(c) => next_rewrite(c, path),
                Member::Ramp(r) => next_rewrite(r.base(), path),
            };
            path.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    rules::first_root_rewrite(t).map(|rw| (path.clone(), rw))
}

/// Rewrites `t` to normal form, recording each step.
pub fn normalize(t: &Term) -> Result<(Term, Trace), Error> {
    let mut t = t.clone();
    let mut trace = Trace::default();
    while let Some((path, rw)) = next_rewrite(&t, &mut Vec::new()) {
        if trace.steps.len() >= STEP_LIMIT {
            return Err(Error::RewriteLimit(STEP_LIMIT));
        }
        let before = t.at_path(&path).expect("found above").to_string();
        trace.steps.push(TraceStep {
            rule: rw.rule,
            path: path.clone(),
            cite: rw.cite.to_string(),
            before,
            after: rw.result.to_string(),
        });
        t = t.replace_at(&path, rw.result).expect("found above");
    }
    Ok((t, trace))
}

/// Canonical form of an admissible term and the derivation reaching it.
pub fn canonicalize(t: &Term, kappa: &KappaBound) -> Result<(CanonicalTerm, Trace), Error> {
    t.validate(kappa)?;
    let (normal, trace) = normalize(t)?;
    let canon = CanonicalTerm::from_normal(&normal).expect("strategy output is irreducible and canonical");
    debug_assert_eq!(canon.descriptor(), descriptor(t));
    Ok((canon, trace))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    Isomorphic { canonical: CanonicalTerm },
    NonIsomorphic { left: Descriptor, right: Descriptor },
    Unknown { shared: Descriptor, left_canonical: CanonicalTerm, right_canonical: CanonicalTerm },
}

impl IsoVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            IsoVerdict::Isomorphic { .. } => "isomorphic",
            IsoVerdict::NonIsomorphic { .. } => "non_isomorphic",
            IsoVerdict::Unknown { .. } => "unknown",
        }
    }
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoVerdict::Isomorphic { .. } => f.write_str("isomorphic"),
            IsoVerdict::NonIsomorphic { left, right } => write!(f, "not isomorphic ({left} vs {right})"),
            IsoVerdict::Unknown { shared, .. } => write!(f, "unknown (both {shared})"),
        }
    }
}

/// Verdict plus the two derivations to canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoDecision {
    pub verdict: IsoVerdict,
    pub left: Trace,
    pub right: Trace,
}

pub fn decide_iso(t1: &Term, t2: &Term, kappa: &KappaBound) -> Result<IsoDecision, Error> {
    let (c1, left) = canonicalize(t1, kappa)?;
    let (c2, right) = canonicalize(t2, kappa)?;
    let (d1, d2) = (c1.descriptor(), c2.descriptor());
    let verdict = if c1 == c2 {
        IsoVerdict::Isomorphic { canonical: c1 }
    } else if d1 != d2 {
        IsoVerdict::NonIsomorphic { left: d1, right: d2 }
    } else {
        IsoVerdict::Unknown { shared: d1, left_canonical: c1, right_canonical: c2 }
    };
    Ok(IsoDecision { verdict, left, right })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORD: KappaBound = KappaBound::AllOrdinals;

    fn canon(s: &str) -> CanonicalTerm {
        canonicalize(&parse(s).unwrap(), &ORD).unwrap().0
    }

    fn iso(a: &str, b: &str) -> IsoVerdict {
        decide_iso(&parse(a).unwrap(), &parse(b).unwrap(), &ORD).unwrap().verdict
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canon("pi{1: k}"), CanonicalTerm::Fin(1));
        assert_eq!(canon("pi{w: pi{w1: k}}").to_string(), "pi{w1: k}");
        assert_eq!(canon("pi{2: sigma{w: k}}").to_string(), "sigma{w: k}");
        let m = canon("sigma{w: k, 1: pi{w: k}}");
        assert_eq!(m.form(), "mixed");
        assert_eq!(m.to_string(), "pi{w: k, 1: sigma{w: k}}");
        assert_eq!(canon("pi{w: k, 3: k}").to_string(), "pi{w: k}");
        assert_eq!(canon("sigma{2: k, 3: k}"), CanonicalTerm::Fin(5));
        assert_eq!(canon("pi{w: 0}"), CanonicalTerm::Zero);
    }

    #[test]
    fn order() {
        let scalar = CChild::Scalar;
        let pi = CChild::Tree(match canon("pi{w: k}") {
            CanonicalTerm::Pure(t) => t,
            _ => unreachable!(),
        });
        let pi1 = CChild::Tree(match canon("pi{w1: k}") {
            CanonicalTerm::Pure(t) => t,
            _ => unreachable!(),
        });
        assert_eq!(term_order(&scalar, &pi), Ordering::Less);
        assert_eq!(term_order(&pi, &pi1), Ordering::Less);
        assert_eq!(term_order(&pi, &pi), Ordering::Equal);
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            iso("l_inf(w,k)", "c0(w,k)"),
            IsoVerdict::NonIsomorphic {
                left: Descriptor::Pure(Kind::Pi, Ordinal::finite(1)),
                right: Descriptor::Pure(Kind::Sigma, Ordinal::finite(1)),
            }
        );
        assert_eq!(iso("k x l_inf(w,k)", "l_inf(w,k)").name(), "isomorphic");
        assert_eq!(iso("l_inf(w, l_inf(w,k))", "l_inf(w,k)").name(), "isomorphic");
        match iso("l_inf(w,k)", "l_inf(w1,k)") {
            IsoVerdict::Unknown { shared, .. } => assert_eq!(shared, Descriptor::Pure(Kind::Pi, Ordinal::finite(1))),
            v => panic!("{v}"),
        }
    }

    #[test]
    fn traces_replay() {
        for s in ["sigma{w: k, 1: pi{w: k}}", "pi{2: sigma{w: k, 1: pi{3: k}}}", "k x k x l_inf(w, k^2)"] {
            let t = parse(s).unwrap();
            let (c, trace) = canonicalize(&t, &ORD).unwrap();
            assert_eq!(trace.replay(&t).unwrap(), c.to_term(), "{s}");
        }
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let t = parse("pi{1: k, 1: pi{w: k}}").unwrap();
        let (_, mut trace) = canonicalize(&t, &ORD).unwrap();
        trace.steps[0].after = "pi{w1: k}".into();
        assert!(trace.replay(&t).is_err());
    }

    #[test]
    fn json_round_trips() {
        for (a, b) in [("k", "k^2"), ("pi{w: k}", "pi{w1: k}"), ("sigma{w: k, 1: pi{w: k}}", "pi{1: pi{w:k}, 1: sigma{w:k}}")] {
            let v = iso(a, b);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<IsoVerdict>(&json).unwrap(), v, "{json}");
        }
    }

    #[test]
    fn invariants_hold_on_examples() {
        for s in ["pi{w: sigma{w: k}, 1: sigma{w1: pi{w: k}}}", "sigma{w: ramp(pi, w, k^3)}", "tower(sigma, 5, w1)"] {
            let c = canon(s);
            assert!(c.check_invariants().is_empty(), "{s}: {:?}", c.check_invariants());
        }
    }
}
