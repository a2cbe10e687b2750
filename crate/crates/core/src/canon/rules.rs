//! Isomorphism-preserving rewrite rules, each applied at the root of a
//! subterm.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classify::{analyze, descriptor, Descriptor};
use crate::ordinal::Cardinal;
use crate::term::{Group, Kind, Member, Node, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

impl Rule {
    /// Priority used by the normalizing strategy.
    pub const PRIORITY: [Rule; 7] = [Rule::R4, Rule::R2, Rule::R3, Rule::R1, Rule::R5, Rule::R6, Rule::R7];

    pub fn name(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Rule::R1 => "singleton elimination",
            Rule::R2 => "same-kind flattening",
            Rule::R3 => "finite index collapse",
            Rule::R4 => "zero removal and finite-dimensional absorption",
            Rule::R5 => "scalar group consolidation",
            Rule::R6 => "group merge",
            Rule::R7 => "exceptional member extraction",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One way to rewrite a subterm at its root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootRewrite {
    pub rule: Rule,
    pub cite: &'static str,
    pub result: Term,
}

const CITE_R1: &str = "A_{1} V = V";
const CITE_R2: &str = "A_J (A_{I_j} W_j) = A_{J x I_j} W";
const CITE_R3_SIGMA: &str = "Sigma_I V = Pi_I V for finite I";
const CITE_R3_FLAT: &str = "B_I V = A_I V for finite I, then flatten";
const CITE_R3_MULT: &str = "(B_I W)^n = B_{n x I} W for finite n";
const CITE_R3_RAMP: &str = "n copies of a ramp family = 1 copy (index set n x w = w)";
const CITE_R4_ZERO: &str = "dropping indices with W(i) = 0";
const CITE_R4_ABSORB: &str = "k^n x V = V for infinite-dimensional V";
const CITE_R5: &str = "A{a: k, b: k} = A{a + b: k}";
const CITE_R6: &str = "A{a: V, b: V} = A{a + b: V}";
const CITE_R7_PURE: &str = "A{bulk} x prod E = B{1: A{bulk}, E} when rank E exceeds the bulk rank";
const CITE_R7_MIXED: &str = "A{bulk} x prod E = Pi{pi part, 1: Sigma{sigma part}} at equal ranks";
const CITE_R7_SPLIT: &str = "Sigma_c (P x S) = Sigma_c P x Sigma_c S";

fn scaled<'a>(c: &Cardinal, groups: &'a [Group]) -> impl Iterator<Item = Group> + 'a {
    let c = c.clone();
    groups.iter().map(move |g| Group::new(c.product(&g.card), g.member.clone()))
}

fn without(groups: &[Group], skip: &[usize]) -> Vec<Group> {
    groups.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, g)| g.clone()).collect()
}

fn closed_node(g: &Group) -> Option<&Node> {
    g.member.as_closed().and_then(Term::as_node)
}

/// Replace group `i` by the given groups.
fn splice(kind: Kind, groups: &[Group], i: usize, new: impl IntoIterator<Item = Group>) -> Term {
    let mut out = without(groups, &[i]);
    out.extend(new);
    Term::node_unchecked(kind, out)
}

pub(crate) fn r1(n: &Node) -> Vec<RootRewrite> {
    match n.groups() {
        [g] if g.card == Cardinal::Finite(1) => match &g.member {
            Member::Closed(v) => vec![RootRewrite { rule: Rule::R1, cite: CITE_R1, result: v.clone() }],
            Member::Ramp(_) => Vec::new(),
        },
        _ => Vec::new(),
    }
}

pub(crate) fn r2(n: &Node) -> Vec<RootRewrite> {
    let gs = n.groups();
    gs.iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let child = closed_node(g).filter(|c| c.kind() == n.kind())?;
            Some(RootRewrite { rule: Rule::R2, cite: CITE_R2, result: splice(n.kind(), gs, i, scaled(&g.card, child.groups())) })
        })
        .collect()
}

pub(crate) fn r3(n: &Node) -> Vec<RootRewrite> {
    let gs = n.groups();
    let mut out = Vec::new();
    if n.kind() == Kind::Sigma && n.has_finite_index() {
        out.push(RootRewrite { rule: Rule::R3, cite: CITE_R3_SIGMA, result: Term::node_unchecked(Kind::Pi, gs.to_vec()) });
    }
    for (i, g) in gs.iter().enumerate() {
        match &g.member {
            Member::Closed(Term::Node(child)) if child.kind() != n.kind() && !child.groups().is_empty() => {
                if child.has_finite_index() {
                    let result = splice(n.kind(), gs, i, scaled(&g.card, child.groups()));
                    out.push(RootRewrite { rule: Rule::R3, cite: CITE_R3_FLAT, result });
                } else if matches!(g.card, Cardinal::Finite(m) if m >= 2) {
                    let multiplied = Term::node_unchecked(child.kind(), scaled(&g.card, child.groups()).collect());
                    let result = splice(n.kind(), gs, i, [Group::closed(Cardinal::Finite(1), multiplied)]);
                    out.push(RootRewrite { rule: Rule::R3, cite: CITE_R3_MULT, result });
                }
            }
            Member::Ramp(_) if matches!(g.card, Cardinal::Finite(m) if m >= 2) => {
                let result = splice(n.kind(), gs, i, [Group::new(Cardinal::Finite(1), g.member.clone())]);
                out.push(RootRewrite { rule: Rule::R3, cite: CITE_R3_RAMP, result });
            }
            _ => {}
        }
    }
    out
}

pub(crate) fn r4(n: &Node) -> Vec<RootRewrite> {
    let gs = n.groups();
    let mut out = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        if g.member.is_zero() {
            out.push(RootRewrite { rule: Rule::R4, cite: CITE_R4_ZERO, result: Term::node_unchecked(n.kind(), without(gs, &[i])) });
        }
    }
    for (i, g) in gs.iter().enumerate() {
        if g.card.is_finite() && g.member == Member::Closed(Term::Scalar) {
            let rest = Term::node_unchecked(n.kind(), without(gs, &[i]));
            if !descriptor(&rest).is_finite_dimensional() {
                out.push(RootRewrite { rule: Rule::R4, cite: CITE_R4_ABSORB, result: rest });
            }
        }
    }
    out
}

pub(crate) fn r5(n: &Node) -> Vec<RootRewrite> {
    let gs = n.groups();
    let scalars: Vec<usize> = (0..gs.len()).filter(|&i| gs[i].member == Member::Closed(Term::Scalar)).collect();
    if scalars.len() < 2 {
        return Vec::new();
    }
    let total = scalars.iter().fold(Cardinal::Finite(0), |acc, &i| acc.sum(&gs[i].card));
    let mut groups = without(gs, &scalars);
    groups.push(Group::closed(total, Term::Scalar));
    vec![RootRewrite { rule: Rule::R5, cite: CITE_R5, result: Term::node_unchecked(n.kind(), groups) }]
}

pub(crate) fn r6(n: &Node) -> Vec<RootRewrite> {
    let gs = n.groups();
    let mut out = Vec::new();
    // Groups are sorted by member first, so equal members are adjacent.
    let mut i = 0;
    while i < gs.len() {
        let mut j = i + 1;
        while j < gs.len() && gs[j].member == gs[i].member {
            j += 1;
        }
        if j - i >= 2 && gs[i].member != Member::Closed(Term::Scalar) {
            let idx: Vec<usize> = (i..j).collect();
            let total = idx.iter().fold(Cardinal::Finite(0), |acc, &k| acc.sum(&gs[k].card));
            let mut groups = without(gs, &idx);
            groups.push(Group::new(total, gs[i].member.clone()));
            out.push(RootRewrite { rule: Rule::R6, cite: CITE_R6, result: Term::node_unchecked(n.kind(), groups) });
        }
        i = j;
    }
    out
}

/// Every member is `k`, a nonzero ramp, or an opposite-kind node that is
/// pure of the opposite kind with positive rank.
fn r7_ready(n: &Node) -> bool {
    n.groups().iter().all(|g| match &g.member {
        Member::Closed(Term::Scalar) => true,
        Member::Ramp(r) => !r.base().is_zero(),
        Member::Closed(t) => match t.as_node() {
            Some(c) if c.kind() != n.kind() => {
                matches!(descriptor(t), Descriptor::Pure(k, _) if k == c.kind())
            }
            _ => false,
        },
    })
}

pub(crate) fn r7(n: &Node) -> Vec<RootRewrite> {
    let mut out = Vec::new();
    let (a, gs) = (n.kind(), n.groups());
    if r7_ready(n) {
        let analysis = analyze(a, gs);
        let e = &analysis.exceptional;
        if !e.is_empty() {
            let bulk = without(gs, e);
            let flat_e = || e.iter().flat_map(|&i| scaled(&gs[i].card, closed_node(&gs[i]).expect("exceptional").groups()));
            match analysis.descriptor {
                Descriptor::Pure(b, _) if b != a => {
                    let mut groups: Vec<Group> = flat_e().collect();
                    if !bulk.is_empty() {
                        groups.push(Group::closed(Cardinal::Finite(1), Term::node_unchecked(a, bulk)));
                    }
                    out.push(RootRewrite { rule: Rule::R7, cite: CITE_R7_PURE, result: Term::node_unchecked(b, groups) });
                }
                Descriptor::Mixed(_) => {
                    let already_split = a == Kind::Pi && e.len() == 1 && gs[e[0]].card == Cardinal::Finite(1);
                    if !already_split {
                        let result = match a {
                            Kind::Pi => {
                                let sigma = Term::node_unchecked(Kind::Sigma, flat_e().collect());
                                let mut groups = bulk;
                                groups.push(Group::closed(Cardinal::Finite(1), sigma));
                                Term::node_unchecked(Kind::Pi, groups)
                            }
                            Kind::Sigma => {
                                let mut groups: Vec<Group> = flat_e().collect();
                                groups.push(Group::closed(Cardinal::Finite(1), Term::node_unchecked(Kind::Sigma, bulk)));
                                Term::node_unchecked(Kind::Pi, groups)
                            }
                        };
                        out.push(RootRewrite { rule: Rule::R7, cite: CITE_R7_MIXED, result });
                    }
                }
                _ => {}
            }
        }
    }
    if a == Kind::Sigma {
        for (i, g) in gs.iter().enumerate() {
            let Some(child) = closed_node(g).filter(|c| c.kind() == Kind::Pi) else { continue };
            let inner = analyze(Kind::Pi, child.groups());
            if !matches!(inner.descriptor, Descriptor::Mixed(_)) {
                continue;
            }
            let pi_part = Term::node_unchecked(Kind::Pi, without(child.groups(), &inner.exceptional));
            let mut new = vec![Group::closed(g.card.clone(), pi_part)];
            new.extend(inner.exceptional.iter().map(|&j| {
                let eg = &child.groups()[j];
                Group::new(g.card.product(&eg.card), eg.member.clone())
            }));
            out.push(RootRewrite { rule: Rule::R7, cite: CITE_R7_SPLIT, result: splice(Kind::Sigma, gs, i, new) });
        }
    }
    out
}

/// Every rewrite of `rule` applicable at the root of `t`.
pub fn rewrites_of(rule: Rule, t: &Term) -> Vec<RootRewrite> {
    let Some(n) = t.as_node() else { return Vec::new() };
    match rule {
        Rule::R1 => r1(n),
        Rule::R2 => r2(n),
        Rule::R3 => r3(n),
        Rule::R4 => r4(n),
        Rule::R5 => r5(n),
        Rule::R6 => r6(n),
        Rule::R7 => r7(n),
    }
}

/// Every rewrite applicable at the root of `t`, in priority order.
pub fn root_rewrites(t: &Term) -> Vec<RootRewrite> {
    Rule::PRIORITY.iter().flat_map(|&r| rewrites_of(r, t)).collect()
}

/// The rewrite the normalizing strategy would pick at the root.
pub fn first_root_rewrite(t: &Term) -> Option<RootRewrite> {
    Rule::PRIORITY.iter().find_map(|&r| rewrites_of(r, t).into_iter().next())
}

/// A rewrite somewhere inside a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub result: Term,
}

/// Every single-step rewrite of `t` at every position, including inside
/// ramp bases.
pub fn all_rewrites(t: &Term) -> Vec<Rewrite> {
    let mut out = Vec::new();
    collect_rewrites(t, &mut Vec::new(), &mut |path, rw: RootRewrite| {
        let result = if path.is_empty() { rw.result } else { t.replace_at(path, rw.result).expect("valid path") };
        out.push(Rewrite { rule: rw.rule, path: path.to_vec(), result });
    });
    out
}

fn collect_rewrites(t: &Term, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], RootRewrite)) {
    for rw in root_rewrites(t) {
        f(path, rw);
    }
    if let Some(n) = t.as_node() {
        for (i, g) in n.groups().iter().enumerate() {
            path.push(i);
            match &g.member {
                Member::Closed(c) => collect_rewrites(c, path, f),
                Member::Ramp(r) => collect_rewrites(r.base(), path, f),
            }
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn results(rule: Rule, s: &str) -> Vec<String> {
        rewrites_of(rule, &parse(s).unwrap()).into_iter().map(|r| r.result.to_string()).collect()
    }

    #[test]
    fn singleton() {
        assert_eq!(results(Rule::R1, "pi{1: sigma{w: k}}"), ["sigma{w: k}"]);
        assert!(results(Rule::R1, "pi{2: k}").is_empty());
        assert!(results(Rule::R1, "pi{1: ramp(pi, w, k)}").is_empty());
    }

    #[test]
    fn flatten() {
        assert_eq!(results(Rule::R2, "pi{w: pi{w1: k}}"), ["pi{w1: k}"]);
        assert_eq!(results(Rule::R2, "sigma{2: sigma{3: k, w: pi{w: k}}}"), ["sigma{6: k, w: pi{w: k}}"]);
    }

    #[test]
    fn finite_index() {
        assert_eq!(results(Rule::R3, "sigma{2: k}"), ["pi{2: k}"]);
        assert_eq!(results(Rule::R3, "pi{w: sigma{1: k, 1: pi{w: k}}}"), ["pi{w: k, w: pi{w: k}}"]);
        assert_eq!(results(Rule::R3, "pi{2: sigma{w: k, 1: pi{w: k}}}"), ["pi{1: sigma{w: k, 2: pi{w: k}}}"]);
        assert_eq!(results(Rule::R3, "pi{3: ramp(sigma, w, k)}"), ["pi{1: ramp(sigma, w, k)}"]);
    }

    #[test]
    fn absorb() {
        assert_eq!(results(Rule::R4, "pi{1: k, 1: pi{w: k}}"), ["pi{1: pi{w: k}}"]);
        assert!(results(Rule::R4, "pi{1: k, 1: pi{2: k}}").is_empty());
        assert_eq!(results(Rule::R4, "sigma{w: 0, 1: k}"), ["sigma{1: k}"]);
    }

    #[test]
    fn merges() {
        assert_eq!(results(Rule::R5, "pi{w: k, 3: k, 1: sigma{w: k}}"), ["pi{w: k, 1: sigma{w: k}}"]);
        assert_eq!(results(Rule::R6, "pi{1: sigma{w: k}, w: sigma{w: k}}"), ["pi{w: sigma{w: k}}"]);
        assert!(results(Rule::R6, "pi{1: k, w: k}").is_empty());
    }

    #[test]
    fn exceptional() {
        assert_eq!(results(Rule::R7, "sigma{w: k, 1: pi{w: k}}"), ["pi{w: k, 1: sigma{w: k}}"]);
        assert_eq!(results(Rule::R7, "pi{w: k, 1: sigma{w: pi{w: k}}}"), ["sigma{1: pi{w: k}, w: pi{w: k}}"]);
        assert!(results(Rule::R7, "pi{w: k, 1: sigma{w: k}}").is_empty());
        assert_eq!(
            results(Rule::R7, "pi{w: k, 1: sigma{w: k}, 1: sigma{w1: k}}"),
            ["pi{w: k, 1: sigma{w: k, w1: k}}"]
        );
        assert_eq!(
            results(Rule::R7, "sigma{w: pi{w: k}, 2: pi{w: k, 1: sigma{w: k}}}"),
            ["sigma{2: pi{w: k}, w: pi{w: k}, 2: sigma{w: k}}"]
        );
    }

    #[test]
    fn rules_preserve_descriptors_on_examples() {
        for s in [
            "pi{w: k, 1: sigma{w: pi{w: k}}}",
            "sigma{w: k, 1: pi{w: k}}",
            "pi{2: sigma{w: k, 1: pi{w: k}}}",
            "sigma{w: pi{w: k}, 2: pi{w: k, 1: sigma{w: k}}}",
            "pi{1: k, 1: ramp(sigma, w, k)}",
        ] {
            let t = parse(s).unwrap();
            for rw in all_rewrites(&t) {
                assert_eq!(descriptor(&rw.result), descriptor(&t), "{s} -[{}]-> {}", rw.rule, rw.result);
            }
        }
    }
}
