//! Brute-force cross-checking: enumerate small universes of terms, close
//! them under every rule application, and compare the resulting classes
//! with canonical forms and descriptors.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::canon::{all_rewrites, canonicalize, CanonicalTerm, Rule};
use crate::classify::{descriptor, Descriptor};
use crate::error::Error;
use crate::ordinal::{Cardinal, KappaBound};
use crate::term::{Group, Kind, Member, Ramp, Term};
use crate::SCHEMA;

/// Padded terms allowed per seed term before the closure gives up.
pub const DEFAULT_PADDING_FACTOR: usize = 10;

/// Above this many terms a level is built from class representatives of
/// the previous level instead of all of its terms.
pub const FULL_LEVEL_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseSpec {
    pub max_depth: usize,
    pub cards: Vec<Cardinal>,
    pub max_groups: usize,
    pub allow_ramps: bool,
}

impl UniverseSpec {
    pub fn new(max_depth: usize, cards: Vec<Cardinal>, max_groups: usize) -> Self {
        UniverseSpec { max_depth, cards, max_groups, allow_ramps: false }
    }

    fn check(&self) -> Result<(), Error> {
        if self.cards.is_empty() {
            return Err(Error::BadUniverse("no cardinalities given".into()));
        }
        if self.cards.contains(&Cardinal::Finite(0)) {
            return Err(Error::BadUniverse("cardinality 0 is not an index size".into()));
        }
        if self.max_groups == 0 && self.max_depth > 0 {
            return Err(Error::BadUniverse("max_groups must be at least 1".into()));
        }
        Ok(())
    }

    fn sorted_cards(&self) -> Vec<Cardinal> {
        let mut c = self.cards.clone();
        c.sort();
        c.dedup();
        c
    }
}

/// All nodes of both kinds whose groups form a multiset of 1 to
/// `max_groups` elements of `cards x members`.
fn nodes_over(members: &[Member], cards: &[Cardinal], max_groups: usize) -> Vec<Term> {
    let groups: Vec<Group> =
        members.iter().flat_map(|m| cards.iter().map(move |c| Group::new(c.clone(), m.clone()))).collect();
    let mut out = Vec::new();
    for kind in [Kind::Pi, Kind::Sigma] {
        for size in 1..=max_groups {
            // Non-decreasing index tuples enumerate multisets exactly once.
            let mut idx = vec![0usize; size];
            if groups.is_empty() {
                break;
            }
            loop {
                out.push(Term::node_unchecked(kind, idx.iter().map(|&i| groups[i].clone()).collect()));
                let Some(p) = (0..size).rev().find(|&p| idx[p] + 1 < groups.len()) else { break };
                idx[p] += 1;
                let v = idx[p];
                idx[p + 1..].iter_mut().for_each(|x| *x = v);
            }
        }
    }
    out
}

fn ramps_over(bases: &[Term], cards: &[Cardinal]) -> Vec<Member> {
    let mut out = Vec::new();
    for first in [Kind::Pi, Kind::Sigma] {
        for wrap in cards.iter().filter(|c| c.is_infinite()) {
            for b in bases {
                out.push(Member::Ramp(Ramp::new(first, wrap.clone(), b.clone()).expect("infinite wrap")));
            }
        }
    }
    out
}

fn level_members(prev: &[Term], prev_prev: &[Term], spec: &UniverseSpec, cards: &[Cardinal]) -> Vec<Member> {
    let nonzero = |ts: &[Term]| ts.iter().filter(|t| !t.is_zero()).cloned().collect::<Vec<_>>();
    let mut members: Vec<Member> = nonzero(prev).into_iter().map(Member::Closed).collect();
    if spec.allow_ramps {
        members.extend(ramps_over(&nonzero(prev_prev), cards));
    }
    members
}

/// Every structurally distinct term of depth at most `max_depth` over the
/// given cardinalities, in a fixed order: `k`, `0`, then nodes.
pub fn enumerate_universe(spec: &UniverseSpec) -> Vec<Term> {
    let cards = spec.sorted_cards();
    let base = vec![Term::Scalar, Term::zero()];
    let (mut prev_prev, mut prev) = (Vec::new(), base.clone());
    for _ in 0..spec.max_depth {
        let members = level_members(&prev, &prev_prev, spec, &cards);
        let mut next = base.clone();
        next.extend(nodes_over(&members, &cards, spec.max_groups));
        prev_prev = std::mem::replace(&mut prev, next);
    }
    prev
}

/// Terms reached from a seed set by forward rule applications, with every
/// application recorded as an undirected edge.
pub struct Closure {
    pub terms: Vec<Term>,
    pub seed_ids: Vec<usize>,
    pub edges: Vec<(usize, usize, Rule)>,
    classes: UnionFind<usize>,
}

impl Closure {
    /// Explores every rewrite of every reachable term; fails once more than
    /// `cap` terms beyond the seeds have been discovered.
    pub fn explore(seeds: &[Term], cap: usize) -> Result<Closure, Error> {
        let mut index: HashMap<Term, usize> = HashMap::new();
        let mut terms = Vec::new();
        let mut seed_ids = Vec::with_capacity(seeds.len());
        for s in seeds {
            let id = *index.entry(s.clone()).or_insert_with(|| {
                terms.push(s.clone());
                terms.len() - 1
            });
            seed_ids.push(id);
        }
        let seed_count = terms.len();
        let mut edges = Vec::new();
        let mut next = 0;
        while next < terms.len() {
            for rw in all_rewrites(&terms[next]) {
                let id = match index.get(&rw.result) {
                    Some(&id) => id,
                    None => {
                        if terms.len() - seed_count >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        index.insert(rw.result.clone(), terms.len());
                        terms.push(rw.result);
                        terms.len() - 1
                    }
                };
                if id != next {
                    edges.push((next, id, rw.rule));
                }
            }
            next += 1;
        }
        let mut classes = UnionFind::new(terms.len());
        for &(a, b, _) in &edges {
            classes.union(a, b);
        }
        Ok(Closure { terms, seed_ids, edges, classes })
    }

    pub fn class_of(&self, id: usize) -> usize {
        self.classes.find(id)
    }

    pub fn padded(&self) -> usize {
        self.terms.len() - self.seed_ids.iter().collect::<std::collections::HashSet<_>>().len()
    }

    /// Seed indices grouped by class, classes ordered by first seed.
    pub fn seed_partition(&self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, &id) in self.seed_ids.iter().enumerate() {
            let root = self.class_of(id);
            let slot = *by_root.entry(root).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[slot].push(i);
        }
        out
    }
}

/// Partition of `universe` (by index) into classes of the rewrite closure.
pub fn closure_classes(universe: &[Term]) -> Result<Vec<Vec<usize>>, Error> {
    let cap = DEFAULT_PADDING_FACTOR * universe.len().max(1);
    Ok(Closure::explore(universe, cap)?.seed_partition())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Disagreement {
    /// (a) connected terms with different canonical forms
    SameClassDifferentCanonical,
    /// (b) equal canonical forms in different classes
    SameCanonicalDifferentClass,
    /// (c) connected terms with different descriptors
    SameClassDifferentDescriptor,
    /// (d) a single rule application that changes the descriptor
    RuleChangesDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub left: String,
    pub right: String,
    pub kind: Disagreement,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub depth: usize,
    /// `all` when built from every term of the previous level,
    /// `representatives` when built from one term per class.
    pub members: String,
    pub member_count: usize,
    pub seeds: usize,
    pub classes: usize,
    pub padded: usize,
    pub rewrite_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub schema: String,
    pub universe_size: usize,
    pub class_count: usize,
    pub counterexamples: Vec<Counterexample>,
    pub levels: Vec<LevelStats>,
}

impl ClosureReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Runs checks (a) to (d) on the closure of `seeds`.
fn check_closure(closure: &Closure, kappa: &KappaBound, out: &mut Vec<Counterexample>) -> Result<(), Error> {
    let descs: Vec<Descriptor> = closure.terms.iter().map(descriptor).collect();
    let mut canon: Vec<CanonicalTerm> = Vec::with_capacity(closure.terms.len());
    for t in &closure.terms {
        canon.push(canonicalize(t, kappa)?.0);
    }
    let push = |out: &mut Vec<Counterexample>, a: usize, b: usize, kind, detail: String| {
        out.push(Counterexample {
            left: closure.terms[a].to_string(),
            right: closure.terms[b].to_string(),
            kind,
            detail,
        });
    };
    // (d)
    for &(a, b, rule) in &closure.edges {
        if descs[a] != descs[b] {
            push(out, a, b, Disagreement::RuleChangesDescriptor, format!("{rule}: {} vs {}", descs[a], descs[b]));
        }
    }
    // (a) and (c), against the first term of each class.
    let mut first_of: HashMap<usize, usize> = HashMap::new();
    for id in 0..closure.terms.len() {
        let r = *first_of.entry(closure.class_of(id)).or_insert(id);
        if canon[r] != canon[id] {
            push(out, r, id, Disagreement::SameClassDifferentCanonical, format!("{} vs {}", canon[r], canon[id]));
        }
        if descs[r] != descs[id] {
            push(out, r, id, Disagreement::SameClassDifferentDescriptor, format!("{} vs {}", descs[r], descs[id]));
        }
    }
    // (b)
    let mut by_canon: HashMap<&CanonicalTerm, usize> = HashMap::new();
    for (id, c) in canon.iter().enumerate() {
        let r = *by_canon.entry(c).or_insert(id);
        if closure.class_of(r) != closure.class_of(id) {
            push(out, r, id, Disagreement::SameCanonicalDifferentClass, c.to_string());
        }
    }
    Ok(())
}

/// One representative per nonzero class: the smallest seed term.
fn representatives(closure: &Closure) -> Vec<Term> {
    let mut best: BTreeMap<usize, &Term> = BTreeMap::new();
    for &id in &closure.seed_ids {
        let t = &closure.terms[id];
        let slot = best.entry(closure.class_of(id)).or_insert(t);
        if (t.size(), t) < (slot.size(), *slot) {
            *slot = t;
        }
    }
    let mut reps: Vec<Term> = best.into_values().filter(|t| !descriptor(t).eq(&Descriptor::Zero)).cloned().collect();
    reps.sort_by(|a, b| (a.size(), a).cmp(&(b.size(), b)));
    reps
}

/// Builds the universe level by level and checks every level.
///
/// Each level is the set of nodes over the previous level's terms. When
/// that would exceed [`FULL_LEVEL_LIMIT`] terms, the previous level is
/// replaced by one representative per closure class; since the rules apply
/// at every position, this reaches a term of every class of the full level.
pub fn cross_check(spec: &UniverseSpec, kappa: &KappaBound) -> Result<ClosureReport, Error> {
    spec.check()?;
    let cards = spec.sorted_cards();
    if let Some(c) = cards.iter().find(|c| !kappa.admits(c)) {
        return Err(Error::BadUniverse(format!("cardinality {c} is not below {kappa}")));
    }
    let base = vec![Term::Scalar, Term::zero()];
    let mut counterexamples = Vec::new();
    let mut levels = Vec::new();
    let (mut prev_prev, mut prev) = (Vec::new(), base.clone());
    let mut closure = Closure::explore(&prev, DEFAULT_PADDING_FACTOR * prev.len())?;
    check_closure(&closure, kappa, &mut counterexamples)?;
    for depth in 1..=spec.max_depth {
        let full = level_members(&prev, &prev_prev, spec, &cards);
        let full_size = estimate_level_size(full.len() * cards.len(), spec.max_groups);
        let (mode, members) = if full_size <= FULL_LEVEL_LIMIT {
            ("all", full)
        } else {
            let reps = representatives(&closure);
            ("representatives", level_members(&reps, &prev_prev, spec, &cards))
        };
        let mut seeds = base.clone();
        seeds.extend(nodes_over(&members, &cards, spec.max_groups));
        // The cap scales with the level being modelled, not the
        // representative subset that stands in for it.
        let nominal = full_size.max(seeds.len());
        closure = Closure::explore(&seeds, DEFAULT_PADDING_FACTOR.saturating_mul(nominal))?;
        check_closure(&closure, kappa, &mut counterexamples)?;
        levels.push(LevelStats {
            depth,
            members: mode.into(),
            member_count: members.len(),
            seeds: seeds.len(),
            classes: closure.seed_partition().len(),
            padded: closure.padded(),
            rewrite_edges: closure.edges.len(),
        });
        prev_prev = std::mem::replace(&mut prev, seeds);
    }
    let universe_size = closure.seed_ids.len();
    let class_count = closure.seed_partition().len();
    Ok(ClosureReport { schema: SCHEMA.into(), universe_size, class_count, counterexamples, levels })
}

/// `2 + 2 * sum_{s=1..g} C(n + s - 1, s)`, saturating.
fn estimate_level_size(n: usize, g: usize) -> usize {
    let mut total = 0usize;
    let mut c = 1usize;
    for s in 1..=g {
        c = c.saturating_mul(n + s - 1) / s;
        total = total.saturating_add(c);
    }
    total.saturating_mul(2).saturating_add(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn w() -> Cardinal {
        Cardinal::aleph0()
    }

    fn cards(s: &[u64]) -> Vec<Cardinal> {
        s.iter().map(|&n| if n == 0 { w() } else { Cardinal::Finite(n) }).collect()
    }

    #[test]
    fn tiny_universes() {
        let u = enumerate_universe(&UniverseSpec::new(1, vec![w()], 1));
        let printed: Vec<String> = u.iter().map(ToString::to_string).collect();
        assert_eq!(printed, ["k", "0", "pi{w: k}", "sigma{w: k}"]);
        assert_eq!(enumerate_universe(&UniverseSpec::new(0, vec![w()], 1)).len(), 2);
    }

    #[test]
    fn universe_counts() {
        // depth 1 over {2, w}: 2 groups, 2 + 3 multisets, two kinds, plus k, 0.
        assert_eq!(enumerate_universe(&UniverseSpec::new(1, cards(&[2, 0]), 2)).len(), 12);
        // depth 2: 11 members, 22 groups, 22 + 253 multisets.
        assert_eq!(enumerate_universe(&UniverseSpec::new(2, cards(&[2, 0]), 2)).len(), 552);
        assert_eq!(enumerate_universe(&UniverseSpec::new(2, cards(&[1, 2, 0]), 2)).len(), 3422);
        assert_eq!(estimate_level_size(57, 2), 3422);
    }

    #[test]
    fn universe_is_duplicate_free_and_deterministic() {
        let spec = UniverseSpec::new(2, cards(&[1, 2, 0]), 2);
        let u = enumerate_universe(&spec);
        let set: std::collections::HashSet<_> = u.iter().collect();
        assert_eq!(set.len(), u.len());
        assert_eq!(u, enumerate_universe(&spec));
    }

    #[test]
    fn ramps_can_be_enumerated() {
        let mut spec = UniverseSpec::new(2, vec![w()], 1);
        spec.allow_ramps = true;
        let u = enumerate_universe(&spec);
        assert!(u.iter().any(|t| t.to_string() == "sigma{w: ramp(pi, w, k)}"));
        assert_eq!(u.len(), 2 + 2 * (3 + 2));
    }

    #[test]
    fn closure_examples() {
        let p = |s: &str| parse(s).unwrap();
        assert_eq!(closure_classes(&[p("pi{1:k}"), p("k")]).unwrap().len(), 1);
        assert_eq!(closure_classes(&[p("pi{w:k}"), p("sigma{w:k}")]).unwrap().len(), 2);
        assert_eq!(closure_classes(&[p("pi{w:pi{w:k}}"), p("pi{w:k}")]).unwrap().len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let t = parse("sigma{2: pi{1: k, 1: sigma{w: k}}, 3: k}").unwrap();
        assert_eq!(Closure::explore(&[t], 1).err(), Some(Error::CapExceeded { cap: 1 }));
    }

    #[test]
    fn depth_one_report() {
        let r = cross_check(&UniverseSpec::new(1, vec![w()], 1), &KappaBound::AllOrdinals).unwrap();
        assert!(r.is_clean(), "{:?}", r.counterexamples);
        assert_eq!((r.universe_size, r.class_count), (4, 4));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ClosureReport>(&json).unwrap(), r);
    }

    #[test]
    fn bad_specs() {
        let k = KappaBound::AllOrdinals;
        assert!(cross_check(&UniverseSpec::new(1, vec![], 1), &k).is_err());
        assert!(cross_check(&UniverseSpec::new(1, vec![w()], 0), &k).is_err());
        assert!(cross_check(&UniverseSpec::new(1, vec![w()], 1), &KappaBound::Bounded(w())).is_err());
    }
}
