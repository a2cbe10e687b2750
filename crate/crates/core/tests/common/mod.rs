#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use reid_hier::{Cardinal, Group, Kind, Member, Ordinal, Ramp, Term};

pub fn w() -> Cardinal {
    Cardinal::aleph0()
}

/// Index cardinalities used by the random generators, all below `w1`.
pub fn small_cards() -> Vec<Cardinal> {
    vec![Cardinal::Finite(1), Cardinal::Finite(2), Cardinal::Finite(3), w()]
}

fn kind<R: Rng>(rng: &mut R) -> Kind {
    if rng.gen_bool(0.5) {
        Kind::Pi
    } else {
        Kind::Sigma
    }
}

/// A random term of depth at most `depth`. Ramps appear with probability
/// `ramp_p` at each member position.
pub fn random_term<R: Rng>(rng: &mut R, depth: usize, ramp_p: f64) -> Term {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_ratio(1, 8) { Term::zero() } else { Term::Scalar };
    }
    let cards = small_cards();
    let n = rng.gen_range(0..=3);
    let groups = (0..n)
        .map(|_| {
            let card = cards.choose(rng).unwrap().clone();
            let member = if rng.gen_bool(ramp_p) {
                let base = random_term(rng, depth - 1, ramp_p / 2.0);
                Member::Ramp(Ramp::new(kind(rng), w(), base).unwrap())
            } else {
                Member::Closed(random_term(rng, depth - 1, ramp_p))
            };
            Group::new(card, member)
        })
        .collect();
    Term::node(kind(rng), groups).unwrap()
}

/// A random ordinal below `w^w` with small coefficients.
pub fn random_small_ordinal<R: Rng>(rng: &mut R) -> Ordinal {
    let top = rng.gen_range(0..4u64);
    let mut terms = Vec::new();
    for e in (0..=top).rev() {
        let c = if rng.gen_ratio(1, 3) { 0 } else { rng.gen_range(1..4u64) };
        if c > 0 {
            terms.push((Ordinal::finite(e), c));
        }
    }
    Ordinal::from_cnf(terms).unwrap()
}
