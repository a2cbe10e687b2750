//! Three-valued isomorphism checks between pairs of spaces.

use reid_hier::{decide_iso, parse, IsoVerdict, KappaBound};

const PAIRS: &[(&str, &str)] = &[
    ("k x l_inf(w, k)", "l_inf(w, k)"),
    ("k^5 x c0(w, l_inf(w, k))", "c0(w, l_inf(w, k))"),
    ("l_inf(w, k)", "c0(w, k)"),
    ("l_inf(w, l_inf(w, k))", "l_inf(w, k)"),
    ("sigma{w: k, 1: pi{w: k}}", "l_inf(w, k) x c0(w, k)"),
    ("pi{w: k}", "pi{w1: k}"),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&[])
}

pub fn run(_args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let kappa = KappaBound::AllOrdinals;
    for (a, b) in PAIRS {
        let decision = decide_iso(&parse(a)?, &parse(b)?, &kappa)?;
        println!("{a}  vs  {b}");
        match &decision.verdict {
            IsoVerdict::Isomorphic { canonical } => println!("  isomorphic, both {canonical}"),
            IsoVerdict::NonIsomorphic { left, right } => println!("  not isomorphic: {left} vs {right}"),
            // Same invariant, different canonical forms: the class invariant
            // cannot separate them and no rewrite connects them.
            IsoVerdict::Unknown { shared, left_canonical, right_canonical } => {
                println!("  unknown: both {shared}, canonical {left_canonical} vs {right_canonical}")
            }
        }
        println!("  derivations: {} and {} steps", decision.left.len(), decision.right.len());
    }
    Ok(())
}
