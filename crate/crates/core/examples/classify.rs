//! Classify a few spaces and show where each sits in the hierarchy.
//!
//! `cargo run --example classify -- "pi{w: k, 1: sigma{w: k}}"` classifies
//! the given expression instead of the built-in list.

use reid_hier::{classify, member_of, parse, rank_profile, ClassQuery, KappaBound};

const SPACES: &[&str] = &[
    "k^3",
    "l_inf(w, k)",
    "c0(w, k)",
    "c0(w, l_inf(w, k))",
    "pi{w: k, 1: sigma{w: k}}",
    "pi{w: sigma{w: k}, 1: sigma{w: pi{w: k}}}",
    "k^2 x c0(w, l_inf(w, k))",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    run(&args)
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let inputs: Vec<&str> = if args.is_empty() { SPACES.to_vec() } else { args.iter().map(String::as_str).collect() };
    let kappa = KappaBound::AllOrdinals;
    let queries: Vec<ClassQuery> = ["fk", "delta(2)", "pi(2)", "sigma(2)"].iter().map(|q| q.parse()).collect::<Result<_, _>>()?;

    for src in inputs {
        let t = parse(src)?;
        let d = classify(&t, &kappa)?;
        println!("{src}");
        println!("  {d} (Reid rank {})", d.reid_rank());
        let profile = rank_profile(&t);
        println!("  beta0 = {}, {} profile entries", profile.beta0(), profile.entries.len());
        let held: Vec<String> = queries
            .iter()
            .filter(|q| member_of(&t, q, &kappa).unwrap_or(false))
            .map(ToString::to_string)
            .collect();
        println!("  in: {}", if held.is_empty() { "-".to_string() } else { held.join(", ") });
    }
    Ok(())
}
