//! Rewrite expressions to canonical form and print the derivation.
//!
//! Pass expressions as arguments to normalize your own.

use reid_hier::canon::rules::Rule;
use reid_hier::{canonicalize, parse, KappaBound};

const INPUTS: &[&str] = &[
    "pi{3: k, 2: k}",
    "pi{w: pi{w: k}}",
    "sigma{2: pi{w: k}}",
    "k^4 x l_inf(w, c0(w, k))",
    "sigma{w: k, 1: pi{w: k}}",
    "sigma{w: sigma{w: k}, 1: pi{w: sigma{w: k}}}",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    run(&args)
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    println!("rules, in priority order:");
    for rule in Rule::PRIORITY {
        println!("  {}: {}", rule.name(), rule.summary());
    }

    let inputs: Vec<&str> = if args.is_empty() { INPUTS.to_vec() } else { args.iter().map(String::as_str).collect() };
    for src in inputs {
        let t = parse(src)?;
        let (canon, trace) = canonicalize(&t, &KappaBound::AllOrdinals)?;
        println!();
        println!("{t}  =>  {canon}  [{}, {}]", canon.form(), canon.descriptor());
        for step in &trace.steps {
            let at = if step.path.is_empty() { "root".to_string() } else { format!("{:?}", step.path) };
            println!("  {} at {at}: {} -> {}", step.rule.name(), step.before, step.after);
        }
        // Replaying the trace from the input reproduces the normal form.
        assert_eq!(trace.replay(&t)?, canon.to_term());
    }
    Ok(())
}
