//! Cross-check the canonicalizer against rewrite closure on a small
//! universe: `cargo run --release --example oracle -- 2 1,2,w 2`.

use reid_hier::{cross_check, parse, Cardinal, KappaBound, UniverseSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    run(&args)
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let mut args = args.iter();
    let depth: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let cards: Vec<Cardinal> = match args.next() {
        Some(list) => list.split(',').map(reid_hier::parser::parse_cardinal).collect::<Result<_, _>>()?,
        None => vec![Cardinal::Finite(2), Cardinal::aleph0()],
    };
    let max_groups: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);

    let spec = UniverseSpec::new(depth, cards, max_groups);
    let report = cross_check(&spec, &KappaBound::AllOrdinals)?;
    println!("{} terms in {} classes", report.universe_size, report.class_count);
    for level in &report.levels {
        println!(
            "  depth {}: {} seeds, {} classes, {} padding terms, {} rewrite edges",
            level.depth, level.seeds, level.classes, level.padded, level.rewrite_edges
        );
    }
    if report.is_clean() {
        println!("no disagreements between closure classes and canonical forms");
    }
    for c in &report.counterexamples {
        println!("  {:?}: {} / {}", c.kind, c.left, c.right);
    }

    // Small hand-picked sets go through the same machinery.
    let small = ["pi{1: k}", "k", "pi{w: pi{w: k}}", "pi{w: k}", "sigma{w: k}"];
    let terms = small.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
    let classes = reid_hier::oracle::closure_classes(&terms)?;
    let named: Vec<Vec<&str>> = classes.iter().map(|c| c.iter().map(|&i| small[i]).collect()).collect();
    println!("closure classes of {small:?}: {named:?}");
    Ok(())
}
