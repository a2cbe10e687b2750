//! The alternating towers `V_{t,n}` and their pairwise distinctness.

use reid_hier::{classify, decide_iso, Cardinal, IsoVerdict, KappaBound, Kind, Term};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    run(&args)
}

pub fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let n_max: usize = args.first().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let kappa = KappaBound::AllOrdinals;
    let mut towers = Vec::new();
    for kind in [Kind::Pi, Kind::Sigma] {
        for n in 1..=n_max {
            let t = Term::tower(kind, n, Cardinal::aleph0());
            println!("{} {n}: {t}  ({})", kind.keyword(), classify(&t, &kappa)?);
            towers.push(t);
        }
    }

    println!();
    println!("pairwise verdicts (= isomorphic, . not isomorphic, ? unknown):");
    for a in &towers {
        let row: String = towers
            .iter()
            .map(|b| match decide_iso(a, b, &kappa).map(|d| d.verdict) {
                Ok(IsoVerdict::Isomorphic { .. }) => '=',
                Ok(IsoVerdict::NonIsomorphic { .. }) => '.',
                _ => '?',
            })
            .collect();
        println!("  {row}");
    }
    Ok(())
}
