//! Ramps: omega-indexed families whose members climb the hierarchy, giving
//! limit ranks.

use reid_hier::{classify, parse, KappaBound, Kind, Ramp, Term};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&[])
}

pub fn run(_args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let kappa = KappaBound::AllOrdinals;
    let ramp = Ramp::new(Kind::Sigma, "w".parse()?, Term::Scalar)?;
    println!("first members of ramp(sigma, w, k):");
    for n in 1..=4 {
        let w_n = ramp.member_at(n);
        println!("  W_{n} = {w_n}  ({})", classify(&w_n, &kappa)?);
    }

    println!();
    for src in [
        "pi{w: ramp(sigma, w, k)}",
        "sigma{w: ramp(pi, w, k)}",
        "pi{w: ramp(sigma, w, pi{w: ramp(sigma, w, k)})}",
        "pi{w: ramp(sigma, w, pi{w: ramp(sigma, w, pi{w: ramp(sigma, w, k)})})}",
        "pi{1: ramp(sigma, w, k), 1: sigma{w: ramp(pi, w, k)}}",
    ] {
        println!("{src}\n  {}", classify(&parse(src)?, &kappa)?);
    }
    Ok(())
}
