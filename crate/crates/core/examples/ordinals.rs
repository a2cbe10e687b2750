//! Cantor normal form arithmetic and index-set bounds.

use reid_hier::{Cardinal, KappaBound, Ordinal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&[])
}

pub fn run(_args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let w = Ordinal::omega();
    let a: Ordinal = "w^2*3+w+4".parse()?;
    let b: Ordinal = "w^(w+1)".parse()?;

    println!("1 + w = {}", Ordinal::finite(1).add(&w));
    println!("w + 1 = {}", w.add(&Ordinal::finite(1)));
    println!("{a} + {w} = {}", a.add(&w));
    println!("{a} + {b} = {}", a.add(&b));
    println!("{a} < {b}: {}", a < b);
    println!("sup {{{a}, {b}, {w}}} = {}", Ordinal::sup([&a, &b, &w]).expect("nonempty"));
    for o in [&a, &w, &b.succ()] {
        let shape = if o.is_limit() { "limit" } else { "successor" };
        println!("{o} is a {shape}; pred = {}", o.pred().map_or_else(|e| e.to_string(), |p| p.to_string()));
    }

    println!();
    let w1 = KappaBound::bounded(Cardinal::aleph1()).expect("infinite");
    for c in [Cardinal::Finite(7), Cardinal::aleph0(), Cardinal::aleph1()] {
        println!("{c} < {w1}: {}", c.lt_kappa(&w1));
    }
    println!("w * 3 = {}", Cardinal::aleph0().product(&Cardinal::Finite(3)));
    println!("3 * 4 = {}", Cardinal::Finite(3).product(&Cardinal::Finite(4)));
    Ok(())
}
