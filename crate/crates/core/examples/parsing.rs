//! Parsing, printing and error spans.

use reid_hier::{parse, print, KappaBound};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run(&[])
}

pub fn run(_args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    for src in [
        "k^3 x c0(w, k)",
        "l_inf(w1, sigma{w: k, 2: pi{w: k}})",
        "pi{w: ramp(sigma, w, k)}",
        "pi{0: k}",
        "sigma{w: k",
        "k^0",
        "pi{w1: k}",
    ] {
        match parse(src) {
            Ok(t) => match t.validate(&KappaBound::bounded("w1".parse().unwrap()).unwrap()) {
                Ok(()) => println!("{src:<40} => {}", print(&t)),
                Err(violations) => {
                    for v in violations {
                        println!("{src:<40} => rejected under w1: {} at {:?} ({})", v.cardinal, v.path, v.reason);
                    }
                }
            },
            Err(e) => {
                println!("{src:<40} => error: {}", e.message);
                println!("{:<40}    {}{}", "", " ".repeat(e.span.start), "^".repeat((e.span.end - e.span.start).max(1)));
            }
        }
    }
    Ok(())
}
