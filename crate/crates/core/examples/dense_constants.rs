//! Truncated evaluation of an infinitary sentence: the interval narrows as
//! more schema instances are inspected, and becomes exact once the
//! enumeration of the constants is covered.

use metrilog::corpus::dense_constants;
use metrilog::parser::print_formula;
use metrilog::semantics::{evaluate, EvalConfig, Verdict};
use metrilog::structure::Assignment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, phi) = dense_constants();
    println!("{}", print_formula(&phi));
    for depth in 1..=6 {
        let iv = evaluate(&m, &phi, &Assignment::new(), &EvalConfig::with_depth(depth))?;
        println!("depth {depth}: {iv}  verdict {}", Verdict::of_interval(&iv));
    }
    Ok(())
}
