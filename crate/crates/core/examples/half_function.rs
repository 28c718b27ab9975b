//! The formula `Half_n(φ)` approaches half the value of `φ` from below.

use metrilog::rational::Rational01;
use metrilog::semantics::{evaluate, EvalConfig};
use metrilog::signature::Signature;
use metrilog::structure::{Assignment, StructureBuilder};
use metrilog::syntax::{half, Formula};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = StructureBuilder::new("point", Signature::new(), &["a"])?.build()?;
    let cfg = EvalConfig::default();
    for x in [Rational01::of(1, 2), Rational01::of(3, 5), Rational01::one()] {
        let row: Vec<String> = [1, 2, 4, 8, 16, 32]
            .iter()
            .map(|&n| {
                let v = evaluate(&m, &half(Formula::constant(x.clone()), n), &Assignment::new(), &cfg).unwrap();
                format!("n={n}: {}", v.lo())
            })
            .collect();
        println!("x = {x}: {}", row.join(", "));
    }
    Ok(())
}
