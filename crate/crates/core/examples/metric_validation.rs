//! Check the metric axioms and a modulus of uniform continuity.

use metrilog::rational::Rational01;
use metrilog::signature::{Modulus, Signature};
use metrilog::structure::{validate, StructureBuilder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sig = Signature::new().with_predicate("P", 1, Modulus::Identity)?;
    let mut b = StructureBuilder::new("steep", sig, &["a", "b", "c"])?;
    b.dist("a", "b", Rational01::of(1, 4))?.dist("b", "c", Rational01::of(1, 4))?.dist(
        "a",
        "c",
        Rational01::of(1, 1),
    )?;
    b.predicate("P", &["a"], Rational01::zero())?.predicate("P", &["b"], Rational01::of(1, 2))?.predicate(
        "P",
        &["c"],
        Rational01::one(),
    )?;
    let m = b.build()?;

    let report = validate(&m);
    println!("metric: {}", report.metric.is_metric());
    for v in &report.metric.violations {
        println!("  {v:?}");
    }
    for r in &report.moduli {
        println!("modulus of {}: holds = {}", r.symbol, r.holds());
        for c in &r.counterexamples {
            println!("  {c:?}");
        }
    }
    Ok(())
}
