//! The δ-thickening of a type is realized throughout the δ-ball of any
//! realization.

use metrilog::omitting::{realizes, thicken, PartialType};
use metrilog::parser::{parse_formula, parse_structure, print_type};
use metrilog::rational::Rational01;
use metrilog::semantics::EvalConfig;

const STRUCTURE: &str = "structure line
pred P/1 identity
points a b c
d(a, b) = 1/4
d(b, c) = 1/2
d(a, c) = 3/4
P(a) = 1
P(b) = 3/4
P(c) = 1/4
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_structure(STRUCTURE)?;
    let sigma = PartialType::of_formulas("Top", &["x"], vec![parse_formula("P(x)", m.signature())?])?;
    let cfg = EvalConfig::default();
    for delta in [Rational01::of(1, 4), Rational01::of(1, 2)] {
        let thick = thicken(&sigma, &delta)?;
        print!("{}", print_type(&thick));
        for (p, name) in m.points().iter().enumerate() {
            println!(
                "  {name}: Sigma {}  thickened {}",
                realizes(&m, &sigma, &[p], &cfg)?,
                realizes(&m, &thick, &[p], &cfg)?
            );
        }
    }
    Ok(())
}
