//! Parse a structure and a formula, then evaluate it exactly.

use metrilog::parser::{parse_formula, parse_structure};
use metrilog::semantics::{evaluate, satisfies, EvalConfig};
use metrilog::structure::Assignment;

const STRUCTURE: &str = "structure two
pred P/1 identity
points a b
d(a, b) = 1/2
P(a) = 1/4
P(b) = 3/4
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_structure(STRUCTURE)?;
    let cfg = EvalConfig::default();

    let open = parse_formula("P(x) -> P(y)", m.signature())?;
    for (x, y) in [("a", "b"), ("b", "a")] {
        let a = Assignment::parse(&format!("x={x}, y={y}"), &m)?;
        println!("P({x}) -> P({y}) = {}", evaluate(&m, &open, &a, &cfg)?);
    }

    let sentence = parse_formula("sup x . P(x) >= 3/4", m.signature())?;
    println!("sup x . P(x) >= 3/4 holds: {}", satisfies(&m, &sentence, &cfg)?);
    Ok(())
}
