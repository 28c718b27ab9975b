//! Formulas print canonically and parse back to the same tree.

use metrilog::corpus::check_corpus;
use metrilog::parser::{parse_formula, parse_signature, print_formula};

const SIGNATURE: &str = "signature S
func f/1 identity
pred P/1 identity
family e
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, sig) = parse_signature(SIGNATURE)?;
    for src in ["~ P(x) \\/ P(f(x))", "Vee i . P(e[2*i+1]) >= 1/(i+2)", "inf x . Wedge n . d(x, e[n]) <= rat[n]"] {
        let phi = parse_formula(src, &sig)?;
        let printed = print_formula(&phi);
        let again = parse_formula(&printed, &sig)?;
        println!("{src}\n  -> {printed}\n  fixed point: {}", again == phi);
    }
    for check in check_corpus() {
        println!("corpus {}: {}", check.name, if check.ok() { "ok" } else { "FAILED" });
    }
    Ok(())
}
