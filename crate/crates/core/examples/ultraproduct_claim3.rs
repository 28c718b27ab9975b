//! Ultraproducts of an eventually constant sequence, and the comparison of a
//! sentence's value there with the limit of its factor values.

use metrilog::parser::{parse_formula, parse_structure, print_structure};
use metrilog::semantics::EvalConfig;
use metrilog::ultraproduct::{check_claim3, ultraproduct, StructureSequence, UltrafilterSpec};

fn structure(name: &str, p: &str) -> String {
    format!(
        "structure {name}
pred P/1 identity
const c
points a b b2
d(a, b) = 1
d(a, b2) = 1
d(b, b2) = 0
P(a) = {p}
P(b) = 1
P(b2) = 1
c = a
"
    )
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prefix = vec![parse_structure(&structure("m0", "0"))?, parse_structure(&structure("m1", "1/2"))?];
    let tail = parse_structure(&structure("tail", "3/4"))?;
    let seq = StructureSequence::eventually(prefix, tail)?;

    let u = ultraproduct(&seq, UltrafilterSpec::FrechetLimit)?;
    print!("{}", print_structure(&u.structure));
    println!("# surjection verified: {}", u.verify(seq.factor(UltrafilterSpec::FrechetLimit)?));

    let sigma = parse_formula("P(c) >= 3/4", u.structure.signature())?;
    for d in [UltrafilterSpec::principal(0), UltrafilterSpec::principal(1), UltrafilterSpec::FrechetLimit] {
        let r = check_claim3(&seq, d, &sigma, &EvalConfig::default())?;
        println!("{d}: ultraproduct {} limit {} equal {}", r.ultraproduct_value, r.limit_value, r.equal);
    }
    Ok(())
}
