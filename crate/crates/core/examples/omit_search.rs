//! Search a registry for a model of a theory that omits a type.

use metrilog::omitting::{omit_search, PartialType};
use metrilog::parser::{parse_formula, parse_structure};
use metrilog::semantics::{EvalConfig, Registry, Theory};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let structures = [("low", "1/4"), ("mid", "1/2"), ("top", "1")]
        .iter()
        .map(|(name, p)| parse_structure(&format!("structure {name}\npred P/1 identity\npoints a\nP(a) = {p}\n")))
        .collect::<Result<Vec<_>, _>>()?;
    let sig = structures[0].signature().clone();
    let registry = Registry::new("candidates", structures)?;
    let theory = Theory::new("AtLeastHalf", vec![parse_formula("sup x . P(x) >= 1/2", &sig)?])?;
    let top = PartialType::of_formulas("Top", &["x"], vec![parse_formula("P(x)", &sig)?])?;

    let report = omit_search(&theory, &[top], &registry, &EvalConfig::default())?;
    match report.found {
        Some(k) => println!("found {}", registry.structures()[k].name()),
        None => println!("no registry model omits the type"),
    }
    for scan in &report.scanned {
        println!("  {}: models={} omissions={:?}", scan.structure_name, scan.model, scan.omissions);
    }
    Ok(())
}
