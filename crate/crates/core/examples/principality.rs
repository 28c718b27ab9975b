//! Principality of `{P(x)}` over the empty theory, relative to the registry of
//! one-point structures with `P ∈ {0, 1/2, 1}`.

use metrilog::omitting::{metrically_principal_over, principal_over, PartialType, PrincipalityWitnessPool};
use metrilog::parser::{parse_formula, parse_structure};
use metrilog::rational::Rational01;
use metrilog::semantics::{EvalConfig, Registry, Theory};
use metrilog::syntax::Term;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let structures = ["0", "1/2", "1"]
        .iter()
        .map(|p| {
            parse_structure(&format!("structure p{}\npred P/1 identity\npoints a\nP(a) = {p}\n", p.replace('/', "_")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sig = structures[0].signature().clone();
    let registry = Registry::new("grid", structures)?;
    let sigma = PartialType::of_formulas("Sigma", &["x"], vec![parse_formula("P(x)", &sig)?])?;
    let cfg = EvalConfig::default();
    let y = vec![vec![Term::var("y")]];

    let exact = PrincipalityWitnessPool::new(
        vec!["y".into()],
        vec![parse_formula("P(y)", &sig)?],
        y.clone(),
        vec![Rational01::of(3, 4)],
    )?;
    let report = principal_over(&Theory::empty(), &sigma, &exact, &registry, &cfg)?;
    println!("pool P(y), 3/4: {:?}", report.verdict);

    let constants = PrincipalityWitnessPool::new(
        vec!["y".into()],
        vec![parse_formula("1", &sig)?, parse_formula("1/2", &sig)?],
        y,
        vec![Rational01::of(1, 4), Rational01::of(3, 4)],
    )?;
    let report = principal_over(&Theory::empty(), &sigma, &constants, &registry, &cfg)?;
    println!("constant pool: {:?}", report.verdict);
    for t in &report.trials {
        println!("  {} >= {}: {:?}", t.triple.formula, t.triple.threshold, t.failure);
    }

    let deltas = [Rational01::of(1, 8), Rational01::of(1, 4)];
    let metric = metrically_principal_over(&Theory::empty(), &sigma, &exact, &registry, &deltas, &cfg)?;
    println!("metric principality over {deltas:?}: {:?}", metric.verdict);
    Ok(())
}
