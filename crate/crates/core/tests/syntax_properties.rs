mod common;

use common::*;
use metrilog::parser::{parse_formula, print_formula};
use metrilog::semantics::{evaluate, EvalConfig};
use metrilog::structure::{tuples, Assignment};
use metrilog::syntax::{alpha_eq, free_variables, substitute, Formula, Term};
use proptest::prelude::*;

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(seed in seeds()) {
        let ast = random_ast(&mut rng(seed), 4, &mut Vec::new());
        let printed = print_formula(&ast);
        let back = parse_formula(&printed, &ast_signature()).unwrap();
        prop_assert_eq!(print_formula(&back), printed);
        prop_assert_eq!(back, ast);
    }

    #[test]
    fn closing_leaves_no_free_variables(seed in seeds()) {
        let mut r = rng(seed);
        let phi = random_sentence(&mut r, 4, false);
        prop_assert!(phi.is_sentence());
        prop_assert!(free_variables(&phi).is_empty());
    }

    /// Evaluating `φ[x := t]` equals evaluating `φ` with `x` bound to the
    /// value of `t` (capture-avoiding substitution).
    #[test]
    fn substitution_lemma(seed in seeds()) {
        let mut r = rng(seed);
        let m = random_metric(&mut r, 3, "m");
        let phi = random_finitary(&mut r, 3, false);
        let t = Term::apply("f", vec![Term::var("y")]);
        let cfg = EvalConfig::default();
        let substituted = substitute(&phi, "x", &t);
        for b in tuples(m.size(), 3) {
            let a = Assignment::from_pairs([("x", b[0]), ("y", b[1]), ("z", b[2])]).unwrap();
            let fy = m.apply("f", &[b[1]]).unwrap();
            let shifted = Assignment::from_pairs([("x", fy), ("y", b[1]), ("z", b[2])]).unwrap();
            prop_assert_eq!(evaluate(&m, &substituted, &a, &cfg).unwrap(), evaluate(&m, &phi, &shifted, &cfg).unwrap());
        }
    }

    #[test]
    fn substituting_a_variable_for_itself_is_alpha_equal(seed in seeds()) {
        let phi = random_finitary(&mut rng(seed), 4, false);
        prop_assert!(alpha_eq(&substitute(&phi, "x", &Term::var("x")), &phi));
    }

    #[test]
    fn free_variables_after_substitution(seed in seeds()) {
        let phi = random_finitary(&mut rng(seed), 4, false);
        let fv = free_variables(&phi);
        let out = free_variables(&substitute(&phi, "x", &Term::var("w")));
        let mut expected = fv.clone();
        if expected.remove("x") {
            expected.insert("w".to_string());
        }
        prop_assert_eq!(out, expected);
    }
}

#[test]
fn bound_variables_are_renamed_on_capture() {
    let phi = Formula::sup("y", Formula::dist(Term::var("x"), Term::var("y")));
    let out = substitute(&phi, "x", &Term::var("y"));
    assert_eq!(free_variables(&out), ["y".to_string()].into());
}
