//! Shared generators and independent oracles for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use metrilog::rational::Rational01;
use metrilog::signature::{Modulus, PositiveRational, Signature};
use metrilog::structure::{MetricStructure, Point, StructureBuilder};
use metrilog::syntax::{and, inf, neg, or, trunc_plus, Affine, Formula, IndexExpr, RatExpr, Schema, Term};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(p: i64, d: i64) -> Rational01 {
    Rational01::of(p, d)
}

/// `{0, 1/k, …, 1}`.
pub fn grid(k: i64) -> Vec<Rational01> {
    (0..=k).map(|i| q(i, k)).collect()
}

/// `f/1`, `P/1`, `R/2` and a constant `c`. The constant moduli only force
/// agreement on points at distance 0, which every generated structure has.
pub fn small_signature() -> Signature {
    let quarter = Modulus::constant(q(1, 4)).unwrap();
    Signature::new()
        .with_function("f", 1, quarter.clone())
        .unwrap()
        .with_predicate("P", 1, Modulus::Identity)
        .unwrap()
        .with_predicate("R", 2, quarter)
        .unwrap()
        .with_constant("c")
        .unwrap()
}

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// A classical structure: discrete metric, `{0, 1}`-valued predicates.
pub fn random_discrete(rng: &mut StdRng, max_points: usize) -> MetricStructure {
    let n = rng.gen_range(1..=max_points);
    let mut b = StructureBuilder::with_points("D", small_signature(), point_names(n)).unwrap();
    b.metric_fn(|x, y| if x == y { Rational01::zero() } else { Rational01::one() });
    let f: Vec<Point> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let p: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let r: Vec<bool> = (0..n * n).map(|_| rng.gen()).collect();
    let bit = |v: bool| if v { Rational01::one() } else { Rational01::zero() };
    b.function_fn("f", |a| f[a[0]]).unwrap();
    b.predicate_fn("P", |a| bit(p[a[0]])).unwrap();
    b.predicate_fn("R", |a| bit(r[a[0] * n + a[1]])).unwrap();
    let c = format!("p{}", rng.gen_range(0..n));
    b.constant("c", &c).unwrap();
    b.build().unwrap()
}

/// A structure with at most `max_points` points that satisfies the metric
/// axioms and every declared modulus. Points may be duplicated at distance 0.
pub fn random_metric(rng: &mut StdRng, max_points: usize, name: &str) -> MetricStructure {
    let n = rng.gen_range(1..=max_points);
    // class of each point; classes are dense in 0..k
    let mut class: Vec<usize> = (0..n).map(|i| rng.gen_range(0..=i)).collect();
    let mut seen = Vec::new();
    for c in class.iter_mut() {
        let k = seen.iter().position(|s| s == c).unwrap_or_else(|| {
            seen.push(*c);
            seen.len() - 1
        });
        *c = k;
    }
    let k = seen.len();
    let far = [q(1, 2), q(3, 4), q(1, 1)];
    let mut dist = vec![Rational01::zero(); k * k];
    for a in 0..k {
        for b in a + 1..k {
            let v = far.choose(rng).unwrap().clone();
            dist[a * k + b] = v.clone();
            dist[b * k + a] = v;
        }
    }
    let mid = [q(1, 4), q(1, 2), q(3, 4)];
    let p: Vec<Rational01> = (0..k).map(|_| mid.choose(rng).unwrap().clone()).collect();
    let g = grid(4);
    let r: Vec<Rational01> = (0..k * k).map(|_| g.choose(rng).unwrap().clone()).collect();
    let members = |c: usize| (0..n).filter(|&i| class[i] == c).collect::<Vec<_>>();
    let f: Vec<Point> = (0..k).map(|_| *members(rng.gen_range(0..k)).choose(rng).unwrap()).collect();
    let mut b = StructureBuilder::with_points(name, small_signature(), point_names(n)).unwrap();
    b.metric_fn(|x, y| dist[class[x] * k + class[y]].clone());
    b.function_fn("f", |a| f[class[a[0]]]).unwrap();
    b.predicate_fn("P", |a| p[class[a[0]]].clone()).unwrap();
    b.predicate_fn("R", |a| r[class[a[0]] * k + class[a[1]]].clone()).unwrap();
    let c = format!("p{}", rng.gen_range(0..n));
    b.constant("c", &c).unwrap();
    b.build().unwrap()
}

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn random_term(rng: &mut StdRng, depth: usize) -> Term {
    match rng.gen_range(0..if depth == 0 { 4 } else { 5 }) {
        0 => Term::constant("c"),
        4 => Term::apply("f", vec![random_term(rng, depth - 1)]),
        _ => Term::var(VARS.choose(rng).unwrap()),
    }
}

/// A finitary formula over [`small_signature`] built with the connective
/// macros. With `classical`, rational constants are restricted to `{0, 1}`.
pub fn random_finitary(rng: &mut StdRng, depth: usize, classical: bool) -> Formula {
    let leaf = |rng: &mut StdRng| match rng.gen_range(0..4) {
        0 => Formula::dist(random_term(rng, 1), random_term(rng, 1)),
        1 => Formula::pred("P", vec![random_term(rng, 1)]),
        2 => Formula::pred("R", vec![random_term(rng, 1), random_term(rng, 1)]),
        _ => {
            let choices = if classical { grid(1) } else { grid(4) };
            Formula::constant(choices.choose(rng).unwrap().clone())
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut StdRng| random_finitary(rng, depth - 1, classical);
    match rng.gen_range(0..9) {
        0 => leaf(rng),
        1 => Formula::implies(sub(rng), sub(rng)),
        2 => neg(sub(rng)),
        3 => or(sub(rng), sub(rng)),
        4 => and(sub(rng), sub(rng)),
        5 => trunc_plus(sub(rng), sub(rng)),
        6 => Formula::sup(VARS.choose(rng).unwrap(), sub(rng)),
        7 => inf(VARS.choose(rng).unwrap(), sub(rng)),
        _ => Formula::sup_seq(Schema::explicit(vec![sub(rng), sub(rng)]).unwrap()),
    }
}

/// Binds every free variable with a random quantifier.
pub fn close(rng: &mut StdRng, phi: Formula) -> Formula {
    phi.free_variables().into_iter().fold(phi, |acc, v| if rng.gen() { Formula::sup(&v, acc) } else { inf(&v, acc) })
}

pub fn random_sentence(rng: &mut StdRng, depth: usize, classical: bool) -> Formula {
    let phi = random_finitary(rng, depth, classical);
    close(rng, phi)
}

/// Two-valued evaluation of a core formula on a classical structure, coded
/// directly from the classical truth tables.
pub fn classical_value(m: &MetricStructure, phi: &Formula, env: &BTreeMap<String, Point>) -> bool {
    fn term(m: &MetricStructure, t: &Term, env: &BTreeMap<String, Point>) -> Point {
        match t {
            Term::Var { name } => env[name],
            Term::Const { name } => m.constant(name).unwrap(),
            Term::Apply { function, args } => {
                let args: Vec<Point> = args.iter().map(|a| term(m, a, env)).collect();
                m.apply(function, &args).unwrap()
            }
            Term::Indexed { .. } => panic!("no families in classical tests"),
        }
    }
    match phi {
        Formula::Dist { left, right } => term(m, left, env) != term(m, right, env),
        Formula::Pred { predicate, args } => {
            let args: Vec<Point> = args.iter().map(|a| term(m, a, env)).collect();
            m.predicate(predicate, &args).unwrap().is_one()
        }
        Formula::Const { value: RatExpr::Fixed { value } } => value.is_one(),
        Formula::Const { .. } => panic!("index-dependent constant in a finitary formula"),
        Formula::Implies { antecedent, consequent } => {
            !classical_value(m, antecedent, env) || classical_value(m, consequent, env)
        }
        Formula::SupVar { var, body } => (0..m.size()).any(|p| {
            let mut inner = env.clone();
            inner.insert(var.clone(), p);
            classical_value(m, body, &inner)
        }),
        Formula::SupSeq { schema: Schema::Explicit { members } } => members.iter().any(|f| classical_value(m, f, env)),
        Formula::SupSeq { .. } => panic!("indexed schema in a finitary formula"),
    }
}

/// Signature for parser round trips: every symbol kind.
pub fn ast_signature() -> Signature {
    Signature::new()
        .with_function("f", 1, Modulus::Identity)
        .unwrap()
        .with_function("g", 2, Modulus::linear(PositiveRational::integer(2).unwrap()))
        .unwrap()
        .with_predicate("P", 1, Modulus::Identity)
        .unwrap()
        .with_predicate("R", 2, Modulus::Identity)
        .unwrap()
        .with_constant("c")
        .unwrap()
        .with_family("e")
        .unwrap()
}

const INDICES: [&str; 3] = ["i", "j", "k"];
const LOGIC_VARS: [&str; 4] = ["x", "y", "z", "w"];

fn random_index(rng: &mut StdRng, scope: &[String]) -> IndexExpr {
    if scope.is_empty() || rng.gen_bool(0.3) {
        return IndexExpr::lit(rng.gen_range(0..20));
    }
    let var = scope.choose(rng).unwrap();
    IndexExpr::Affine(Affine::new(var, rng.gen_range(1..=3), rng.gen_range(0..=4)).unwrap())
}

fn random_affine(rng: &mut StdRng, scope: &[String]) -> Affine {
    Affine::new(scope.choose(rng).unwrap(), rng.gen_range(1..=3), rng.gen_range(0..=3)).unwrap()
}

fn random_rat(rng: &mut StdRng, scope: &[String]) -> RatExpr {
    let fixed = |rng: &mut StdRng| {
        let d = rng.gen_range(1..=12);
        RatExpr::fixed(q(rng.gen_range(0..=d), d))
    };
    if scope.is_empty() {
        return match rng.gen_range(0..3) {
            0 => RatExpr::enumerated(IndexExpr::lit(rng.gen_range(0..50))),
            _ => fixed(rng),
        };
    }
    let shift = rng.gen_range(1..=6);
    let num = rng.gen_range(1..=shift);
    match rng.gen_range(0..4) {
        0 => fixed(rng),
        1 => RatExpr::recip(num, shift, random_affine(rng, scope)).unwrap(),
        2 => RatExpr::one_minus_recip(num, shift, random_affine(rng, scope)).unwrap(),
        _ => RatExpr::enumerated(random_index(rng, scope)),
    }
}

fn random_ast_term(rng: &mut StdRng, depth: usize, scope: &[String]) -> Term {
    match rng.gen_range(0..if depth == 0 { 3 } else { 5 }) {
        0 => Term::var(LOGIC_VARS.choose(rng).unwrap()),
        1 => Term::constant("c"),
        2 => Term::indexed("e", random_index(rng, scope)),
        3 => Term::apply("f", vec![random_ast_term(rng, depth - 1, scope)]),
        _ => Term::apply("g", vec![random_ast_term(rng, depth - 1, scope), random_ast_term(rng, depth - 1, scope)]),
    }
}

/// An arbitrary well-formed formula over [`ast_signature`], including
/// schemas, families and index-dependent rationals.
pub fn random_ast(rng: &mut StdRng, depth: usize, scope: &mut Vec<String>) -> Formula {
    let leaf = |rng: &mut StdRng, scope: &[String]| match rng.gen_range(0..4) {
        0 => Formula::dist(random_ast_term(rng, 2, scope), random_ast_term(rng, 2, scope)),
        1 => Formula::pred("P", vec![random_ast_term(rng, 2, scope)]),
        2 => Formula::pred("R", vec![random_ast_term(rng, 2, scope), random_ast_term(rng, 2, scope)]),
        _ => Formula::rat(random_rat(rng, scope)),
    };
    if depth == 0 {
        return leaf(rng, scope);
    }
    match rng.gen_range(0..8) {
        0 => leaf(rng, scope),
        1 | 2 => Formula::implies(random_ast(rng, depth - 1, scope), random_ast(rng, depth - 1, scope)),
        3 => neg(random_ast(rng, depth - 1, scope)),
        4 => Formula::sup(LOGIC_VARS.choose(rng).unwrap(), random_ast(rng, depth - 1, scope)),
        5 | 6 => {
            let index = INDICES.choose(rng).unwrap().to_string();
            scope.push(index.clone());
            let body = random_ast(rng, depth - 1, scope);
            scope.pop();
            Formula::sup_seq(Schema::indexed(&index, body))
        }
        _ => {
            let n = rng.gen_range(1..=3);
            let members = (0..n).map(|_| random_ast(rng, depth - 1, scope)).collect();
            Formula::sup_seq(Schema::explicit(members).unwrap())
        }
    }
}

/// All metrics on `n` points with off-diagonal values in `values`.
pub fn all_metrics(n: usize, values: &[Rational01]) -> Vec<Vec<Rational01>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let total = values.len().pow(pairs.len() as u32);
    for code in 0..total {
        let mut m = vec![Rational01::zero(); n * n];
        let mut c = code;
        for &(a, b) in &pairs {
            let v = values[c % values.len()].clone();
            c /= values.len();
            m[a * n + b] = v.clone();
            m[b * n + a] = v;
        }
        let triangle = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|v| m[a * n + b].as_big() <= (m[a * n + v].as_big() + m[v * n + b].as_big())))
        });
        if triangle {
            out.push(m);
        }
    }
    out
}
