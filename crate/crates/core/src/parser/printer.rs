use std::fmt::{self, Write};

use crate::omitting::{PartialType, PrincipalityWitnessPool, TypeMember};
use crate::semantics::Theory;
use crate::signature::Signature;
use crate::structure::{tuples, MetricStructure};
use crate::syntax::{Formula, IndexExpr, RatExpr, Schema, Term};

use super::RegistryDoc;

const IMP: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const PLUS: u8 = 3;
const PREFIX: u8 = 4;
const ATOM: u8 = 5;

pub fn print_index(e: &IndexExpr) -> String {
    match e {
        IndexExpr::Lit { value } => value.to_string(),
        IndexExpr::Affine(a) => {
            let mut s = String::new();
            if a.coeff != 1 {
                write!(s, "{}*", a.coeff).unwrap();
            }
            s.push_str(&a.var);
            if a.offset != 0 {
                write!(s, "+{}", a.offset).unwrap();
            }
            s
        }
    }
}

pub fn print_rat(r: &RatExpr) -> String {
    match r {
        RatExpr::Fixed { value } => value.to_string(),
        RatExpr::Recip { num, shift, index } => {
            format!("{num}/({}+{shift})", print_index(&IndexExpr::Affine(index.clone())))
        }
        RatExpr::OneMinusRecip { num, shift, index } => {
            format!("1 - {num}/({}+{shift})", print_index(&IndexExpr::Affine(index.clone())))
        }
        RatExpr::Enumerated { index } => format!("rat[{}]", print_index(index)),
    }
}

pub fn print_term(t: &Term) -> String {
    match t {
        Term::Var { name } | Term::Const { name } => name.clone(),
        Term::Indexed { family, index } => format!("{family}[{}]", print_index(index)),
        Term::Apply { function, args } => {
            format!("{function}({})", args.iter().map(print_term).collect::<Vec<_>>().join(", "))
        }
    }
}

/// The surface form chosen for a core formula.
enum View<'a> {
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Neg(&'a Formula),
    Inf(&'a str, &'a Formula),
    InfSeq(Schema),
    Implies(&'a Formula, &'a Formula),
    Sup(&'a str, &'a Formula),
    SupSeq(&'a Schema),
    Atom,
}

fn as_neg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Implies { antecedent, consequent } => match consequent.as_ref() {
            Formula::Const { value: RatExpr::Fixed { value } } if value.is_zero() => Some(antecedent),
            _ => None,
        },
        _ => None,
    }
}

fn as_or(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies { antecedent, consequent } => match antecedent.as_ref() {
            Formula::Implies { antecedent: a, consequent: b } if b == consequent => Some((a, b)),
            _ => None,
        },
        _ => None,
    }
}

fn as_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (na, nb) = as_or(as_neg(f)?)?;
    Some((as_neg(na)?, as_neg(nb)?))
}

fn as_inf(f: &Formula) -> Option<(&str, &Formula)> {
    match as_neg(f)? {
        Formula::SupVar { var, body } => Some((var, as_neg(body)?)),
        _ => None,
    }
}

fn as_inf_seq(f: &Formula) -> Option<Schema> {
    match as_neg(f)? {
        Formula::SupSeq { schema: Schema::Indexed { index, body } } => {
            Some(Schema::Indexed { index: index.clone(), body: Box::new(as_neg(body)?.clone()) })
        }
        Formula::SupSeq { schema: Schema::Explicit { members } } => {
            Some(Schema::Explicit { members: members.iter().map(|m| as_neg(m).cloned()).collect::<Option<_>>()? })
        }
        _ => None,
    }
}

fn view(f: &Formula) -> View<'_> {
    if let Some((a, b)) = as_and(f) {
        return View::And(a, b);
    }
    if let Some((x, body)) = as_inf(f) {
        return View::Inf(x, body);
    }
    if let Some(s) = as_inf_seq(f) {
        return View::InfSeq(s);
    }
    if let Some(a) = as_neg(f) {
        return View::Neg(a);
    }
    if let Some((a, b)) = as_or(f) {
        return View::Or(a, b);
    }
    match f {
        Formula::Implies { antecedent, consequent } => View::Implies(antecedent, consequent),
        Formula::SupVar { var, body } => View::Sup(var, body),
        Formula::SupSeq { schema } => View::SupSeq(schema),
        _ => View::Atom,
    }
}

/// Canonical text of a formula. Parsing the result gives back the same AST.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    emit(f, IMP, true, &mut out);
    out
}

/// `need` is the weakest precedence the context accepts bare; `tail` means
/// nothing follows, so a binder's body may extend to the end.
fn emit(f: &Formula, need: u8, tail: bool, out: &mut String) {
    let v = view(f);
    let (level, binder) = match &v {
        View::Implies(..) => (IMP, false),
        View::Or(..) => (OR, false),
        View::And(..) => (AND, false),
        View::Neg(_) => (PREFIX, false),
        View::Inf(..) | View::InfSeq(_) | View::Sup(..) | View::SupSeq(_) => (PREFIX, true),
        View::Atom => (ATOM, false),
    };
    let paren = level < need || (binder && !tail);
    let tail = tail || paren;
    if paren {
        out.push('(');
    }
    match v {
        View::Implies(a, b) => {
            emit(a, OR, false, out);
            out.push_str(" -> ");
            emit(b, IMP, tail, out);
        }
        View::Or(a, b) => {
            emit(a, OR, false, out);
            out.push_str(" \\/ ");
            emit(b, AND, tail, out);
        }
        View::And(a, b) => {
            emit(a, AND, false, out);
            out.push_str(" /\\ ");
            emit(b, PLUS, tail, out);
        }
        View::Neg(a) => {
            out.push('~');
            emit(a, PREFIX, tail, out);
        }
        View::Sup(x, body) => {
            write!(out, "sup {x} . ").unwrap();
            emit(body, IMP, true, out);
        }
        View::Inf(x, body) => {
            write!(out, "inf {x} . ").unwrap();
            emit(body, IMP, true, out);
        }
        View::SupSeq(s) => emit_schema("Vee", s, out),
        View::InfSeq(s) => emit_schema("Wedge", &s, out),
        View::Atom => out.push_str(&atom_text(f)),
    }
    if paren {
        out.push(')');
    }
}

fn emit_schema(keyword: &str, s: &Schema, out: &mut String) {
    match s {
        Schema::Indexed { index, body } => {
            write!(out, "{keyword} {index} . ").unwrap();
            emit(body, IMP, true, out);
        }
        Schema::Explicit { members } => {
            write!(out, "{keyword} [").unwrap();
            for (k, m) in members.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                emit(m, IMP, true, out);
            }
            out.push(']');
        }
    }
}

fn atom_text(f: &Formula) -> String {
    match f {
        Formula::Dist { left, right } => format!("d({}, {})", print_term(left), print_term(right)),
        Formula::Pred { predicate, args } => {
            format!("{predicate}({})", args.iter().map(print_term).collect::<Vec<_>>().join(", "))
        }
        Formula::Const { value } => print_rat(value),
        _ => unreachable!("not an atom"),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_rat(self))
    }
}

impl fmt::Display for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_index(self))
    }
}

fn signature_lines(sig: &Signature, out: &mut String) {
    for f in sig.functions() {
        writeln!(out, "func {}/{} {}", f.name, f.arity, f.modulus).unwrap();
    }
    for p in sig.predicates() {
        writeln!(out, "pred {}/{} {}", p.name, p.arity, p.modulus).unwrap();
    }
    for c in sig.constants() {
        writeln!(out, "const {c}").unwrap();
    }
    for e in sig.families() {
        writeln!(out, "family {e}").unwrap();
    }
}

/// `.msig` text.
pub fn print_signature(name: Option<&str>, sig: &Signature) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        writeln!(out, "signature {name}").unwrap();
    }
    signature_lines(sig, &mut out);
    out
}

/// `.mstr` text: every distance pair, every table entry, in point order.
pub fn print_structure(m: &MetricStructure) -> String {
    let mut out = String::new();
    writeln!(out, "structure {}", m.name()).unwrap();
    signature_lines(m.signature(), &mut out);
    writeln!(out, "points {}", m.points().join(" ")).unwrap();
    let n = m.size();
    let name = |p: usize| m.point_name(p);
    for a in 0..n {
        if !m.dist(a, a).is_zero() {
            writeln!(out, "d({0}, {0}) = {1}", name(a), m.dist(a, a)).unwrap();
        }
        for b in a + 1..n {
            writeln!(out, "d({}, {}) = {}", name(a), name(b), m.dist(a, b)).unwrap();
            if m.dist(b, a) != m.dist(a, b) {
                writeln!(out, "d({}, {}) = {}", name(b), name(a), m.dist(b, a)).unwrap();
            }
        }
    }
    let args_text = |args: &[usize]| args.iter().map(|&p| name(p)).collect::<Vec<_>>().join(", ");
    for f in m.signature().functions() {
        for args in tuples(n, f.arity) {
            let v = m.apply(&f.name, &args).expect("total");
            writeln!(out, "{}({}) = {}", f.name, args_text(&args), name(v)).unwrap();
        }
    }
    for p in m.signature().predicates() {
        for args in tuples(n, p.arity) {
            let v = m.predicate(&p.name, &args).expect("total");
            writeln!(out, "{}({}) = {}", p.name, args_text(&args), v).unwrap();
        }
    }
    for c in m.signature().constants() {
        writeln!(out, "{c} = {}", name(m.constant(c).expect("total"))).unwrap();
    }
    for e in m.signature().families() {
        let fam = m.family(e).expect("total");
        writeln!(out, "{e} = [{}] tail {}", args_text(&fam.prefix), name(fam.tail)).unwrap();
    }
    out
}

/// `.mthy` text.
pub fn print_theory(t: &Theory) -> String {
    let mut out = format!("theory {}\n", t.name());
    for s in t.sentences() {
        writeln!(out, "{};", print_formula(s)).unwrap();
    }
    out
}

/// `.mtyp` text for a partial type.
pub fn print_type(t: &PartialType) -> String {
    let mut out = format!("type {}({})\n", t.name(), t.variables().join(", "));
    for m in t.members() {
        match m {
            TypeMember::Formula(f) => writeln!(out, "{};", print_formula(f)).unwrap(),
            TypeMember::Schema { index, body } => writeln!(out, "each {index} . {};", print_formula(body)).unwrap(),
        }
    }
    out
}

/// `.mtyp` text for a witness pool.
pub fn print_pool(p: &PrincipalityWitnessPool) -> String {
    let mut out = format!("pool ({})\n", p.variables().join(", "));
    for f in p.formulas() {
        writeln!(out, "formula {};", print_formula(f)).unwrap();
    }
    for t in p.term_tuples() {
        writeln!(out, "terms ({});", t.iter().map(print_term).collect::<Vec<_>>().join(", ")).unwrap();
    }
    for r in p.thresholds() {
        writeln!(out, "threshold {r};").unwrap();
    }
    out
}

/// `.mreg` text.
pub fn print_registry(r: &RegistryDoc) -> String {
    let mut out = format!("registry {}\n", r.name);
    for e in &r.entries {
        writeln!(out, "{e}").unwrap();
    }
    if let Some(t) = &r.tail {
        writeln!(out, "tail {t}").unwrap();
    }
    if let Some(c) = &r.cycle {
        writeln!(out, "cycle {}", c.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational01;
    use crate::syntax::{and, neg, or};

    fn p(v: &str) -> Formula {
        Formula::pred("P", vec![Term::var(v)])
    }

    #[test]
    fn examples() {
        assert_eq!(print_formula(&Formula::implies(Formula::constant(Rational01::of(1, 3)), p("x"))), "1/3 -> P(x)");
        assert_eq!(print_formula(&Formula::constant(Rational01::of(2, 4))), "1/2");
        let right = Formula::implies(p("x"), Formula::implies(p("y"), p("z")));
        assert_eq!(print_formula(&right), "P(x) -> P(y) -> P(z)");
        let left = Formula::implies(Formula::implies(p("x"), p("y")), p("z"));
        assert_eq!(print_formula(&left), "(P(x) -> P(y)) -> P(z)");
    }

    #[test]
    fn sugar() {
        assert_eq!(print_formula(&and(p("x"), or(p("y"), neg(p("z"))))), "P(x) /\\ (P(y) \\/ ~P(z))");
        assert_eq!(print_formula(&Formula::implies(Formula::sup("x", p("x")), p("y"))), "(sup x . P(x)) -> P(y)");
        assert_eq!(print_formula(&Formula::implies(p("y"), Formula::sup("x", p("x")))), "P(y) -> sup x . P(x)");
    }
}
