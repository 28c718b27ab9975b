use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::omitting::{PartialType, PrincipalityWitnessPool, TypeMember};
use crate::rational::Rational01;
use crate::semantics::Theory;
use crate::signature::{Modulus, PositiveRational, Signature, SymbolKind};
use crate::structure::{MetricStructure, StructureBuilder};
use crate::syntax::{Formula, Term};

use super::formula::{Cursor, FormulaParser};
use super::lexer::{tokenize, Tok, Token};
use super::{end_pos, ParseError, Pos};

/// Tokens grouped by source line, for the line-oriented formats.
fn lines(text: &str) -> Result<Vec<Vec<Token>>, ParseError> {
    let mut out: BTreeMap<usize, Vec<Token>> = BTreeMap::new();
    for t in tokenize(text)? {
        out.entry(t.pos.line).or_default().push(t);
    }
    Ok(out.into_values().collect())
}

/// End-of-line position of a token line, for "expected …" errors.
fn line_end(line: &[Token], text: &str) -> Pos {
    let n = line[0].pos.line;
    let row = text.lines().nth(n - 1).unwrap_or("");
    let row = row.split('#').next().unwrap_or("").trim_end();
    Pos { line: n, column: row.chars().count() + 1 }
}

fn finish(cur: &Cursor) -> Result<(), ParseError> {
    if cur.at_end() {
        Ok(())
    } else {
        Err(cur.unexpected("end of line"))
    }
}

fn is_decl(line: &[Token], keyword: &str) -> bool {
    matches!(&line[0].tok, Tok::Ident(w) if w == keyword) && matches!(line.get(1).map(|t| &t.tok), Some(Tok::Ident(_)))
}

fn positive_rational(cur: &mut Cursor) -> Result<PositiveRational, ParseError> {
    let pos = cur.pos();
    let value = match cur.peek() {
        Some(Tok::Nat(n)) => {
            let n: BigInt = n.parse().expect("digits");
            BigRational::from_integer(n)
        }
        Some(Tok::Frac(p, q)) => {
            let (p, q): (BigInt, BigInt) = (p.parse().expect("digits"), q.parse().expect("digits"));
            let r = BigRational::new(p.clone(), q.clone());
            if r.numer() != &p || q.is_one() {
                return Err(ParseError::invalid(pos, format!("slope `{p}/{q}` is not in reduced form")));
            }
            r
        }
        _ => return Err(cur.unexpected("a slope")),
    };
    cur.bump();
    PositiveRational::new(value).ok_or_else(|| ParseError::invalid(pos, "slope must be positive"))
}

fn modulus(cur: &mut Cursor) -> Result<Modulus, ParseError> {
    let (kind, pos) = cur.ident("a modulus (identity, linear, constant, table)")?;
    match kind.as_str() {
        "identity" => Ok(Modulus::Identity),
        "linear" => Ok(Modulus::linear(positive_rational(cur)?)),
        "constant" => {
            let c = cur.rational("a rational")?;
            Modulus::constant(c).map_err(|e| ParseError::invalid(pos, e))
        }
        "table" => {
            let mut samples = Vec::new();
            while !cur.at_end() {
                let e = cur.rational("a sample ε")?;
                cur.expect(&Tok::Colon, "`:`")?;
                let d = cur.rational("a sample δ")?;
                samples.push((e, d));
            }
            Modulus::table(samples).map_err(|e| ParseError::invalid(pos, e))
        }
        other => Err(ParseError::syntax(pos, format!("unknown modulus kind `{other}`"))),
    }
}

/// Handles a `func`/`pred`/`const`/`family` line. Returns `false` when the
/// line is not a declaration.
fn declaration(line: &[Token], text: &str, sig: &mut Signature) -> Result<bool, ParseError> {
    let keyword = ["func", "pred", "const", "family"].into_iter().find(|k| is_decl(line, k));
    let Some(keyword) = keyword else { return Ok(false) };
    let mut cur = Cursor::new(line, line_end(line, text));
    cur.bump();
    let (name, pos) = cur.ident("a symbol name")?;
    let added = match keyword {
        "func" | "pred" => {
            cur.expect(&Tok::Slash, "`/`")?;
            let arity_pos = cur.pos();
            let arity = cur.nat("an arity")? as usize;
            if arity == 0 {
                return Err(ParseError::invalid(arity_pos, "arity must be at least 1"));
            }
            let m = modulus(&mut cur)?;
            if keyword == "func" {
                sig.add_function(&name, arity, m)
            } else {
                sig.add_predicate(&name, arity, m)
            }
        }
        "const" => sig.add_constant(&name),
        _ => sig.add_family(&name),
    };
    added.map_err(|e| ParseError::invalid(pos, e))?;
    finish(&cur)?;
    Ok(true)
}

fn header(lines: &[Vec<Token>], text: &str, keyword: &str) -> Result<Option<String>, ParseError> {
    match lines.first() {
        Some(line) if is_decl(line, keyword) => {
            let mut cur = Cursor::new(line, line_end(line, text));
            cur.bump();
            let (name, _) = cur.ident("a name")?;
            finish(&cur)?;
            Ok(Some(name))
        }
        _ => Ok(None),
    }
}

/// Parses a `.msig` document: an optional `signature NAME` line followed by
/// declarations.
pub fn parse_signature(text: &str) -> Result<(Option<String>, Signature), ParseError> {
    let lines = lines(text)?;
    let name = header(&lines, text, "signature")?;
    let mut sig = Signature::new();
    for line in &lines[usize::from(name.is_some())..] {
        if !declaration(line, text, &mut sig)? {
            return Err(Cursor::new(line, line_end(line, text)).unexpected("a declaration"));
        }
    }
    Ok((name, sig))
}

fn point_list(cur: &mut Cursor, close: &Tok) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    if cur.peek() == Some(close) {
        return Ok(out);
    }
    out.push(cur.ident("a point")?.0);
    while cur.eat(&Tok::Comma) {
        out.push(cur.ident("a point")?.0);
    }
    Ok(out)
}

/// Parses a `.mstr` document.
///
/// ```text
/// structure M
/// pred P/1 identity
/// const c
/// family e
/// points a b
/// d(a, b) = 1/2
/// P(a) = 1/4
/// P(b) = 3/4
/// c = a
/// e = [a, b] tail b
/// ```
///
/// `d(a, b)` also sets `d(b, a)` unless that entry is given explicitly.
pub fn parse_structure(text: &str) -> Result<MetricStructure, ParseError> {
    let lines = lines(text)?;
    let name = header(&lines, text, "structure")?;
    let mut sig = Signature::new();
    let mut builder: Option<StructureBuilder> = None;
    for line in &lines[usize::from(name.is_some())..] {
        let mut cur = Cursor::new(line, line_end(line, text));
        let start = line[0].pos;
        if builder.is_none() {
            if declaration(line, text, &mut sig)? {
                continue;
            }
            if matches!(&line[0].tok, Tok::Ident(w) if w == "points") {
                cur.bump();
                let mut points = Vec::new();
                while !cur.at_end() {
                    points.push(cur.ident("a point name")?.0);
                }
                let b = StructureBuilder::with_points(name.clone().unwrap_or_else(|| "M".into()), sig.clone(), points)
                    .map_err(|e| ParseError::invalid(start, e))?;
                builder = Some(b);
                continue;
            }
            return Err(cur.unexpected("a declaration or `points`"));
        }
        let b = builder.as_mut().expect("points seen");
        let (symbol, pos) = cur.ident("a symbol")?;
        let err = |e: crate::structure::StructureError| ParseError::invalid(pos, e);
        if cur.eat(&Tok::LParen) {
            let args = point_list(&mut cur, &Tok::RParen)?;
            cur.expect(&Tok::RParen, "`,` or `)`")?;
            cur.expect(&Tok::Equals, "`=`")?;
            let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
            if symbol == "d" {
                if args.len() != 2 {
                    return Err(ParseError::syntax(pos, "`d` takes two points"));
                }
                let v = cur.rational("a distance")?;
                b.dist(&args[0], &args[1], v).map_err(err)?;
            } else {
                match b.signature().kind_of(&symbol) {
                    Some(SymbolKind::Function) => {
                        let (value, _) = cur.ident("a point")?;
                        b.function(&symbol, &arg_refs, &value).map_err(err)?;
                    }
                    Some(SymbolKind::Predicate) => {
                        let v = cur.rational("a truth value")?;
                        b.predicate(&symbol, &arg_refs, v).map_err(err)?;
                    }
                    _ => return Err(err(crate::structure::StructureError::UnknownSymbol(symbol))),
                }
            }
        } else {
            cur.expect(&Tok::Equals, "`=` or `(`")?;
            match b.signature().kind_of(&symbol) {
                Some(SymbolKind::Constant) => {
                    let (value, _) = cur.ident("a point")?;
                    b.constant(&symbol, &value).map_err(err)?;
                }
                Some(SymbolKind::Family) => {
                    cur.expect(&Tok::LBracket, "`[`")?;
                    let prefix = point_list(&mut cur, &Tok::RBracket)?;
                    cur.expect(&Tok::RBracket, "`,` or `]`")?;
                    if !cur.eat_word("tail") {
                        return Err(cur.unexpected("`tail`"));
                    }
                    let (tail, _) = cur.ident("a point")?;
                    let refs: Vec<&str> = prefix.iter().map(String::as_str).collect();
                    b.family(&symbol, &refs, &tail).map_err(err)?;
                }
                _ => return Err(err(crate::structure::StructureError::UnknownSymbol(symbol))),
            }
        }
        finish(&cur)?;
    }
    let Some(b) = builder else {
        return Err(ParseError::syntax(end_pos(text), "missing `points` line"));
    };
    b.build().map_err(|e| ParseError::invalid(end_pos(text), e))
}

/// Parses `;`-terminated formulas until the end of input.
fn formula_list<T>(
    cur: &mut Cursor,
    mut item: impl FnMut(&mut Cursor) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    let mut out = Vec::new();
    while !cur.at_end() {
        out.push(item(cur)?);
        cur.expect(&Tok::Semi, "`;`")?;
    }
    Ok(out)
}

/// Parses a `.mthy` document: `theory NAME` followed by `;`-terminated
/// sentences.
pub fn parse_theory(text: &str, sig: &Signature) -> Result<Theory, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, end_pos(text));
    if !cur.eat_word("theory") {
        return Err(cur.unexpected("`theory`"));
    }
    let (name, _) = cur.ident("a theory name")?;
    let mut p = FormulaParser { sig, indices: Vec::new() };
    let sentences = formula_list(&mut cur, |cur| {
        let pos = cur.pos();
        let phi = p.formula(cur)?;
        if let Some(v) = phi.free_variables().into_iter().next() {
            return Err(ParseError::invalid(pos, format!("sentence has free variable `{v}`")));
        }
        Ok(phi)
    })?;
    Theory::new(&name, sentences).map_err(|e| ParseError::invalid(Pos { line: 1, column: 1 }, e))
}

fn variable_list(cur: &mut Cursor, p: &FormulaParser) -> Result<Vec<String>, ParseError> {
    cur.expect(&Tok::LParen, "`(`")?;
    let mut vars = Vec::new();
    if !cur.eat(&Tok::RParen) {
        loop {
            let (v, pos) = cur.ident("a variable")?;
            p.check_var_name(&v, pos)?;
            if vars.contains(&v) {
                return Err(ParseError::invalid(pos, format!("variable `{v}` listed twice")));
            }
            vars.push(v);
            if cur.eat(&Tok::RParen) {
                break;
            }
            cur.expect(&Tok::Comma, "`,` or `)`")?;
        }
    }
    Ok(vars)
}

fn check_free(phi: &Formula, vars: &[String], pos: Pos) -> Result<(), ParseError> {
    match phi.free_variables().into_iter().find(|v| !vars.contains(v)) {
        Some(v) => Err(ParseError::invalid(pos, format!("free variable `{v}` is not declared"))),
        None => Ok(()),
    }
}

/// Either document kind stored in a `.mtyp` file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TypeDocument {
    Type(PartialType),
    Pool(PrincipalityWitnessPool),
}

/// Parses a partial type:
///
/// ```text
/// type Sigma(x)
/// P(x);
/// each i . d(x, e[i]) <= 1/(i+2);
/// ```
pub fn parse_type(text: &str, sig: &Signature) -> Result<PartialType, ParseError> {
    match parse_type_document(text, sig)? {
        TypeDocument::Type(t) => Ok(t),
        TypeDocument::Pool(_) => Err(ParseError::syntax(Pos { line: 1, column: 1 }, "expected `type`, found `pool`")),
    }
}

/// Parses a principality witness pool:
///
/// ```text
/// pool (y)
/// formula P(y);
/// terms (y);
/// threshold 3/4;
/// ```
pub fn parse_pool(text: &str, sig: &Signature) -> Result<PrincipalityWitnessPool, ParseError> {
    match parse_type_document(text, sig)? {
        TypeDocument::Pool(p) => Ok(p),
        TypeDocument::Type(_) => Err(ParseError::syntax(Pos { line: 1, column: 1 }, "expected `pool`, found `type`")),
    }
}

pub fn parse_type_document(text: &str, sig: &Signature) -> Result<TypeDocument, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, end_pos(text));
    let mut p = FormulaParser { sig, indices: Vec::new() };
    if cur.eat_word("type") {
        let (name, _) = cur.ident("a type name")?;
        let vars = variable_list(&mut cur, &p)?;
        let members = formula_list(&mut cur, |cur| {
            let pos = cur.pos();
            if cur.eat_word("each") {
                let (index, ipos) = cur.ident("an index variable")?;
                p.check_var_name(&index, ipos)?;
                cur.expect(&Tok::Dot, "`.`")?;
                p.indices.push(index.clone());
                let body = p.formula(cur);
                p.indices.pop();
                let body = body?;
                check_free(&body, &vars, pos)?;
                Ok(TypeMember::Schema { index, body })
            } else {
                let phi = p.formula(cur)?;
                check_free(&phi, &vars, pos)?;
                Ok(TypeMember::Formula(phi))
            }
        })?;
        return PartialType::new(&name, vars, members)
            .map(TypeDocument::Type)
            .map_err(|e| ParseError::invalid(Pos { line: 1, column: 1 }, e));
    }
    if cur.eat_word("pool") {
        let vars = variable_list(&mut cur, &p)?;
        let (mut formulas, mut terms, mut thresholds) = (Vec::new(), Vec::new(), Vec::new());
        formula_list(&mut cur, |cur| {
            let pos = cur.pos();
            let (kind, _) = cur.ident("`formula`, `terms` or `threshold`")?;
            match kind.as_str() {
                "formula" => {
                    let phi = p.formula(cur)?;
                    check_free(&phi, &vars, pos)?;
                    formulas.push(phi);
                }
                "terms" => {
                    cur.expect(&Tok::LParen, "`(`")?;
                    let mut tuple: Vec<Term> = Vec::new();
                    if !cur.eat(&Tok::RParen) {
                        loop {
                            let tpos = cur.pos();
                            let t = p.term(cur)?;
                            if let Some(v) = t.free_variables().into_iter().find(|v| !vars.contains(v)) {
                                return Err(ParseError::invalid(tpos, format!("free variable `{v}` is not declared")));
                            }
                            tuple.push(t);
                            if cur.eat(&Tok::RParen) {
                                break;
                            }
                            cur.expect(&Tok::Comma, "`,` or `)`")?;
                        }
                    }
                    terms.push(tuple);
                }
                "threshold" => thresholds.push((cur.rational("a threshold")?, pos)),
                other => return Err(ParseError::syntax(pos, format!("unknown pool entry `{other}`"))),
            }
            Ok(())
        })?;
        let mut rs: Vec<Rational01> = Vec::new();
        for (r, pos) in thresholds {
            if r.is_zero() || r.is_one() {
                return Err(ParseError::invalid(pos, "thresholds must lie in (0, 1)"));
            }
            rs.push(r);
        }
        return PrincipalityWitnessPool::new(vars, formulas, terms, rs)
            .map(TypeDocument::Pool)
            .map_err(|e| ParseError::invalid(Pos { line: 1, column: 1 }, e));
    }
    Err(cur.unexpected("`type` or `pool`"))
}

/// A `.mreg` document: structure paths, relative to the registry file.
///
/// ```text
/// registry R
/// m0.mstr
/// m1.mstr
/// tail m2.mstr        # optional: m2 repeats forever after the prefix
/// ```
///
/// `cycle a.mstr b.mstr` instead describes a periodic sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RegistryDoc {
    pub name: String,
    pub entries: Vec<String>,
    pub tail: Option<String>,
    pub cycle: Option<Vec<String>>,
}

pub fn parse_registry(text: &str) -> Result<RegistryDoc, ParseError> {
    let mut doc: Option<RegistryDoc> = None;
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let column = content.find(words[0]).unwrap_or(0) + 1;
        let pos = Pos { line: k + 1, column };
        let Some(d) = doc.as_mut() else {
            match words[..] {
                ["registry", name] => {
                    doc = Some(RegistryDoc { name: name.to_string(), ..RegistryDoc::default() });
                    continue;
                }
                _ => return Err(ParseError::syntax(pos, "expected `registry NAME`")),
            }
        };
        if d.tail.is_some() || d.cycle.is_some() {
            return Err(ParseError::syntax(pos, "nothing may follow `tail` or `cycle`"));
        }
        match words[..] {
            ["tail", path] => d.tail = Some(path.to_string()),
            ["cycle", ref rest @ ..] if !rest.is_empty() => {
                if !d.entries.is_empty() {
                    return Err(ParseError::syntax(pos, "`cycle` cannot follow a prefix"));
                }
                d.cycle = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            [path] => d.entries.push(path.to_string()),
            _ => return Err(ParseError::syntax(pos, "expected one path per line")),
        }
    }
    doc.ok_or_else(|| ParseError::syntax(end_pos(text), "expected `registry NAME`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{print_pool, print_registry, print_signature, print_structure, print_theory, print_type};

    const STRUCTURE: &str = "structure M
func f/1 linear 2
pred P/1 identity
const c
family e
points a b
d(a, b) = 1/2
f(a) = b
f(b) = a
P(a) = 1/4
P(b) = 3/4
c = a
e = [a, b] tail b
";

    #[test]
    fn structure_round_trip() {
        let m = parse_structure(STRUCTURE).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.dist(1, 0), &Rational01::of(1, 2));
        assert_eq!(m.family("e").unwrap().at(7), 1);
        let again = parse_structure(&print_structure(&m)).unwrap();
        assert!(m.same_interpretation(&again));
        assert_eq!(again.name(), "M");
    }

    #[test]
    fn structure_errors_carry_positions() {
        let e = parse_structure("points a b\nd(a, b) = 3/2\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_structure("pred P/1 identity\npoints a\n").unwrap_err();
        assert!(e.to_string().contains("P"), "{e}");
        let e = parse_structure("pred P/1\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
    }

    #[test]
    fn signature_round_trip() {
        let text = "signature S\nfunc f/2 table 1/4:1/8 1/2:1/3\npred Q/1 constant 1/3\nconst c\nfamily e\n";
        let (name, sig) = parse_signature(text).unwrap();
        assert_eq!(name.as_deref(), Some("S"));
        let (name2, sig2) = parse_signature(&print_signature(name.as_deref(), &sig)).unwrap();
        assert_eq!((name, sig), (name2, sig2));
    }

    #[test]
    fn theory_type_and_pool() {
        let (_, sig) = parse_signature("pred P/1 identity\nfamily e\n").unwrap();
        let t = parse_theory("theory T\nsup x . P(x);\ninf x . P(x) >= 1/2;\n", &sig).unwrap();
        assert_eq!(t.sentences().len(), 2);
        assert_eq!(parse_theory(&print_theory(&t), &sig).unwrap(), t);
        assert!(parse_theory("theory T\nP(x);\n", &sig).is_err());

        let ty = parse_type("type Sigma(x)\nP(x);\neach i . d(x, e[i]) <= 1/(i+1);\n", &sig).unwrap();
        assert_eq!(ty.members().len(), 2);
        assert!(matches!(&ty.members()[1], TypeMember::Schema { index, .. } if index == "i"));
        assert_eq!(parse_type(&print_type(&ty), &sig).unwrap(), ty);
        assert!(parse_type("type S(x)\nP(y);\n", &sig).is_err());

        let pool = parse_pool("pool (y)\nformula P(y);\nterms (y);\nthreshold 3/4;\n", &sig).unwrap();
        assert_eq!(pool.thresholds(), &[Rational01::of(3, 4)]);
        assert_eq!(parse_pool(&print_pool(&pool), &sig).unwrap(), pool);
        assert!(parse_pool("pool (y)\nthreshold 1;\n", &sig).is_err());
    }

    #[test]
    fn registry_documents() {
        let r = parse_registry("registry R\nm0.mstr # first\nm1.mstr\ntail m2.mstr\n").unwrap();
        assert_eq!(r.entries, vec!["m0.mstr", "m1.mstr"]);
        assert_eq!(r.tail.as_deref(), Some("m2.mstr"));
        assert_eq!(parse_registry(&print_registry(&r)).unwrap(), r);
        let c = parse_registry("registry C\ncycle a.mstr b.mstr\n").unwrap();
        assert_eq!(c.cycle.unwrap().len(), 2);
        assert_eq!(parse_registry("registry R\ntail a.mstr\nb.mstr\n").unwrap_err().line, 3);
        assert!(parse_registry("m0.mstr\n").is_err());
    }
}
