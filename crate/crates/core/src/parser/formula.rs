use std::str::FromStr;

use crate::rational::Rational01;
use crate::signature::{Signature, SymbolKind, RESERVED};
use crate::syntax::{self, Affine, Formula, IndexExpr, RatExpr, Schema, Term};

use super::lexer::{tokenize, Tok, Token};
use super::{end_pos, ParseError, ParseErrorKind, Pos};

/// A cursor over a token slice.
pub(super) struct Cursor<'a> {
    toks: &'a [Token],
    i: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    pub(super) fn new(toks: &'a [Token], end: Pos) -> Self {
        Cursor { toks, i: 0, end }
    }

    pub(super) fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    pub(super) fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.i + k).map(|t| &t.tok)
    }

    pub(super) fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.end)
    }

    pub(super) fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    pub(super) fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.i);
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    pub(super) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub(super) fn eat_word(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(w)) if w == word) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub(super) fn unexpected(&self, wanted: &str) -> ParseError {
        let found = self.peek().map(Tok::describe).unwrap_or_else(|| "end of input".to_string());
        ParseError::syntax(self.pos(), format!("expected {wanted}, found {found}"))
    }

    pub(super) fn expect(&mut self, tok: &Tok, wanted: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    pub(super) fn ident(&mut self, wanted: &str) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let pos = self.pos();
                self.i += 1;
                Ok((s.clone(), pos))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    pub(super) fn nat(&mut self, wanted: &str) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Nat(s)) => {
                let pos = self.pos();
                self.i += 1;
                s.parse().map_err(|_| ParseError::syntax(pos, format!("number `{s}` is too large")))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    /// A canonical rational in `[0, 1]`: `0`, `1` or `p/q`.
    pub(super) fn rational(&mut self, wanted: &str) -> Result<Rational01, ParseError> {
        let pos = self.pos();
        let text = match self.peek() {
            Some(Tok::Nat(n)) => n.clone(),
            Some(Tok::Frac(p, q)) => format!("{p}/{q}"),
            _ => return Err(self.unexpected(wanted)),
        };
        self.i += 1;
        Rational01::from_str(&text).map_err(|e| ParseError::new(pos, ParseErrorKind::Rational(e)))
    }
}

/// Parses one formula over `sig`; the whole input must be consumed.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, end_pos(text));
    let mut p = FormulaParser { sig, indices: Vec::new() };
    if cur.at_end() {
        return Err(cur.unexpected("a formula"));
    }
    let phi = p.formula(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(phi)
}

pub(super) struct FormulaParser<'s> {
    pub(super) sig: &'s Signature,
    pub(super) indices: Vec<String>,
}

impl FormulaParser<'_> {
    pub(super) fn formula(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let left = self.cmp(cur)?;
        if cur.eat(&Tok::Arrow) {
            let right = self.formula(cur)?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn cmp(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let phi = self.disj(cur)?;
        if cur.eat(&Tok::Geq) {
            return Ok(syntax::geq(phi, self.ratexpr(cur)?));
        }
        if cur.eat(&Tok::Leq) {
            return Ok(syntax::leq(phi, self.ratexpr(cur)?));
        }
        Ok(phi)
    }

    fn disj(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let mut phi = self.conj(cur)?;
        while cur.eat(&Tok::Vee) {
            phi = syntax::or(phi, self.conj(cur)?);
        }
        Ok(phi)
    }

    fn conj(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let mut phi = self.plus(cur)?;
        while cur.eat(&Tok::Wedge) {
            phi = syntax::and(phi, self.plus(cur)?);
        }
        Ok(phi)
    }

    fn plus(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let mut phi = self.unary(cur)?;
        while cur.eat(&Tok::OPlus) {
            phi = syntax::trunc_plus(phi, self.unary(cur)?);
        }
        Ok(phi)
    }

    fn unary(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        if cur.eat(&Tok::Tilde) {
            return Ok(syntax::neg(self.unary(cur)?));
        }
        match cur.peek() {
            Some(Tok::Ident(w)) if w == "sup" || w == "inf" => {
                let universal = w == "inf";
                cur.bump();
                let (var, pos) = cur.ident("a variable")?;
                self.check_var_name(&var, pos)?;
                cur.expect(&Tok::Dot, "`.`")?;
                let body = self.formula(cur)?;
                Ok(if universal { syntax::inf(&var, body) } else { Formula::sup(&var, body) })
            }
            Some(Tok::Ident(w)) if w == "Vee" || w == "Wedge" => {
                let meet = w == "Wedge";
                cur.bump();
                let schema = self.schema(cur)?;
                Ok(if meet { syntax::inf_seq(schema) } else { Formula::sup_seq(schema) })
            }
            _ => self.atom(cur),
        }
    }

    fn schema(&mut self, cur: &mut Cursor) -> Result<Schema, ParseError> {
        if cur.eat(&Tok::LBracket) {
            let mut members = vec![self.formula(cur)?];
            while cur.eat(&Tok::Comma) {
                members.push(self.formula(cur)?);
            }
            cur.expect(&Tok::RBracket, "`,` or `]`")?;
            return Ok(Schema::Explicit { members });
        }
        let (index, pos) = cur.ident("an index variable or `[`")?;
        self.check_var_name(&index, pos)?;
        cur.expect(&Tok::Dot, "`.`")?;
        self.indices.push(index.clone());
        let body = self.formula(cur);
        self.indices.pop();
        Ok(Schema::indexed(&index, body?))
    }

    pub(super) fn check_var_name(&self, name: &str, pos: Pos) -> Result<(), ParseError> {
        if RESERVED.contains(&name) {
            return Err(ParseError::syntax(pos, format!("`{name}` is a reserved word")));
        }
        if self.sig.kind_of(name).is_some() {
            return Err(ParseError::syntax(pos, format!("`{name}` is a signature symbol, not a variable")));
        }
        Ok(())
    }

    fn atom(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        match cur.peek() {
            Some(Tok::LParen) => {
                cur.bump();
                let phi = self.formula(cur)?;
                cur.expect(&Tok::RParen, "`)`")?;
                Ok(phi)
            }
            Some(Tok::Ident(w)) if w == "d" && cur.peek_at(1) == Some(&Tok::LParen) => {
                cur.bump();
                cur.bump();
                let left = self.term(cur)?;
                cur.expect(&Tok::Comma, "`,`")?;
                let right = self.term(cur)?;
                cur.expect(&Tok::RParen, "`)`")?;
                Ok(Formula::dist(left, right))
            }
            Some(Tok::Ident(w)) if w == "rat" => Ok(Formula::rat(self.ratexpr(cur)?)),
            Some(Tok::Ident(name)) => {
                let pos = cur.pos();
                match self.sig.kind_of(name) {
                    Some(SymbolKind::Predicate) => {
                        cur.bump();
                        let args = self.args(cur)?;
                        let phi = Formula::pred(name, args);
                        phi.check(self.sig).map_err(|e| ParseError::from_syntax(pos, e))?;
                        Ok(phi)
                    }
                    Some(_) => Err(ParseError::syntax(pos, format!("`{name}` is not a predicate"))),
                    None if cur.peek_at(1) == Some(&Tok::LParen) => {
                        Err(ParseError::new(pos, ParseErrorKind::UnknownSymbol(name.clone())))
                    }
                    None => Err(cur.unexpected("a formula")),
                }
            }
            Some(Tok::Nat(_) | Tok::Frac(..)) => Ok(Formula::rat(self.ratexpr(cur)?)),
            _ => Err(cur.unexpected("a formula")),
        }
    }

    fn args(&mut self, cur: &mut Cursor) -> Result<Vec<Term>, ParseError> {
        cur.expect(&Tok::LParen, "`(`")?;
        let mut args = vec![self.term(cur)?];
        while cur.eat(&Tok::Comma) {
            args.push(self.term(cur)?);
        }
        cur.expect(&Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    pub(super) fn term(&mut self, cur: &mut Cursor) -> Result<Term, ParseError> {
        let (name, pos) = cur.ident("a term")?;
        match self.sig.kind_of(&name) {
            Some(SymbolKind::Function) => {
                let args = self.args(cur)?;
                let t = Term::apply(&name, args);
                t.check(self.sig).map_err(|e| ParseError::from_syntax(pos, e))?;
                Ok(t)
            }
            Some(SymbolKind::Constant) => Ok(Term::constant(&name)),
            Some(SymbolKind::Family) => {
                cur.expect(&Tok::LBracket, "`[`")?;
                let index = self.index(cur)?;
                cur.expect(&Tok::RBracket, "`]`")?;
                Ok(Term::indexed(&name, index))
            }
            Some(SymbolKind::Predicate) => Err(ParseError::syntax(pos, format!("predicate `{name}` used as a term"))),
            None if cur.peek() == Some(&Tok::LParen) || cur.peek() == Some(&Tok::LBracket) => {
                Err(ParseError::new(pos, ParseErrorKind::UnknownSymbol(name)))
            }
            None if RESERVED.contains(&name.as_str()) => {
                Err(ParseError::syntax(pos, format!("`{name}` is a reserved word")))
            }
            None => Ok(Term::var(&name)),
        }
    }

    fn bound_index(&self, name: &str, pos: Pos) -> Result<(), ParseError> {
        if self.indices.iter().any(|i| i == name) {
            Ok(())
        } else {
            Err(ParseError::syntax(pos, format!("index variable `{name}` is not bound by `Vee` or `Wedge`")))
        }
    }

    /// `[k '*'] IDX`, returning the coefficient and variable.
    fn scaled_index(&mut self, cur: &mut Cursor) -> Result<(u64, String), ParseError> {
        let mut coeff = 1;
        if matches!(cur.peek(), Some(Tok::Nat(_))) {
            let pos = cur.pos();
            coeff = cur.nat("a coefficient")?;
            if coeff == 0 {
                return Err(ParseError::syntax(pos, "index coefficient must be at least 1"));
            }
            cur.expect(&Tok::Star, "`*`")?;
        }
        let (var, pos) = cur.ident("an index variable")?;
        self.bound_index(&var, pos)?;
        Ok((coeff, var))
    }

    pub(super) fn index(&mut self, cur: &mut Cursor) -> Result<IndexExpr, ParseError> {
        if matches!(cur.peek(), Some(Tok::Nat(_))) && cur.peek_at(1) != Some(&Tok::Star) {
            return Ok(IndexExpr::lit(cur.nat("an index")?));
        }
        let (coeff, var) = self.scaled_index(cur)?;
        let offset = if cur.eat(&Tok::Plus) { cur.nat("an offset")? } else { 0 };
        Ok(IndexExpr::Affine(Affine { var, coeff, offset }))
    }

    /// `(idx + b)` inside `a/(idx+b)`; the last `+ n` is the shift.
    fn recip_tail(
        &mut self,
        cur: &mut Cursor,
        num: u64,
        num_pos: Pos,
        complement: bool,
    ) -> Result<RatExpr, ParseError> {
        cur.expect(&Tok::LParen, "`(`")?;
        let (coeff, var) = self.scaled_index(cur)?;
        let mut adds = Vec::new();
        while cur.eat(&Tok::Plus) {
            adds.push(cur.nat("a number")?);
        }
        let (offset, shift) = match adds[..] {
            [b] => (0, b),
            [o, b] => (o, b),
            _ => return Err(ParseError::syntax(cur.pos(), "expected `idx+b` inside the denominator")),
        };
        cur.expect(&Tok::RParen, "`)`")?;
        let index = Affine { var, coeff, offset };
        let r =
            if complement { RatExpr::one_minus_recip(num, shift, index) } else { RatExpr::recip(num, shift, index) };
        r.map_err(|e| ParseError::from_syntax(num_pos, e))
    }

    pub(super) fn ratexpr(&mut self, cur: &mut Cursor) -> Result<RatExpr, ParseError> {
        let pos = cur.pos();
        match cur.peek() {
            Some(Tok::Ident(w)) if w == "rat" => {
                cur.bump();
                cur.expect(&Tok::LBracket, "`[`")?;
                let index = self.index(cur)?;
                cur.expect(&Tok::RBracket, "`]`")?;
                Ok(RatExpr::enumerated(index))
            }
            Some(Tok::Nat(_)) if cur.peek_at(1) == Some(&Tok::Slash) => {
                let num = cur.nat("a numerator")?;
                cur.bump();
                self.recip_tail(cur, num, pos, false)
            }
            Some(Tok::Nat(n)) if n == "1" && cur.peek_at(1) == Some(&Tok::Minus) => {
                cur.bump();
                cur.bump();
                let num_pos = cur.pos();
                let num = cur.nat("a numerator")?;
                cur.expect(&Tok::Slash, "`/`")?;
                self.recip_tail(cur, num, num_pos, true)
            }
            Some(Tok::Nat(_) | Tok::Frac(..)) => Ok(RatExpr::fixed(cur.rational("a rational")?)),
            _ => Err(cur.unexpected("a rational")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{inf, neg};

    fn sig() -> Signature {
        Signature::new()
            .with_predicate("P", 1, crate::signature::Modulus::Identity)
            .unwrap()
            .with_predicate("R", 2, crate::signature::Modulus::Identity)
            .unwrap()
            .with_function("f", 1, crate::signature::Modulus::Identity)
            .unwrap()
            .with_constant("c")
            .unwrap()
            .with_family("e")
            .unwrap()
    }

    #[test]
    fn quantifier_example() {
        assert_eq!(
            parse_formula("sup x . ~ d(x, c)", &sig()).unwrap(),
            Formula::sup("x", neg(Formula::dist(Term::var("x"), Term::constant("c"))))
        );
    }

    #[test]
    fn dense_schema_body() {
        assert_eq!(
            parse_formula("Vee i . ~ d(x, e[i])", &sig()).unwrap(),
            Formula::sup_seq(Schema::indexed(
                "i",
                neg(Formula::dist(Term::var("x"), Term::indexed("e", IndexExpr::var("i"))))
            ))
        );
    }

    #[test]
    fn unbalanced_parenthesis_column() {
        let e = parse_formula("P(x", &sig()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn implication_is_right_associative() {
        let p = |v: &str| Formula::pred("P", vec![Term::var(v)]);
        assert_eq!(
            parse_formula("P(x) -> P(y) -> P(z)", &sig()).unwrap(),
            Formula::implies(p("x"), Formula::implies(p("y"), p("z")))
        );
    }

    #[test]
    fn errors_carry_kinds() {
        let s = sig();
        assert!(matches!(parse_formula("Q(x)", &s).unwrap_err().kind, ParseErrorKind::UnknownSymbol(_)));
        assert!(matches!(parse_formula("R(x)", &s).unwrap_err().kind, ParseErrorKind::Arity { .. }));
        assert!(matches!(parse_formula("2/4", &s).unwrap_err().kind, ParseErrorKind::Rational(_)));
        assert!(matches!(parse_formula("3/2", &s).unwrap_err().kind, ParseErrorKind::Rational(_)));
        assert!(parse_formula("d(x, e[j])", &s).is_err());
        assert!(parse_formula("Vee i . 3/(i+2)", &s).is_err());
    }

    #[test]
    fn rational_expressions() {
        let s = sig();
        let phi = parse_formula("Vee i . 1 - 1/(2*i+1+3)", &s).unwrap();
        let Formula::SupSeq { schema } = phi else { panic!() };
        assert_eq!(schema.instance(1).unwrap(), Formula::constant(Rational01::of(5, 6)));
        assert_eq!(parse_formula("inf x . P(x)", &s).unwrap(), inf("x", Formula::pred("P", vec![Term::var("x")])));
    }
}
