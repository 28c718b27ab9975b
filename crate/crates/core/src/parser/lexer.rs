use super::{ParseError, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Digits only.
    Nat(String),
    /// `p/q` written without spaces; not yet checked for range or reduction.
    Frac(String, String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Semi,
    Colon,
    Equals,
    Tilde,
    Arrow,
    Geq,
    Leq,
    OPlus,
    Wedge,
    Vee,
    Slash,
    Minus,
    Plus,
    Star,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(s) => format!("number `{s}`"),
            Tok::Frac(p, q) => format!("rational `{p}/{q}`"),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Equals => "=",
            Tok::Tilde => "~",
            Tok::Arrow => "->",
            Tok::Geq => ">=",
            Tok::Leq => "<=",
            Tok::OPlus => "(+)",
            Tok::Wedge => "/\\",
            Tok::Vee => "\\/",
            Tok::Slash => "/",
            Tok::Minus => "-",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Ident(_) | Tok::Nat(_) | Tok::Frac(..) => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits `text` into tokens; `#` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, col: &mut usize, n: usize| {
        *i += n;
        *col += n;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut col, 1);
            }
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                advance(&mut i, &mut col, 1);
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut col, 1);
            }
            let p: String = chars[start..i].iter().collect();
            if chars.get(i) == Some(&'/') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                advance(&mut i, &mut col, 1);
                let qs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut col, 1);
                }
                out.push(Token { tok: Tok::Frac(p, chars[qs..i].iter().collect()), pos });
            } else {
                out.push(Token { tok: Tok::Nat(p), pos });
            }
            continue;
        }
        let at = |k: usize| chars.get(i + k).copied();
        let (tok, len) = match (c, at(1), at(2)) {
            ('(', Some('+'), Some(')')) => (Tok::OPlus, 3),
            ('-', Some('>'), _) => (Tok::Arrow, 2),
            ('>', Some('='), _) => (Tok::Geq, 2),
            ('<', Some('='), _) => (Tok::Leq, 2),
            ('/', Some('\\'), _) => (Tok::Wedge, 2),
            ('\\', Some('/'), _) => (Tok::Vee, 2),
            ('(', ..) => (Tok::LParen, 1),
            (')', ..) => (Tok::RParen, 1),
            ('[', ..) => (Tok::LBracket, 1),
            (']', ..) => (Tok::RBracket, 1),
            (',', ..) => (Tok::Comma, 1),
            ('.', ..) => (Tok::Dot, 1),
            (';', ..) => (Tok::Semi, 1),
            (':', ..) => (Tok::Colon, 1),
            ('=', ..) => (Tok::Equals, 1),
            ('~', ..) => (Tok::Tilde, 1),
            ('/', ..) => (Tok::Slash, 1),
            ('-', ..) => (Tok::Minus, 1),
            ('+', ..) => (Tok::Plus, 1),
            ('*', ..) => (Tok::Star, 1),
            _ => return Err(ParseError::lexical(pos, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, pos });
        advance(&mut i, &mut col, len);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn fractions_are_single_tokens_only_when_adjacent() {
        assert_eq!(toks("1/2"), vec![Tok::Frac("1".into(), "2".into())]);
        assert_eq!(toks("1/(i+2)")[..3], [Tok::Nat("1".into()), Tok::Slash, Tok::LParen]);
        assert_eq!(toks("1 / 2"), vec![Tok::Nat("1".into()), Tok::Slash, Tok::Nat("2".into())]);
    }

    #[test]
    fn operators() {
        assert_eq!(
            toks("(+) -> - >= <= /\\ \\/ ~"),
            vec![Tok::OPlus, Tok::Arrow, Tok::Minus, Tok::Geq, Tok::Leq, Tok::Wedge, Tok::Vee, Tok::Tilde]
        );
    }

    #[test]
    fn positions_and_comments() {
        let t = tokenize("# header\n  x' y").unwrap();
        assert_eq!(t[0].tok, Tok::Ident("x'".into()));
        assert_eq!((t[0].pos.line, t[0].pos.column), (2, 3));
        assert_eq!((t[1].pos.line, t[1].pos.column), (2, 6));
    }

    #[test]
    fn bad_character() {
        let e = tokenize("P(x) & Q").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
    }
}
