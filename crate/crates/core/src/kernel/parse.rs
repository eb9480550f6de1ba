//! Lexer shared with the proof-script parser, and the parser for the
//! concrete proposition/term syntax produced by the pretty-printer.

use thiserror::Error;

use super::syntax::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    LParen,
    RParen,
    Comma,
    Colon,
    ColonEq,
    Dot,
    Semi,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '(' && chars.get(i + 1) == Some(&'*') {
            let mut depth = 0usize;
            loop {
                if i >= chars.len() {
                    return Err(ParseError {
                        line: l0,
                        col: c0,
                        msg: "unterminated comment".into(),
                    });
                }
                if chars[i] == '(' && chars.get(i + 1) == Some(&'*') {
                    depth += 1;
                    advance(&mut i, &mut line, &mut col, '(');
                    advance(&mut i, &mut line, &mut col, '*');
                } else if chars[i] == '*' && chars.get(i + 1) == Some(&')') {
                    depth -= 1;
                    advance(&mut i, &mut line, &mut col, '*');
                    advance(&mut i, &mut line, &mut col, ')');
                    if depth == 0 {
                        break;
                    }
                } else {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '.' => Tok::Dot,
            ':' if chars.get(i + 1) == Some(&'=') => {
                advance(&mut i, &mut line, &mut col, ':');
                Tok::ColonEq
            }
            ':' => Tok::Colon,
            c if c.is_ascii_alphanumeric() || c == '_' || c == '\'' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                    col += 1;
                }
                out.push(Spanned {
                    tok: Tok::Word(chars[start..i].iter().collect()),
                    line: l0,
                    col: c0,
                });
                continue;
            }
            other => {
                return Err(ParseError {
                    line: l0,
                    col: c0,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        advance(&mut i, &mut line, &mut col, c);
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const PROP_KEYWORDS: &[&str] = &["forall", "not", "and", "or", "impl", "eq"];
const TERM_KEYWORDS: &[&str] = &["S", "cons", "nil", "true", "false"];

pub fn is_reserved(word: &str) -> bool {
    PROP_KEYWORDS.contains(&word)
        || TERM_KEYWORDS.contains(&word)
        || Func::from_name(word).is_some()
        || Sort::from_name(word).is_some()
}

/// Cursor over a token stream.
pub struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Spanned]) -> Self {
        Parser { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn peek_word(&self) -> Option<&str> {
        match self.peek() {
            Tok::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            msg: msg.into(),
        }
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok:?}, found {:?}", self.peek())))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        if self.peek_word() == Some(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{w}`, found {:?}", self.peek())))
        }
    }

    pub fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek() {
            Tok::Word(w) if !is_reserved(w) && !w.chars().all(|c| c.is_ascii_digit()) => {
                let id = Ident::new(w.clone());
                self.bump();
                Ok(id)
            }
            other => Err(self.error(format!("expected identifier, found {other:?}"))),
        }
    }

    pub fn sort(&mut self) -> Result<Sort, ParseError> {
        match self.peek_word().and_then(Sort::from_name) {
            Some(s) => {
                self.bump();
                Ok(s)
            }
            None => Err(self.error("expected a sort (nat, list, bool)")),
        }
    }

    pub fn prop(&mut self) -> Result<Prop, ParseError> {
        let Some(w) = self.peek_word().map(str::to_owned) else {
            return self.prop_atom();
        };
        match w.as_str() {
            "forall" => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let s = self.sort()?;
                self.expect(Tok::Comma)?;
                let body = self.prop()?;
                Ok(Prop::Forall(x, s, Box::new(body)))
            }
            "not" => {
                self.bump();
                Ok(Prop::not(self.prop_atom()?))
            }
            "and" | "or" | "impl" => {
                self.bump();
                let a = self.prop_atom()?;
                let b = self.prop_atom()?;
                Ok(match w.as_str() {
                    "and" => Prop::and(a, b),
                    "or" => Prop::or(a, b),
                    _ => Prop::implies(a, b),
                })
            }
            "eq" => {
                self.bump();
                let a = self.term_atom()?;
                let b = self.term_atom()?;
                Ok(Prop::Eq(a, b))
            }
            _ => {
                let head = self.ident()?;
                let mut args = Vec::new();
                while self.starts_term_atom() {
                    args.push(self.term_atom()?);
                }
                Ok(if args.is_empty() {
                    Prop::Atom(head)
                } else {
                    Prop::App(head, args)
                })
            }
        }
    }

    fn prop_atom(&mut self) -> Result<Prop, ParseError> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let p = self.prop()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Word(_) => Ok(Prop::Atom(self.ident()?)),
            other => Err(self.error(format!("expected proposition, found {other:?}"))),
        }
    }

    fn starts_term_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Word(w) => {
                w.chars().all(|c| c.is_ascii_digit())
                    || matches!(w.as_str(), "nil" | "true" | "false")
                    || !is_reserved(w)
            }
            _ => false,
        }
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        let Some(w) = self.peek_word().map(str::to_owned) else {
            return self.term_atom();
        };
        if w == "S" {
            self.bump();
            return Ok(Term::succ(self.term_atom()?));
        }
        if w == "cons" {
            self.bump();
            let h = self.term_atom()?;
            let t = self.term_atom()?;
            return Ok(Term::cons(h, t));
        }
        if let Some(f) = Func::from_name(&w) {
            self.bump();
            let args = (0..f.arity())
                .map(|_| self.term_atom())
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Term::Fn(f, args));
        }
        self.term_atom()
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Word(w) if w.chars().all(|c| c.is_ascii_digit()) => {
                let n: u64 = w
                    .parse()
                    .map_err(|_| self.error(format!("numeral out of range: {w}")))?;
                if n > 1000 {
                    return Err(self.error(format!("numeral too large: {n}")));
                }
                self.bump();
                Ok(Term::num(n))
            }
            Tok::Word(w) if w == "nil" => {
                self.bump();
                Ok(Term::Nil)
            }
            Tok::Word(w) if w == "true" => {
                self.bump();
                Ok(Term::True)
            }
            Tok::Word(w) if w == "false" => {
                self.bump();
                Ok(Term::False)
            }
            Tok::Word(_) => Ok(Term::Var(self.ident()?)),
            other => Err(self.error(format!("expected term, found {other:?}"))),
        }
    }
}

/// Parse a complete proposition from text.
pub fn parse_prop(text: &str) -> Result<Prop, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let prop = p.prop()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("trailing input {:?}", p.peek())));
    }
    Ok(prop)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("trailing input {:?}", p.peek())));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_printed_forms() {
        for src in [
            "not (eq x y)",
            "forall n : nat, eq (plus n 0) n",
            "impl (and A B) (or B C)",
            "forall l : list, eq (length (append l nil)) (length l)",
            "forall x : nat, impl (P x) (both x)",
            "eq (cons 1 (cons 2 nil)) (append (cons 1 nil) (cons 2 nil))",
            "forall b : bool, or (eq b true) (eq b false)",
        ] {
            let p = parse_prop(src).unwrap();
            assert_eq!(p.to_string(), src);
        }
    }

    #[test]
    fn reports_position() {
        let err = parse_prop("and A").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));
    }

    #[test]
    fn skips_comments() {
        let p = parse_prop("(* a comment *) not A").unwrap();
        assert_eq!(p, Prop::not(Prop::atom("A")));
    }
}
