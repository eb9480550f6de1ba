use crate::kernel::{lex, BaseTactic, Definition, ParseError, Parser, TacticName, Tok};

use super::ast::*;

fn parse_arg(p: &mut Parser<'_>) -> Result<RawArg, ParseError> {
    match p.peek().clone() {
        Tok::LParen => {
            p.bump();
            let prop = p.prop()?;
            p.expect(Tok::RParen)?;
            Ok(RawArg::Expr(prop))
        }
        Tok::Word(w) if w != "by" => {
            p.bump();
            Ok(RawArg::Word(w))
        }
        other => Err(p.error(format!("expected an argument, found {other:?}"))),
    }
}

fn parse_base(p: &mut Parser<'_>) -> Result<ScriptAst, ParseError> {
    if *p.peek() == Tok::LParen {
        p.bump();
        let e = parse_expr(p)?;
        p.expect(Tok::RParen)?;
        return Ok(e);
    }
    let Some(word) = p.peek_word().map(str::to_owned) else {
        return Err(p.error(format!("expected a tactic, found {:?}", p.peek())));
    };
    if word == "repeat" {
        return Err(p.error("`repeat` is not supported"));
    }
    let Some(tac) = BaseTactic::from_name(&word) else {
        return Err(p.error(format!("unknown tactic `{word}`")));
    };
    p.bump();
    if !tac.takes_argument() {
        return Ok(ScriptAst::atomic(tac, RawArg::None));
    }
    let arg = parse_arg(p)?;
    if p.peek_word() == Some("by") {
        let node: fn(RawArg, Box<ScriptAst>) -> ScriptAst = match tac {
            BaseTactic::Rewrite => ScriptAst::RewriteBy,
            BaseTactic::Assert => ScriptAst::AssertBy,
            _ => return Err(p.error(format!("`{word}` does not take `by`"))),
        };
        p.bump();
        let tac = parse_prefix(p)?;
        return Ok(node(arg, Box::new(tac)));
    }
    if *p.peek() != Tok::Comma {
        return Ok(ScriptAst::atomic(tac, arg));
    }
    let mut args = vec![arg];
    while *p.peek() == Tok::Comma {
        p.bump();
        args.push(parse_arg(p)?);
    }
    Ok(ScriptAst::MultiArg(TacticName::Base(tac), args))
}

fn parse_prefix(p: &mut Parser<'_>) -> Result<ScriptAst, ParseError> {
    match p.peek_word() {
        Some("try") => {
            p.bump();
            Ok(ScriptAst::Try(Box::new(parse_base(p)?)))
        }
        Some("now") => {
            p.bump();
            Ok(ScriptAst::Now(Box::new(parse_base(p)?)))
        }
        _ => parse_base(p),
    }
}

fn parse_expr(p: &mut Parser<'_>) -> Result<ScriptAst, ParseError> {
    let mut e = parse_prefix(p)?;
    while *p.peek() == Tok::Semi {
        p.bump();
        e = ScriptAst::seq(e, parse_prefix(p)?);
    }
    Ok(e)
}

/// Statements up to (not including) `stop`, or end of input when `stop` is None.
fn parse_statements(p: &mut Parser<'_>, stop: Option<&str>) -> Result<ScriptAst, ParseError> {
    let mut stmts = Vec::new();
    loop {
        match (p.peek(), stop) {
            (Tok::Eof, None) => break,
            (Tok::Word(w), Some(s)) if w == s => break,
            _ => {}
        }
        stmts.push(parse_expr(p)?);
        p.expect(Tok::Dot)?;
    }
    if stmts.is_empty() {
        return Err(p.error("empty script"));
    }
    Ok(ScriptAst::Dots(stmts))
}

/// Parse a bare proof script: one or more `.`-terminated statements.
pub fn parse_script(text: &str) -> Result<ScriptAst, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    parse_statements(&mut p, None)
}

fn parse_definition(p: &mut Parser<'_>) -> Result<Definition, ParseError> {
    p.expect_word("Definition")?;
    let name = p.ident()?;
    let mut params = Vec::new();
    while *p.peek() == Tok::LParen {
        p.bump();
        let x = p.ident()?;
        p.expect(Tok::Colon)?;
        let s = p.sort()?;
        p.expect(Tok::RParen)?;
        params.push((x, s));
    }
    p.expect(Tok::Colon)?;
    p.expect_word("Prop")?;
    p.expect(Tok::ColonEq)?;
    let body = p.prop()?;
    p.expect(Tok::Dot)?;
    Ok(Definition { name, params, body })
}

fn parse_theorem(p: &mut Parser<'_>) -> Result<TheoremScript, ParseError> {
    p.expect_word("Theorem")?;
    let name = p.ident()?.as_str().to_owned();
    p.expect(Tok::Colon)?;
    let statement = p.prop()?;
    p.expect(Tok::Dot)?;
    p.expect_word("Proof")?;
    p.expect(Tok::Dot)?;
    let script = parse_statements(p, Some("Qed"))?;
    p.expect_word("Qed")?;
    p.expect(Tok::Dot)?;
    Ok(TheoremScript {
        name,
        statement,
        script,
    })
}

/// Parse a `.vs` file: definitions and theorems in any order.
pub fn parse_file(name: &str, text: &str) -> Result<ScriptFile, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let mut file = ScriptFile {
        name: name.to_owned(),
        ..ScriptFile::default()
    };
    loop {
        match p.peek_word() {
            Some("Definition") => file.definitions.push(parse_definition(&mut p)?),
            Some("Theorem") => file.theorems.push(parse_theorem(&mut p)?),
            None if *p.peek() == Tok::Eof => return Ok(file),
            _ => return Err(p.error(format!("expected `Definition` or `Theorem`, found {:?}", p.peek()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_prop, Sort};

    fn word(w: &str) -> RawArg {
        RawArg::Word(w.into())
    }

    #[test]
    fn dot_sequence() {
        let ast = parse_script("intro. assumption.").unwrap();
        assert_eq!(
            ast,
            ScriptAst::Dots(vec![
                ScriptAst::atomic(BaseTactic::Intro, RawArg::None),
                ScriptAst::atomic(BaseTactic::Assumption, RawArg::None),
            ])
        );
    }

    #[test]
    fn semicolon_is_seq() {
        let ast = parse_script("split; assumption.").unwrap();
        assert_eq!(
            ast.statements(),
            [ScriptAst::seq(
                ScriptAst::atomic(BaseTactic::Split, RawArg::None),
                ScriptAst::atomic(BaseTactic::Assumption, RawArg::None),
            )]
        );
    }

    #[test]
    fn multi_argument_unfold() {
        let ast = parse_script("unfold a, b.").unwrap();
        assert_eq!(
            ast.statements(),
            [ScriptAst::MultiArg(
                TacticName::Base(BaseTactic::Unfold),
                vec![word("a"), word("b")]
            )]
        );
    }

    #[test]
    fn prefixes_and_by() {
        let ast =
            parse_script("now (intro; simpl). try easy. rewrite H by (simpl; easy). assert (eq 0 0) by easy.").unwrap();
        let s = ast.statements();
        assert!(matches!(&s[0], ScriptAst::Now(t) if matches!(**t, ScriptAst::Seq(..))));
        assert!(matches!(&s[1], ScriptAst::Try(_)));
        assert!(matches!(&s[2], ScriptAst::RewriteBy(RawArg::Word(w), _) if w == "H"));
        assert!(matches!(&s[3], ScriptAst::AssertBy(RawArg::Expr(_), _)));
    }

    #[test]
    fn seq_is_left_associative() {
        let ast = parse_script("intro; split; easy.").unwrap();
        let ScriptAst::Seq(l, _) = &ast.statements()[0] else {
            panic!()
        };
        assert!(matches!(**l, ScriptAst::Seq(..)));
    }

    #[test]
    fn rejects_repeat_and_unknown() {
        let err = parse_script("repeat split.").unwrap_err();
        assert_eq!((err.line, err.col), (1, 1));
        assert!(parse_script("frobnicate.").is_err());
        assert!(parse_script("apply.").is_err());
        assert!(parse_script("intro H.").is_err());
    }

    #[test]
    fn file_round_trip() {
        let src = "Definition dbl (n : nat) : Prop := eq (plus n n) (mult 2 n).\n\
                   Theorem t1 : forall n : nat, eq (plus n 0) n.\n\
                   Proof.\n  induction n; simpl.\n  reflexivity.\n  rewrite IHn.\n  reflexivity.\nQed.\n";
        let f = parse_file("f", src).unwrap();
        assert_eq!(
            f.definitions[0].params,
            vec![(crate::kernel::Ident::new("n"), Sort::Nat)]
        );
        assert_eq!(
            f.theorems[0].statement,
            parse_prop("forall n : nat, eq (plus n 0) n").unwrap()
        );
        let again = parse_file("f", &f.to_string()).unwrap();
        assert_eq!(again, f);
    }
}
