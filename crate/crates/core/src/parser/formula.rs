use super::lexer::{Cursor, Tok};
use super::ParseError;
use crate::formula::Formula;

const KEYWORDS: &[&str] = &["false", "true", "forall", "exists", "O"];

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(src)?;
    let f = formula(&mut cur)?;
    cur.expect_eof()?;
    Ok(f)
}

fn formula(cur: &mut Cursor) -> Result<Formula, ParseError> {
    if let Some(q) = quantifier(cur)? {
        return Ok(q);
    }
    let left = disj(cur)?;
    if cur.eat(&Tok::Arrow) {
        Ok(Formula::implies(left, formula(cur)?))
    } else {
        Ok(left)
    }
}

fn quantifier(cur: &mut Cursor) -> Result<Option<Formula>, ParseError> {
    let universal = if cur.eat_keyword("forall") {
        true
    } else if cur.eat_keyword("exists") {
        false
    } else {
        return Ok(None);
    };
    let (var, _) = cur.expect_ident(KEYWORDS)?;
    cur.expect(&Tok::Dot)?;
    let body = formula(cur)?;
    Ok(Some(if universal {
        Formula::forall(var, body)
    } else {
        Formula::exists(var, body)
    }))
}

fn disj(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let mut acc = conj(cur)?;
    while cur.eat(&Tok::Bar) {
        acc = Formula::or(acc, conj(cur)?);
    }
    Ok(acc)
}

fn conj(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let mut acc = unary(cur)?;
    while cur.eat(&Tok::Amp) {
        acc = Formula::and(acc, unary(cur)?);
    }
    Ok(acc)
}

fn unary(cur: &mut Cursor) -> Result<Formula, ParseError> {
    if cur.eat(&Tok::Tilde) {
        return Ok(Formula::not(unary(cur)?));
    }
    if cur.eat_keyword("O") {
        return Ok(Formula::circ(unary(cur)?));
    }
    atom(cur)
}

fn atom(cur: &mut Cursor) -> Result<Formula, ParseError> {
    if cur.eat_keyword("false") {
        return Ok(Formula::Bottom);
    }
    if cur.eat_keyword("true") {
        return Ok(Formula::top());
    }
    if let Some(q) = quantifier(cur)? {
        return Ok(q);
    }
    if cur.eat(&Tok::LParen) {
        let f = formula(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(f);
    }
    let (name, _) = cur.expect_ident(KEYWORDS)?;
    if cur.eat(&Tok::LParen) {
        let mut args = Vec::new();
        if !cur.eat(&Tok::RParen) {
            loop {
                args.push(cur.expect_ident(KEYWORDS)?.0);
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            }
            cur.expect(&Tok::RParen)?;
        }
        return Ok(Formula::Pred(name, args));
    }
    Ok(Formula::Letter(name))
}
