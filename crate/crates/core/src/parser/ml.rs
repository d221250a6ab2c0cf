//! Metalanguage surface syntax: the term grammar with `val M` in place of
//! `pure M`, `let val x = M in N` in place of the modal let, and the type
//! operator `V`.

use super::lexer::{Cursor, Tok};
use super::ParseError;
use crate::metalang::{MLTerm, MLType};
use crate::syntax::{Component, RESERVED};

pub fn parse_ml_type(src: &str) -> Result<MLType, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = ty(&mut cur)?;
    cur.expect_eof()?;
    Ok(t)
}

pub fn parse_ml_term(src: &str) -> Result<MLTerm, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = term(&mut cur)?;
    cur.expect_eof()?;
    Ok(t)
}

fn ty(cur: &mut Cursor) -> Result<MLType, ParseError> {
    let left = prod(cur)?;
    if cur.eat(&Tok::Arrow) {
        Ok(MLType::arrow(left, ty(cur)?))
    } else {
        Ok(left)
    }
}

fn prod(cur: &mut Cursor) -> Result<MLType, ParseError> {
    let mut acc = modal(cur)?;
    while cur.eat(&Tok::Star) {
        acc = MLType::product(acc, modal(cur)?);
    }
    Ok(acc)
}

fn modal(cur: &mut Cursor) -> Result<MLType, ParseError> {
    if cur.eat_keyword("V") {
        return Ok(MLType::nabla(modal(cur)?));
    }
    if cur.eat(&Tok::LParen) {
        let t = ty(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(t);
    }
    let (name, _) = cur.expect_ident(RESERVED)?;
    Ok(MLType::Atom(name))
}

fn term(cur: &mut Cursor) -> Result<MLTerm, ParseError> {
    if cur.eat(&Tok::Backslash) {
        let (binder, _) = cur.expect_ident(RESERVED)?;
        let ann = if cur.eat(&Tok::Colon) {
            Some(ty(cur)?)
        } else {
            None
        };
        cur.expect(&Tok::Dot)?;
        return Ok(MLTerm::lam(binder, ann, term(cur)?));
    }
    if cur.eat_keyword("let") {
        cur.expect_keyword("val")?;
        let (binder, _) = cur.expect_ident(RESERVED)?;
        cur.expect(&Tok::Eq)?;
        let bound = term(cur)?;
        cur.expect_keyword("in")?;
        let body = term(cur)?;
        return Ok(MLTerm::let_val(binder, bound, body));
    }
    let mut acc = atom(cur)?;
    while starts_atom(cur) {
        acc = MLTerm::app(acc, atom(cur)?);
    }
    Ok(acc)
}

fn starts_atom(cur: &mut Cursor) -> bool {
    match cur.peek() {
        Tok::Ident(s) => {
            matches!(s.as_str(), "val" | "p1" | "p2") || !RESERVED.contains(&s.as_str())
        }
        Tok::LAngle | Tok::LParen => true,
        _ => false,
    }
}

fn atom(cur: &mut Cursor) -> Result<MLTerm, ParseError> {
    if cur.eat_keyword("val") {
        return Ok(MLTerm::val(atom(cur)?));
    }
    if cur.eat_keyword("p1") {
        return Ok(MLTerm::proj(Component::First, atom(cur)?));
    }
    if cur.eat_keyword("p2") {
        return Ok(MLTerm::proj(Component::Second, atom(cur)?));
    }
    if cur.eat(&Tok::LAngle) {
        let l = term(cur)?;
        cur.expect(&Tok::Comma)?;
        let r = term(cur)?;
        cur.expect(&Tok::RAngle)?;
        return Ok(MLTerm::pair(l, r));
    }
    if cur.eat(&Tok::LParen) {
        let t = term(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(t);
    }
    let (x, _) = cur.expect_ident(RESERVED)?;
    Ok(MLTerm::Var(x))
}
