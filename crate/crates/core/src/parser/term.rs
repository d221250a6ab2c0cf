use super::lexer::{Cursor, Tok};
use super::{ParseError, SourceSpan, SpanTree};
use crate::syntax::{Component, Context, Term, Type, RESERVED};

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_term_with_spans(src).map(|(t, _)| t)
}

/// Like [`parse_term`], also returning the span of every subterm.
pub fn parse_term_with_spans(src: &str) -> Result<(Term, SpanTree), ParseError> {
    let mut cur = Cursor::new(src)?;
    let out = term(&mut cur)?;
    cur.expect_eof()?;
    Ok(out)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = ty(&mut cur)?;
    cur.expect_eof()?;
    Ok(t)
}

/// A context file: one `name : type` declaration per line.
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    let mut entries: Vec<(String, Type)> = Vec::new();
    let mut offset = 0;
    for (lineno, line) in src.split_inclusive('\n').enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            let mut cur = Cursor::new(body).map_err(|e| shift(e, offset, lineno))?;
            let decl = (|| {
                let (name, span) = cur.expect_ident(RESERVED)?;
                cur.expect(&Tok::Colon)?;
                let t = ty(&mut cur)?;
                cur.expect_eof()?;
                Ok((name, span, t))
            })();
            let (name, span, t) = decl.map_err(|e| shift(e, offset, lineno))?;
            if entries.iter().any(|(x, _)| *x == name) {
                return Err(shift(
                    ParseError::new(format!("`{name}` is declared twice"), span, vec![]),
                    offset,
                    lineno,
                ));
            }
            entries.push((name, t));
        }
        offset += line.len();
    }
    Ok(Context::new(entries).expect("duplicates rejected above"))
}

fn shift(mut e: ParseError, offset: usize, lineno: usize) -> ParseError {
    e.span.start += offset;
    e.span.end += offset;
    e.span.line = lineno + 1;
    e
}

pub(super) fn ty(cur: &mut Cursor) -> Result<Type, ParseError> {
    let left = prod(cur)?;
    if cur.eat(&Tok::Arrow) {
        let right = ty(cur)?;
        Ok(Type::arrow(left, right))
    } else {
        Ok(left)
    }
}

fn prod(cur: &mut Cursor) -> Result<Type, ParseError> {
    let mut acc = modal(cur)?;
    while cur.eat(&Tok::Star) {
        let rhs = modal(cur)?;
        acc = Type::product(acc, rhs);
    }
    Ok(acc)
}

fn modal(cur: &mut Cursor) -> Result<Type, ParseError> {
    if cur.eat_keyword("O") {
        return Ok(Type::circle(modal(cur)?));
    }
    if cur.eat(&Tok::LParen) {
        let t = ty(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(t);
    }
    let (name, _) = cur.expect_ident(RESERVED)?;
    Ok(Type::Atom(name))
}

type Spanned = (Term, SpanTree);

pub(super) fn term(cur: &mut Cursor) -> Result<Spanned, ParseError> {
    let start = cur.span();
    if cur.eat(&Tok::Backslash) {
        let (binder, _) = cur.expect_ident(RESERVED)?;
        let ann = if cur.eat(&Tok::Colon) {
            Some(ty(cur)?)
        } else {
            None
        };
        cur.expect(&Tok::Dot)?;
        let (body, bs) = term(cur)?;
        let span = start.to(bs.span);
        return Ok((
            Term::lam(binder, ann, body),
            SpanTree {
                span,
                children: vec![bs],
            },
        ));
    }
    if cur.eat_keyword("let") {
        cur.expect_keyword("o")?;
        let binders = binder_list(cur)?;
        cur.expect(&Tok::Eq)?;
        let mut args = Vec::new();
        let mut spans = Vec::new();
        if !cur.eat(&Tok::Underscore) {
            loop {
                let (a, s) = term(cur)?;
                args.push(a);
                spans.push(s);
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        let in_span = cur.expect_keyword("in")?;
        if binders.len() != args.len() {
            return Err(ParseError::new(
                format!(
                    "let binds {} variables to {} arguments",
                    binders.len(),
                    args.len()
                ),
                start.to(in_span),
                vec![],
            ));
        }
        let (body, bs) = term(cur)?;
        let span = start.to(bs.span);
        spans.push(bs);
        return Ok((
            Term::let_circ(binders, args, body),
            SpanTree {
                span,
                children: spans,
            },
        ));
    }
    app(cur)
}

fn binder_list(cur: &mut Cursor) -> Result<Vec<String>, ParseError> {
    if cur.eat(&Tok::Underscore) {
        return Ok(Vec::new());
    }
    let mut out: Vec<String> = Vec::new();
    loop {
        let (x, span) = cur.expect_ident(RESERVED)?;
        if out.contains(&x) {
            return Err(ParseError::new(
                format!("`{x}` is bound twice in one let"),
                span,
                vec![],
            ));
        }
        out.push(x);
        if !cur.eat(&Tok::Comma) {
            return Ok(out);
        }
    }
}

fn starts_atom(cur: &mut Cursor) -> bool {
    match cur.peek().clone() {
        Tok::Ident(s) => {
            matches!(s.as_str(), "pure" | "p1" | "p2") || !RESERVED.contains(&s.as_str())
        }
        Tok::LAngle | Tok::LParen => true,
        _ => {
            cur.note("identifier");
            cur.note("`(`");
            cur.note("`<`");
            false
        }
    }
}

fn app(cur: &mut Cursor) -> Result<Spanned, ParseError> {
    let (mut acc, mut acc_span) = atom(cur)?;
    while starts_atom(cur) {
        let (arg, arg_span) = atom(cur)?;
        let span = acc_span.span.to(arg_span.span);
        acc = Term::app(acc, arg);
        acc_span = SpanTree {
            span,
            children: vec![acc_span, arg_span],
        };
    }
    Ok((acc, acc_span))
}

fn atom(cur: &mut Cursor) -> Result<Spanned, ParseError> {
    let start = cur.span();
    let wrap = |t: Term, inner: SpanTree, start: SourceSpan| {
        let span = start.to(inner.span);
        (
            t,
            SpanTree {
                span,
                children: vec![inner],
            },
        )
    };
    if cur.eat_keyword("pure") {
        let (m, s) = atom(cur)?;
        return Ok(wrap(Term::pure(m), s, start));
    }
    if cur.eat_keyword("p1") {
        let (m, s) = atom(cur)?;
        return Ok(wrap(Term::proj(Component::First, m), s, start));
    }
    if cur.eat_keyword("p2") {
        let (m, s) = atom(cur)?;
        return Ok(wrap(Term::proj(Component::Second, m), s, start));
    }
    if cur.eat(&Tok::LAngle) {
        let (l, ls) = term(cur)?;
        cur.expect(&Tok::Comma)?;
        let (r, rs) = term(cur)?;
        let end = cur.expect(&Tok::RAngle)?;
        return Ok((
            Term::pair(l, r),
            SpanTree {
                span: start.to(end),
                children: vec![ls, rs],
            },
        ));
    }
    if cur.eat(&Tok::LParen) {
        let (t, mut s) = term(cur)?;
        let end = cur.expect(&Tok::RParen)?;
        s.span = start.to(end);
        return Ok((t, s));
    }
    let (x, span) = cur.expect_ident(RESERVED)?;
    Ok((Term::Var(x), SpanTree::leaf(span)))
}
