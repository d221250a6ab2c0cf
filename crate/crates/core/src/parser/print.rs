//! Minimal-parenthesis printers. Every printer is a right inverse of the
//! matching parser (up to α-equivalence for terms).

use crate::formula::Formula;
use crate::metalang::{MLTerm, MLType};
use crate::syntax::{Term, Type};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TyLevel {
    Arrow,
    Prod,
    Modal,
}

pub fn print_type(t: &Type) -> String {
    let mut out = String::new();
    ty(t, TyLevel::Arrow, &mut out);
    out
}

fn ty(t: &Type, level: TyLevel, out: &mut String) {
    match t {
        Type::Atom(a) => out.push_str(a),
        Type::Arrow(a, b) => paren(level > TyLevel::Arrow, out, |o| {
            ty(a, TyLevel::Prod, o);
            o.push_str(" -> ");
            ty(b, TyLevel::Arrow, o);
        }),
        Type::Product(a, b) => paren(level > TyLevel::Prod, out, |o| {
            ty(a, TyLevel::Prod, o);
            o.push_str(" * ");
            ty(b, TyLevel::Modal, o);
        }),
        Type::Circle(a) => {
            out.push_str("O ");
            ty(a, TyLevel::Modal, out);
        }
    }
}

pub fn print_ml_type(t: &MLType) -> String {
    let mut out = String::new();
    ml_ty(t, TyLevel::Arrow, &mut out);
    out
}

fn ml_ty(t: &MLType, level: TyLevel, out: &mut String) {
    match t {
        MLType::Atom(a) => out.push_str(a),
        MLType::Arrow(a, b) => paren(level > TyLevel::Arrow, out, |o| {
            ml_ty(a, TyLevel::Prod, o);
            o.push_str(" -> ");
            ml_ty(b, TyLevel::Arrow, o);
        }),
        MLType::Product(a, b) => paren(level > TyLevel::Prod, out, |o| {
            ml_ty(a, TyLevel::Prod, o);
            o.push_str(" * ");
            ml_ty(b, TyLevel::Modal, o);
        }),
        MLType::Nabla(a) => {
            out.push_str("V ");
            ml_ty(a, TyLevel::Modal, out);
        }
    }
}

fn paren(needed: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if needed {
        out.push('(');
    }
    body(out);
    if needed {
        out.push(')');
    }
}

/// Position a term is printed in: anywhere, as the function of an
/// application, or as an operand that must be atomic.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    Top,
    Fun,
    Atom,
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, Pos::Top, &mut out);
    out
}

fn term(t: &Term, pos: Pos, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Lam { binder, ann, body } => paren(pos != Pos::Top, out, |o| {
            o.push('\\');
            o.push_str(binder);
            if let Some(a) = ann {
                o.push(':');
                ty(a, TyLevel::Arrow, o);
            }
            o.push_str(". ");
            term(body, Pos::Top, o);
        }),
        Term::Let {
            binders,
            args,
            body,
        } => paren(pos != Pos::Top, out, |o| {
            o.push_str("let o ");
            if binders.is_empty() {
                o.push_str("_ = _");
            } else {
                o.push_str(&binders.join(", "));
                o.push_str(" = ");
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        o.push_str(", ");
                    }
                    term(a, Pos::Top, o);
                }
            }
            o.push_str(" in ");
            term(body, Pos::Top, o);
        }),
        Term::App(f, a) => paren(pos == Pos::Atom, out, |o| {
            term(f, Pos::Fun, o);
            o.push(' ');
            term(a, Pos::Atom, o);
        }),
        Term::Pair(l, r) => {
            out.push('<');
            term(l, Pos::Top, out);
            out.push_str(", ");
            term(r, Pos::Top, out);
            out.push('>');
        }
        Term::Proj(i, m) => {
            out.push_str(&format!("p{} ", i.index()));
            term(m, Pos::Atom, out);
        }
        Term::Pure(m) => {
            out.push_str("pure ");
            term(m, Pos::Atom, out);
        }
    }
}

pub fn print_ml_term(t: &MLTerm) -> String {
    let mut out = String::new();
    ml_term(t, Pos::Top, &mut out);
    out
}

fn ml_term(t: &MLTerm, pos: Pos, out: &mut String) {
    match t {
        MLTerm::Var(x) => out.push_str(x),
        MLTerm::Lam { binder, ann, body } => paren(pos != Pos::Top, out, |o| {
            o.push('\\');
            o.push_str(binder);
            if let Some(a) = ann {
                o.push(':');
                ml_ty(a, TyLevel::Arrow, o);
            }
            o.push_str(". ");
            ml_term(body, Pos::Top, o);
        }),
        MLTerm::LetVal {
            binder,
            bound,
            body,
        } => paren(pos != Pos::Top, out, |o| {
            o.push_str("let val ");
            o.push_str(binder);
            o.push_str(" = ");
            ml_term(bound, Pos::Top, o);
            o.push_str(" in ");
            ml_term(body, Pos::Top, o);
        }),
        MLTerm::App(f, a) => paren(pos == Pos::Atom, out, |o| {
            ml_term(f, Pos::Fun, o);
            o.push(' ');
            ml_term(a, Pos::Atom, o);
        }),
        MLTerm::Pair(l, r) => {
            out.push('<');
            ml_term(l, Pos::Top, out);
            out.push_str(", ");
            ml_term(r, Pos::Top, out);
            out.push('>');
        }
        MLTerm::Proj(i, m) => {
            out.push_str(&format!("p{} ", i.index()));
            ml_term(m, Pos::Atom, out);
        }
        MLTerm::Val(m) => {
            out.push_str("val ");
            ml_term(m, Pos::Atom, out);
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    formula(f, 0, &mut out);
    out
}

// levels: 0 implication and quantifiers, 1 disjunction, 2 conjunction,
// 3 prefix operators and atoms
fn formula(f: &Formula, level: u8, out: &mut String) {
    match f {
        Formula::Letter(p) => out.push_str(p),
        Formula::Pred(p, args) => {
            out.push_str(p);
            out.push('(');
            out.push_str(&args.join(", "));
            out.push(')');
        }
        Formula::Bottom => out.push_str("false"),
        Formula::Implies(a, b) if **b == Formula::Bottom => {
            out.push('~');
            formula(a, 3, out);
        }
        Formula::Implies(a, b) => paren(level > 0, out, |o| {
            formula(a, 1, o);
            o.push_str(" -> ");
            formula(b, 0, o);
        }),
        Formula::Or(a, b) => paren(level > 1, out, |o| {
            formula(a, 1, o);
            o.push_str(" | ");
            formula(b, 2, o);
        }),
        Formula::And(a, b) => paren(level > 2, out, |o| {
            formula(a, 2, o);
            o.push_str(" & ");
            formula(b, 3, o);
        }),
        Formula::Circ(a) => {
            out.push_str("O ");
            formula(a, 3, out);
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => paren(level > 0, out, |o| {
            o.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            o.push_str(x);
            o.push_str(". ");
            formula(body, 0, o);
        }),
    }
}
