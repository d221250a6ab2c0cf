//! Type synthesis for the modal calculus.
//!
//! λ-binders carry Church-style annotations, so every well-typed term has
//! exactly one type in a given context. The modal let is the one rule that
//! changes the context wholesale: its body is checked against the binders
//! alone, with the ambient context discarded. A λ-binder may reuse a name
//! that is already in scope, in which case it shadows the outer
//! declaration.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Context, Term, Type};

/// What went wrong, independent of where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind<Y> {
    UnboundVariable(String),
    Mismatch { expected: Y, found: Y },
    NotAFunction(Y),
    NotAProduct(Y),
    NotModal(Y),
    ArityMismatch { expected: usize, found: usize },
    DuplicateBinder(String),
    MissingAnnotation(String),
    Precondition(String),
}

impl<Y: fmt::Display> fmt::Display for ErrorKind<Y> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            ErrorKind::Mismatch { expected, found } => {
                write!(f, "type mismatch: expected `{expected}`, found `{found}`")
            }
            ErrorKind::NotAFunction(t) => {
                write!(f, "applied term has type `{t}`, not a function type")
            }
            ErrorKind::NotAProduct(t) => {
                write!(f, "projected term has type `{t}`, not a product type")
            }
            ErrorKind::NotModal(t) => write!(f, "let argument has type `{t}`, not a modal type"),
            ErrorKind::ArityMismatch { expected, found } => {
                write!(
                    f,
                    "let binds {expected} variables but has {found} arguments"
                )
            }
            ErrorKind::DuplicateBinder(x) => write!(f, "`{x}` is bound twice in one let"),
            ErrorKind::MissingAnnotation(x) => {
                write!(f, "binder `{x}` needs a type annotation (`\\{x}:T. ...`)")
            }
            ErrorKind::Precondition(msg) => f.write_str(msg),
        }
    }
}

/// A typing failure together with the offending subterm and its path from
/// the root (child indices as in [`Term::children`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} in `{at}`")]
pub struct Error<T: fmt::Display + fmt::Debug, Y: fmt::Display + fmt::Debug> {
    pub kind: ErrorKind<Y>,
    pub at: T,
    pub path: Vec<usize>,
}

pub type TypingError = Error<Term, Type>;

fn err(kind: ErrorKind<Type>, at: &Term, path: &[usize]) -> TypingError {
    Error {
        kind,
        at: at.clone(),
        path: path.to_vec(),
    }
}

/// The unique type of `t` in `ctx`.
pub fn infer(ctx: &Context, t: &Term) -> Result<Type, TypingError> {
    infer_at(ctx, t, &mut Vec::new())
}

fn infer_at(ctx: &Context, t: &Term, path: &mut Vec<usize>) -> Result<Type, TypingError> {
    match t {
        Term::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| err(ErrorKind::UnboundVariable(x.clone()), t, path)),
        Term::Lam { binder, ann, body } => {
            let dom = ann
                .clone()
                .ok_or_else(|| err(ErrorKind::MissingAnnotation(binder.clone()), t, path))?;
            let inner = ctx.extend(binder, dom.clone());
            let cod = child(&inner, body, 0, path)?;
            Ok(Type::arrow(dom, cod))
        }
        Term::App(f, a) => {
            let fty = child(ctx, f, 0, path)?;
            let Type::Arrow(dom, cod) = fty else {
                path.push(0);
                let e = err(ErrorKind::NotAFunction(fty), f, path);
                path.pop();
                return Err(e);
            };
            let aty = child(ctx, a, 1, path)?;
            if aty != *dom {
                path.push(1);
                let e = err(
                    ErrorKind::Mismatch {
                        expected: *dom,
                        found: aty,
                    },
                    a,
                    path,
                );
                path.pop();
                return Err(e);
            }
            Ok(*cod)
        }
        Term::Pair(l, r) => {
            let lt = child(ctx, l, 0, path)?;
            let rt = child(ctx, r, 1, path)?;
            Ok(Type::product(lt, rt))
        }
        Term::Proj(which, m) => match child(ctx, m, 0, path)? {
            Type::Product(a, b) => Ok(match which {
                crate::syntax::Component::First => *a,
                crate::syntax::Component::Second => *b,
            }),
            other => {
                path.push(0);
                let e = err(ErrorKind::NotAProduct(other), m, path);
                path.pop();
                Err(e)
            }
        },
        Term::Pure(m) => Ok(Type::circle(child(ctx, m, 0, path)?)),
        Term::Let {
            binders,
            args,
            body,
        } => {
            if binders.len() != args.len() {
                return Err(err(
                    ErrorKind::ArityMismatch {
                        expected: binders.len(),
                        found: args.len(),
                    },
                    t,
                    path,
                ));
            }
            let mut inner = Vec::with_capacity(binders.len());
            for (i, (x, m)) in binders.iter().zip(args).enumerate() {
                if inner.iter().any(|(y, _): &(String, Type)| y == x) {
                    return Err(err(ErrorKind::DuplicateBinder(x.clone()), t, path));
                }
                match child(ctx, m, i, path)? {
                    Type::Circle(phi) => inner.push((x.clone(), *phi)),
                    other => {
                        path.push(i);
                        let e = err(ErrorKind::NotModal(other), m, path);
                        path.pop();
                        return Err(e);
                    }
                }
            }
            let inner = Context::new(inner).expect("binders checked distinct");
            let psi = child(&inner, body, binders.len(), path)?;
            Ok(Type::circle(psi))
        }
    }
}

fn child(
    ctx: &Context,
    t: &Term,
    index: usize,
    path: &mut Vec<usize>,
) -> Result<Type, TypingError> {
    path.push(index);
    let r = infer_at(ctx, t, path);
    path.pop();
    r
}

/// Succeeds iff `t` has type `ty` in `ctx`.
pub fn check(ctx: &Context, t: &Term, ty: &Type) -> Result<(), TypingError> {
    let found = infer(ctx, t)?;
    if found == *ty {
        Ok(())
    } else {
        Err(err(
            ErrorKind::Mismatch {
                expected: ty.clone(),
                found,
            },
            t,
            &[],
        ))
    }
}

/// Generation for `pure`: if `pure M : O φ` then `M : φ`. Returns whether
/// the inner type is the expected one; errors when `t` is not a typable
/// `pure` term.
pub fn generation_pure(ctx: &Context, t: &Term) -> Result<bool, TypingError> {
    let Term::Pure(m) = t else {
        return Err(err(
            ErrorKind::Precondition("generation for pure needs a `pure M` term".into()),
            t,
            &[],
        ));
    };
    let Type::Circle(phi) = infer(ctx, t)? else {
        return Ok(false);
    };
    Ok(infer(ctx, m)? == *phi)
}
