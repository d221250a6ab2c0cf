//! Translation of the modal calculus into the metalanguage.
//!
//! Types map homomorphically with `O A` becoming `V A`. Terms map
//! homomorphically with `pure M` becoming `val M`, and the n-ary modal let
//! becomes a chain of single binds ending in `val`:
//!
//! ```text
//! let o x1,..,xn = M1,..,Mn in N  ~>  let val x1 = M1 in .. let val xn = Mn in val N
//! let o _ = _ in N                ~>  val N
//! ```
//!
//! The chain puts `x1` in scope of `M2`, which the modal let does not. A
//! binder that occurs free in a later argument is therefore renamed first.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{ml_reachable, MLContext, MLTerm, MLType};
use crate::reduce::{step, RedexSite};
use crate::syntax::{fresh_name, Context, Term, Type};

pub fn translate_type(t: &Type) -> MLType {
    match t {
        Type::Atom(a) => MLType::Atom(a.clone()),
        Type::Arrow(a, b) => MLType::arrow(translate_type(a), translate_type(b)),
        Type::Product(a, b) => MLType::product(translate_type(a), translate_type(b)),
        Type::Circle(a) => MLType::nabla(translate_type(a)),
    }
}

pub fn translate_context(ctx: &Context) -> MLContext {
    MLContext::new(
        ctx.entries()
            .iter()
            .map(|(x, t)| (x.clone(), translate_type(t)))
            .collect(),
    )
}

pub fn translate_term(t: &Term) -> MLTerm {
    match t {
        Term::Var(x) => MLTerm::Var(x.clone()),
        Term::Lam { binder, ann, body } => MLTerm::lam(
            binder.clone(),
            ann.as_ref().map(translate_type),
            translate_term(body),
        ),
        Term::App(f, a) => MLTerm::app(translate_term(f), translate_term(a)),
        Term::Pair(l, r) => MLTerm::pair(translate_term(l), translate_term(r)),
        Term::Proj(i, m) => MLTerm::proj(*i, translate_term(m)),
        Term::Pure(m) => MLTerm::val(translate_term(m)),
        Term::Let {
            binders,
            args,
            body,
        } => {
            let binders = chain_binders(binders, args, body);
            let renaming: Vec<(String, Term)> = binders
                .iter()
                .filter(|(old, new)| old != new)
                .map(|(old, new)| (old.clone(), Term::Var(new.clone())))
                .collect();
            let body = body
                .substitute_sim(&renaming)
                .expect("binders of a well-formed let are distinct");
            let mut out = MLTerm::val(translate_term(&body));
            for ((_, x), m) in binders.iter().zip(args).rev() {
                out = MLTerm::let_val(x.clone(), translate_term(m), out);
            }
            out
        }
    }
}

/// Pairs each let binder with the name it gets in the bind chain.
fn chain_binders(binders: &[String], args: &[Term], body: &Term) -> Vec<(String, String)> {
    let arg_fv: Vec<BTreeSet<String>> = args.iter().map(Term::free_vars).collect();
    let mut avoid: BTreeSet<String> = binders.iter().cloned().collect();
    for fv in &arg_fv {
        avoid.extend(fv.iter().cloned());
    }
    avoid.extend(body.free_vars());
    binders
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let clashes = arg_fv[i + 1..].iter().any(|fv| fv.contains(x));
            if clashes {
                let fresh = fresh_name(x, &avoid);
                avoid.insert(fresh.clone());
                (x.clone(), fresh)
            } else {
                (x.clone(), x.clone())
            }
        })
        .collect()
}

/// Position in the translation of the subterm at `path` of `t`.
pub fn translate_path(t: &Term, path: &[usize]) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = t;
    for &i in path {
        match cur {
            Term::Let { args, .. } => {
                let n = args.len();
                if i > n {
                    return None;
                }
                // argument i sits in the bound position of the i-th bind;
                // the body sits under the final `val`
                out.extend(std::iter::repeat_n(1, i));
                out.push(0);
            }
            _ => out.push(i),
        }
        cur = *cur.children().get(i)?;
    }
    Some(out)
}

/// How a source step was matched in the metalanguage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    /// Number of metalanguage steps.
    pub steps: usize,
    /// Whether the search had to leave the subterm under the redex.
    pub global: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationFailure {
    #[error("source step does not apply")]
    BadSite,
    #[error(
        "translation of `{to}` not reached from translation of `{from}` within {fuel} expansions"
    )]
    NotReached { from: Term, to: Term, fuel: usize },
}

/// Checks that the translation of `t` reduces, in zero or more
/// metalanguage steps, to the translation of the reduct of `t` at `site`.
///
/// The search first runs on the subterm under the image of the redex and
/// falls back to the whole term.
pub fn simulate_step(
    t: &Term,
    site: &RedexSite,
    fuel: usize,
) -> Result<Simulation, SimulationFailure> {
    let next = step(t, site).map_err(|_| SimulationFailure::BadSite)?;
    let src = translate_term(t);
    let tgt = translate_term(&next);
    if let Some(p) = translate_path(t, &site.path) {
        if let (Some(s), Some(g)) = (src.subterm(&p), tgt.subterm(&p)) {
            if let Some(steps) = ml_reachable(s, g, fuel) {
                let lifted = src.replace_at(&p, g.clone());
                if lifted.is_some_and(|l| l.alpha_eq(&tgt)) {
                    return Ok(Simulation {
                        steps,
                        global: false,
                    });
                }
            }
        }
    }
    ml_reachable(&src, &tgt, fuel)
        .map(|steps| Simulation {
            steps,
            global: true,
        })
        .ok_or(SimulationFailure::NotReached {
            from: t.clone(),
            to: next,
            fuel,
        })
}
