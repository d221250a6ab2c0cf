//! Strategies shared by the property tests.
#![allow(dead_code)]

use iel_core::{Component, Formula, Term, Type};
use proptest::prelude::*;

/// Small name pool so that capture and shadowing happen often.
pub const NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub fn arb_name() -> impl Strategy<Value = String> {
    proptest::sample::select(&NAMES[..]).prop_map(String::from)
}

pub fn arb_type() -> impl Strategy<Value = Type> {
    let leaf = proptest::sample::select(&["a", "b", "c"][..]).prop_map(Type::atom);
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::product(a, b)),
            inner.prop_map(Type::circle),
        ]
    })
}

/// Well-formed, not necessarily typable terms.
pub fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = arb_name().prop_map(Term::var);
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            (arb_name(), proptest::option::of(arb_type()), inner.clone())
                .prop_map(|(x, a, b)| Term::lam(x, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::pair(l, r)),
            (any::<bool>(), inner.clone()).prop_map(|(first, m)| {
                let c = if first {
                    Component::First
                } else {
                    Component::Second
                };
                Term::proj(c, m)
            }),
            inner.clone().prop_map(Term::pure),
            (
                proptest::sample::subsequence(&NAMES[..], 0..=2),
                proptest::collection::vec(inner.clone(), 2),
                inner,
            )
                .prop_map(|(xs, mut args, body)| {
                    args.truncate(xs.len());
                    Term::let_circ(xs.to_vec(), args, body)
                }),
        ]
    })
}

/// Propositional formulas over `p`, `q`, `r`.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(&["p", "q", "r"][..]).prop_map(Formula::letter),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.prop_map(Formula::circ),
        ]
    })
}

/// First-order formulas over unary `P`, binary `Q` and the letter `p`,
/// closed by universal quantifiers over the individual variables `u` and
/// `v`.
pub fn arb_fo_formula() -> impl Strategy<Value = Formula> {
    let var = || proptest::sample::select(&["u", "v"][..]).prop_map(String::from);
    let leaf = prop_oneof![
        2 => var().prop_map(|x| Formula::Pred("P".into(), vec![x])),
        2 => (var(), var()).prop_map(|(x, y)| Formula::Pred("Q".into(), vec![x, y])),
        1 => Just(Formula::letter("p")),
        1 => Just(Formula::Bottom),
    ];
    let body = leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::circ),
            (var(), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            (var(), inner).prop_map(|(x, a)| Formula::exists(x, a)),
        ]
    });
    body.prop_map(|f| Formula::forall("u", Formula::forall("v", f)))
}

/// An α-variant of `t` with every binder renamed to `b0`, `b1`, ..., names
/// the strategies never produce.
pub fn rename_binders(t: &Term, next: &mut usize) -> Term {
    let mut fresh = || {
        *next += 1;
        format!("b{}", *next - 1)
    };
    match t {
        Term::Var(_) => t.clone(),
        Term::Lam { binder, ann, body } => {
            let b = fresh();
            let body = rename_binders(body, next).substitute(binder, &Term::var(b.as_str()));
            Term::lam(b, ann.clone(), body)
        }
        Term::App(f, a) => Term::app(rename_binders(f, next), rename_binders(a, next)),
        Term::Pair(l, r) => Term::pair(rename_binders(l, next), rename_binders(r, next)),
        Term::Proj(c, m) => Term::proj(*c, rename_binders(m, next)),
        Term::Pure(m) => Term::pure(rename_binders(m, next)),
        Term::Let {
            binders,
            args,
            body,
        } => {
            let fresh_names: Vec<String> = binders.iter().map(|_| fresh()).collect();
            let pairs: Vec<(String, Term)> = binders
                .iter()
                .zip(&fresh_names)
                .map(|(x, b)| (x.clone(), Term::var(b.as_str())))
                .collect();
            let args = args.iter().map(|a| rename_binders(a, next)).collect();
            let body = rename_binders(body, next)
                .substitute_sim(&pairs)
                .expect("distinct binders");
            Term::let_circ(fresh_names, args, body)
        }
    }
}
