mod common;

use common::{arb_name, arb_term, arb_type};
use iel_core::corpus::corpus;
use iel_core::metalang::{
    ml_infer, ml_normalize, ml_redexes, simulate_step, translate_context, translate_term,
    translate_type, MLType,
};
use iel_core::reduce::redexes;
use iel_core::{Term, Type};
use proptest::prelude::*;

const PER_SEED: usize = 25;

/// The type translation, restated clause by clause.
fn oracle_type(t: &Type) -> MLType {
    match t {
        Type::Atom(a) => MLType::Atom(a.clone()),
        Type::Arrow(a, b) => MLType::arrow(oracle_type(a), oracle_type(b)),
        Type::Product(a, b) => MLType::product(oracle_type(a), oracle_type(b)),
        Type::Circle(a) => MLType::nabla(oracle_type(a)),
    }
}

/// Abstracts every variable a let body uses besides its binders, so the
/// term has the scoping that typing imposes on let bodies.
fn scope_lets(t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::Lam { binder, ann, body } => Term::lam(binder.clone(), ann.clone(), scope_lets(body)),
        Term::App(a, b) => Term::app(scope_lets(a), scope_lets(b)),
        Term::Pair(a, b) => Term::pair(scope_lets(a), scope_lets(b)),
        Term::Proj(c, m) => Term::proj(*c, scope_lets(m)),
        Term::Pure(m) => Term::pure(scope_lets(m)),
        Term::Let {
            binders,
            args,
            body,
        } => {
            let mut body = scope_lets(body);
            let stray: Vec<String> = all_free(&body)
                .into_iter()
                .filter(|y| !binders.contains(y))
                .collect();
            for y in stray {
                body = Term::lam(y, None, body);
            }
            Term::let_circ(binders.clone(), args.iter().map(scope_lets).collect(), body)
        }
    }
}

/// Free variables including those of let bodies.
fn all_free(t: &Term) -> Vec<String> {
    let mut out = match t {
        Term::Var(x) => vec![x.clone()],
        Term::Lam { binder, body, .. } => {
            all_free(body).into_iter().filter(|y| y != binder).collect()
        }
        Term::App(a, b) | Term::Pair(a, b) => [all_free(a), all_free(b)].concat(),
        Term::Proj(_, m) | Term::Pure(m) => all_free(m),
        Term::Let {
            binders,
            args,
            body,
        } => {
            let mut v: Vec<String> = args.iter().flat_map(all_free).collect();
            v.extend(all_free(body).into_iter().filter(|y| !binders.contains(y)));
            v
        }
    };
    out.sort();
    out.dedup();
    out
}

#[test]
fn open_let_bodies_do_not_commute() {
    // source substitution stops at a let body, the bind chain does not
    let m = Term::pair(
        Term::var("x"),
        Term::let_circ(Vec::<String>::new(), vec![], Term::var("y")),
    );
    let n = Term::var("z");
    let left = translate_term(&m.substitute("y", &n));
    let right = translate_term(&m).substitute("y", &translate_term(&n));
    assert!(!left.alpha_eq(&right));
    let scoped = scope_lets(&m);
    let left = translate_term(&scoped.substitute("y", &n));
    let right = translate_term(&scoped).substitute("y", &translate_term(&n));
    assert!(left.alpha_eq(&right));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn type_translation(a in arb_type()) {
        prop_assert_eq!(translate_type(&a), oracle_type(&a));
    }

    #[test]
    fn typing_is_preserved(seed in any::<u64>()) {
        for item in corpus(seed, PER_SEED) {
            let got = ml_infer(&translate_context(&item.ctx), &translate_term(&item.term));
            prop_assert_eq!(got, Ok(translate_type(&item.ty)), "{}", item.term);
        }
    }

    #[test]
    fn every_step_is_simulated(seed in any::<u64>()) {
        for item in corpus(seed, PER_SEED) {
            for site in redexes(&item.term) {
                let sim = simulate_step(&item.term, &site, 1_000);
                prop_assert!(sim.is_ok(), "{} at {}: {:?}", item.term, site, sim);
            }
        }
    }

    #[test]
    fn translations_normalize(seed in any::<u64>()) {
        for item in corpus(seed, PER_SEED) {
            let (nf, _) = ml_normalize(&translate_term(&item.term), 100_000).unwrap();
            prop_assert!(ml_redexes(&nf).is_empty());
        }
    }

    #[test]
    fn translation_commutes_with_substitution(m in arb_term(), x in arb_name(), n in arb_term()) {
        let (m, n) = (scope_lets(&m), scope_lets(&n));
        let left = translate_term(&m.substitute(&x, &n));
        let right = translate_term(&m).substitute(&x, &translate_term(&n));
        prop_assert!(left.alpha_eq(&right), "{} vs {}", left, right);
    }
}
