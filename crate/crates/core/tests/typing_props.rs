use iel_core::corpus::corpus;
use iel_core::parser::parse_term;
use iel_core::typecheck::{generation_pure, infer};
use iel_core::{Context, Term, Type};
use proptest::prelude::*;

const PER_SEED: usize = 25;

/// A context name not declared in `ctx`, picked from a pool that overlaps
/// the corpus binder names.
fn unused(ctx: &Context, pool: &[&str]) -> Option<String> {
    pool.iter()
        .find(|x| ctx.lookup(x).is_none())
        .map(|x| x.to_string())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weakening(seed in any::<u64>(), extra in 0usize..3) {
        for item in corpus(seed, PER_SEED) {
            let mut ctx = item.ctx.clone();
            for _ in 0..extra {
                if let Some(x) = unused(&ctx, &["h", "u", "v", "k"]) {
                    ctx = ctx.extend(&x, Type::circle(Type::atom("a")));
                }
            }
            prop_assert!(item.ctx.is_subset_of(&ctx));
            prop_assert_eq!(infer(&ctx, &item.term), Ok(item.ty.clone()));
        }
    }

    #[test]
    fn strengthening_to_free_variables(seed in any::<u64>()) {
        for item in corpus(seed, PER_SEED) {
            let small = item.ctx.restrict(&item.term.free_vars());
            prop_assert_eq!(infer(&small, &item.term), Ok(item.ty.clone()));
        }
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>()) {
        for item in corpus(seed, PER_SEED) {
            for (x, phi) in item.ctx.entries() {
                let rest: Vec<(String, Type)> =
                    item.ctx.entries().iter().filter(|(y, _)| y != x).cloned().collect();
                let rest = Context::new(rest).unwrap();
                // a compound argument whose free variable is a binder name
                // in many corpus terms, so substitution has to rename
                let Some(y) = unused(&rest, &["y", "z", "x", "g"]) else { continue };
                let delta = rest.extend(&y, phi.clone());
                let n = Term::proj(
                    iel_core::Component::First,
                    Term::pair(
                        Term::app(Term::lam("w", Some(phi.clone()), Term::var("w")), Term::var(y.as_str())),
                        Term::var(y.as_str()),
                    ),
                );
                prop_assert_eq!(infer(&delta, &n), Ok(phi.clone()));
                let out = item.term.substitute(x, &n);
                prop_assert_eq!(infer(&delta, &out), Ok(item.ty.clone()), "{}", out);
            }
        }
    }

    #[test]
    fn inference_is_deterministic(seed in any::<u64>()) {
        for item in corpus(seed, PER_SEED) {
            let a = infer(&item.ctx, &item.term);
            prop_assert_eq!(a.clone(), infer(&item.ctx, &item.term.clone()));
            prop_assert_eq!(a, Ok(item.ty.clone()));
        }
    }
}

#[test]
fn generation_of_pure_recomputes_the_body() {
    let ctx = Context::from_pairs(vec![
        ("f", Type::arrow(Type::atom("a"), Type::atom("b"))),
        ("x", Type::atom("a")),
    ])
    .unwrap();
    let t = parse_term("pure (f x)").unwrap();
    assert_eq!(generation_pure(&ctx, &t), Ok(true));
    let Term::Pure(body) = &t else { unreachable!() };
    assert_eq!(
        infer(&ctx, &t).unwrap(),
        Type::circle(infer(&ctx, body).unwrap())
    );
}
