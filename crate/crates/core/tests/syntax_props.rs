mod common;

use common::{arb_formula, arb_name, arb_term, arb_type, rename_binders};
use iel_core::parser::{
    parse_formula, parse_term, parse_type, print_formula, print_term, print_type,
};
use iel_core::Term;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn substitution_removes_the_variable(t in arb_term(), x in arb_name(), s in arb_term()) {
        if !s.free_vars().contains(&x) {
            prop_assert!(!t.substitute(&x, &s).free_vars().contains(&x));
        }
    }

    #[test]
    fn substituting_a_variable_for_itself(t in arb_term(), x in arb_name()) {
        prop_assert!(t.substitute(&x, &Term::var(x.as_str())).alpha_eq(&t));
    }

    #[test]
    fn free_variables_of_a_substitution(t in arb_term(), x in arb_name(), s in arb_term()) {
        let got = t.substitute(&x, &s).free_vars();
        let mut bound = t.free_vars();
        bound.remove(&x);
        if t.occurs_free(&x) {
            bound.extend(s.free_vars());
            prop_assert_eq!(got, bound);
        } else {
            prop_assert!(got.is_subset(&bound));
        }
    }

    #[test]
    fn single_simultaneous_substitution(t in arb_term(), x in arb_name(), s in arb_term()) {
        let sim = t.substitute_sim(&[(x.clone(), s.clone())]).unwrap();
        prop_assert!(sim.alpha_eq(&t.substitute(&x, &s)));
    }

    #[test]
    fn alpha_equivalence_is_an_equivalence(t in arb_term(), s in arb_term()) {
        let r1 = rename_binders(&t, &mut 0);
        let r2 = rename_binders(&r1, &mut 100);
        prop_assert!(t.alpha_eq(&t));
        prop_assert!(t.alpha_eq(&r1) && r1.alpha_eq(&t));
        prop_assert!(r1.alpha_eq(&r2) && t.alpha_eq(&r2));
        prop_assert_eq!(t.alpha_eq(&s), s.alpha_eq(&t));
        prop_assert_eq!(t.alpha_key(), r2.alpha_key());
    }

    #[test]
    fn substitution_respects_alpha(t in arb_term(), x in arb_name(), s in arb_term()) {
        let r = rename_binders(&t, &mut 0);
        let rs = rename_binders(&s, &mut 50);
        prop_assert!(r.substitute(&x, &rs).alpha_eq(&t.substitute(&x, &s)));
    }

    #[test]
    fn terms_round_trip(t in arb_term()) {
        let src = print_term(&t);
        let back = parse_term(&src).map_err(|e| TestCaseError::fail(format!("{src}: {e}")))?;
        prop_assert!(back.alpha_eq(&t), "{} reparsed as {}", src, print_term(&back));
    }

    #[test]
    fn types_round_trip(a in arb_type()) {
        prop_assert_eq!(parse_type(&print_type(&a)).unwrap(), a);
    }

    #[test]
    fn formulas_round_trip(f in arb_formula()) {
        prop_assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
    }

    #[test]
    fn parsing_is_total(src in "[a-z\\\\:.()<>,_= O*-]{0,30}") {
        for e in [parse_term(&src).err(), parse_type(&src).err(), parse_formula(&src).err()].into_iter().flatten() {
            prop_assert!(e.span.start <= e.span.end && e.span.end <= src.len(), "{:?} in {:?}", e.span, src);
        }
    }
}
