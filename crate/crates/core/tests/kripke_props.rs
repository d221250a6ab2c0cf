mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::arb_formula;
use iel_core::formula::reflection;
use iel_core::kripke::{
    countermodel, enumerate_frames, forces, truth_set, Frame, Logic, Model, Search, DEFAULT_GUARD,
};
use iel_core::par::Strategy;
use iel_core::parser::parse_formula;
use iel_core::Formula;
use proptest::prelude::*;
use proptest::sample::Index;

/// A frame of `logic` on 1 to 4 worlds with an up-set for each of `p`,
/// `q`, `r`.
fn model(logic: Logic, n: usize, frame: Index, vals: [Index; 3]) -> Model {
    let frames = enumerate_frames(n, logic);
    let f = frames[frame.index(frames.len())].clone();
    let ups = f.up_sets();
    let valuation: BTreeMap<String, u32> = ["p", "q", "r"]
        .iter()
        .zip(vals)
        .map(|(p, i)| (p.to_string(), ups[i.index(ups.len())]))
        .collect();
    Model::new(f, valuation).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn forcing_and_truth_sets_agree(
        n in 1usize..=4,
        frame in any::<Index>(),
        vals in any::<[Index; 3]>(),
        phi in arb_formula(),
    ) {
        let m = model(Logic::IelMinus, n, frame, vals);
        let set = truth_set(&m, &phi).unwrap();
        for w in 0..n {
            prop_assert_eq!(forces(&m, w, &phi).unwrap(), set & (1 << w) != 0, "world {}", w);
        }
    }

    #[test]
    fn forcing_is_monotone(
        n in 1usize..=4,
        frame in any::<Index>(),
        vals in any::<[Index; 3]>(),
        phi in arb_formula(),
    ) {
        let m = model(Logic::IelMinus, n, frame, vals);
        for sub in phi.subformulas() {
            for w in 0..n {
                if !forces(&m, w, &sub).unwrap() {
                    continue;
                }
                for u in 0..n {
                    if m.frame.leq(w, u) {
                        prop_assert!(forces(&m, u, &sub).unwrap(), "{} at {} but not {}", sub, w, u);
                    }
                }
            }
        }
    }

    #[test]
    fn countermodels_are_deterministic(phi in arb_formula(), serial in any::<bool>()) {
        let logic = if serial { Logic::Iel } else { Logic::IelMinus };
        let a = countermodel(&phi, logic, 3, DEFAULT_GUARD, Strategy::Sequential).unwrap();
        let b = countermodel(&phi, logic, 3, DEFAULT_GUARD, Strategy::Parallel).unwrap();
        let c = countermodel(&phi, logic, 3, DEFAULT_GUARD, Strategy::Parallel).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&b, &c);
        if let Search::Found(cm) = a {
            prop_assert_eq!(forces(&cm.model, cm.world, &phi), Ok(false));
            prop_assert!(cm.model.frame.validate(logic).is_ok());
        }
    }
}

/// All frames on `n` worlds, counted straight from the frame conditions
/// over every pair of relations.
fn brute_force_frames(n: usize, serial: bool) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    let cells = n * n;
    let row = |code: u32, i: usize| (code >> (i * n)) & ((1 << n) - 1);
    let rel = |code: u32, i: usize, j: usize| code & (1 << (i * n + j)) != 0;
    let mut out = BTreeSet::new();
    for le in 0u32..(1 << cells) {
        let w = 0..n;
        let reflexive = w.clone().all(|i| rel(le, i, i));
        let antisymmetric = w
            .clone()
            .all(|i| (0..n).all(|j| i == j || !(rel(le, i, j) && rel(le, j, i))));
        let transitive = w.clone().all(|i| {
            (0..n).all(|j| (0..n).all(|k| !(rel(le, i, j) && rel(le, j, k)) || rel(le, i, k)))
        });
        if !(reflexive && antisymmetric && transitive) {
            continue;
        }
        for e in 0u32..(1 << cells) {
            let inside = (0..n).all(|i| (0..n).all(|j| !rel(e, i, j) || rel(le, i, j)));
            let antitone = (0..n).all(|i| {
                (0..n).all(|j| !rel(le, i, j) || (0..n).all(|k| !rel(e, j, k) || rel(e, i, k)))
            });
            let has_succ = (0..n).all(|i| row(e, i) != 0);
            if inside && antitone && (!serial || has_succ) {
                let up = (0..n).map(|i| row(le, i)).collect();
                let ev = (0..n).map(|i| row(e, i)).collect();
                out.insert((up, ev));
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_the_definitions() {
    for n in 1..=3 {
        for (logic, serial) in [(Logic::IelMinus, false), (Logic::Iel, true)] {
            let got: BTreeSet<(Vec<u32>, Vec<u32>)> = enumerate_frames(n, logic)
                .iter()
                .map(|f| {
                    let up = (0..n).map(|w| f.up(w)).collect();
                    let e = (0..n).map(|w| f.e(w)).collect();
                    (up, e)
                })
                .collect();
            let want = brute_force_frames(n, serial);
            assert_eq!(got, want, "{n} worlds, {logic}");
            assert_eq!(
                enumerate_frames(n, logic).len(),
                want.len(),
                "duplicates at {n}"
            );
        }
    }
}

#[test]
fn two_chain_with_knowledge_at_the_top() {
    let f = Frame::from_edges(2, &[(0, 1)], &[(0, 1), (1, 1)]);
    assert_eq!(f.validate(Logic::IelMinus), Ok(()));
    assert_eq!(f.validate(Logic::Iel), Ok(()));
}

#[test]
fn smallest_refutation_of_knowing_falsum() {
    let phi = parse_formula("O false -> false").unwrap();
    // oracle: the one-world frame without knowledge successor, by forcing
    let f = Frame::from_edges(1, &[], &[]);
    let m = Model::new(f.clone(), BTreeMap::new()).unwrap();
    assert_eq!(forces(&m, 0, &phi), Ok(false));
    let Search::Found(c) =
        countermodel(&phi, Logic::IelMinus, 2, DEFAULT_GUARD, Strategy::default()).unwrap()
    else {
        panic!("no countermodel")
    };
    assert_eq!(c.model.frame, f);
    assert_eq!(c.world, 0);
}

#[test]
fn reflection_separates_the_logics() {
    let refl = reflection();
    assert!(matches!(
        countermodel(
            &refl,
            Logic::IelMinus,
            4,
            DEFAULT_GUARD,
            Strategy::default()
        ),
        Ok(Search::Found(_))
    ));
    assert_eq!(
        countermodel(&refl, Logic::Iel, 4, DEFAULT_GUARD, Strategy::default()),
        Ok(Search::ValidUpTo(4))
    );
    let p_to_op: Formula = parse_formula("p -> O p").unwrap();
    assert_eq!(
        countermodel(
            &p_to_op,
            Logic::IelMinus,
            4,
            DEFAULT_GUARD,
            Strategy::default()
        ),
        Ok(Search::ValidUpTo(4))
    );
}
