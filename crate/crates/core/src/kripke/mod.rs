//! Finite Kripke semantics for the propositional modal logics.
//!
//! A frame is a finite poset of worlds with a knowledge relation `E`
//! contained in the order and antitone along it. `O A` is forced at `w`
//! when `A` is forced at every `E`-successor of `w`; the other connectives
//! are intuitionistic.
//!
//! Two evaluators are provided: [`forces`] follows the forcing clauses
//! world by world, and [`truth_set`] computes the set of worlds forcing a
//! formula with bitmask operations. The validity and countermodel searches
//! use the second; tests compare the two.

mod frame;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use frame::{
    parse_frame_file, render_frame, Frame, FrameFile, FrameFileError, FrameViolation, Logic, Model,
    MAX_WORLDS,
};

use crate::formula::Formula;
use crate::par::{self, Strategy};

/// Default bound on (valuation, world) evaluations per validity query.
pub const DEFAULT_GUARD: u64 = 10_000_000;

/// Largest world count accepted by the frame enumerator.
pub const MAX_ENUMERATED_WORLDS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("world {world} is not in a frame of {worlds} worlds")]
    UnknownWorld { world: usize, worlds: usize },
    #[error("letter `{0}` has no valuation")]
    UnknownLetter(String),
    #[error("formula is not propositional")]
    NotPropositional,
    #[error("frame is invalid: {0}")]
    InvalidFrame(FrameViolation),
    #[error("{needed} evaluations needed, guard is {limit}")]
    ResourceExceeded { needed: u64, limit: u64 },
    #[error("world bound must be between 1 and {MAX_ENUMERATED_WORLDS}, got {0}")]
    WorldBound(usize),
}

/// `forces(m, w, phi)`: whether `w` forces `phi` in `m`, by the clauses.
pub fn forces(m: &Model, w: usize, phi: &Formula) -> Result<bool, KripkeError> {
    let n = m.frame.worlds();
    if w >= n {
        return Err(KripkeError::UnknownWorld {
            world: w,
            worlds: n,
        });
    }
    Ok(match phi {
        Formula::Letter(p) => {
            let set = m
                .valuation
                .get(p)
                .ok_or_else(|| KripkeError::UnknownLetter(p.clone()))?;
            set & (1 << w) != 0
        }
        Formula::Bottom => false,
        Formula::And(a, b) => forces(m, w, a)? && forces(m, w, b)?,
        Formula::Or(a, b) => forces(m, w, a)? || forces(m, w, b)?,
        Formula::Implies(a, b) => {
            for u in 0..n {
                if m.frame.leq(w, u) && forces(m, u, a)? && !forces(m, u, b)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Circ(a) => {
            for u in 0..n {
                if m.frame.knows(w, u) && !forces(m, u, a)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Pred(..) | Formula::Forall(..) | Formula::Exists(..) => {
            return Err(KripkeError::NotPropositional)
        }
    })
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Letter(usize),
    Bottom,
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Circ(usize),
}

/// A propositional formula flattened to a post-order instruction list
/// over letter indices.
#[derive(Debug, Clone)]
pub struct Compiled {
    ops: Vec<Op>,
    letters: Vec<String>,
}

impl Compiled {
    pub fn new(phi: &Formula) -> Result<Compiled, KripkeError> {
        let letters = phi.letters();
        let mut ops = Vec::new();
        compile(phi, &letters, &mut ops)?;
        Ok(Compiled { ops, letters })
    }

    /// Letters in order of first occurrence; valuations are passed in this
    /// order.
    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// The set of worlds of `f` forcing the formula under `val`.
    pub fn eval(&self, f: &Frame, val: &[u32], scratch: &mut Vec<u32>) -> u32 {
        scratch.clear();
        let all = f.all();
        for op in &self.ops {
            let s = match *op {
                Op::Letter(i) => val[i],
                Op::Bottom => 0,
                Op::And(a, b) => scratch[a] & scratch[b],
                Op::Or(a, b) => scratch[a] | scratch[b],
                Op::Implies(a, b) => {
                    let bad = scratch[a] & !scratch[b];
                    (0..f.worlds())
                        .filter(|&w| f.up(w) & bad == 0)
                        .fold(0, |m, w| m | (1 << w))
                }
                Op::Circ(a) => {
                    let inner = scratch[a];
                    (0..f.worlds())
                        .filter(|&w| f.e(w) & !inner == 0)
                        .fold(0, |m, w| m | (1 << w))
                }
            };
            scratch.push(s & all);
        }
        *scratch.last().expect("compiled formula is non-empty")
    }
}

fn compile(phi: &Formula, letters: &[String], ops: &mut Vec<Op>) -> Result<usize, KripkeError> {
    let op = match phi {
        Formula::Letter(p) => Op::Letter(
            letters
                .iter()
                .position(|l| l == p)
                .expect("letters() lists every letter"),
        ),
        Formula::Bottom => Op::Bottom,
        Formula::And(a, b) => Op::And(compile(a, letters, ops)?, compile(b, letters, ops)?),
        Formula::Or(a, b) => Op::Or(compile(a, letters, ops)?, compile(b, letters, ops)?),
        Formula::Implies(a, b) => Op::Implies(compile(a, letters, ops)?, compile(b, letters, ops)?),
        Formula::Circ(a) => Op::Circ(compile(a, letters, ops)?),
        Formula::Pred(..) | Formula::Forall(..) | Formula::Exists(..) => {
            return Err(KripkeError::NotPropositional)
        }
    };
    ops.push(op);
    Ok(ops.len() - 1)
}

/// The set of worlds of `m` forcing `phi`, as a bitmask.
pub fn truth_set(m: &Model, phi: &Formula) -> Result<u32, KripkeError> {
    let c = Compiled::new(phi)?;
    let val = c
        .letters()
        .iter()
        .map(|p| {
            m.valuation
                .get(p)
                .copied()
                .ok_or_else(|| KripkeError::UnknownLetter(p.clone()))
        })
        .collect::<Result<Vec<u32>, _>>()?;
    Ok(c.eval(&m.frame, &val, &mut Vec::new()))
}

/// A valuation and world at which a formula fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub valuation: BTreeMap<String, u32>,
    pub world: usize,
}

/// Number of (valuation, world) pairs [`valid_on_frame`] examines.
pub fn evaluation_count(f: &Frame, letters: usize) -> u64 {
    let ups = f.up_sets().len() as u64;
    (0..letters)
        .try_fold(f.worlds() as u64, |acc, _| acc.checked_mul(ups))
        .unwrap_or(u64::MAX)
}

/// Searches all up-set valuations of the letters of `phi` and all worlds
/// of `f` for a refutation. Valuations are enumerated lexicographically
/// (first letter slowest) with up-sets in increasing mask order; the first
/// failing valuation is returned with its least failing world.
pub fn valid_on_frame(
    f: &Frame,
    phi: &Formula,
    guard: u64,
) -> Result<Option<Refutation>, KripkeError> {
    let c = Compiled::new(phi)?;
    let needed = evaluation_count(f, c.letters().len());
    if needed > guard {
        return Err(KripkeError::ResourceExceeded {
            needed,
            limit: guard,
        });
    }
    Ok(refute_compiled(f, &c))
}

fn refute_compiled(f: &Frame, c: &Compiled) -> Option<Refutation> {
    let ups = f.up_sets();
    let k = c.letters().len();
    let mut idx = vec![0usize; k];
    let mut val = vec![0u32; k];
    let mut scratch = Vec::with_capacity(c.ops.len());
    loop {
        for (v, &i) in val.iter_mut().zip(&idx) {
            *v = ups[i];
        }
        let t = c.eval(f, &val, &mut scratch);
        if t != f.all() {
            let world = (!t).trailing_zeros() as usize;
            return Some(Refutation {
                valuation: c.letters().iter().cloned().zip(val).collect(),
                world,
            });
        }
        // odometer, last letter fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < ups.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All frames on `n` worlds satisfying the conditions of `logic`, ordered
/// by the order encoding and then the knowledge encoding.
///
/// The order is encoded by its off-diagonal pairs `(i, j)`, listed
/// lexicographically, as bits from least significant; `E` by the pairs
/// `(i, j)` at bit `i * n + j`. Labeled frames are listed, not isomorphism
/// classes.
pub fn enumerate_frames(n: usize, logic: Logic) -> Vec<Frame> {
    assert!((1..=MAX_ENUMERATED_WORLDS).contains(&n));
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for code in 0u32..(1 << pairs.len()) {
        let mut up: Vec<u32> = (0..n).map(|w| 1 << w).collect();
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if code & (1 << b) != 0 {
                up[i] |= 1 << j;
            }
        }
        if !is_partial_order(&up) {
            continue;
        }
        let mut rel: u64 = 0;
        for (i, &row) in up.iter().enumerate() {
            rel |= (row as u64) << (i * n);
        }
        // ascending submasks of the order relation
        let mut s: u64 = 0;
        loop {
            let e: Vec<u32> = (0..n)
                .map(|i| ((s >> (i * n)) & ((1 << n) - 1)) as u32)
                .collect();
            let f = Frame::from_masks(up.clone(), e);
            if f.validate(logic).is_ok() {
                out.push(f);
            }
            if s == rel {
                break;
            }
            s = ((s | !rel).wrapping_add(1)) & rel;
        }
    }
    out
}

fn is_partial_order(up: &[u32]) -> bool {
    (0..up.len()).all(|a| {
        (0..up.len())
            .filter(|&b| b != a && up[a] & (1 << b) != 0)
            .all(|b| up[b] & (1 << a) == 0 && up[b] & !up[a] == 0)
    })
}

/// A refuting model with its designated world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: Model,
    pub world: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search {
    Found(Countermodel),
    /// No refutation on any frame with at most this many worlds.
    ValidUpTo(usize),
}

/// The first refutation of `phi` over frames of `logic` with at most
/// `max_worlds` worlds: by world count, then frame order of
/// [`enumerate_frames`], then valuation order of [`valid_on_frame`]. The
/// guard bounds the evaluations spent on any one frame.
pub fn countermodel(
    phi: &Formula,
    logic: Logic,
    max_worlds: usize,
    guard: u64,
    strategy: Strategy,
) -> Result<Search, KripkeError> {
    if !(1..=MAX_ENUMERATED_WORLDS).contains(&max_worlds) {
        return Err(KripkeError::WorldBound(max_worlds));
    }
    let c = Compiled::new(phi)?;
    for n in 1..=max_worlds {
        let frames = enumerate_frames(n, logic);
        let outcome = par::find_map_first(strategy, &frames, |f| {
            let needed = evaluation_count(f, c.letters().len());
            if needed > guard {
                return Some(Err(KripkeError::ResourceExceeded {
                    needed,
                    limit: guard,
                }));
            }
            refute_compiled(f, &c).map(|r| Ok((f.clone(), r)))
        });
        match outcome {
            Some(Ok((frame, r))) => {
                let model = Model::new(frame, r.valuation).expect("valuations are up-sets");
                return Ok(Search::Found(Countermodel {
                    model,
                    world: r.world,
                }));
            }
            Some(Err(e)) => return Err(e),
            None => {}
        }
    }
    Ok(Search::ValidUpTo(max_worlds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn fm(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn model(f: Frame, val: &[(&str, u32)]) -> Model {
        Model::new(f, val.iter().map(|&(p, s)| (p.to_string(), s)).collect()).unwrap()
    }

    #[test]
    fn forcing_examples() {
        let empty = model(Frame::from_edges(1, &[], &[]), &[("p", 0)]);
        assert_eq!(forces(&empty, 0, &fm("O false")), Ok(true));
        assert_eq!(forces(&empty, 0, &fm("p")), Ok(false));
        let refl = model(Frame::from_edges(1, &[], &[(0, 0)]), &[("p", 1)]);
        assert_eq!(forces(&refl, 0, &fm("O p")), Ok(true));
        assert_eq!(forces(&refl, 0, &fm("p")), Ok(true));
        assert_eq!(
            forces(&refl, 3, &fm("p")),
            Err(KripkeError::UnknownWorld {
                world: 3,
                worlds: 1
            })
        );
        assert_eq!(
            forces(&refl, 0, &fm("q")),
            Err(KripkeError::UnknownLetter("q".into()))
        );
    }

    #[test]
    fn truth_sets_match_forcing_on_a_chain() {
        let f = Frame::from_edges(3, &[(0, 1), (1, 2)], &[(0, 2), (1, 2), (2, 2)]);
        let m = model(f, &[("p", 0b100), ("q", 0b110)]);
        for s in [
            "O p",
            "p -> q",
            "~~p",
            "O p -> p",
            "q | ~q",
            "O (p & q) -> O p",
        ] {
            let phi = fm(s);
            let t = truth_set(&m, &phi).unwrap();
            for w in 0..3 {
                assert_eq!(
                    forces(&m, w, &phi).unwrap(),
                    t & (1 << w) != 0,
                    "{s} at {w}"
                );
            }
        }
    }

    #[test]
    fn frame_counts_for_small_sizes() {
        // one world: E is empty or the loop
        assert_eq!(enumerate_frames(1, Logic::IelMinus).len(), 2);
        assert_eq!(enumerate_frames(1, Logic::Iel).len(), 1);
        // two worlds: the antichain gives 2 * 2; on a chain 0 <= 1, E(1) is
        // empty (4 choices of E(0)) or the loop (2 choices of E(0) holding 1)
        assert_eq!(enumerate_frames(2, Logic::IelMinus).len(), 4 + 6 + 6);
    }

    #[test]
    fn smallest_countermodels() {
        let Search::Found(c) = countermodel(
            &fm("O false -> false"),
            Logic::IelMinus,
            1,
            DEFAULT_GUARD,
            Strategy::Sequential,
        )
        .unwrap() else {
            panic!("expected a countermodel")
        };
        assert_eq!(c.model.frame.worlds(), 1);
        assert_eq!(c.model.frame.e(0), 0);
        assert_eq!(
            countermodel(
                &fm("p -> O p"),
                Logic::IelMinus,
                3,
                DEFAULT_GUARD,
                Strategy::Sequential
            ),
            Ok(Search::ValidUpTo(3))
        );
    }

    #[test]
    fn guard_is_enforced() {
        let f = Frame::from_edges(3, &[], &[]);
        assert!(matches!(
            valid_on_frame(&f, &fm("p -> q"), 10),
            Err(KripkeError::ResourceExceeded {
                needed: 192,
                limit: 10
            })
        ));
    }
}
