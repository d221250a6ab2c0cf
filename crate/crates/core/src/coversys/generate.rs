use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::locale::distributive_lattices_up_to_iso;
use super::poset::{members, posets_up_to_iso, FinitePoset};
use super::repr::build_sl;
use super::system::CoverSystem;

fn subsets_of(mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut s = 0u64;
    loop {
        out.push(s);
        if s == mask {
            return out;
        }
        s = (s | !mask).wrapping_add(1) & mask;
    }
}

fn is_cover_system(s: &CoverSystem) -> bool {
    s.check_existence().is_ok() && s.check_transitivity().is_ok() && s.check_refinement().is_ok()
}

/// Every strictly localic cover system without relation on every poset up
/// to isomorphism with at most `max_points` points. Each point's covers
/// range over all families of subsets of its cone.
pub fn strict_systems_exhaustive(max_points: usize) -> Vec<CoverSystem> {
    assert!(
        max_points <= 3,
        "exhaustive enumeration is for at most 3 points"
    );
    let mut out = Vec::new();
    for n in 1..=max_points {
        for p in posets_up_to_iso(n) {
            let choices: Vec<Vec<u64>> = (0..n).map(|x| subsets_of(p.up(x))).collect();
            // a family of covers for x is a subset of choices[x], as a mask
            let family_counts: Vec<u64> = choices.iter().map(|c| 1u64 << c.len()).collect();
            let mut idx = vec![0u64; n];
            loop {
                let covers: Vec<Vec<u64>> = (0..n)
                    .map(|x| members(idx[x]).map(|i| choices[x][i]).collect())
                    .collect();
                let s = CoverSystem::from_parts(p.clone(), covers, None);
                if is_cover_system(&s) {
                    out.push(s);
                }
                let mut pos = 0;
                loop {
                    if pos == n {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < family_counts[pos] {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
            }
        }
    }
    out
}

/// `s` with each relation making it a modal cover system.
pub fn modal_extensions(s: &CoverSystem) -> Vec<CoverSystem> {
    let n = s.len();
    assert!(n * n <= 16, "relation enumeration is for at most 4 points");
    let mut out = Vec::new();
    for code in 0u64..(1 << (n * n)) {
        let r: Vec<u64> = (0..n).map(|x| (code >> (x * n)) & ((1 << n) - 1)).collect();
        let t = s.clone().with_relation(Some(r));
        if t.check_confluence().is_ok() && t.check_modal_localisation().is_ok() {
            out.push(t);
        }
    }
    out
}

/// Adds every achievable union (transitivity) and a refinement into each
/// larger point's cone (refinement) until nothing changes.
fn close_covers(p: &FinitePoset, covers: &mut [BTreeSet<u64>]) {
    loop {
        let mut changed = false;
        for x in 0..p.len() {
            let current: Vec<u64> = covers[x].iter().copied().collect();
            for c in current {
                let mut acc = BTreeSet::from([0u64]);
                for y in members(c) {
                    acc = acc
                        .iter()
                        .flat_map(|&u| covers[y].iter().map(move |&cy| u | cy))
                        .collect();
                }
                for u in acc {
                    changed |= covers[x].insert(u);
                }
            }
        }
        for (x, y) in p.strict_pairs() {
            let current: Vec<u64> = covers[x].iter().copied().collect();
            for c in current {
                let upc = p.up_closure(c);
                if !covers[y].iter().any(|&d| d & !upc == 0) {
                    covers[y].insert(upc & p.up(y));
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Adds `y R z` whenever `x <= y`, `x R z` and no successor of `y` lies
/// above `z`.
fn close_confluence(p: &FinitePoset, r: &mut [u64]) {
    loop {
        let mut changed = false;
        for x in 0..p.len() {
            for y in members(p.up(x)) {
                for z in members(r[x]) {
                    if r[y] & p.up(z) == 0 {
                        r[y] |= 1 << z;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// A random strictly localic cover system on `n` points with a modal
/// relation: random order, random seed covers inside cones closed under
/// the cover axioms, and a random relation containing the identity closed
/// under confluence. Relations failing modal localisation are redrawn; the
/// identity relation is the fallback.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize) -> CoverSystem {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.35))
        .collect();
    let p = FinitePoset::from_edges(labels, &edges).expect("upward edges give a poset");
    let mut covers: Vec<BTreeSet<u64>> = (0..n)
        .map(|x| {
            let k = rng.gen_range(1..=2);
            (0..k)
                .map(|_| {
                    members(p.up(x))
                        .filter(|_| rng.gen_bool(0.6))
                        .fold(0u64, |m, y| m | (1 << y))
                })
                .collect()
        })
        .collect();
    close_covers(&p, &mut covers);
    let base = CoverSystem::from_parts(
        p.clone(),
        covers
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect(),
        None,
    );
    for _ in 0..8 {
        let mut r: Vec<u64> = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|_| rng.gen_bool(0.2))
                    .fold(1u64 << x, |m, y| m | (1 << y))
            })
            .collect();
        close_confluence(&p, &mut r);
        let s = base.clone().with_relation(Some(r));
        if s.check_modal_localisation().is_ok() {
            return s;
        }
    }
    base.with_relation(Some((0..n).map(|x| 1u64 << x).collect()))
}

pub fn random_systems(
    seed: u64,
    count: usize,
    points: std::ops::RangeInclusive<usize>,
) -> Vec<CoverSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(points.clone());
            random_system(&mut rng, n)
        })
        .collect()
}

/// The built system of every distributive lattice with at most `max_size`
/// elements, without operator and with each monotone operator.
pub fn sl_systems(max_size: usize) -> Vec<CoverSystem> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        for l in distributive_lattices_up_to_iso(size) {
            out.push(build_sl(&l).expect("distributive lattices are locales"));
            for m in l.monotone_operators() {
                let lm = l.clone().with_operator(Some(m)).expect("operator in range");
                out.push(build_sl(&lm).expect("monotone operator"));
            }
        }
    }
    out
}

/// The standard family of generated systems: every strict system on at
/// most 3 points with and without each modal relation, `random` seeded
/// systems on 4 or 5 points, and the built systems of distributive
/// lattices with at most 5 elements.
pub fn generated_systems(seed: u64, random: usize) -> Vec<CoverSystem> {
    let mut out = Vec::new();
    for s in strict_systems_exhaustive(3) {
        out.extend(modal_extensions(&s));
        out.push(s);
    }
    out.extend(random_systems(seed, random, 4..=5));
    out.extend(sl_systems(5));
    out
}
