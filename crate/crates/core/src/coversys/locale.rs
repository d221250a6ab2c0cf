use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::poset::{members, FinitePoset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum LocaleViolation {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("carrier is empty")]
    Empty,
    #[error("`{0}` and `{1}` have no meet")]
    NoMeet(String, String),
    #[error("`{0}` and `{1}` have no join")]
    NoJoin(String, String),
    #[error("not distributive: `{0}` meet (`{1}` join `{2}`) differs from the join of the meets")]
    NotDistributive(String, String, String),
    #[error("implication fails the adjunction at `{0}`, `{1}`, `{2}`")]
    NotHeyting(String, String, String),
    #[error("operator has {found} entries for {expected} elements")]
    OperatorArity { expected: usize, found: usize },
    #[error("operator value {0} is out of range")]
    OperatorOutOfRange(usize),
    #[error("operator is not monotone: `{0}` <= `{1}` but not m `{0}` <= m `{1}`")]
    NotMonotone(String, String),
}

/// A finite lattice with its meet, join and relative pseudo-complement
/// tables, and optionally an operator `m`. Construction checks only that
/// the order is a lattice; [`FiniteLocale::validate`] checks
/// distributivity and the Heyting adjunction, which make a finite lattice a
/// locale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLocale {
    poset: FinitePoset,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    imp: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    m: Option<Vec<usize>>,
}

impl FiniteLocale {
    pub fn from_poset(poset: FinitePoset, m: Option<Vec<usize>>) -> Result<Self, LocaleViolation> {
        let n = poset.len();
        if n == 0 {
            return Err(LocaleViolation::Empty);
        }
        let name = |i: usize| poset.label(i).to_string();
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower = poset.down(a) & poset.down(b);
                meet[a][b] = members(lower)
                    .find(|&c| lower & !poset.down(c) == 0)
                    .ok_or_else(|| LocaleViolation::NoMeet(name(a), name(b)))?;
                let upper = poset.up(a) & poset.up(b);
                join[a][b] = members(upper)
                    .find(|&c| upper & !poset.up(c) == 0)
                    .ok_or_else(|| LocaleViolation::NoJoin(name(a), name(b)))?;
            }
        }
        let bottom = (1..n).fold(0, |acc, x| meet[acc][x]);
        let top = (1..n).fold(0, |acc, x| join[acc][x]);
        let imp = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .filter(|&c| poset.leq(meet[a][c], b))
                            .fold(bottom, |acc, c| join[acc][c])
                    })
                    .collect()
            })
            .collect();
        if let Some(m) = &m {
            if m.len() != n {
                return Err(LocaleViolation::OperatorArity {
                    expected: n,
                    found: m.len(),
                });
            }
            if let Some(&v) = m.iter().find(|&&v| v >= n) {
                return Err(LocaleViolation::OperatorOutOfRange(v));
            }
        }
        Ok(FiniteLocale {
            poset,
            meet,
            join,
            imp,
            bottom,
            top,
            m,
        })
    }

    /// Distributivity and the Heyting adjunction `a ∧ c <= b iff c <= a => b`.
    pub fn validate(&self) -> Result<(), LocaleViolation> {
        let n = self.len();
        let name = |i: usize| self.poset.label(i).to_string();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Err(LocaleViolation::NotDistributive(name(a), name(b), name(c)));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.leq(self.meet(a, c), b) != self.leq(c, self.imp(a, b)) {
                        return Err(LocaleViolation::NotHeyting(name(a), name(b), name(c)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn label(&self, a: usize) -> &str {
        self.poset.label(a)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Relative pseudo-complement `⋁{c | a ∧ c <= b}`.
    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.imp(a, self.bottom)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all(&self, set: u64) -> usize {
        members(set).fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, set: u64) -> usize {
        members(set).fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn operator(&self) -> Option<&[usize]> {
        self.m.as_deref()
    }

    pub fn with_operator(mut self, m: Option<Vec<usize>>) -> Result<Self, LocaleViolation> {
        if let Some(v) = &m {
            if v.len() != self.len() {
                return Err(LocaleViolation::OperatorArity {
                    expected: self.len(),
                    found: v.len(),
                });
            }
            if let Some(&x) = v.iter().find(|&&x| x >= self.len()) {
                return Err(LocaleViolation::OperatorOutOfRange(x));
            }
        }
        self.m = m;
        Ok(self)
    }

    pub fn check_monotone(&self, m: &[usize]) -> Result<(), LocaleViolation> {
        for (a, b) in self.poset.strict_pairs() {
            if !self.leq(m[a], m[b]) {
                return Err(LocaleViolation::NotMonotone(
                    self.label(a).to_string(),
                    self.label(b).to_string(),
                ));
            }
        }
        Ok(())
    }

    pub fn identity(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    pub fn constant(&self, c: usize) -> Vec<usize> {
        vec![c; self.len()]
    }

    pub fn double_negation(&self) -> Vec<usize> {
        (0..self.len()).map(|a| self.neg(self.neg(a))).collect()
    }

    /// All monotone maps from the carrier to itself, in lexicographic order
    /// of their value vectors.
    pub fn monotone_operators(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        self.extend_monotone(0, &mut cur, &mut out);
        out
    }

    fn extend_monotone(&self, x: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = self.len();
        if x == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            let ok = (0..x).all(|y| {
                (!self.leq(y, x) || self.leq(cur[y], v)) && (!self.leq(x, y) || self.leq(v, cur[y]))
            });
            if ok {
                cur[x] = v;
                self.extend_monotone(x + 1, cur, out);
            }
        }
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> FiniteLocale {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let p = FinitePoset::from_edges(labels, &edges).expect("a chain is a poset");
        FiniteLocale::from_poset(p, None).expect("a chain is a lattice")
    }

    /// The powerset of a `k`-element set, element `i` being the subset with
    /// bitmask `i`.
    pub fn boolean(k: usize) -> FiniteLocale {
        let n = 1usize << k;
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| a & !b == 0).map(move |b| (a, b)))
            .collect();
        let p = FinitePoset::from_edges(labels, &edges).expect("inclusion is a poset");
        FiniteLocale::from_poset(p, None).expect("a powerset is a lattice")
    }
}

/// A law of an operator together with the elements refuting it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: &'static str,
    pub witness: Vec<String>,
}

/// Pointwise classification of an operator on a finite lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorFlags {
    pub monotone: bool,
    /// `a <= m a`.
    pub inflationary: bool,
    pub idempotent: bool,
    /// Preserves binary meets and the top (the empty meet).
    pub meet_preserving: bool,
    /// Monotone, inflationary and `m a ∧ b <= m (a ∧ b)`.
    pub prenucleus: bool,
    /// A meet-preserving prenucleus.
    pub multiplicative: bool,
    /// `m ⊥ = ⊥`.
    pub dense: bool,
    /// Inflationary, idempotent and meet-preserving.
    pub nucleus: bool,
    pub failures: Vec<LawFailure>,
}

pub fn classify_operator(l: &FiniteLocale, m: &[usize]) -> OperatorFlags {
    let n = l.len();
    let name = |i: usize| l.label(i).to_string();
    let mut failures = Vec::new();
    let mut law = |law: &'static str, witness: Option<Vec<usize>>| -> bool {
        match witness {
            Some(w) => {
                failures.push(LawFailure {
                    law,
                    witness: w.into_iter().map(name).collect(),
                });
                false
            }
            None => true,
        }
    };
    let pairs = || (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
    let monotone = law(
        "monotone",
        pairs()
            .find(|&(a, b)| l.leq(a, b) && !l.leq(m[a], m[b]))
            .map(|(a, b)| vec![a, b]),
    );
    let inflationary = law(
        "inflationary",
        (0..n).find(|&a| !l.leq(a, m[a])).map(|a| vec![a]),
    );
    let idempotent = law(
        "idempotent",
        (0..n).find(|&a| m[m[a]] != m[a]).map(|a| vec![a]),
    );
    let binary_meets = law(
        "preserves meets",
        pairs()
            .find(|&(a, b)| m[l.meet(a, b)] != l.meet(m[a], m[b]))
            .map(|(a, b)| vec![a, b]),
    );
    let top = law(
        "preserves top",
        (m[l.top()] != l.top()).then(|| vec![l.top()]),
    );
    let strength = law(
        "m a meet b <= m (a meet b)",
        pairs()
            .find(|&(a, b)| !l.leq(l.meet(m[a], b), m[l.meet(a, b)]))
            .map(|(a, b)| vec![a, b]),
    );
    let dense = law(
        "dense",
        (m[l.bottom()] != l.bottom()).then(|| vec![l.bottom()]),
    );
    let meet_preserving = binary_meets && top;
    let prenucleus = monotone && inflationary && strength;
    OperatorFlags {
        monotone,
        inflationary,
        idempotent,
        meet_preserving,
        prenucleus,
        multiplicative: prenucleus && meet_preserving,
        dense,
        nucleus: inflationary && idempotent && meet_preserving,
        failures,
    }
}

/// For a monotone meet-preserving `m`, whether being inflationary agrees
/// with `a ∧ m b <= m (a ∧ b)` for all `a`, `b`; `None` when `m` is not of
/// that kind.
pub fn alt_mult_agrees(l: &FiniteLocale, m: &[usize]) -> Option<bool> {
    let f = classify_operator(l, m);
    if !(f.monotone && f.meet_preserving) {
        return None;
    }
    let n = l.len();
    let strength = (0..n).all(|a| (0..n).all(|b| l.leq(l.meet(a, m[b]), m[l.meet(a, b)])));
    Some(f.inflationary == strength)
}

/// One representative of each isomorphism class of lattices with `n`
/// elements, labelled so that `0` is the bottom and `n - 1` the top.
pub fn lattices_up_to_iso(n: usize) -> Vec<FiniteLocale> {
    assert!((1..=8).contains(&n));
    if n == 1 {
        return vec![FiniteLocale::chain(1)];
    }
    let inner = n - 2;
    let mut seen = BTreeMap::new();
    for up_inner in super::poset::naturally_labelled(inner) {
        let mut up: Vec<u64> = Vec::with_capacity(n);
        up.push((1u64 << n) - 1);
        for m in &up_inner {
            up.push((m << 1) | (1 << (n - 1)));
        }
        up.push(1 << (n - 1));
        let p = FinitePoset::from_masks_unchecked(up);
        if let Ok(l) = FiniteLocale::from_poset(p, None) {
            seen.entry(l.poset.canonical_code()).or_insert(l);
        }
    }
    seen.into_values().collect()
}

pub fn distributive_lattices_up_to_iso(n: usize) -> Vec<FiniteLocale> {
    lattices_up_to_iso(n)
        .into_iter()
        .filter(|l| l.validate().is_ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_examples() {
        let d = FiniteLocale::boolean(2);
        let id = classify_operator(&d, &d.identity());
        assert!(id.nucleus && id.prenucleus && id.multiplicative && id.dense);
        let top = classify_operator(&d, &d.constant(d.top()));
        assert!(top.nucleus && !top.dense);
        let c3 = FiniteLocale::chain(3);
        assert!(classify_operator(&c3, &c3.double_negation()).nucleus);
        let bot = classify_operator(&c3, &c3.constant(0));
        assert!(!bot.inflationary && bot.monotone);
        assert_eq!(bot.failures[0].law, "inflationary");
    }

    #[test]
    fn heyting_tables() {
        let c3 = FiniteLocale::chain(3);
        assert!(c3.validate().is_ok());
        assert_eq!(c3.imp(2, 1), 1);
        assert_eq!(c3.imp(1, 2), 2);
        assert_eq!(c3.neg(1), 0);
        assert_eq!(c3.neg(0), 2);
        let b = FiniteLocale::boolean(2);
        assert_eq!(b.neg(0b01), 0b10);
    }

    #[test]
    fn non_distributive_lattices_are_rejected() {
        // the diamond M3: bottom 0, atoms 1 2 3, top 4
        let labels = (0..5).map(|i| i.to_string()).collect();
        let p = FinitePoset::from_edges(labels, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .unwrap();
        let l = FiniteLocale::from_poset(p, None).unwrap();
        assert!(matches!(
            l.validate(),
            Err(LocaleViolation::NotDistributive(..))
        ));
    }

    #[test]
    fn monotone_operator_count_on_a_chain() {
        // monotone self-maps of an n-chain: binomial(2n - 1, n)
        assert_eq!(FiniteLocale::chain(3).monotone_operators().len(), 10);
        assert_eq!(FiniteLocale::chain(4).monotone_operators().len(), 35);
    }

    #[test]
    fn lattice_counts() {
        let all: Vec<usize> = (1..=6).map(|n| lattices_up_to_iso(n).len()).collect();
        assert_eq!(all, vec![1, 1, 1, 2, 5, 15]);
    }
}
