use serde::Serialize;
use thiserror::Error;

/// Largest carrier size (points are bits of a `u64`).
pub const MAX_POINTS: usize = 64;

/// Default cap on the number of subsets scanned by [`FinitePoset::up_sets`].
pub const DEFAULT_SUBSET_CAP: u64 = 1 << 20;

/// Iterates the members of a bitmask in increasing order.
pub fn members(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn mask_of(points: impl IntoIterator<Item = usize>) -> u64 {
    points.into_iter().fold(0, |m, i| m | (1 << i))
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum PosetError {
    #[error("{0} points exceed the limit of {MAX_POINTS}")]
    TooLarge(usize),
    #[error("point index {0} is out of range")]
    OutOfRange(usize),
    #[error("order is not antisymmetric: `{0}` and `{1}` are below each other")]
    NotAntisymmetric(String, String),
    #[error("order is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("order is not transitive: `{0}` <= `{1}` <= `{2}`")]
    NotTransitive(String, String, String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("{needed} subsets exceed the cap of {cap}")]
    SizeGuard { needed: u64, cap: u64 },
}

/// A finite partial order; `up[x]` is the cone `↑x` as a bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    labels: Vec<String>,
    up: Vec<u64>,
}

impl FinitePoset {
    /// A poset from cone masks, checking the order axioms.
    pub fn new(labels: Vec<String>, up: Vec<u64>) -> Result<FinitePoset, PosetError> {
        assert_eq!(labels.len(), up.len());
        let p = FinitePoset { labels, up };
        p.validate()?;
        Ok(p)
    }

    /// The poset generated by `edges`: the reflexive-transitive closure is
    /// taken and antisymmetry checked.
    pub fn from_edges(
        labels: Vec<String>,
        edges: &[(usize, usize)],
    ) -> Result<FinitePoset, PosetError> {
        let n = labels.len();
        if n > MAX_POINTS {
            return Err(PosetError::TooLarge(n));
        }
        let mut up: Vec<u64> = (0..n).map(|x| 1 << x).collect();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(PosetError::OutOfRange(a.max(b)));
            }
            up[a] |= 1 << b;
        }
        // Warshall over bitmasks
        for k in 0..n {
            for x in 0..n {
                if up[x] & (1 << k) != 0 {
                    up[x] |= up[k];
                }
            }
        }
        FinitePoset::new(labels, up)
    }

    /// Points labelled `0..n` with the given cones, unchecked.
    pub(crate) fn from_masks_unchecked(up: Vec<u64>) -> FinitePoset {
        FinitePoset {
            labels: (0..up.len()).map(|i| i.to_string()).collect(),
            up,
        }
    }

    pub fn validate(&self) -> Result<(), PosetError> {
        let n = self.len();
        if n > MAX_POINTS {
            return Err(PosetError::TooLarge(n));
        }
        for (i, l) in self.labels.iter().enumerate() {
            if self.labels[..i].contains(l) {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        let name = |i: usize| self.labels[i].clone();
        for x in 0..n {
            if self.up[x] & !self.all() != 0 {
                return Err(PosetError::OutOfRange(
                    members(self.up[x]).last().unwrap_or(0),
                ));
            }
            if !self.leq(x, x) {
                return Err(PosetError::NotReflexive(name(x)));
            }
            for y in members(self.up[x]) {
                if y != x && self.leq(y, x) {
                    return Err(PosetError::NotAntisymmetric(name(x), name(y)));
                }
                if let Some(z) = members(self.up[y] & !self.up[x]).next() {
                    return Err(PosetError::NotTransitive(name(x), name(y), name(z)));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> FinitePoset {
        assert_eq!(labels.len(), self.len());
        self.labels = labels;
        self
    }

    pub fn all(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] & (1 << y) != 0
    }

    /// `↑x`.
    pub fn up(&self, x: usize) -> u64 {
        self.up[x]
    }

    /// `↓x`.
    pub fn down(&self, x: usize) -> u64 {
        mask_of((0..self.len()).filter(|&y| self.leq(y, x)))
    }

    /// `↑A`.
    pub fn up_closure(&self, set: u64) -> u64 {
        members(set).fold(0, |m, x| m | self.up[x])
    }

    pub fn down_closure(&self, set: u64) -> u64 {
        members(set).fold(0, |m, x| m | self.down(x))
    }

    pub fn is_up_set(&self, set: u64) -> bool {
        self.up_closure(set) == set
    }

    /// The order with every pair reversed.
    pub fn dual(&self) -> FinitePoset {
        FinitePoset {
            labels: self.labels.clone(),
            up: (0..self.len()).map(|x| self.down(x)).collect(),
        }
    }

    /// All up-sets in increasing mask order, scanning at most `cap` subsets.
    pub fn up_sets_capped(&self, cap: u64) -> Result<Vec<u64>, PosetError> {
        let needed = 1u64.checked_shl(self.len() as u32).unwrap_or(u64::MAX);
        if needed > cap {
            return Err(PosetError::SizeGuard { needed, cap });
        }
        Ok((0..=self.all()).filter(|&s| self.is_up_set(s)).collect())
    }

    /// All up-sets in increasing mask order.
    pub fn up_sets(&self) -> Result<Vec<u64>, PosetError> {
        self.up_sets_capped(DEFAULT_SUBSET_CAP)
    }

    /// Pairs `(x, y)` with `x < y` strictly.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| {
                members(self.up[x])
                    .filter(move |&y| y != x)
                    .map(move |y| (x, y))
            })
            .collect()
    }

    /// Covering pairs of the order (`x < y` with nothing strictly between).
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(x, y)| !members(self.up[x]).any(|z| z != x && z != y && self.leq(z, y)))
            .collect()
    }

    /// The order relation under the point renaming `perm`, as an `n * n`
    /// bit code.
    fn code_under(&self, perm: &[usize]) -> u64 {
        let n = self.len();
        let mut code = 0u64;
        for x in 0..n {
            for y in members(self.up[x]) {
                code |= 1 << (perm[x] * n + perm[y]);
            }
        }
        code
    }

    /// Smallest relation code over all relabellings; equal exactly for
    /// isomorphic posets. Intended for at most 7 points.
    pub fn canonical_code(&self) -> u64 {
        let n = self.len();
        assert!(n <= 8, "canonical form is for small posets");
        let mut best = u64::MAX;
        for_each_permutation(n, &mut |perm| {
            best = best.min(self.code_under(perm));
        });
        best
    }
}

/// Calls `f` on every permutation of `0..n`.
pub fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(k: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k == perm.len() {
            f(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            go(k + 1, perm, f);
            perm.swap(k, i);
        }
    }
    go(0, &mut (0..n).collect(), f);
}

/// Transitive relations on `0..n` contained in the natural order (`x`
/// below `y` only if `x < y`), as cone masks. Every finite poset has such a
/// labelling.
pub fn naturally_labelled(n: usize) -> Vec<Vec<u64>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for code in 0u64..(1 << pairs.len()) {
        let mut up: Vec<u64> = (0..n).map(|x| 1 << x).collect();
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if code & (1 << b) != 0 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|x| members(up[x]).all(|y| up[y] & !up[x] == 0));
        if transitive {
            out.push(up);
        }
    }
    out
}

/// One representative of each isomorphism class of posets on `n` points,
/// sorted by canonical code.
pub fn posets_up_to_iso(n: usize) -> Vec<FinitePoset> {
    let mut seen = std::collections::BTreeMap::new();
    for up in naturally_labelled(n) {
        let p = FinitePoset::from_masks_unchecked(up);
        seen.entry(p.canonical_code()).or_insert(p);
    }
    seen.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn up_set_examples() {
        let chain = FinitePoset::from_edges(labels(2), &[(0, 1)]).unwrap();
        assert_eq!(chain.up_sets().unwrap(), vec![0b00, 0b10, 0b11]);
        let anti = FinitePoset::from_edges(labels(2), &[]).unwrap();
        assert_eq!(anti.up_sets().unwrap().len(), 4);
        let one = FinitePoset::from_edges(labels(1), &[]).unwrap();
        assert_eq!(one.up_sets().unwrap(), vec![0, 1]);
    }

    #[test]
    fn closure_and_errors() {
        let p = FinitePoset::from_edges(labels(3), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.hasse(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.down(2), 0b111);
        assert!(matches!(
            FinitePoset::from_edges(labels(2), &[(0, 1), (1, 0)]),
            Err(PosetError::NotAntisymmetric(..))
        ));
        assert!(matches!(
            FinitePoset::from_edges(labels(2), &[(0, 4)]),
            Err(PosetError::OutOfRange(4))
        ));
        assert!(matches!(
            p.up_sets_capped(4),
            Err(PosetError::SizeGuard { needed: 8, cap: 4 })
        ));
    }

    #[test]
    fn poset_counts_up_to_isomorphism() {
        let counts: Vec<usize> = (1..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63]);
    }
}
