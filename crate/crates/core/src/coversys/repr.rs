use serde::Serialize;

use super::locale::{FiniteLocale, LocaleViolation};
use super::poset::{members, FinitePoset, PosetError, DEFAULT_SUBSET_CAP};
use super::system::CoverSystem;
use super::CoverError;

/// Subsets of `mask` in increasing order.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some((cur | !mask).wrapping_add(1) & mask)
        };
        Some(cur)
    })
}

/// The cover system on the carrier of `l` with the reversed order, in
/// which `x |> C` iff `C` lies below `x` and joins to `x`, and, when `l`
/// carries an operator `m`, `x R y` iff `x <= m y`.
pub fn build_sl(l: &FiniteLocale) -> Result<CoverSystem, CoverError> {
    l.validate()?;
    if let Some(m) = l.operator() {
        l.check_monotone(m)?;
    }
    let n = l.len();
    let poset = l.poset().dual();
    let covers = (0..n)
        .map(|x| {
            submasks(l.poset().down(x))
                .filter(|&c| l.join_all(c) == x)
                .collect()
        })
        .collect();
    let r = l.operator().map(|m| {
        (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| l.leq(x, m[y]))
                    .fold(0u64, |acc, y| acc | (1 << y))
            })
            .collect()
    });
    Ok(CoverSystem::from_parts(poset, covers, r))
}

/// The proposition `(x]` of the built system: everything below `x` in `l`,
/// which is the cone of `x` in the reversed order.
pub fn principal(l: &FiniteLocale, x: usize) -> u64 {
    l.poset().down(x)
}

/// Outcome of checking that `x ↦ (x]` is an isomorphism onto the
/// propositions of the built system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub elements: usize,
    pub propositions: usize,
    pub bijective: bool,
    pub meets: bool,
    pub joins: bool,
    pub top: bool,
    pub bottom: bool,
    pub implication: bool,
    /// `(m a] = <R_m>(a]` for all `a`, when an operator is present.
    pub modal: Option<bool>,
    /// Each element with the members of its image.
    pub table: Vec<(String, Vec<String>)>,
    pub failures: Vec<String>,
}

impl IsoReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn representation_iso(l: &FiniteLocale) -> Result<IsoReport, CoverError> {
    let s = build_sl(l)?;
    let n = l.len();
    let props = s.propositions()?;
    let image: Vec<u64> = (0..n).map(|x| principal(l, x)).collect();
    let mut failures = Vec::new();
    let name = |x: usize| l.label(x).to_string();

    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let bijective = sorted == props;
    if !bijective {
        failures.push(format!(
            "{} elements map onto {} distinct sets, {} propositions exist",
            n,
            sorted.len(),
            props.len()
        ));
    }
    let mut law = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
        ok
    };
    let mut meets = true;
    let mut joins = true;
    let mut implication = true;
    for a in 0..n {
        for b in 0..n {
            meets &= law(
                image[l.meet(a, b)] == image[a] & image[b],
                format!("meet of {} and {}", name(a), name(b)),
            );
            joins &= law(
                image[l.join(a, b)] == s.j(image[a] | image[b]),
                format!("join of {} and {}", name(a), name(b)),
            );
            implication &= law(
                image[l.imp(a, b)] == s.arrow(image[a], image[b]),
                format!("implication from {} to {}", name(a), name(b)),
            );
        }
    }
    let top = law(image[l.top()] == s.all(), "top".into());
    let bottom = law(image[l.bottom()] == s.j(0), "bottom".into());
    let modal = l.operator().map(|m| {
        let mut ok = true;
        for a in 0..n {
            let rhs = s.diamond(image[a]).expect("operator gives a relation");
            ok &= law(
                image[m[a]] == rhs,
                format!("(m {}] differs from <R>({}]", name(a), name(a)),
            );
        }
        ok
    });
    let table = (0..n)
        .map(|x| (name(x), members(image[x]).map(name).collect()))
        .collect();
    Ok(IsoReport {
        elements: n,
        propositions: props.len(),
        bijective,
        meets,
        joins,
        top,
        bottom,
        implication,
        modal,
        table,
        failures,
    })
}

/// A completion of a finite poset by cuts, with the embedding of the
/// original points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub lattice: FiniteLocale,
    /// `embed[x]` is the element of `lattice` representing point `x`.
    pub embed: Vec<usize>,
    /// Each element as the set of original points below it.
    pub cuts: Vec<u64>,
}

impl Completion {
    /// Whether every element is the join of the embedded points below it.
    pub fn join_dense(&self) -> bool {
        let l = &self.lattice;
        (0..l.len()).all(|a| {
            let below = self
                .embed
                .iter()
                .filter(|&&e| l.leq(e, a))
                .fold(0u64, |m, &e| m | (1 << e));
            l.join_all(below) == a
        })
    }

    /// Whether every element is the meet of the embedded points above it.
    pub fn meet_dense(&self) -> bool {
        let l = &self.lattice;
        (0..l.len()).all(|a| {
            let above = self
                .embed
                .iter()
                .filter(|&&e| l.leq(a, e))
                .fold(0u64, |m, &e| m | (1 << e));
            l.meet_all(above) == a
        })
    }

    /// Whether the embedding is an order isomorphism.
    pub fn embedding_is_iso(&self) -> bool {
        let mut img = self.embed.clone();
        img.sort_unstable();
        img.dedup();
        img.len() == self.lattice.len()
    }
}

/// The Dedekind-MacNeille completion of `p`: the sets `A` with
/// `A = L(U(A))`, ordered by inclusion. Element labels are the original
/// labels for embedded points and `{a, b, ..}` listings otherwise.
pub fn dedekind_macneille(p: &FinitePoset) -> Result<Completion, CoverError> {
    let n = p.len();
    let needed = 1u64.checked_shl(n as u32).unwrap_or(u64::MAX);
    if needed > DEFAULT_SUBSET_CAP {
        return Err(PosetError::SizeGuard {
            needed,
            cap: DEFAULT_SUBSET_CAP,
        }
        .into());
    }
    let all = p.all();
    let upper = |s: u64| members(s).fold(all, |acc, x| acc & p.up(x));
    let lower = |s: u64| members(s).fold(all, |acc, x| acc & p.down(x));
    let mut cuts: Vec<u64> = (0..=all).map(|s| lower(upper(s))).collect();
    cuts.sort_unstable_by_key(|&c| (c.count_ones(), c));
    cuts.dedup();
    let embed: Vec<usize> = (0..n)
        .map(|x| {
            cuts.iter()
                .position(|&c| c == p.down(x))
                .expect("principal ideals are cuts")
        })
        .collect();
    let labels: Vec<String> = cuts
        .iter()
        .enumerate()
        .map(|(i, &c)| match embed.iter().position(|&e| e == i) {
            Some(x) => p.label(x).to_string(),
            None => {
                let names: Vec<&str> = members(c).map(|x| p.label(x)).collect();
                format!("{{{}}}", names.join(","))
            }
        })
        .collect();
    let up: Vec<u64> = cuts
        .iter()
        .map(|&a| {
            cuts.iter()
                .enumerate()
                .filter(|&(_, &b)| a & !b == 0)
                .fold(0u64, |m, (j, _)| m | (1 << j))
        })
        .collect();
    let poset = FinitePoset::new(labels, up)?;
    let lattice = FiniteLocale::from_poset(poset, None)?;
    Ok(Completion {
        lattice,
        embed,
        cuts,
    })
}

fn check_sub_monotone(big: &FiniteLocale, embed: &[usize], f: &[usize]) -> Result<(), CoverError> {
    if f.len() != embed.len() {
        return Err(LocaleViolation::OperatorArity {
            expected: embed.len(),
            found: f.len(),
        }
        .into());
    }
    if let Some(&v) = f.iter().find(|&&v| v >= embed.len()) {
        return Err(LocaleViolation::OperatorOutOfRange(v).into());
    }
    for x in 0..embed.len() {
        for y in 0..embed.len() {
            if big.leq(embed[x], embed[y]) && !big.leq(embed[f[x]], embed[f[y]]) {
                return Err(LocaleViolation::NotMonotone(
                    big.label(embed[x]).to_string(),
                    big.label(embed[y]).to_string(),
                )
                .into());
            }
        }
    }
    Ok(())
}

/// `f°(a) = ⋁{f x | x <= a}` over the embedded elements `x`. `f` maps
/// indices of `embed` to indices of `embed`.
pub fn extend_lower(
    big: &FiniteLocale,
    embed: &[usize],
    f: &[usize],
) -> Result<Vec<usize>, CoverError> {
    check_sub_monotone(big, embed, f)?;
    Ok((0..big.len())
        .map(|a| {
            (0..embed.len())
                .filter(|&x| big.leq(embed[x], a))
                .fold(big.bottom(), |acc, x| big.join(acc, embed[f[x]]))
        })
        .collect())
}

/// `f•(a) = ⋀{f x | a <= x}` over the embedded elements `x`.
pub fn extend_upper(
    big: &FiniteLocale,
    embed: &[usize],
    f: &[usize],
) -> Result<Vec<usize>, CoverError> {
    check_sub_monotone(big, embed, f)?;
    Ok((0..big.len())
        .map(|a| {
            (0..embed.len())
                .filter(|&x| big.leq(a, embed[x]))
                .fold(big.top(), |acc, x| big.meet(acc, embed[f[x]]))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coversys::system::classify_cover_system;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn two_element_locale() {
        let l = FiniteLocale::chain(2);
        let s = build_sl(&l).unwrap();
        // bottom is covered by the empty set and by itself; top only by
        // decompositions containing it
        assert_eq!(s.covers_of(0), &[0b00, 0b01]);
        assert_eq!(s.covers_of(1), &[0b10, 0b11]);
        let f = classify_cover_system(&s);
        assert!(f.strict, "{:?}", f.failures);
    }

    #[test]
    fn identity_relation_is_the_order() {
        let l = FiniteLocale::chain(3)
            .with_operator(Some(vec![0, 1, 2]))
            .unwrap();
        let s = build_sl(&l).unwrap();
        let r = s.relation().unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(r[x] & (1 << y) != 0, l.leq(x, y));
            }
        }
    }

    #[test]
    fn three_chain_has_three_propositions() {
        let s = build_sl(&FiniteLocale::chain(3)).unwrap();
        assert_eq!(s.propositions().unwrap().len(), 3);
    }

    #[test]
    fn constant_top_operator() {
        let l = FiniteLocale::chain(3)
            .with_operator(Some(vec![2, 2, 2]))
            .unwrap();
        let s = build_sl(&l).unwrap();
        for a in 0..3 {
            assert_eq!(s.diamond(principal(&l, a)).unwrap(), 0b111);
            assert_eq!(principal(&l, 2), 0b111);
        }
        assert!(representation_iso(&l).unwrap().holds());
    }

    #[test]
    fn completion_of_an_antichain() {
        let p = FinitePoset::from_edges(labels(2), &[]).unwrap();
        let c = dedekind_macneille(&p).unwrap();
        assert_eq!(c.lattice.len(), 4);
        assert!(c.join_dense() && c.meet_dense());
        assert!(!c.embedding_is_iso());
    }

    #[test]
    fn completion_of_a_lattice_is_itself() {
        let l = FiniteLocale::boolean(2);
        let c = dedekind_macneille(l.poset()).unwrap();
        assert!(c.embedding_is_iso());
        let id = l.identity();
        let lo = extend_lower(&c.lattice, &c.embed, &id).unwrap();
        let hi = extend_upper(&c.lattice, &c.embed, &id).unwrap();
        assert_eq!(lo, hi);
        for x in 0..4 {
            assert_eq!(lo[c.embed[x]], c.embed[id[x]]);
        }
    }
}
