use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::poset::{members, FinitePoset, PosetError};
use super::CoverError;

/// A condition of a cover system together with points refuting it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: &'static str,
    pub witness: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.witness)
    }
}

/// A finite cover system `<P, <=, |>>`, optionally with a relation `R`.
///
/// Covers are stored extensionally: `covers_of(x)` lists every `C` with
/// `x |> C`, as bitmasks in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSystem {
    poset: FinitePoset,
    covers: Vec<Vec<u64>>,
    r: Option<Vec<u64>>,
}

type Check = Result<(), Failure>;

impl CoverSystem {
    /// A system from `(x, C)` cover pairs and optional `R` edges. Only
    /// index ranges are checked here; see [`classify_cover_system`].
    pub fn new(
        poset: FinitePoset,
        covers: impl IntoIterator<Item = (usize, u64)>,
        r: Option<Vec<(usize, usize)>>,
    ) -> Result<CoverSystem, CoverError> {
        let n = poset.len();
        let mut cs: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); n];
        for (x, c) in covers {
            if x >= n || c & !poset.all() != 0 {
                return Err(CoverError::OutOfRange(format!("cover of point {x}")));
            }
            cs[x].insert(c);
        }
        let r = match r {
            None => None,
            Some(edges) => {
                let mut rel = vec![0u64; n];
                for (x, y) in edges {
                    if x >= n || y >= n {
                        return Err(CoverError::OutOfRange(format!("R edge ({x}, {y})")));
                    }
                    rel[x] |= 1 << y;
                }
                Some(rel)
            }
        };
        Ok(CoverSystem {
            poset,
            covers: cs.into_iter().map(|s| s.into_iter().collect()).collect(),
            r,
        })
    }

    pub(crate) fn from_parts(
        poset: FinitePoset,
        covers: Vec<Vec<u64>>,
        r: Option<Vec<u64>>,
    ) -> Self {
        CoverSystem { poset, covers, r }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn all(&self) -> u64 {
        self.poset.all()
    }

    pub fn covers_of(&self, x: usize) -> &[u64] {
        &self.covers[x]
    }

    pub fn is_cover(&self, x: usize, c: u64) -> bool {
        self.covers[x].binary_search(&c).is_ok()
    }

    /// `R` as successor masks, if present.
    pub fn relation(&self) -> Option<&[u64]> {
        self.r.as_deref()
    }

    pub fn with_relation(mut self, r: Option<Vec<u64>>) -> CoverSystem {
        if let Some(rel) = &r {
            assert_eq!(rel.len(), self.len());
        }
        self.r = r;
        self
    }

    /// `jX = {x | x |> C ⊆ X for some C}`.
    pub fn j(&self, set: u64) -> u64 {
        (0..self.len())
            .filter(|&x| self.covers[x].iter().any(|&c| c & !set == 0))
            .fold(0, |m, x| m | (1 << x))
    }

    pub fn is_localised(&self, set: u64) -> bool {
        self.j(set) & !set == 0
    }

    /// Localised up-sets in increasing mask order.
    pub fn propositions(&self) -> Result<Vec<u64>, PosetError> {
        Ok(self
            .poset
            .up_sets()?
            .into_iter()
            .filter(|&a| self.is_localised(a))
            .collect())
    }

    /// `<R>A = R⁻¹(A)`.
    pub fn diamond(&self, set: u64) -> Result<u64, CoverError> {
        let r = self.r.as_ref().ok_or(CoverError::NoRelation)?;
        Ok((0..self.len())
            .filter(|&x| r[x] & set != 0)
            .fold(0, |m, x| m | (1 << x)))
    }

    /// Up-set Heyting arrow `{x | ↑x ∩ A ⊆ B}`.
    pub fn arrow(&self, a: u64, b: u64) -> u64 {
        (0..self.len())
            .filter(|&x| self.poset.up(x) & a & !b == 0)
            .fold(0, |m, x| m | (1 << x))
    }

    fn show(&self, set: u64) -> String {
        let names: Vec<&str> = members(set).map(|x| self.poset.label(x)).collect();
        format!("{{{}}}", names.join(", "))
    }

    fn name(&self, x: usize) -> &str {
        self.poset.label(x)
    }

    fn fail(&self, condition: &'static str, witness: String) -> Check {
        Err(Failure { condition, witness })
    }

    pub fn check_existence(&self) -> Check {
        for x in 0..self.len() {
            if !self.covers[x].iter().any(|&c| c & !self.poset.up(x) == 0) {
                return self.fail(
                    "existence",
                    format!("{} has no cover inside its cone", self.name(x)),
                );
            }
        }
        Ok(())
    }

    /// Unions `⋃_{y ∈ C} C_y` over all choices of `y |> C_y`.
    fn achievable_unions(&self, c: u64) -> BTreeSet<u64> {
        let mut acc = BTreeSet::from([0u64]);
        for y in members(c) {
            acc = acc
                .iter()
                .flat_map(|&u| self.covers[y].iter().map(move |&cy| u | cy))
                .collect();
        }
        acc
    }

    pub fn check_transitivity(&self) -> Check {
        for x in 0..self.len() {
            for &c in &self.covers[x] {
                if let Some(&u) = self
                    .achievable_unions(c)
                    .iter()
                    .find(|&&u| !self.is_cover(x, u))
                {
                    return self.fail(
                        "transitivity",
                        format!(
                            "{} |> {} but not {} |> {}",
                            self.name(x),
                            self.show(c),
                            self.name(x),
                            self.show(u)
                        ),
                    );
                }
            }
        }
        Ok(())
    }

    pub fn check_refinement(&self) -> Check {
        for (x, y) in self.poset.strict_pairs() {
            for &c in &self.covers[x] {
                let upc = self.poset.up_closure(c);
                if !self.covers[y].iter().any(|&d| d & !upc == 0) {
                    return self.fail(
                        "refinement",
                        format!(
                            "{} <= {} and {} |> {} but no cover of {} refines it",
                            self.name(x),
                            self.name(y),
                            self.name(x),
                            self.show(c),
                            self.name(y)
                        ),
                    );
                }
            }
        }
        Ok(())
    }

    pub fn check_localic(&self) -> Check {
        for x in 0..self.len() {
            for &c in &self.covers[x] {
                let bound = self.poset.up_closure(c) & self.poset.up(x);
                if !self.covers[x].iter().any(|&d| d & !bound == 0) {
                    return self.fail(
                        "localic",
                        format!(
                            "{} |> {} has no refinement inside the cone",
                            self.name(x),
                            self.show(c)
                        ),
                    );
                }
            }
        }
        Ok(())
    }

    pub fn check_strict(&self) -> Check {
        for x in 0..self.len() {
            if let Some(&c) = self.covers[x].iter().find(|&&c| c & !self.poset.up(x) != 0) {
                return self.fail(
                    "strict",
                    format!("{} |> {} leaves the cone", self.name(x), self.show(c)),
                );
            }
        }
        Ok(())
    }

    fn rel(&self) -> Result<&[u64], Failure> {
        self.r.as_deref().ok_or(Failure {
            condition: "relation",
            witness: "the system has no relation R".into(),
        })
    }

    /// `x <= y` and `x R z` imply `y R w` and `z <= w` for some `w`.
    pub fn check_confluence(&self) -> Check {
        let r = self.rel()?;
        for x in 0..self.len() {
            for y in members(self.poset.up(x)) {
                for z in members(r[x]) {
                    if r[y] & self.poset.up(z) == 0 {
                        return self.fail(
                            "confluence",
                            format!(
                                "{} <= {}, {} R {}",
                                self.name(x),
                                self.name(y),
                                self.name(x),
                                self.name(z)
                            ),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// For every proposition `A`: if `x |> C ⊆ <R>A` then some `y` with
    /// `x R y` has a cover inside `A`.
    pub fn check_modal_localisation(&self) -> Check {
        let r = self.rel()?;
        let props = self.propositions().map_err(|e| Failure {
            condition: "modal localisation",
            witness: e.to_string(),
        })?;
        for a in props {
            let ra = self.diamond(a).expect("relation present");
            for x in 0..self.len() {
                let premise = self.covers[x].iter().any(|&c| c & !ra == 0);
                let conclusion = members(r[x]).any(|y| self.covers[y].iter().any(|&c| c & !a == 0));
                if premise && !conclusion {
                    return self.fail(
                        "modal localisation",
                        format!("{} with proposition {}", self.name(x), self.show(a)),
                    );
                }
            }
        }
        Ok(())
    }

    pub fn check_reflexive(&self) -> Check {
        let r = self.rel()?;
        match (0..self.len()).find(|&x| r[x] & (1 << x) == 0) {
            Some(x) => self.fail(
                "reflexive",
                format!("not {} R {}", self.name(x), self.name(x)),
            ),
            None => Ok(()),
        }
    }

    pub fn check_serial(&self) -> Check {
        let r = self.rel()?;
        match (0..self.len()).find(|&x| r[x] == 0) {
            Some(x) => self.fail("serial", format!("{} has no R-successor", self.name(x))),
            None => Ok(()),
        }
    }

    /// `x R y` implies `x R z` for some `z` above both `x` and `y`.
    pub fn check_zigzag(&self) -> Check {
        let r = self.rel()?;
        for x in 0..self.len() {
            for y in members(r[x]) {
                if r[x] & self.poset.up(x) & self.poset.up(y) == 0 {
                    return self.fail(
                        "prenuclear zig-zag",
                        format!("{} R {}", self.name(x), self.name(y)),
                    );
                }
            }
        }
        Ok(())
    }

    /// Directedness as printed: `x R y` and `x R z` imply `x R w` for some
    /// `w` above both `x` and `y`. Since `z` can be taken to be `y`, this
    /// coincides with [`CoverSystem::check_zigzag`].
    pub fn check_directed_printed(&self) -> Check {
        let r = self.rel()?;
        for x in 0..self.len() {
            for y in members(r[x]) {
                if r[x] & self.poset.up(x) & self.poset.up(y) == 0 {
                    return self.fail(
                        "directedness (printed)",
                        format!("{} R {}", self.name(x), self.name(y)),
                    );
                }
            }
        }
        Ok(())
    }

    /// Directedness binding both successors: `x R y` and `x R z` imply
    /// `x R w` for some `w` above both `y` and `z`.
    pub fn check_directed(&self) -> Check {
        let r = self.rel()?;
        for x in 0..self.len() {
            for y in members(r[x]) {
                for z in members(r[x]) {
                    if r[x] & self.poset.up(y) & self.poset.up(z) == 0 {
                        return self.fail(
                            "directedness",
                            format!(
                                "{} R {}, {} R {}",
                                self.name(x),
                                self.name(y),
                                self.name(x),
                                self.name(z)
                            ),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// `x R y` and `y |> ∅` imply `x |> ∅`.
    pub fn check_dense(&self) -> Check {
        let r = self.rel()?;
        for x in 0..self.len() {
            for y in members(r[x]) {
                if self.is_cover(y, 0) && !self.is_cover(x, 0) {
                    return self.fail(
                        "density",
                        format!(
                            "{} R {} and {} |> {{}}",
                            self.name(x),
                            self.name(y),
                            self.name(y)
                        ),
                    );
                }
            }
        }
        Ok(())
    }
}

/// Which kinds of cover system a structure is, each decided by exhaustive
/// check of its defining conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverFlags {
    pub cover: bool,
    pub localic: bool,
    /// Strictly localic.
    pub strict: bool,
    pub modal: bool,
    pub prenuclear: bool,
    /// Serial, directed as printed, and the zig-zag condition.
    pub mult_prenuclear: bool,
    /// Serial, directed over both successors, and the zig-zag condition.
    pub mult_prenuclear_intended: bool,
    pub iel: bool,
    pub iel_intended: bool,
    /// The two directedness readings classify this system differently.
    pub variants_disagree: bool,
    pub failures: Vec<Failure>,
}

pub fn classify_cover_system(s: &CoverSystem) -> CoverFlags {
    let mut failures = Vec::new();
    let mut ok = |c: Check| match c {
        Ok(()) => true,
        Err(f) => {
            failures.push(f);
            false
        }
    };
    let existence = ok(s.check_existence());
    let transitivity = ok(s.check_transitivity());
    let refinement = ok(s.check_refinement());
    let localic_ax = ok(s.check_localic());
    let strict_ax = ok(s.check_strict());
    let cover = existence && transitivity && refinement;
    let localic = cover && localic_ax;
    let strict = cover && strict_ax;
    let has_r = s.relation().is_some();
    let (mut modal, mut reflexive, mut zigzag, mut serial, mut printed, mut directed, mut dense) =
        (false, false, false, false, false, false, false);
    if has_r {
        let confluence = ok(s.check_confluence());
        let localisation = ok(s.check_modal_localisation());
        modal = strict && confluence && localisation;
        reflexive = ok(s.check_reflexive());
        zigzag = ok(s.check_zigzag());
        serial = ok(s.check_serial());
        printed = ok(s.check_directed_printed());
        directed = ok(s.check_directed());
        dense = ok(s.check_dense());
    }
    let prenuclear = modal && reflexive && zigzag;
    let mult_prenuclear = modal && serial && printed && zigzag;
    let mult_prenuclear_intended = modal && serial && directed && zigzag;
    CoverFlags {
        cover,
        localic,
        strict,
        modal,
        prenuclear,
        mult_prenuclear,
        mult_prenuclear_intended,
        iel: mult_prenuclear && dense,
        iel_intended: mult_prenuclear_intended && dense,
        variants_disagree: mult_prenuclear != mult_prenuclear_intended,
        failures,
    }
}

/// Checks that `j` is a nucleus on the up-sets: it maps up-sets to
/// up-sets and is inflationary, monotone, idempotent and preserves binary
/// intersections there.
pub fn check_j_nucleus(s: &CoverSystem) -> Result<(), Failure> {
    let ups = s.poset().up_sets().map_err(|e| Failure {
        condition: "j nucleus",
        witness: e.to_string(),
    })?;
    let fail = |law: &'static str, w: String| {
        Err(Failure {
            condition: law,
            witness: w,
        })
    };
    for &a in &ups {
        let ja = s.j(a);
        if !s.poset().is_up_set(ja) {
            return fail("j preserves up-sets", s.show(a));
        }
        if a & !ja != 0 {
            return fail("j inflationary", s.show(a));
        }
        if s.j(ja) != ja {
            return fail("j idempotent", s.show(a));
        }
        for &b in &ups {
            let jb = s.j(b);
            if a & !b == 0 && ja & !jb != 0 {
                return fail("j monotone", format!("{} {}", s.show(a), s.show(b)));
            }
            if s.j(a & b) != ja & jb {
                return fail("j preserves meets", format!("{} {}", s.show(a), s.show(b)));
            }
        }
    }
    Ok(())
}

/// Checks on propositions that `<R>A` is a proposition, `A ⊆ <R>A`, and
/// `A ∩ <R>B ⊆ <R>(A ∩ B)`.
pub fn check_diamond_prenucleus(s: &CoverSystem) -> Result<(), Failure> {
    let props = prop_list(s, "<R> prenucleus")?;
    let fail = |law: &'static str, w: String| {
        Err(Failure {
            condition: law,
            witness: w,
        })
    };
    for &a in &props {
        let ra = s.diamond(a).map_err(|e| Failure {
            condition: "<R> prenucleus",
            witness: e.to_string(),
        })?;
        if !props.contains(&ra) {
            return fail("<R> closes propositions", s.show(a));
        }
        if a & !ra != 0 {
            return fail("A <= <R>A", s.show(a));
        }
        for &b in &props {
            let rb = s.diamond(b).expect("relation present");
            let rab = s.diamond(a & b).expect("relation present");
            if a & rb & !rab != 0 {
                return fail(
                    "A meet <R>B <= <R>(A meet B)",
                    format!("{} {}", s.show(a), s.show(b)),
                );
            }
        }
    }
    Ok(())
}

/// Checks on propositions that `<R>` preserves binary intersections and
/// the whole carrier.
pub fn check_diamond_multiplicative(s: &CoverSystem) -> Result<(), Failure> {
    let props = prop_list(s, "<R> multiplicative")?;
    let d = |a: u64| s.diamond(a).expect("relation present");
    if s.relation().is_none() {
        return Err(Failure {
            condition: "<R> multiplicative",
            witness: "the system has no relation R".into(),
        });
    }
    if d(s.all()) != s.all() {
        return Err(Failure {
            condition: "<R> top",
            witness: s.show(s.all() & !d(s.all())),
        });
    }
    for &a in &props {
        for &b in &props {
            if d(a & b) != d(a) & d(b) {
                return Err(Failure {
                    condition: "<R> meets",
                    witness: format!("{} {}", s.show(a), s.show(b)),
                });
            }
        }
    }
    Ok(())
}

fn prop_list(s: &CoverSystem, condition: &'static str) -> Result<Vec<u64>, Failure> {
    s.propositions().map_err(|e| Failure {
        condition,
        witness: e.to_string(),
    })
}
