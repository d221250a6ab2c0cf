//! One-step reduction, leftmost-outermost normalization, joinability search
//! and reduction equality.
//!
//! The six contraction rules:
//!
//! | rule         | redex                                         | contractum                              |
//! |--------------|-----------------------------------------------|-----------------------------------------|
//! | `Beta`       | `(\x. M) N`                                   | `M[x := N]`                             |
//! | `Proj1/2`    | `p1 <M, N>` / `p2 <M, N>`                     | `M` / `N`                               |
//! | `LetFlatten` | `let o xs, y, zs = Ms, (let o ws = Ns in Q), Ps in R` | `let o xs, ws, zs = Ms, Ns, Ps in R[y := Q]` |
//! | `LetPure`    | `let o xs = pure M1, .., pure Mn in N` (n ≥ 1) | `pure N[xs := Ms]`                      |
//! | `LetEmpty`   | `let o _ = _ in M`                            | `pure M`                                |
//!
//! Before flattening, inner binders that clash with the outer binders or
//! with free names of the outer body are renamed.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{fresh_name, Component, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Beta,
    Proj1,
    Proj2,
    /// Flattens the let-argument at the given position.
    LetFlatten(usize),
    LetPure,
    LetEmpty,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Beta => f.write_str("Beta"),
            Rule::Proj1 => f.write_str("Proj1"),
            Rule::Proj2 => f.write_str("Proj2"),
            Rule::LetFlatten(i) => write!(f, "LetFlatten({i})"),
            Rule::LetPure => f.write_str("LetPure"),
            Rule::LetEmpty => f.write_str("LetEmpty"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RedexSite {
    pub path: Vec<usize>,
    pub rule: Rule,
}

impl fmt::Display for RedexSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "{} @ [{}]", self.rule, path.join(","))
    }
}

/// A reduction sequence: each recorded site is contracted in the term
/// paired with it, yielding the next term (or `last` for the final step).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<(Term, RedexSite)>,
    pub last: Term,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The terms after each step, in order.
    pub fn reducts(&self) -> Vec<&Term> {
        self.steps
            .iter()
            .skip(1)
            .map(|(t, _)| t)
            .chain(std::iter::once(&self.last).filter(|_| !self.steps.is_empty()))
            .collect()
    }

    /// One line per step: `<rule> @ <path>  <term after the step>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (site, after) in self.steps.iter().map(|(_, s)| s).zip(self.reducts()) {
            out.push_str(&format!("{site}  {after}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("no {} redex at the given position", .0.rule)]
    SiteMismatch(RedexSite),
    #[error("no normal form within {fuel} steps")]
    FuelExhausted { fuel: usize, partial: Box<Trace> },
}

/// The rules whose left-hand side matches `t` itself, in site order.
fn root_rules(t: &Term) -> Vec<Rule> {
    match t {
        Term::App(f, _) if matches!(**f, Term::Lam { .. }) => vec![Rule::Beta],
        Term::Proj(Component::First, m) if matches!(**m, Term::Pair(..)) => vec![Rule::Proj1],
        Term::Proj(Component::Second, m) if matches!(**m, Term::Pair(..)) => vec![Rule::Proj2],
        Term::Let { args, .. } => {
            if args.is_empty() {
                return vec![Rule::LetEmpty];
            }
            let mut rules: Vec<Rule> = args
                .iter()
                .enumerate()
                .filter(|(_, a)| matches!(a, Term::Let { .. }))
                .map(|(i, _)| Rule::LetFlatten(i))
                .collect();
            if args.iter().all(|a| matches!(a, Term::Pure(_))) {
                rules.push(Rule::LetPure);
            }
            rules
        }
        _ => vec![],
    }
}

/// All redex sites in leftmost-outermost (pre-order) order.
pub fn redexes(t: &Term) -> Vec<RedexSite> {
    let mut out = Vec::new();
    collect(t, &mut Vec::new(), &mut out);
    out
}

fn collect(t: &Term, path: &mut Vec<usize>, out: &mut Vec<RedexSite>) {
    for rule in root_rules(t) {
        out.push(RedexSite {
            path: path.clone(),
            rule,
        });
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect(c, path, out);
        path.pop();
    }
}

/// The leftmost-outermost redex, if any.
pub fn first_redex(t: &Term) -> Option<RedexSite> {
    fn go(t: &Term, path: &mut Vec<usize>) -> Option<RedexSite> {
        if let Some(&rule) = root_rules(t).first() {
            return Some(RedexSite {
                path: path.clone(),
                rule,
            });
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            let found = go(c, path);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    go(t, &mut Vec::new())
}

/// Contracts the redex `t` itself by `rule`.
pub fn contract(t: &Term, rule: Rule) -> Option<Term> {
    match (rule, t) {
        (Rule::Beta, Term::App(f, n)) => match &**f {
            Term::Lam { binder, body, .. } => Some(body.substitute(binder, n)),
            _ => None,
        },
        (Rule::Proj1, Term::Proj(Component::First, m)) => match &**m {
            Term::Pair(l, _) => Some((**l).clone()),
            _ => None,
        },
        (Rule::Proj2, Term::Proj(Component::Second, m)) => match &**m {
            Term::Pair(_, r) => Some((**r).clone()),
            _ => None,
        },
        (
            Rule::LetFlatten(i),
            Term::Let {
                binders,
                args,
                body,
            },
        ) => flatten(binders, args, body, i),
        (
            Rule::LetPure,
            Term::Let {
                binders,
                args,
                body,
            },
        ) if !args.is_empty() => {
            let pairs = binders
                .iter()
                .zip(args)
                .map(|(x, a)| match a {
                    Term::Pure(m) => Some((x.clone(), (**m).clone())),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()?;
            Some(Term::pure(body.substitute_sim(&pairs).ok()?))
        }
        (Rule::LetEmpty, Term::Let { args, body, .. }) if args.is_empty() => {
            Some(Term::pure((**body).clone()))
        }
        _ => None,
    }
}

fn flatten(binders: &[String], args: &[Term], body: &Term, i: usize) -> Option<Term> {
    let Term::Let {
        binders: ws,
        args: ns,
        body: q,
    } = args.get(i)?
    else {
        return None;
    };
    let y = &binders[i];
    let outer: BTreeSet<String> = binders
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, x)| x.clone())
        .collect();
    let mut body_fv = body.free_vars();
    body_fv.remove(y);

    let mut avoid: BTreeSet<String> = outer.clone();
    avoid.extend(body_fv.iter().cloned());
    avoid.extend(ws.iter().cloned());
    avoid.extend(q.free_vars());
    let mut renaming = Vec::new();
    let mut new_ws = Vec::with_capacity(ws.len());
    for w in ws {
        if outer.contains(w) || body_fv.contains(w) {
            let fresh = fresh_name(w, &avoid);
            avoid.insert(fresh.clone());
            renaming.push((w.clone(), Term::Var(fresh.clone())));
            new_ws.push(fresh);
        } else {
            new_ws.push(w.clone());
        }
    }
    let q = q.substitute_sim(&renaming).ok()?;

    let mut new_binders: Vec<String> = binders[..i].to_vec();
    new_binders.extend(new_ws);
    new_binders.extend(binders[i + 1..].iter().cloned());
    let mut new_args: Vec<Term> = args[..i].to_vec();
    new_args.extend(ns.iter().cloned());
    new_args.extend(args[i + 1..].iter().cloned());
    Some(Term::Let {
        binders: new_binders,
        args: new_args,
        body: Box::new(body.substitute(y, &q)),
    })
}

/// Contracts the redex at `site`.
pub fn step(t: &Term, site: &RedexSite) -> Result<Term, ReduceError> {
    let mismatch = || ReduceError::SiteMismatch(site.clone());
    let redex = t.subterm(&site.path).ok_or_else(mismatch)?;
    let contractum = contract(redex, site.rule).ok_or_else(mismatch)?;
    t.replace_at(&site.path, contractum).ok_or_else(mismatch)
}

/// Every one-step reduct, paired with the site contracted.
pub fn reducts(t: &Term) -> Vec<(RedexSite, Term)> {
    redexes(t)
        .into_iter()
        .map(|site| {
            let next = step(t, &site).expect("enumerated site matches");
            (site, next)
        })
        .collect()
}

/// Contracts leftmost-outermost redexes until none is left, for at most
/// `fuel` steps.
pub fn normalize(t: &Term, fuel: usize) -> Result<(Term, Trace), ReduceError> {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    while let Some(site) = first_redex(&cur) {
        if steps.len() >= fuel {
            return Err(ReduceError::FuelExhausted {
                fuel,
                partial: Box::new(Trace { steps, last: cur }),
            });
        }
        let next = step(&cur, &site).expect("first redex matches");
        steps.push((cur, site));
        cur = next;
    }
    Ok((cur.clone(), Trace { steps, last: cur }))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no common reduct found within {expansions} expansions")]
pub struct NotJoined {
    pub expansions: usize,
}

/// Searches both reduction graphs breadth-first, alternating sides, for a
/// term reachable from both (up to α-equivalence). `fuel` bounds the total
/// number of terms whose reducts are computed.
pub fn joinable(t1: &Term, t2: &Term, fuel: usize) -> Result<Term, NotJoined> {
    joinable_counted(t1, t2, fuel).map(|(t, _)| t)
}

/// [`joinable`], also reporting the number of expansions used.
pub fn joinable_counted(t1: &Term, t2: &Term, fuel: usize) -> Result<(Term, usize), NotJoined> {
    struct Side {
        seen: HashMap<String, Term>,
        queue: VecDeque<Term>,
    }
    let start = |t: &Term| Side {
        seen: HashMap::from([(t.alpha_key(), t.clone())]),
        queue: VecDeque::from([t.clone()]),
    };
    if t1.alpha_eq(t2) {
        return Ok((t1.clone(), 0));
    }
    let mut sides = [start(t1), start(t2)];
    let mut expansions = 0;
    let mut turn = 0;
    while expansions < fuel && sides.iter().any(|s| !s.queue.is_empty()) {
        if sides[turn].queue.is_empty() {
            turn = 1 - turn;
        }
        let cur = sides[turn].queue.pop_front().expect("non-empty queue");
        expansions += 1;
        for (_, next) in reducts(&cur) {
            let key = next.alpha_key();
            if sides[1 - turn].seen.contains_key(&key) {
                return Ok((next, expansions));
            }
            if let Entry::Vacant(slot) = sides[turn].seen.entry(key) {
                slot.insert(next.clone());
                sides[turn].queue.push_back(next);
            }
        }
        turn = 1 - turn;
    }
    Err(NotJoined { expansions })
}

/// Whether the two terms have α-equivalent normal forms.
pub fn reduction_equal(t1: &Term, t2: &Term, fuel: usize) -> Result<bool, ReduceError> {
    let (n1, _) = normalize(t1, fuel)?;
    let (n2, _) = normalize(t2, fuel)?;
    Ok(n1.alpha_eq(&n2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;

    fn tm(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn rules(t: &Term) -> Vec<Rule> {
        redexes(t).into_iter().map(|s| s.rule).collect()
    }

    #[test]
    fn site_enumeration() {
        assert_eq!(rules(&tm(r"(\x. x) y")), vec![Rule::Beta]);
        assert_eq!(rules(&tm("let o x = pure m in x")), vec![Rule::LetPure]);
        let sites = redexes(&tm("let o x = (let o _ = _ in m) in x"));
        assert_eq!(
            sites,
            vec![
                RedexSite {
                    path: vec![],
                    rule: Rule::LetFlatten(0)
                },
                RedexSite {
                    path: vec![0],
                    rule: Rule::LetEmpty
                },
            ]
        );
        assert!(redexes(&tm("pure (f x)")).is_empty());
    }

    #[test]
    fn contraction_examples() {
        let t = tm("let o x = pure m in x");
        assert_eq!(step(&t, &redexes(&t)[0]).unwrap(), tm("pure m"));
        let t = tm("let o _ = _ in m");
        assert_eq!(step(&t, &redexes(&t)[0]).unwrap(), tm("pure m"));
        let t = tm("let o x = (let o y = n in q) in r");
        assert_eq!(step(&t, &redexes(&t)[0]).unwrap(), tm("let o y = n in r"));
        let t = tm("let o x = (let o y = n in y) in x");
        assert_eq!(step(&t, &redexes(&t)[0]).unwrap(), tm("let o y = n in y"));
    }

    #[test]
    fn flatten_renames_clashing_inner_binders() {
        // inner binder `a` clashes with the outer binder `a`
        let t = tm("let o a, x = m, (let o a = n in a) in <a, x>");
        let r = step(&t, &redexes(&t)[0]).unwrap();
        assert!(r.alpha_eq(&tm("let o a, a1 = m, n in <a, a1>")), "{r}");
        assert_eq!(r.free_vars(), t.free_vars());
    }

    #[test]
    fn site_mismatch_is_an_error() {
        let t = tm("pure m");
        let bogus = RedexSite {
            path: vec![],
            rule: Rule::Beta,
        };
        assert_eq!(step(&t, &bogus), Err(ReduceError::SiteMismatch(bogus)));
    }

    #[test]
    fn normalization_examples() {
        let (n, trace) = normalize(&tm(r"(\x. pure x) m"), 10).unwrap();
        assert_eq!(n, tm("pure m"));
        assert_eq!(trace.len(), 1);
        let (n, _) = normalize(&tm("let o g,y = pure f, pure x in g y"), 10).unwrap();
        assert_eq!(n, tm("pure (f x)"));
        let (n, trace) = normalize(&tm("p1 <a, b>"), 10).unwrap();
        assert_eq!(n, tm("a"));
        assert_eq!(trace.render(), "Proj1 @ []  a\n");
    }

    #[test]
    fn fuel_exhaustion() {
        let omega = tm(r"(\x. x x) (\x. x x)");
        match normalize(&omega, 5) {
            Err(ReduceError::FuelExhausted { fuel, partial }) => {
                assert_eq!(fuel, 5);
                assert_eq!(partial.len(), 5);
            }
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
        assert!(normalize(&tm("p1 <a, b>"), 0).is_err());
        assert!(normalize(&tm("a"), 0).is_ok());
    }

    #[test]
    fn joinability_examples() {
        let t = tm("pure m");
        assert_eq!(joinable(&t, &t, 1).unwrap(), t);
        let a = tm(r"(\x. x) m");
        assert_eq!(joinable(&a, &tm("m"), 10).unwrap(), tm("m"));
        assert!(joinable(&tm("pure m"), &tm("pure n"), 100).is_err());
    }

    #[test]
    fn reduction_equality_examples() {
        assert!(reduction_equal(&tm(r"(\x.x) m"), &tm("m"), 10).unwrap());
        assert!(reduction_equal(&tm("pure m"), &tm("let o x = pure m in x"), 10).unwrap());
        assert!(!reduction_equal(&tm("pure m"), &tm("pure n"), 10).unwrap());
    }
}
