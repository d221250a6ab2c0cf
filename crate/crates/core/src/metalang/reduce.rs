use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use super::MLTerm;
use crate::syntax::{fresh_name, Component};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MLRule {
    Beta,
    Proj1,
    Proj2,
    /// `let val x = val M in N -> N[x := M]`
    LetVal,
    /// `let val x = (let val y = N in P) in M -> let val y = N in let val x = P in M`
    Commute,
    /// `let val x = M in val x -> M`
    Eta,
}

impl fmt::Display for MLRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MLRedexSite {
    pub path: Vec<usize>,
    pub rule: MLRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("metalanguage term has no normal form within {fuel} steps")]
pub struct MLFuelExhausted {
    pub fuel: usize,
    pub last: MLTerm,
}

fn root_rules(t: &MLTerm) -> Vec<MLRule> {
    match t {
        MLTerm::App(f, _) if matches!(**f, MLTerm::Lam { .. }) => vec![MLRule::Beta],
        MLTerm::Proj(Component::First, m) if matches!(**m, MLTerm::Pair(..)) => {
            vec![MLRule::Proj1]
        }
        MLTerm::Proj(Component::Second, m) if matches!(**m, MLTerm::Pair(..)) => {
            vec![MLRule::Proj2]
        }
        MLTerm::LetVal {
            binder,
            bound,
            body,
        } => {
            let mut rules = Vec::new();
            match **bound {
                MLTerm::Val(_) => rules.push(MLRule::LetVal),
                MLTerm::LetVal { .. } => rules.push(MLRule::Commute),
                _ => {}
            }
            if let MLTerm::Val(inner) = &**body {
                if matches!(&**inner, MLTerm::Var(y) if y == binder) {
                    rules.push(MLRule::Eta);
                }
            }
            rules
        }
        _ => vec![],
    }
}

pub fn ml_redexes(t: &MLTerm) -> Vec<MLRedexSite> {
    fn go(t: &MLTerm, path: &mut Vec<usize>, out: &mut Vec<MLRedexSite>) {
        for rule in root_rules(t) {
            out.push(MLRedexSite {
                path: path.clone(),
                rule,
            });
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn ml_contract(t: &MLTerm, rule: MLRule) -> Option<MLTerm> {
    match (rule, t) {
        (MLRule::Beta, MLTerm::App(f, a)) => match &**f {
            MLTerm::Lam { binder, body, .. } => Some(body.substitute(binder, a)),
            _ => None,
        },
        (MLRule::Proj1, MLTerm::Proj(Component::First, m)) => match &**m {
            MLTerm::Pair(l, _) => Some((**l).clone()),
            _ => None,
        },
        (MLRule::Proj2, MLTerm::Proj(Component::Second, m)) => match &**m {
            MLTerm::Pair(_, r) => Some((**r).clone()),
            _ => None,
        },
        (
            MLRule::LetVal,
            MLTerm::LetVal {
                binder,
                bound,
                body,
            },
        ) => match &**bound {
            MLTerm::Val(m) => Some(body.substitute(binder, m)),
            _ => None,
        },
        (
            MLRule::Commute,
            MLTerm::LetVal {
                binder: x,
                bound,
                body: m,
            },
        ) => match &**bound {
            MLTerm::LetVal {
                binder: y,
                bound: n,
                body: p,
            } => {
                let m_fv = m.free_vars();
                let (y, p) = if y != x && m_fv.contains(y) {
                    let mut avoid = m_fv;
                    avoid.extend(p.free_vars());
                    avoid.insert(x.clone());
                    let fresh = fresh_name(y, &avoid);
                    let p = p.substitute(y, &MLTerm::Var(fresh.clone()));
                    (fresh, p)
                } else {
                    (y.clone(), (**p).clone())
                };
                Some(MLTerm::let_val(
                    y,
                    (**n).clone(),
                    MLTerm::let_val(x.clone(), p, (**m).clone()),
                ))
            }
            _ => None,
        },
        (MLRule::Eta, MLTerm::LetVal { bound, .. }) => Some((**bound).clone()),
        _ => None,
    }
}

pub fn ml_step(t: &MLTerm, site: &MLRedexSite) -> Option<MLTerm> {
    let redex = t.subterm(&site.path)?;
    if !root_rules(redex).contains(&site.rule) {
        return None;
    }
    let contractum = ml_contract(redex, site.rule)?;
    t.replace_at(&site.path, contractum)
}

pub fn ml_reducts(t: &MLTerm) -> Vec<(MLRedexSite, MLTerm)> {
    ml_redexes(t)
        .into_iter()
        .map(|s| {
            let next = ml_step(t, &s).expect("enumerated site matches");
            (s, next)
        })
        .collect()
}

/// Leftmost-outermost normalization; returns the normal form and the
/// number of steps taken.
pub fn ml_normalize(t: &MLTerm, fuel: usize) -> Result<(MLTerm, usize), MLFuelExhausted> {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some(site) = ml_redexes(&cur).into_iter().next() {
        if steps >= fuel {
            return Err(MLFuelExhausted { fuel, last: cur });
        }
        cur = ml_step(&cur, &site).expect("site matches");
        steps += 1;
    }
    Ok((cur, steps))
}

/// Breadth-first search from `from` for a term α-equivalent to `goal`,
/// expanding at most `fuel` terms. Returns the reduction distance.
pub fn ml_reachable(from: &MLTerm, goal: &MLTerm, fuel: usize) -> Option<usize> {
    let goal_key = goal.alpha_key();
    let start = from.alpha_key();
    if start == goal_key {
        return Some(0);
    }
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([(from.clone(), 0usize)]);
    let mut expansions = 0;
    while let Some((cur, depth)) = queue.pop_front() {
        if expansions >= fuel {
            return None;
        }
        expansions += 1;
        for (_, next) in ml_reducts(&cur) {
            let k = next.alpha_key();
            if k == goal_key {
                return Some(depth + 1);
            }
            if seen.insert(k) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ml_term;

    fn tm(s: &str) -> MLTerm {
        parse_ml_term(s).unwrap()
    }

    #[test]
    fn modal_rules() {
        let (n, _) = ml_normalize(&tm("let val x = val m in val x"), 10).unwrap();
        assert_eq!(n, tm("val m"));
        let t = tm("let val x = (let val y = n in p) in m");
        let sites = ml_redexes(&t);
        assert_eq!(sites[0].rule, MLRule::Commute);
        assert_eq!(
            ml_step(&t, &sites[0]).unwrap(),
            tm("let val y = n in (let val x = p in m)")
        );
        let (n, _) = ml_normalize(&tm("let val x = m in val x"), 10).unwrap();
        assert_eq!(n, tm("m"));
    }

    #[test]
    fn commuting_conversion_renames_captured_binder() {
        // y is free in the outer body, so the inner binder must move aside
        let t = tm("let val x = (let val y = n in p y) in f x y");
        let r = ml_step(&t, &ml_redexes(&t)[0]).unwrap();
        assert!(
            r.alpha_eq(&tm("let val y1 = n in let val x = p y1 in f x y")),
            "{r}"
        );
    }

    #[test]
    fn reachability() {
        let t = tm("let val x = val a in let val y = val b in val <x, y>");
        assert_eq!(ml_reachable(&t, &tm("val <a, b>"), 100), Some(2));
        assert_eq!(ml_reachable(&t, &tm("val <b, a>"), 100), None);
    }
}
