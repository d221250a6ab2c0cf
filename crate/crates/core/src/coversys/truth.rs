use std::collections::BTreeMap;

use super::system::CoverSystem;
use super::CoverError;
use crate::formula::Formula;

/// Interpretation of predicate symbols: for a name and argument tuple of
/// domain indices, the proposition it denotes. A letter is a predicate of
/// arity zero.
pub trait Interpretation {
    fn lookup(&self, name: &str, args: &[usize]) -> Option<u64>;
}

impl Interpretation for BTreeMap<String, u64> {
    fn lookup(&self, name: &str, args: &[usize]) -> Option<u64> {
        if args.is_empty() {
            self.get(name).copied()
        } else {
            None
        }
    }
}

/// A cover system with a finite domain and a valuation of predicates.
/// Tuples absent from the valuation denote the least proposition `j∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateModel {
    pub system: CoverSystem,
    pub domain: Vec<String>,
    pub valuation: BTreeMap<(String, usize), BTreeMap<Vec<usize>, u64>>,
}

impl Interpretation for PredicateModel {
    fn lookup(&self, name: &str, args: &[usize]) -> Option<u64> {
        let table = self.valuation.get(&(name.to_string(), args.len()))?;
        Some(table.get(args).copied().unwrap_or_else(|| self.system.j(0)))
    }
}

impl PredicateModel {
    /// Checks that every valued tuple denotes a proposition and every
    /// argument is in the domain.
    pub fn new(
        system: CoverSystem,
        domain: Vec<String>,
        valuation: BTreeMap<(String, usize), BTreeMap<Vec<usize>, u64>>,
    ) -> Result<PredicateModel, CoverError> {
        for ((name, arity), table) in &valuation {
            for (args, &set) in table {
                if args.len() != *arity || args.iter().any(|&d| d >= domain.len()) {
                    return Err(CoverError::OutOfRange(format!("arguments of `{name}`")));
                }
                if set & !system.all() != 0
                    || !system.poset().is_up_set(set)
                    || !system.is_localised(set)
                {
                    return Err(CoverError::NotAProposition(format!("value of `{name}`")));
                }
            }
        }
        Ok(PredicateModel {
            system,
            domain,
            valuation,
        })
    }

    pub fn truth_set(
        &self,
        phi: &Formula,
        sigma: &BTreeMap<String, usize>,
    ) -> Result<u64, CoverError> {
        truth_set(&self.system, self.domain.len(), self, phi, sigma)
    }
}

fn resolve(
    name: &str,
    args: &[String],
    sigma: &BTreeMap<String, usize>,
    interp: &dyn Interpretation,
) -> Result<u64, CoverError> {
    let vals = args
        .iter()
        .map(|a| {
            sigma
                .get(a)
                .copied()
                .ok_or_else(|| CoverError::UnassignedVariable(a.clone()))
        })
        .collect::<Result<Vec<usize>, _>>()?;
    interp
        .lookup(name, &vals)
        .ok_or_else(|| CoverError::UnboundPredicate {
            name: name.to_string(),
            arity: args.len(),
        })
}

/// `||phi||` under assignment `sigma`, by the clauses: `⊥` is `j∅`, `∨` and
/// `∃` apply `j` to the union, `∧` and `∀` intersect, `→` is the up-set
/// arrow and `O` is `<R>`. Quantifiers range over `0..domain`. The result
/// is checked to be a proposition.
pub fn truth_set(
    s: &CoverSystem,
    domain: usize,
    interp: &dyn Interpretation,
    phi: &Formula,
    sigma: &BTreeMap<String, usize>,
) -> Result<u64, CoverError> {
    let out = eval(s, domain, interp, phi, sigma)?;
    if !s.poset().is_up_set(out) || !s.is_localised(out) {
        return Err(CoverError::NotAProposition(crate::parser::print_formula(
            phi,
        )));
    }
    Ok(out)
}

fn eval(
    s: &CoverSystem,
    domain: usize,
    interp: &dyn Interpretation,
    phi: &Formula,
    sigma: &BTreeMap<String, usize>,
) -> Result<u64, CoverError> {
    let rec = |f: &Formula, sg: &BTreeMap<String, usize>| eval(s, domain, interp, f, sg);
    Ok(match phi {
        Formula::Letter(p) => resolve(p, &[], sigma, interp)?,
        Formula::Pred(p, args) => resolve(p, args, sigma, interp)?,
        Formula::Bottom => s.j(0),
        Formula::And(a, b) => rec(a, sigma)? & rec(b, sigma)?,
        Formula::Or(a, b) => s.j(rec(a, sigma)? | rec(b, sigma)?),
        Formula::Implies(a, b) => s.arrow(rec(a, sigma)?, rec(b, sigma)?),
        Formula::Circ(a) => s.diamond(rec(a, sigma)?)?,
        Formula::Forall(x, body) => {
            let mut acc = s.all();
            for d in 0..domain {
                let mut sg = sigma.clone();
                sg.insert(x.clone(), d);
                acc &= rec(body, &sg)?;
            }
            acc
        }
        Formula::Exists(x, body) => {
            let mut acc = 0;
            for d in 0..domain {
                let mut sg = sigma.clone();
                sg.insert(x.clone(), d);
                acc |= rec(body, &sg)?;
            }
            s.j(acc)
        }
    })
}

/// Point-wise forcing `x, sigma ⊩ phi`: `⊥` holds where the empty set
/// covers, `∨` and `∃` hold where some cover has every member forcing a
/// disjunct or some instance, `→` quantifies over the cone, and `O phi`
/// holds where some `R`-successor forces `phi`.
pub fn forces_at(
    s: &CoverSystem,
    domain: usize,
    interp: &dyn Interpretation,
    x: usize,
    phi: &Formula,
    sigma: &BTreeMap<String, usize>,
) -> Result<bool, CoverError> {
    let rec = |y: usize, f: &Formula, sg: &BTreeMap<String, usize>| {
        forces_at(s, domain, interp, y, f, sg)
    };
    let cover_all = |pred: &dyn Fn(usize) -> Result<bool, CoverError>| -> Result<bool, CoverError> {
        for &c in s.covers_of(x) {
            let mut all = true;
            for y in super::poset::members(c) {
                if !pred(y)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    };
    Ok(match phi {
        Formula::Letter(p) => resolve(p, &[], sigma, interp)? & (1 << x) != 0,
        Formula::Pred(p, args) => resolve(p, args, sigma, interp)? & (1 << x) != 0,
        Formula::Bottom => s.is_cover(x, 0),
        Formula::And(a, b) => rec(x, a, sigma)? && rec(x, b, sigma)?,
        Formula::Or(a, b) => cover_all(&|y| Ok(rec(y, a, sigma)? || rec(y, b, sigma)?))?,
        Formula::Implies(a, b) => {
            for y in super::poset::members(s.poset().up(x)) {
                if rec(y, a, sigma)? && !rec(y, b, sigma)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Circ(a) => {
            let r = s.relation().ok_or(CoverError::NoRelation)?;
            for y in super::poset::members(r[x]) {
                if rec(y, a, sigma)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Forall(v, body) => {
            for d in 0..domain {
                let mut sg = sigma.clone();
                sg.insert(v.clone(), d);
                if !rec(x, body, &sg)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Exists(v, body) => cover_all(&|y| {
            for d in 0..domain {
                let mut sg = sigma.clone();
                sg.insert(v.clone(), d);
                if rec(y, body, &sg)? {
                    return Ok(true);
                }
            }
            Ok(false)
        })?,
    })
}
