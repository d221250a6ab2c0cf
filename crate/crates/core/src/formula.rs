//! Modal formulas. Propositional letters are shared by the Kripke and
//! cover-system semantics; predicates and quantifiers are only meaningful
//! over cover systems with a finite domain.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Letter(String),
    /// `P(x1, .., xk)` over individual variables.
    Pred(String, Vec<String>),
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Circ(Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn letter(p: &str) -> Formula {
        Formula::Letter(p.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bottom)
    }

    pub fn top() -> Formula {
        Formula::not(Formula::Bottom)
    }

    pub fn circ(a: Formula) -> Formula {
        Formula::Circ(Box::new(a))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    /// Propositional letters in order of first occurrence.
    pub fn letters(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Letter(p) = f {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        });
        out
    }

    /// Predicate symbols with their arities, sorted.
    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Pred(p, args) => {
                out.insert((p.clone(), args.len()));
            }
            Formula::Letter(p) => {
                out.insert((p.clone(), 0));
            }
            _ => {}
        });
        out
    }

    pub fn is_propositional(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(
                f,
                Formula::Pred(..) | Formula::Forall(..) | Formula::Exists(..)
            ) {
                ok = false;
            }
        });
        ok
    }

    pub fn free_individuals(&self) -> BTreeSet<String> {
        match self {
            Formula::Letter(_) | Formula::Bottom => BTreeSet::new(),
            Formula::Pred(_, args) => args.iter().cloned().collect(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let mut s = a.free_individuals();
                s.extend(b.free_individuals());
                s
            }
            Formula::Circ(a) => a.free_individuals(),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let mut s = a.free_individuals();
                s.remove(x);
                s
            }
        }
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Letter(_) | Formula::Pred(..) | Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Circ(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit(f),
        }
    }

    /// All subformulas, outermost first, without duplicates.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        self.visit(&mut |g| {
            if !out.contains(g) {
                out.push(g.clone());
            }
        });
        out
    }

    /// Replaces each letter by the formula it is mapped to.
    pub fn instantiate(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Letter(p) => map(p).unwrap_or_else(|| self.clone()),
            Formula::Pred(..) | Formula::Bottom => self.clone(),
            Formula::And(a, b) => Formula::and(a.instantiate(map), b.instantiate(map)),
            Formula::Or(a, b) => Formula::or(a.instantiate(map), b.instantiate(map)),
            Formula::Implies(a, b) => Formula::implies(a.instantiate(map), b.instantiate(map)),
            Formula::Circ(a) => Formula::circ(a.instantiate(map)),
            Formula::Forall(x, a) => Formula::forall(x.clone(), a.instantiate(map)),
            Formula::Exists(x, a) => Formula::exists(x.clone(), a.instantiate(map)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_formula(self))
    }
}

/// A named axiom scheme instance over the letters `p`, `q`, `r`.
#[derive(Debug, Clone)]
pub struct Axiom {
    pub name: &'static str,
    pub formula: Formula,
}

fn parse(src: &str) -> Formula {
    crate::parser::parse_formula(src).expect("built-in axiom parses")
}

/// The axiom schemes of the logic, instantiated with distinct letters.
/// Schemes with an index range are listed once per index; the
/// co-reflection scheme is read as `p -> O p`; modus ponens appears as the
/// formula `p & (p -> q) -> q`, whose validity is what soundness of the
/// rule amounts to on a frame.
pub fn iel_minus_axioms() -> Vec<Axiom> {
    [
        ("A1", "(p -> q -> r) -> (p -> q) -> p -> r"),
        ("A2", "p -> q -> p"),
        ("A3", "p -> q -> p & q"),
        ("A4.1", "p & q -> p"),
        ("A4.2", "p & q -> q"),
        ("A5", "(p -> r) -> (q -> r) -> p | q -> r"),
        ("A6.1", "p -> p | q"),
        ("A6.2", "q -> p | q"),
        ("A7", "false -> p"),
        ("A8", "O (p -> q) -> O p -> O q"),
        ("A9", "p -> O p"),
        ("A10", "p & (p -> q) -> q"),
    ]
    .into_iter()
    .map(|(name, src)| Axiom {
        name,
        formula: parse(src),
    })
    .collect()
}

/// Intuitionistic reflection, the extra axiom of the serial logic.
pub fn reflection() -> Formula {
    parse("O p -> ~~p")
}
