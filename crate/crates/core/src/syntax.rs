//! Abstract syntax of the modal calculus: types, terms, typing contexts,
//! free variables, capture-avoiding substitution and α-equivalence.
//!
//! Variables are named. Binders are renamed on demand when a substitution
//! would capture; fresh names are the binder's base name plus the smallest
//! numeric suffix not already in use, so renaming is deterministic.
//!
//! The modal binder `let o x1,..,xn = M1,..,Mn in N` scopes its binders over
//! `N` only, and `N` sees nothing but those binders: free variables of the
//! body do not contribute to the free variables of the whole term and
//! substitution never enters the body.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Words that can never be used as variable names.
pub const RESERVED: &[&str] = &["let", "o", "in", "pure", "p1", "p2", "val", "O", "V", "_"];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Atom(String),
    Arrow(Box<Type>, Box<Type>),
    Product(Box<Type>, Box<Type>),
    Circle(Box<Type>),
}

impl Type {
    pub fn atom(name: impl Into<String>) -> Type {
        Type::Atom(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn product(left: Type, right: Type) -> Type {
        Type::Product(Box::new(left), Box::new(right))
    }

    pub fn circle(body: Type) -> Type {
        Type::Circle(Box::new(body))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Atom(a) => {
                out.insert(a.clone());
            }
            Type::Arrow(a, b) | Type::Product(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Type::Circle(a) => a.collect_atoms(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Atom(_) => 1,
            Type::Arrow(a, b) | Type::Product(a, b) => 1 + a.size() + b.size(),
            Type::Circle(a) => 1 + a.size(),
        }
    }
}

/// Which half of a pair a projection selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    First,
    Second,
}

impl Component {
    pub fn index(self) -> u8 {
        match self {
            Component::First => 1,
            Component::Second => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// `\x:T. M`; the annotation is optional in the syntax but required by
    /// the type checker.
    Lam {
        binder: String,
        ann: Option<Type>,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(Component, Box<Term>),
    Pure(Box<Term>),
    /// `let o x1,..,xn = M1,..,Mn in N`, possibly with n = 0.
    Let {
        binders: Vec<String>,
        args: Vec<Term>,
        body: Box<Term>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("variable `{0}` is substituted more than once")]
    DuplicateSubstitution(String),
    #[error("context declares `{0}` more than once")]
    DuplicateContextEntry(String),
    #[error("term is not well-formed: {0}")]
    IllFormed(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(binder: impl Into<String>, ann: Option<Type>, body: Term) -> Term {
        Term::Lam {
            binder: binder.into(),
            ann,
            body: Box::new(body),
        }
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn pair(left: Term, right: Term) -> Term {
        Term::Pair(Box::new(left), Box::new(right))
    }

    pub fn proj(which: Component, body: Term) -> Term {
        Term::Proj(which, Box::new(body))
    }

    pub fn pure(body: Term) -> Term {
        Term::Pure(Box::new(body))
    }

    pub fn let_circ<S: Into<String>>(binders: Vec<S>, args: Vec<Term>, body: Term) -> Term {
        Term::Let {
            binders: binders.into_iter().map(Into::into).collect(),
            args,
            body: Box::new(body),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Immediate subterms in path order: a `Let` lists its arguments first
    /// and its body last.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) => vec![],
            Term::Lam { body, .. } => vec![body],
            Term::App(f, a) | Term::Pair(f, a) => vec![f, a],
            Term::Proj(_, m) | Term::Pure(m) => vec![m],
            Term::Let { args, body, .. } => args.iter().chain(std::iter::once(&**body)).collect(),
        }
    }

    fn child_mut(&mut self, index: usize) -> Option<&mut Term> {
        match self {
            Term::Var(_) => None,
            Term::Lam { body, .. } if index == 0 => Some(body),
            Term::App(f, a) | Term::Pair(f, a) => match index {
                0 => Some(f),
                1 => Some(a),
                _ => None,
            },
            Term::Proj(_, m) | Term::Pure(m) if index == 0 => Some(m),
            Term::Let { args, body, .. } => {
                if index < args.len() {
                    Some(&mut args[index])
                } else if index == args.len() {
                    Some(body)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Copy of `self` with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], replacement: Term) -> Option<Term> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in path {
            cur = cur.child_mut(i)?;
        }
        *cur = replacement;
        Some(out)
    }

    pub fn well_formed(&self) -> bool {
        self.ill_formed_reason().is_none()
    }

    pub fn ill_formed_reason(&self) -> Option<String> {
        if let Term::Let { binders, args, .. } = self {
            if binders.len() != args.len() {
                return Some(format!(
                    "let binds {} variables to {} arguments",
                    binders.len(),
                    args.len()
                ));
            }
            let mut seen = BTreeSet::new();
            for b in binders {
                if !seen.insert(b) {
                    return Some(format!("let binds `{b}` twice"));
                }
            }
        }
        self.children()
            .into_iter()
            .find_map(|c| c.ill_formed_reason())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Term::Lam { binder, body, .. } => {
                bound.push(binder);
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Proj(_, m) | Term::Pure(m) => m.collect_free(bound, out),
            Term::Let { args, .. } => {
                for a in args {
                    a.collect_free(bound, out);
                }
            }
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Lam { binder, body, .. } => binder != x && body.occurs_free(x),
            Term::App(a, b) | Term::Pair(a, b) => a.occurs_free(x) || b.occurs_free(x),
            Term::Proj(_, m) | Term::Pure(m) => m.occurs_free(x),
            Term::Let { args, .. } => args.iter().any(|a| a.occurs_free(x)),
        }
    }

    /// Capture-avoiding `self[x := s]`.
    pub fn substitute(&self, x: &str, s: &Term) -> Term {
        let mut map = BTreeMap::new();
        map.insert(x.to_string(), s.clone());
        self.subst_map(&Substitution::new(map))
    }

    /// Simultaneous substitution: no substituted term is re-scanned for the
    /// other names in the list.
    pub fn substitute_sim(&self, pairs: &[(String, Term)]) -> Result<Term, SyntaxError> {
        let mut map = BTreeMap::new();
        for (x, s) in pairs {
            if map.insert(x.clone(), s.clone()).is_some() {
                return Err(SyntaxError::DuplicateSubstitution(x.clone()));
            }
        }
        Ok(self.subst_map(&Substitution::new(map)))
    }

    fn subst_map(&self, sub: &Substitution) -> Term {
        if sub.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(y) => sub.get(y).cloned().unwrap_or_else(|| self.clone()),
            Term::Lam { binder, ann, body } => {
                let inner = sub.without(binder);
                let live: Vec<&String> = inner.map.keys().filter(|k| body.occurs_free(k)).collect();
                if live.is_empty() {
                    return self.clone();
                }
                let captures = live.iter().any(|k| inner.fv[*k].contains(binder));
                if captures {
                    let mut avoid = body.free_vars();
                    for k in inner.map.keys() {
                        avoid.insert(k.clone());
                        avoid.extend(inner.fv[k].iter().cloned());
                    }
                    let fresh = fresh_name(binder, &avoid);
                    let renamed = body.substitute(binder, &Term::Var(fresh.clone()));
                    Term::Lam {
                        binder: fresh,
                        ann: ann.clone(),
                        body: Box::new(renamed.subst_map(&inner)),
                    }
                } else {
                    Term::Lam {
                        binder: binder.clone(),
                        ann: ann.clone(),
                        body: Box::new(body.subst_map(&inner)),
                    }
                }
            }
            Term::App(a, b) => Term::app(a.subst_map(sub), b.subst_map(sub)),
            Term::Pair(a, b) => Term::pair(a.subst_map(sub), b.subst_map(sub)),
            Term::Proj(i, m) => Term::proj(*i, m.subst_map(sub)),
            Term::Pure(m) => Term::pure(m.subst_map(sub)),
            Term::Let {
                binders,
                args,
                body,
            } => Term::Let {
                binders: binders.clone(),
                args: args.iter().map(|a| a.subst_map(sub)).collect(),
                body: body.clone(),
            },
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// A string that is equal for two terms exactly when they are
    /// α-equivalent; bound variables are replaced by binding depth.
    pub fn alpha_key(&self) -> String {
        let mut out = String::new();
        key(self, &mut Vec::new(), &mut out);
        out
    }
}

struct Substitution {
    map: BTreeMap<String, Term>,
    fv: BTreeMap<String, BTreeSet<String>>,
}

impl Substitution {
    fn new(map: BTreeMap<String, Term>) -> Self {
        let fv = map
            .iter()
            .map(|(k, v)| (k.clone(), v.free_vars()))
            .collect();
        Substitution { map, fv }
    }

    fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn get(&self, x: &str) -> Option<&Term> {
        self.map.get(x)
    }

    fn without(&self, x: &str) -> Substitution {
        if !self.map.contains_key(x) {
            return Substitution {
                map: self.map.clone(),
                fv: self.fv.clone(),
            };
        }
        let mut map = self.map.clone();
        let mut fv = self.fv.clone();
        map.remove(x);
        fv.remove(x);
        Substitution { map, fv }
    }
}

fn lookup(env: &[&str], x: &str) -> Option<usize> {
    env.iter().rposition(|b| *b == x)
}

fn alpha<'a>(a: &'a Term, b: &'a Term, ea: &mut Vec<&'a str>, eb: &mut Vec<&'a str>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (lookup(ea, x), lookup(eb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (
            Term::Lam {
                binder: x,
                ann: s,
                body: m,
            },
            Term::Lam {
                binder: y,
                ann: t,
                body: n,
            },
        ) => {
            if s != t {
                return false;
            }
            ea.push(x);
            eb.push(y);
            let ok = alpha(m, n, ea, eb);
            ea.pop();
            eb.pop();
            ok
        }
        (Term::App(a1, a2), Term::App(b1, b2)) | (Term::Pair(a1, a2), Term::Pair(b1, b2)) => {
            alpha(a1, b1, ea, eb) && alpha(a2, b2, ea, eb)
        }
        (Term::Proj(i, m), Term::Proj(j, n)) => i == j && alpha(m, n, ea, eb),
        (Term::Pure(m), Term::Pure(n)) => alpha(m, n, ea, eb),
        (
            Term::Let {
                binders: xs,
                args: ms,
                body: m,
            },
            Term::Let {
                binders: ys,
                args: ns,
                body: n,
            },
        ) => {
            if xs.len() != ys.len() || ms.len() != ns.len() {
                return false;
            }
            if !ms.iter().zip(ns).all(|(m, n)| alpha(m, n, ea, eb)) {
                return false;
            }
            let mut ba: Vec<&str> = xs.iter().map(String::as_str).collect();
            let mut bb: Vec<&str> = ys.iter().map(String::as_str).collect();
            alpha(m, n, &mut ba, &mut bb)
        }
        _ => false,
    }
}

fn key<'a>(t: &'a Term, env: &mut Vec<&'a str>, out: &mut String) {
    use std::fmt::Write;
    match t {
        Term::Var(x) => match lookup(env, x) {
            Some(i) => write!(out, "#{i}").unwrap(),
            None => write!(out, "${x}").unwrap(),
        },
        Term::Lam { binder, ann, body } => {
            out.push_str("(L");
            if let Some(ty) = ann {
                write!(out, "[{ty}]").unwrap();
            }
            out.push(' ');
            env.push(binder);
            key(body, env, out);
            env.pop();
            out.push(')');
        }
        Term::App(a, b) => {
            out.push_str("(A ");
            key(a, env, out);
            out.push(' ');
            key(b, env, out);
            out.push(')');
        }
        Term::Pair(a, b) => {
            out.push_str("(P ");
            key(a, env, out);
            out.push(' ');
            key(b, env, out);
            out.push(')');
        }
        Term::Proj(i, m) => {
            write!(out, "(p{} ", i.index()).unwrap();
            key(m, env, out);
            out.push(')');
        }
        Term::Pure(m) => {
            out.push_str("(U ");
            key(m, env, out);
            out.push(')');
        }
        Term::Let {
            binders,
            args,
            body,
        } => {
            write!(out, "(O{}", binders.len()).unwrap();
            for a in args {
                out.push(' ');
                key(a, env, out);
            }
            out.push_str(" | ");
            let mut inner: Vec<&str> = binders.iter().map(String::as_str).collect();
            key(body, &mut inner, out);
            out.push(')');
        }
    }
}

/// `base` with its numeric suffix stripped, plus the smallest positive
/// suffix giving a name outside `avoid` that is not reserved.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !avoid.contains(cand) && !is_reserved(cand))
        .expect("unbounded supply")
}

/// An ordered list of typing declarations with pairwise distinct names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Type)>,
}

impl Context {
    pub fn empty() -> Self {
        Context::default()
    }

    pub fn new(entries: Vec<(String, Type)>) -> Result<Self, SyntaxError> {
        let mut seen = BTreeSet::new();
        for (x, _) in &entries {
            if !seen.insert(x.clone()) {
                return Err(SyntaxError::DuplicateContextEntry(x.clone()));
            }
        }
        Ok(Context { entries })
    }

    pub fn from_pairs<S: Into<String>>(pairs: Vec<(S, Type)>) -> Result<Self, SyntaxError> {
        Context::new(pairs.into_iter().map(|(x, t)| (x.into(), t)).collect())
    }

    pub fn lookup(&self, x: &str) -> Option<&Type> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    /// Adds `x : ty`, replacing an earlier declaration of `x` if any.
    pub fn extend(&self, x: &str, ty: Type) -> Context {
        let mut entries: Vec<(String, Type)> = self
            .entries
            .iter()
            .filter(|(y, _)| y != x)
            .cloned()
            .collect();
        entries.push((x.to_string(), ty));
        Context { entries }
    }

    pub fn restrict(&self, names: &BTreeSet<String>) -> Context {
        Context {
            entries: self
                .entries
                .iter()
                .filter(|(x, _)| names.contains(x))
                .cloned()
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(String, Type)] {
        &self.entries
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.entries.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_subset_of(&self, other: &Context) -> bool {
        self.entries.iter().all(|(x, t)| other.lookup(x) == Some(t))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_type(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_term(self))
    }
}
