use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{fresh_name, Component};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MLType {
    Atom(String),
    Arrow(Box<MLType>, Box<MLType>),
    Product(Box<MLType>, Box<MLType>),
    /// The computation type `V A`.
    Nabla(Box<MLType>),
}

impl MLType {
    pub fn arrow(a: MLType, b: MLType) -> MLType {
        MLType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn product(a: MLType, b: MLType) -> MLType {
        MLType::Product(Box::new(a), Box::new(b))
    }

    pub fn nabla(a: MLType) -> MLType {
        MLType::Nabla(Box::new(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MLTerm {
    Var(String),
    Lam {
        binder: String,
        ann: Option<MLType>,
        body: Box<MLTerm>,
    },
    App(Box<MLTerm>, Box<MLTerm>),
    Pair(Box<MLTerm>, Box<MLTerm>),
    Proj(Component, Box<MLTerm>),
    Val(Box<MLTerm>),
    /// `let val x = M in N`; `x` scopes over `N`, which also sees every
    /// variable in scope around the let.
    LetVal {
        binder: String,
        bound: Box<MLTerm>,
        body: Box<MLTerm>,
    },
}

impl MLTerm {
    pub fn var(x: impl Into<String>) -> MLTerm {
        MLTerm::Var(x.into())
    }

    pub fn lam(binder: impl Into<String>, ann: Option<MLType>, body: MLTerm) -> MLTerm {
        MLTerm::Lam {
            binder: binder.into(),
            ann,
            body: Box::new(body),
        }
    }

    pub fn app(f: MLTerm, a: MLTerm) -> MLTerm {
        MLTerm::App(Box::new(f), Box::new(a))
    }

    pub fn pair(l: MLTerm, r: MLTerm) -> MLTerm {
        MLTerm::Pair(Box::new(l), Box::new(r))
    }

    pub fn proj(which: Component, m: MLTerm) -> MLTerm {
        MLTerm::Proj(which, Box::new(m))
    }

    pub fn val(m: MLTerm) -> MLTerm {
        MLTerm::Val(Box::new(m))
    }

    pub fn let_val(binder: impl Into<String>, bound: MLTerm, body: MLTerm) -> MLTerm {
        MLTerm::LetVal {
            binder: binder.into(),
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    /// Immediate subterms; a `LetVal` lists the bound term, then the body.
    pub fn children(&self) -> Vec<&MLTerm> {
        match self {
            MLTerm::Var(_) => vec![],
            MLTerm::Lam { body, .. } => vec![body],
            MLTerm::App(a, b) | MLTerm::Pair(a, b) => vec![a, b],
            MLTerm::Proj(_, m) | MLTerm::Val(m) => vec![m],
            MLTerm::LetVal { bound, body, .. } => vec![bound, body],
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut MLTerm> {
        match (self, i) {
            (MLTerm::Lam { body, .. }, 0) => Some(body),
            (MLTerm::App(a, _) | MLTerm::Pair(a, _), 0) => Some(a),
            (MLTerm::App(_, b) | MLTerm::Pair(_, b), 1) => Some(b),
            (MLTerm::Proj(_, m) | MLTerm::Val(m), 0) => Some(m),
            (MLTerm::LetVal { bound, .. }, 0) => Some(bound),
            (MLTerm::LetVal { body, .. }, 1) => Some(body),
            _ => None,
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&MLTerm> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn replace_at(&self, path: &[usize], replacement: MLTerm) -> Option<MLTerm> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in path {
            cur = cur.child_mut(i)?;
        }
        *cur = replacement;
        Some(out)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            MLTerm::Var(x) => BTreeSet::from([x.clone()]),
            MLTerm::Lam { binder, body, .. } => {
                let mut s = body.free_vars();
                s.remove(binder);
                s
            }
            MLTerm::App(a, b) | MLTerm::Pair(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            MLTerm::Proj(_, m) | MLTerm::Val(m) => m.free_vars(),
            MLTerm::LetVal {
                binder,
                bound,
                body,
            } => {
                let mut s = body.free_vars();
                s.remove(binder);
                s.extend(bound.free_vars());
                s
            }
        }
    }

    /// Capture-avoiding `self[x := s]`.
    pub fn substitute(&self, x: &str, s: &MLTerm) -> MLTerm {
        let map = BTreeMap::from([(x.to_string(), s.clone())]);
        self.subst_map(&map)
    }

    /// Simultaneous substitution; later pairs win on duplicate names.
    pub fn substitute_sim(&self, pairs: &[(String, MLTerm)]) -> MLTerm {
        let map: BTreeMap<String, MLTerm> = pairs.iter().cloned().collect();
        self.subst_map(&map)
    }

    fn subst_map(&self, map: &BTreeMap<String, MLTerm>) -> MLTerm {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            MLTerm::Var(y) => map.get(y).cloned().unwrap_or_else(|| self.clone()),
            MLTerm::Lam { binder, ann, body } => {
                let (binder, body) = under_binder(binder, body, map);
                MLTerm::Lam {
                    binder,
                    ann: ann.clone(),
                    body: Box::new(body),
                }
            }
            MLTerm::App(a, b) => MLTerm::app(a.subst_map(map), b.subst_map(map)),
            MLTerm::Pair(a, b) => MLTerm::pair(a.subst_map(map), b.subst_map(map)),
            MLTerm::Proj(i, m) => MLTerm::proj(*i, m.subst_map(map)),
            MLTerm::Val(m) => MLTerm::val(m.subst_map(map)),
            MLTerm::LetVal {
                binder,
                bound,
                body,
            } => {
                let bound = bound.subst_map(map);
                let (binder, body) = under_binder(binder, body, map);
                MLTerm::let_val(binder, bound, body)
            }
        }
    }

    pub fn alpha_eq(&self, other: &MLTerm) -> bool {
        self.alpha_key() == other.alpha_key()
    }

    /// Canonical string with bound variables replaced by binding depth.
    pub fn alpha_key(&self) -> String {
        let mut out = String::new();
        key(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Pushes a substitution under a binder, renaming it when it would capture.
fn under_binder(binder: &str, body: &MLTerm, map: &BTreeMap<String, MLTerm>) -> (String, MLTerm) {
    let mut inner = map.clone();
    inner.remove(binder);
    let body_fv = body.free_vars();
    inner.retain(|k, _| body_fv.contains(k));
    if inner.is_empty() {
        return (binder.to_string(), body.clone());
    }
    let captures = inner.values().any(|v| v.free_vars().contains(binder));
    if !captures {
        return (binder.to_string(), body.subst_map(&inner));
    }
    let mut avoid = body_fv;
    for (k, v) in &inner {
        avoid.insert(k.clone());
        avoid.extend(v.free_vars());
    }
    let fresh = fresh_name(binder, &avoid);
    let renamed = body.substitute(binder, &MLTerm::Var(fresh.clone()));
    (fresh, renamed.subst_map(&inner))
}

fn key<'a>(t: &'a MLTerm, env: &mut Vec<&'a str>, out: &mut String) {
    use std::fmt::Write;
    let lookup = |env: &[&str], x: &str| env.iter().rposition(|b| *b == x);
    match t {
        MLTerm::Var(x) => match lookup(env, x) {
            Some(i) => write!(out, "#{i}").unwrap(),
            None => write!(out, "${x}").unwrap(),
        },
        MLTerm::Lam { binder, ann, body } => {
            out.push_str("(L");
            if let Some(a) = ann {
                write!(out, "[{a}]").unwrap();
            }
            out.push(' ');
            env.push(binder);
            key(body, env, out);
            env.pop();
            out.push(')');
        }
        MLTerm::App(a, b) | MLTerm::Pair(a, b) => {
            out.push_str(if matches!(t, MLTerm::App(..)) {
                "(A "
            } else {
                "(P "
            });
            key(a, env, out);
            out.push(' ');
            key(b, env, out);
            out.push(')');
        }
        MLTerm::Proj(i, m) => {
            write!(out, "(p{} ", i.index()).unwrap();
            key(m, env, out);
            out.push(')');
        }
        MLTerm::Val(m) => {
            out.push_str("(V ");
            key(m, env, out);
            out.push(')');
        }
        MLTerm::LetVal {
            binder,
            bound,
            body,
        } => {
            out.push_str("(LV ");
            key(bound, env, out);
            out.push(' ');
            env.push(binder);
            key(body, env, out);
            env.pop();
            out.push(')');
        }
    }
}

impl fmt::Display for MLType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_ml_type(self))
    }
}

impl fmt::Display for MLTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_ml_term(self))
    }
}
