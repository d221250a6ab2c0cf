//! Seeded generator of well-typed terms containing redexes.
//!
//! Terms are generated top-down against a target type in a random context,
//! mixing introduction forms, eliminations of context variables and
//! deliberately planted redexes of every rule. Each candidate is accepted
//! only if [`infer`] assigns it the target type, it has at most
//! [`MAX_SIZE`] nodes and at most [`MAX_ATOMS`] atoms, and it has a redex.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::reduce::redexes;
use crate::syntax::{Component, Context, Term, Type};
use crate::typecheck::infer;

pub const MAX_SIZE: usize = 30;
pub const MAX_ATOMS: usize = 4;
pub const DEFAULT_SEED: u64 = 0x1e1;
pub const DEFAULT_COUNT: usize = 1000;

const ATOMS: [&str; 4] = ["a", "b", "c", "d"];
const NAMES: [&str; 8] = ["x", "y", "z", "f", "g", "h", "u", "v"];

/// A term with the context it is typed in and its type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub ctx: Context,
    pub term: Term,
    pub ty: Type,
}

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn atom(&mut self) -> Type {
        Type::atom(*ATOMS.choose(&mut self.rng).expect("non-empty"))
    }

    fn ty(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.gen_bool(0.45) {
            return self.atom();
        }
        match self.rng.gen_range(0..3) {
            0 => Type::arrow(self.ty(depth - 1), self.ty(depth - 1)),
            1 => Type::product(self.ty(depth - 1), self.ty(depth - 1)),
            _ => Type::circle(self.ty(depth - 1)),
        }
    }

    fn name(&mut self) -> String {
        NAMES.choose(&mut self.rng).expect("non-empty").to_string()
    }

    fn distinct_names(&mut self, k: usize) -> Vec<String> {
        let mut pool: Vec<&str> = NAMES.to_vec();
        pool.shuffle(&mut self.rng);
        pool.into_iter().take(k).map(String::from).collect()
    }

    /// A term of type `ty` in `ctx` of roughly `budget` nodes, or `None`.
    fn term(&mut self, ctx: &Context, ty: &Type, budget: usize) -> Option<Term> {
        if budget == 0 {
            return self.var_of(ctx, ty);
        }
        if budget == 1 {
            return self.var_of(ctx, ty).or_else(|| self.elim(ctx, ty, 1));
        }
        let roll = self.rng.gen_range(0..100);
        if roll < 35 {
            if let Some(t) = self.redex(ctx, ty, budget) {
                return Some(t);
            }
        }
        if roll < 45 && budget < 6 {
            if let Some(t) = self.var_of(ctx, ty).or_else(|| self.elim(ctx, ty, budget)) {
                return Some(t);
            }
        }
        self.intro(ctx, ty, budget)
            .or_else(|| self.var_of(ctx, ty))
            .or_else(|| self.elim(ctx, ty, budget))
    }

    fn var_of(&mut self, ctx: &Context, ty: &Type) -> Option<Term> {
        let hits: Vec<&String> = ctx
            .entries()
            .iter()
            .filter(|(_, t)| t == ty)
            .map(|(x, _)| x)
            .collect();
        hits.choose(&mut self.rng).map(|x| Term::var(x.as_str()))
    }

    /// Applies or projects a context variable until it has type `ty`.
    fn elim(&mut self, ctx: &Context, ty: &Type, budget: usize) -> Option<Term> {
        let mut vars: Vec<(String, Type)> = ctx.entries().to_vec();
        vars.shuffle(&mut self.rng);
        for (x, t) in vars {
            if let Some(out) = self.elim_from(ctx, Term::var(x.as_str()), &t, ty, budget, 2) {
                return Some(out);
            }
        }
        None
    }

    fn elim_from(
        &mut self,
        ctx: &Context,
        head: Term,
        have: &Type,
        want: &Type,
        budget: usize,
        depth: usize,
    ) -> Option<Term> {
        if have == want {
            return Some(head);
        }
        if depth == 0 {
            return None;
        }
        match have {
            Type::Arrow(a, b) => {
                let arg = self.term(ctx, a, budget / 2)?;
                self.elim_from(ctx, Term::app(head, arg), b, want, budget / 2, depth - 1)
            }
            Type::Product(a, b) => {
                let (c, t) = if self.rng.gen_bool(0.5) {
                    (Component::First, a)
                } else {
                    (Component::Second, b)
                };
                self.elim_from(ctx, Term::proj(c, head), t, want, budget, depth - 1)
            }
            _ => None,
        }
    }

    fn intro(&mut self, ctx: &Context, ty: &Type, budget: usize) -> Option<Term> {
        match ty {
            Type::Atom(_) => None,
            Type::Arrow(a, b) => {
                let x = self.name();
                let body = self.term(&ctx.extend(&x, (**a).clone()), b, budget - 1)?;
                Some(Term::lam(x, Some((**a).clone()), body))
            }
            Type::Product(a, b) => {
                let l = self.term(ctx, a, budget / 2)?;
                let r = self.term(ctx, b, budget / 2)?;
                Some(Term::pair(l, r))
            }
            Type::Circle(a) => {
                if self.rng.gen_bool(0.4) {
                    Some(Term::pure(self.term(ctx, a, budget - 1)?))
                } else {
                    self.modal_let(ctx, a, budget, false)
                }
            }
        }
    }

    /// `let o xs = Ms in N : O a`; with `pure_args` every argument is a
    /// `pure` term.
    fn modal_let(
        &mut self,
        ctx: &Context,
        a: &Type,
        budget: usize,
        pure_args: bool,
    ) -> Option<Term> {
        let k = self.rng.gen_range(1..=2);
        let names = self.distinct_names(k);
        let mut tys = vec![a.clone()];
        for _ in 1..k {
            tys.push(self.ty(1));
        }
        tys.shuffle(&mut self.rng);
        let share = (budget / (k + 1)).max(1);
        let mut args = Vec::new();
        for t in &tys {
            let m = if pure_args {
                Term::pure(self.term(ctx, t, share - 1)?)
            } else {
                self.term(ctx, &Type::circle(t.clone()), share)?
            };
            args.push(m);
        }
        let inner = Context::new(names.iter().cloned().zip(tys).collect()).ok()?;
        let body = self.term(&inner, a, share)?;
        Some(Term::let_circ(names, args, body))
    }

    fn redex(&mut self, ctx: &Context, ty: &Type, budget: usize) -> Option<Term> {
        match self.rng.gen_range(0..5) {
            0 => {
                let b = self.ty(1);
                let x = self.name();
                let body = self.term(&ctx.extend(&x, b.clone()), ty, budget / 2)?;
                let arg = self.term(ctx, &b, budget / 2)?;
                Some(Term::app(Term::lam(x, Some(b), body), arg))
            }
            1 => {
                let other = self.ty(1);
                let m = self.term(ctx, ty, budget / 2)?;
                let n = self.term(ctx, &other, budget / 3)?;
                Some(if self.rng.gen_bool(0.5) {
                    Term::proj(Component::First, Term::pair(m, n))
                } else {
                    Term::proj(Component::Second, Term::pair(n, m))
                })
            }
            2 => match ty {
                Type::Circle(a) => self.modal_let(ctx, a, budget, true),
                _ => None,
            },
            3 => match ty {
                // a let whose argument is itself a let
                Type::Circle(a) => {
                    let x = self.name();
                    let inner = self.modal_let(ctx, a, budget / 2, false)?;
                    let body = self.term(
                        &Context::from_pairs(vec![(x.as_str(), (**a).clone())]).ok()?,
                        a,
                        budget / 3,
                    )?;
                    Some(Term::let_circ(vec![x], vec![inner], body))
                }
                _ => None,
            },
            _ => match ty {
                Type::Circle(a) => {
                    let body = self.term(&Context::empty(), a, budget - 1)?;
                    Some(Term::let_circ(Vec::<String>::new(), vec![], body))
                }
                _ => None,
            },
        }
    }
}

fn atoms_of(item: &CorpusItem) -> usize {
    let mut atoms = item.ty.atoms();
    for (_, t) in item.ctx.entries() {
        atoms.extend(t.atoms());
    }
    let mut stack = vec![&item.term];
    while let Some(t) = stack.pop() {
        if let Term::Lam { ann: Some(a), .. } = t {
            atoms.extend(a.atoms());
        }
        stack.extend(t.children());
    }
    atoms.len()
}

/// `count` distinct corpus items generated from `seed`.
pub fn corpus(seed: u64, count: usize) -> Vec<CorpusItem> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut out: Vec<CorpusItem> = Vec::with_capacity(count);
    let mut seen = std::collections::BTreeSet::new();
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < count * 1000,
            "corpus generation stalled at {} items",
            out.len()
        );
        let k = g.rng.gen_range(1..=3);
        let names = g.distinct_names(k);
        let entries: Vec<(String, Type)> = names.into_iter().map(|x| (x, g.ty(2))).collect();
        let ctx = Context::new(entries).expect("distinct names");
        let ty = g.ty(2);
        let budget = g.rng.gen_range(6..=2 * MAX_SIZE);
        let Some(term) = g.term(&ctx, &ty, budget) else {
            continue;
        };
        if term.size() > MAX_SIZE || redexes(&term).is_empty() {
            continue;
        }
        match infer(&ctx, &term) {
            Ok(t) if t == ty => {}
            _ => continue,
        }
        let item = CorpusItem { ctx, term, ty };
        if atoms_of(&item) > MAX_ATOMS {
            continue;
        }
        if seen.insert(item.term.to_string()) {
            out.push(item);
        }
    }
    out
}

pub fn default_corpus() -> Vec<CorpusItem> {
    corpus(DEFAULT_SEED, DEFAULT_COUNT)
}
