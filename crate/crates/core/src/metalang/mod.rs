//! The monadic metalanguage: simply-typed λ-calculus with products and a
//! computation type `V A`, introduced by `val M` and sequenced by
//! `let val x = M in N`. Unlike the modal let of the source calculus, the
//! body of `let val` keeps the surrounding context.
//!
//! Reduction adds three rules to β and the projections:
//!
//! ```text
//! let val x = val M in N                  ->  N[x := M]
//! let val x = (let val y = N in P) in M   ->  let val y = N in (let val x = P in M)
//! let val x = M in val x                  ->  M
//! ```

mod reduce;
mod syntax;
mod translate;

pub use reduce::{
    ml_contract, ml_normalize, ml_reachable, ml_redexes, ml_reducts, ml_step, MLFuelExhausted,
    MLRedexSite, MLRule,
};
pub use syntax::{MLTerm, MLType};
pub use translate::{
    simulate_step, translate_context, translate_path, translate_term, translate_type, Simulation,
    SimulationFailure,
};

use crate::syntax::Component;
use crate::typecheck::{Error, ErrorKind};

pub type MLTypingError = Error<MLTerm, MLType>;

/// Ordered declarations; a later entry for the same name shadows earlier
/// ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MLContext {
    entries: Vec<(String, MLType)>,
}

impl MLContext {
    pub fn empty() -> Self {
        MLContext::default()
    }

    pub fn new(entries: Vec<(String, MLType)>) -> Self {
        MLContext { entries }
    }

    pub fn lookup(&self, x: &str) -> Option<&MLType> {
        self.entries
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, t)| t)
    }

    pub fn extend(&self, x: &str, ty: MLType) -> MLContext {
        let mut entries = self.entries.clone();
        entries.push((x.to_string(), ty));
        MLContext { entries }
    }

    pub fn entries(&self) -> &[(String, MLType)] {
        &self.entries
    }
}

fn err(kind: ErrorKind<MLType>, at: &MLTerm, path: &[usize]) -> MLTypingError {
    Error {
        kind,
        at: at.clone(),
        path: path.to_vec(),
    }
}

/// Type synthesis for annotated metalanguage terms.
pub fn ml_infer(ctx: &MLContext, t: &MLTerm) -> Result<MLType, MLTypingError> {
    infer_at(ctx, t, &mut Vec::new())
}

fn child(
    ctx: &MLContext,
    t: &MLTerm,
    i: usize,
    path: &mut Vec<usize>,
) -> Result<MLType, MLTypingError> {
    path.push(i);
    let r = infer_at(ctx, t, path);
    path.pop();
    r
}

fn at_child(kind: ErrorKind<MLType>, t: &MLTerm, i: usize, path: &[usize]) -> MLTypingError {
    let mut p = path.to_vec();
    p.push(i);
    err(kind, t, &p)
}

fn infer_at(ctx: &MLContext, t: &MLTerm, path: &mut Vec<usize>) -> Result<MLType, MLTypingError> {
    match t {
        MLTerm::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| err(ErrorKind::UnboundVariable(x.clone()), t, path)),
        MLTerm::Lam { binder, ann, body } => {
            let dom = ann
                .clone()
                .ok_or_else(|| err(ErrorKind::MissingAnnotation(binder.clone()), t, path))?;
            let cod = child(&ctx.extend(binder, dom.clone()), body, 0, path)?;
            Ok(MLType::arrow(dom, cod))
        }
        MLTerm::App(f, a) => {
            let fty = child(ctx, f, 0, path)?;
            let MLType::Arrow(dom, cod) = fty else {
                return Err(at_child(ErrorKind::NotAFunction(fty), f, 0, path));
            };
            let aty = child(ctx, a, 1, path)?;
            if aty != *dom {
                return Err(at_child(
                    ErrorKind::Mismatch {
                        expected: *dom,
                        found: aty,
                    },
                    a,
                    1,
                    path,
                ));
            }
            Ok(*cod)
        }
        MLTerm::Pair(l, r) => Ok(MLType::product(
            child(ctx, l, 0, path)?,
            child(ctx, r, 1, path)?,
        )),
        MLTerm::Proj(which, m) => match child(ctx, m, 0, path)? {
            MLType::Product(a, b) => Ok(match which {
                Component::First => *a,
                Component::Second => *b,
            }),
            other => Err(at_child(ErrorKind::NotAProduct(other), m, 0, path)),
        },
        MLTerm::Val(m) => Ok(MLType::nabla(child(ctx, m, 0, path)?)),
        MLTerm::LetVal {
            binder,
            bound,
            body,
        } => {
            let phi = match child(ctx, bound, 0, path)? {
                MLType::Nabla(phi) => *phi,
                other => return Err(at_child(ErrorKind::NotModal(other), bound, 0, path)),
            };
            match child(&ctx.extend(binder, phi), body, 1, path)? {
                psi @ MLType::Nabla(_) => Ok(psi),
                other => Err(at_child(ErrorKind::NotModal(other), body, 1, path)),
            }
        }
    }
}
