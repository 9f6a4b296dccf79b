//! A total expression language over the naturals.
//!
//! The core basis is the usual one: [`PrfExpr::Zero`], [`PrfExpr::Succ`],
//! projections, composition and primitive recursion. On top of it sits a
//! small set of sugar forms (constants, arithmetic builtins, bounded sums and
//! bounded loops). Every sugar form has a core desugaring ([`desugar`]) and
//! every loop carries its bound syntactically, so well-formedness is a purely
//! syntactic property decided by [`check`], and evaluation always terminates.
//!
//! # Arity
//!
//! Expressions have either an exact arity or are arity-polymorphic
//! ([`Arity::Any`]). `Zero` and constants are polymorphic, as is a composition
//! whose inner functions are all polymorphic, and a primitive recursion whose
//! base and step are both polymorphic. A polymorphic primitive recursion
//! applied to no arguments returns its base value.
//!
//! # Recursion convention
//!
//! Parameters come first and the recursion variable last:
//!
//! ```text
//! R(b, s)(x.., 0)   = b(x..)
//! R(b, s)(x.., y+1) = s(x.., y, R(b, s)(x.., y))
//! ```
//!
//! `(R Z (P 2 3))` is therefore `(x, y) -> y - 1` (truncated).

mod desugar;
mod enumerate;
mod eval;
mod syntax;
pub mod term;

use std::fmt;
use std::sync::Arc;

use crate::numeric::Nat;

pub use desugar::desugar;
pub use enumerate::{enumerate, Enumerator};
pub use eval::{eval, eval_steps, EvalBudget, EvalError, Evaluator};
pub use syntax::{parse, ParseError};

/// Builtin sugar operations. All have exact arity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Add,
    Mul,
    /// Truncated subtraction `x ∸ y`.
    TruncSub,
    Sgn,
    /// `|sgn(x)|`; identical to `Sgn` on naturals, kept as its own spelling.
    AbsSgn,
    /// `1` if `x <= y`, else `0`.
    Le,
    Max,
    /// Cantor pairing.
    Pair,
    Fst,
    Snd,
    /// Floor division; division by zero yields zero.
    Div,
    /// Remainder; `x mod 0 = x`.
    Mod,
}

impl Builtin {
    pub const ALL: [Builtin; 12] = [
        Builtin::Add,
        Builtin::Mul,
        Builtin::TruncSub,
        Builtin::Sgn,
        Builtin::AbsSgn,
        Builtin::Le,
        Builtin::Max,
        Builtin::Pair,
        Builtin::Fst,
        Builtin::Snd,
        Builtin::Div,
        Builtin::Mod,
    ];

    pub fn arity(self) -> usize {
        match self {
            Builtin::Sgn | Builtin::AbsSgn | Builtin::Fst | Builtin::Snd => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Add => "add",
            Builtin::Mul => "mul",
            Builtin::TruncSub => "monus",
            Builtin::Sgn => "sgn",
            Builtin::AbsSgn => "abssgn",
            Builtin::Le => "le",
            Builtin::Max => "max",
            Builtin::Pair => "pair",
            Builtin::Fst => "fst",
            Builtin::Snd => "snd",
            Builtin::Div => "div",
            Builtin::Mod => "mod",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }
}

/// Expression tree of a total program over the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrfExpr {
    Zero,
    Succ,
    /// `k`-th of `n` arguments, `1 <= k <= n`.
    Proj {
        k: usize,
        n: usize,
    },
    Comp(Arc<PrfExpr>, Vec<Arc<PrfExpr>>),
    PrimRec(Arc<PrfExpr>, Arc<PrfExpr>),
    Const(Nat),
    Op(Builtin),
    /// `Σ_{i=0}^{bound(x)} body(x, i)`.
    BoundedSum(Arc<PrfExpr>, Arc<PrfExpr>),
    /// `acc := 0; for i in 0..bound(x) { acc := body(x, i, acc) }`.
    BoundedLoop(Arc<PrfExpr>, Arc<PrfExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arity {
    Any,
    Exact(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Any => true,
            Arity::Exact(m) => m == n,
        }
    }

    fn unify(self, other: Arity) -> Option<Arity> {
        match (self, other) {
            (Arity::Any, a) | (a, Arity::Any) => Some(a),
            (Arity::Exact(a), Arity::Exact(b)) if a == b => Some(Arity::Exact(a)),
            _ => None,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Any => write!(f, "any"),
            Arity::Exact(n) => write!(f, "{n}"),
        }
    }
}

/// First arity violation found, addressed by child indices from the root.
/// For compositions child 0 is the outer function; for recursion and
/// bounded forms child 0 is the base/body.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("arity error at {}: {message}", fmt_path(.path))]
pub struct ArityError {
    pub path: Vec<usize>,
    pub message: String,
}

fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| format!("/{i}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityReport {
    pub arity: Option<Arity>,
    pub well_formed: bool,
    pub first_error: Option<ArityError>,
}

/// Decides well-formedness in a single pass over the tree.
pub fn check(expr: &PrfExpr) -> ArityReport {
    match expr.arity() {
        Ok(a) => ArityReport {
            arity: Some(a),
            well_formed: true,
            first_error: None,
        },
        Err(e) => ArityReport {
            arity: None,
            well_formed: false,
            first_error: Some(e),
        },
    }
}

impl PrfExpr {
    pub fn arity(&self) -> Result<Arity, ArityError> {
        let mut path = Vec::new();
        arity_at(self, &mut path)
    }

    /// Well-formed and usable with exactly one argument.
    pub fn is_unary(&self) -> bool {
        matches!(self.arity(), Ok(a) if a.accepts(1))
    }

    pub fn accepts(&self, n: usize) -> bool {
        matches!(self.arity(), Ok(a) if a.accepts(n))
    }

    /// Size used by the enumeration order: leaves count 1, a projection
    /// `(P k n)` counts `n + 1`, inner nodes count 1 plus their children.
    pub fn size(&self) -> usize {
        match self {
            PrfExpr::Zero | PrfExpr::Succ | PrfExpr::Const(_) | PrfExpr::Op(_) => 1,
            PrfExpr::Proj { n, .. } => n + 1,
            PrfExpr::Comp(f, gs) => 1 + f.size() + gs.iter().map(|g| g.size()).sum::<usize>(),
            PrfExpr::PrimRec(a, b) | PrfExpr::BoundedSum(a, b) | PrfExpr::BoundedLoop(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn is_core(&self) -> bool {
        match self {
            PrfExpr::Zero | PrfExpr::Succ | PrfExpr::Proj { .. } => true,
            PrfExpr::Comp(f, gs) => f.is_core() && gs.iter().all(|g| g.is_core()),
            PrfExpr::PrimRec(b, s) => b.is_core() && s.is_core(),
            _ => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            PrfExpr::Comp(f, gs) => 1 + gs.iter().map(|g| g.depth()).max().unwrap_or(0).max(f.depth()),
            PrfExpr::PrimRec(a, b) | PrfExpr::BoundedSum(a, b) | PrfExpr::BoundedLoop(a, b) => {
                1 + a.depth().max(b.depth())
            }
            _ => 1,
        }
    }

    pub fn proj(k: usize, n: usize) -> PrfExpr {
        PrfExpr::Proj { k, n }
    }

    pub fn constant(c: u64) -> PrfExpr {
        PrfExpr::Const(Nat::from(c))
    }

    pub fn comp(f: PrfExpr, gs: Vec<PrfExpr>) -> PrfExpr {
        PrfExpr::Comp(Arc::new(f), gs.into_iter().map(Arc::new).collect())
    }

    pub fn prim_rec(base: PrfExpr, step: PrfExpr) -> PrfExpr {
        PrfExpr::PrimRec(Arc::new(base), Arc::new(step))
    }

    pub fn bounded_sum(body: PrfExpr, bound: PrfExpr) -> PrfExpr {
        PrfExpr::BoundedSum(Arc::new(body), Arc::new(bound))
    }

    pub fn bounded_loop(body: PrfExpr, bound: PrfExpr) -> PrfExpr {
        PrfExpr::BoundedLoop(Arc::new(body), Arc::new(bound))
    }
}

fn err(path: &[usize], message: impl Into<String>) -> ArityError {
    ArityError {
        path: path.to_vec(),
        message: message.into(),
    }
}

fn child(e: &PrfExpr, idx: usize, path: &mut Vec<usize>) -> Result<Arity, ArityError> {
    path.push(idx);
    let a = arity_at(e, path)?;
    path.pop();
    Ok(a)
}

fn arity_at(expr: &PrfExpr, path: &mut Vec<usize>) -> Result<Arity, ArityError> {
    match expr {
        PrfExpr::Zero | PrfExpr::Const(_) => Ok(Arity::Any),
        PrfExpr::Succ => Ok(Arity::Exact(1)),
        PrfExpr::Op(b) => Ok(Arity::Exact(b.arity())),
        PrfExpr::Proj { k, n } => {
            if *k >= 1 && k <= n {
                Ok(Arity::Exact(*n))
            } else {
                Err(err(path, format!("projection index {k} out of range 1..={n}")))
            }
        }
        PrfExpr::Comp(f, gs) => {
            let fa = child(f, 0, path)?;
            if !fa.accepts(gs.len()) {
                return Err(err(
                    path,
                    format!(
                        "outer function has arity {fa} but is given {} inner functions",
                        gs.len()
                    ),
                ));
            }
            let mut acc = Arity::Any;
            for (i, g) in gs.iter().enumerate() {
                let ga = child(g, i + 1, path)?;
                acc = acc
                    .unify(ga)
                    .ok_or_else(|| err(path, format!("inner function {} has arity {ga}, expected {acc}", i + 1)))?;
            }
            Ok(acc)
        }
        PrfExpr::PrimRec(b, s) => {
            let ba = child(b, 0, path)?;
            let sa = child(s, 1, path)?;
            match (ba, sa) {
                (Arity::Any, Arity::Any) => Ok(Arity::Any),
                (Arity::Any, Arity::Exact(k)) if k >= 2 => Ok(Arity::Exact(k - 1)),
                (Arity::Exact(j), Arity::Any) => Ok(Arity::Exact(j + 1)),
                (Arity::Exact(j), Arity::Exact(k)) if k == j + 2 => Ok(Arity::Exact(j + 1)),
                _ => Err(err(
                    path,
                    format!("recursion base has arity {ba}, step has arity {sa}; step needs base + 2"),
                )),
            }
        }
        PrfExpr::BoundedSum(body, bound) => bounded_arity(body, bound, 1, path),
        PrfExpr::BoundedLoop(body, bound) => bounded_arity(body, bound, 2, path),
    }
}

fn bounded_arity(body: &PrfExpr, bound: &PrfExpr, extra: usize, path: &mut Vec<usize>) -> Result<Arity, ArityError> {
    let ba = child(body, 0, path)?;
    let na = child(bound, 1, path)?;
    let n = match ba {
        Arity::Exact(j) if j >= extra => j - extra,
        _ => {
            return Err(err(
                path,
                format!("bounded body must have exact arity at least {extra}, found {ba}"),
            ))
        }
    };
    if na.accepts(n) {
        Ok(Arity::Exact(n))
    } else {
        Err(err(path, format!("bound has arity {na}, expected {n}")))
    }
}

impl fmt::Display for PrfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        syntax::write_expr(self, f)
    }
}
