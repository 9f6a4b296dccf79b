//! A small named-variable front end that compiles to [`PrfExpr`].
//!
//! Writing non-trivial programs as raw compositions means threading
//! projections by hand. A [`Term`] instead refers to variables by de Bruijn
//! level, and the binders (`Let`, `Fold`, `Sum`) are introduced through a
//! [`Scope`], which hands the body closures ready-made variable terms:
//!
//! ```
//! use ecn::prf::term::{self, Scope};
//! use ecn::prf::{eval, EvalBudget};
//! use ecn::numeric::Nat;
//!
//! // n -> 2^n
//! let (s, args) = Scope::root(1);
//! let body = s.pow2(args[0].clone());
//! let e = term::compile(&body, 1);
//! let v = eval(&e, &[Nat::from(10u32)], EvalBudget::default()).unwrap();
//! assert_eq!(v, Nat::from(1024u32));
//! ```

use std::sync::Arc;

use super::{Arity, Builtin, PrfExpr};
use crate::numeric::Nat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    /// Variable by de Bruijn level (0 is the first program argument).
    Var(usize),
    Lit(Nat),
    /// A closed expression applied to terms; the expression must accept
    /// `args.len()` arguments.
    Apply(Arc<PrfExpr>, Vec<Term>),
    /// Binds `value` as the next variable inside `body`. Binders remember
    /// the depth they were built at and may only be used there.
    Let {
        depth: usize,
        value: Box<Term>,
        body: Box<Term>,
    },
    /// `acc := init; for i in 0..count { acc := body }`, body sees `i`, `acc`.
    Fold {
        depth: usize,
        count: Box<Term>,
        init: Box<Term>,
        body: Box<Term>,
    },
    /// `Σ_{i=0}^{bound} body`, body sees `i`.
    Sum {
        depth: usize,
        bound: Box<Term>,
        body: Box<Term>,
    },
}

/// Binding depth at which a term is being built.
#[derive(Clone, Copy, Debug)]
pub struct Scope {
    depth: usize,
}

impl Scope {
    /// Top-level scope of a program with `arity` arguments.
    pub fn root(arity: usize) -> (Scope, Vec<Term>) {
        (Scope { depth: arity }, (0..arity).map(Term::Var).collect())
    }

    pub fn bind(self, value: Term, body: impl FnOnce(Scope, Term) -> Term) -> Term {
        let v = Term::Var(self.depth);
        let b = body(Scope { depth: self.depth + 1 }, v);
        Term::Let {
            depth: self.depth,
            value: Box::new(value),
            body: Box::new(b),
        }
    }

    pub fn fold(self, count: Term, init: Term, body: impl FnOnce(Scope, Term, Term) -> Term) -> Term {
        let i = Term::Var(self.depth);
        let acc = Term::Var(self.depth + 1);
        let b = body(Scope { depth: self.depth + 2 }, i, acc);
        Term::Fold {
            depth: self.depth,
            count: Box::new(count),
            init: Box::new(init),
            body: Box::new(b),
        }
    }

    pub fn sum(self, bound: Term, body: impl FnOnce(Scope, Term) -> Term) -> Term {
        let i = Term::Var(self.depth);
        let b = body(Scope { depth: self.depth + 1 }, i);
        Term::Sum {
            depth: self.depth,
            bound: Box::new(bound),
            body: Box::new(b),
        }
    }

    /// `2^e`.
    pub fn pow2(self, e: Term) -> Term {
        self.fold(e, lit(1), |_, _, acc| mul(acc, lit(2)))
    }

    /// `max_{j=1..count} f(j)`, or 0 when `count = 0`.
    pub fn max_upto(self, count: Term, f: impl FnOnce(Scope, Term) -> Term) -> Term {
        self.fold(count, lit(0), |s, i, acc| max(acc, f(s, succ(i))))
    }
}

pub fn lit(v: u64) -> Term {
    Term::Lit(Nat::from(v))
}

pub fn nat(v: Nat) -> Term {
    Term::Lit(v)
}

pub fn apply(e: &Arc<PrfExpr>, args: Vec<Term>) -> Term {
    Term::Apply(e.clone(), args)
}

fn op(b: Builtin, args: Vec<Term>) -> Term {
    Term::Apply(Arc::new(PrfExpr::Op(b)), args)
}

pub fn succ(a: Term) -> Term {
    Term::Apply(Arc::new(PrfExpr::Succ), vec![a])
}

pub fn add(a: Term, b: Term) -> Term {
    op(Builtin::Add, vec![a, b])
}

pub fn mul(a: Term, b: Term) -> Term {
    op(Builtin::Mul, vec![a, b])
}

pub fn monus(a: Term, b: Term) -> Term {
    op(Builtin::TruncSub, vec![a, b])
}

pub fn sgn(a: Term) -> Term {
    op(Builtin::Sgn, vec![a])
}

pub fn le(a: Term, b: Term) -> Term {
    op(Builtin::Le, vec![a, b])
}

pub fn lt(a: Term, b: Term) -> Term {
    le(succ(a), b)
}

pub fn eq(a: Term, b: Term) -> Term {
    mul(le(a.clone(), b.clone()), le(b, a))
}

/// Boolean negation of a 0/1 value.
pub fn not(a: Term) -> Term {
    monus(lit(1), a)
}

/// `if c { a } else { b }` for a 0/1 condition.
pub fn cond(c: Term, a: Term, b: Term) -> Term {
    add(mul(c.clone(), a), mul(not(c), b))
}

pub fn max(a: Term, b: Term) -> Term {
    op(Builtin::Max, vec![a, b])
}

pub fn pair(a: Term, b: Term) -> Term {
    op(Builtin::Pair, vec![a, b])
}

pub fn fst(a: Term) -> Term {
    op(Builtin::Fst, vec![a])
}

pub fn snd(a: Term) -> Term {
    op(Builtin::Snd, vec![a])
}

pub fn div(a: Term, b: Term) -> Term {
    op(Builtin::Div, vec![a, b])
}

pub fn rem(a: Term, b: Term) -> Term {
    op(Builtin::Mod, vec![a, b])
}

/// An integer as a pair of naturals `pos - neg`.
#[derive(Clone, Debug)]
pub struct Signed {
    pub pos: Term,
    pub neg: Term,
}

impl Signed {
    pub fn new(pos: Term, neg: Term) -> Signed {
        Signed { pos, neg }
    }

    pub fn scale(self, k: Term) -> Signed {
        Signed::new(mul(self.pos, k.clone()), mul(self.neg, k))
    }

    /// `1` if `self >= b` for a natural `b`.
    pub fn ge_nat(self, b: Term) -> Term {
        le(add(self.neg, b), self.pos)
    }

    /// `1` if `self < -b` for a natural `b`.
    pub fn lt_neg_nat(self, b: Term) -> Term {
        lt(add(self.pos, b), self.neg)
    }
}

impl std::ops::Add for Signed {
    type Output = Signed;

    fn add(self, o: Signed) -> Signed {
        Signed::new(add(self.pos, o.pos), add(self.neg, o.neg))
    }
}

impl std::ops::Sub for Signed {
    type Output = Signed;

    fn sub(self, o: Signed) -> Signed {
        Signed::new(add(self.pos, o.neg), add(self.neg, o.pos))
    }
}

fn projections(n: usize) -> Vec<Arc<PrfExpr>> {
    (1..=n).map(|k| Arc::new(PrfExpr::Proj { k, n })).collect()
}

/// Forces exact arity `n` on a polymorphic expression (`n >= 1`).
fn pin(e: PrfExpr, n: usize) -> PrfExpr {
    if n >= 1 && e.arity() == Ok(Arity::Any) {
        PrfExpr::Comp(Arc::new(e), projections(n))
    } else {
        e
    }
}

fn placed(built: usize, used: usize) {
    assert_eq!(built, used, "binder built at depth {built} used at depth {used}");
}

/// Compiles a term built in a root scope of `arity` arguments.
///
/// # Panics
/// If the term mentions a variable not bound at its use site, or a binder
/// is used at a different depth than the scope it was built in.
pub fn compile(term: &Term, arity: usize) -> PrfExpr {
    match term {
        Term::Var(l) => {
            assert!(*l < arity, "variable {l} unbound at depth {arity}");
            PrfExpr::Proj { k: l + 1, n: arity }
        }
        Term::Lit(v) => PrfExpr::Const(v.clone()),
        Term::Apply(f, args) => PrfExpr::Comp(f.clone(), args.iter().map(|a| Arc::new(compile(a, arity))).collect()),
        Term::Let { depth, value, body } => {
            placed(*depth, arity);
            let mut gs = projections(arity);
            gs.push(Arc::new(compile(value, arity)));
            PrfExpr::Comp(Arc::new(compile(body, arity + 1)), gs)
        }
        Term::Fold {
            depth,
            count,
            init,
            body,
        } => {
            placed(*depth, arity);
            let base = pin(compile(init, arity), arity);
            let step = pin(compile(body, arity + 2), arity + 2);
            let mut gs = projections(arity);
            gs.push(Arc::new(compile(count, arity)));
            PrfExpr::Comp(Arc::new(PrfExpr::prim_rec(base, step)), gs)
        }
        Term::Sum { depth, bound, body } => {
            placed(*depth, arity);
            let body = pin(compile(body, arity + 1), arity + 1);
            PrfExpr::bounded_sum(body, compile(bound, arity))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prf::{eval, EvalBudget};

    fn run(e: &PrfExpr, args: &[u64]) -> u64 {
        let a: Vec<Nat> = args.iter().map(|&v| Nat::from(v)).collect();
        let v = eval(e, &a, EvalBudget::new(10_000_000)).unwrap();
        u64::try_from(v).unwrap()
    }

    #[test]
    fn let_and_fold() {
        // (x, y) -> let s = x + y in s * s + x
        let (s, v) = Scope::root(2);
        let t = s.bind(add(v[0].clone(), v[1].clone()), |_, sum| {
            add(mul(sum.clone(), sum), v[0].clone())
        });
        let e = compile(&t, 2);
        assert!(e.accepts(2));
        assert_eq!(run(&e, &[3, 4]), 52);

        // factorial by fold over i: acc * (i + 1)
        let (s, v) = Scope::root(1);
        let t = s.fold(v[0].clone(), lit(1), |_, i, acc| mul(acc, succ(i)));
        let e = compile(&t, 1);
        assert_eq!(run(&e, &[5]), 120);
        assert_eq!(run(&e, &[0]), 1);
    }

    #[test]
    fn nested_binders_see_outer_variables() {
        // x -> Σ_{i=0}^{x} Σ_{j=0}^{i} (x + j)
        let (s, v) = Scope::root(1);
        let x = v[0].clone();
        let t = s.sum(x.clone(), |s, i| s.sum(i, |_, j| add(x.clone(), j)));
        let e = compile(&t, 1);
        let want: u64 = (0..=4).map(|i| (0..=i).map(|j| 4 + j).sum::<u64>()).sum();
        assert_eq!(run(&e, &[4]), want);
    }

    #[test]
    fn nullary_programs() {
        let (s, _) = Scope::root(0);
        let t = s.pow2(lit(5));
        let e = compile(&t, 0);
        assert_eq!(run(&e, &[]), 32);
    }

    #[test]
    fn signed_comparisons() {
        let (_, v) = Scope::root(3);
        let x = Signed::new(v[0].clone(), v[1].clone());
        let ge = compile(&x.clone().ge_nat(v[2].clone()), 3);
        let lt = compile(&x.lt_neg_nat(v[2].clone()), 3);
        for p in 0..6u64 {
            for n in 0..6u64 {
                for b in 0..4u64 {
                    let val = p as i64 - n as i64;
                    assert_eq!(run(&ge, &[p, n, b]) == 1, val >= b as i64);
                    assert_eq!(run(&lt, &[p, n, b]) == 1, val < -(b as i64));
                }
            }
        }
    }

    #[test]
    fn conditionals() {
        let (_, v) = Scope::root(2);
        let t = cond(eq(v[0].clone(), v[1].clone()), lit(7), max(v[0].clone(), v[1].clone()));
        let e = compile(&t, 2);
        assert_eq!(run(&e, &[3, 3]), 7);
        assert_eq!(run(&e, &[2, 9]), 9);
    }
}
