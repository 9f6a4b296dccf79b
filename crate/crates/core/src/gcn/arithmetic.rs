//! Sums, negations and products of jump-bounded numbers.
//!
//! Operand jump bounds are read as `J(k) = max(1, j(k))`, the same reading
//! the wrapper uses.

use std::sync::Arc;

use super::wrapper::{Gcn, SequenceProgram};
use crate::numeric::{clog2, Nat};
use crate::prf::term::{self, Scope, Term};
use crate::prf::PrfExpr;

fn at_least_one(j: &Arc<PrfExpr>, k: Term) -> Term {
    term::max(term::lit(1), term::apply(j, vec![k]))
}

/// `X + Y` with bound `M_X + M_Y` and jump bound `J_X + J_Y`.
pub fn gcn_add(x: &Gcn, y: &Gcn) -> Gcn {
    let (_, k) = Scope::root(1);
    let j = term::add(
        at_least_one(&x.jump_bound, k[0].clone()),
        at_least_one(&y.jump_bound, k[0].clone()),
    );
    Gcn {
        inner: SequenceProgram::Sum(Box::new(x.clone()), Box::new(y.clone())),
        bound: &x.bound + &y.bound,
        jump_bound: Arc::new(term::compile(&j, 1)),
    }
}

/// `-X`: every proposal negated, bounds unchanged.
pub fn gcn_neg(x: &Gcn) -> Gcn {
    Gcn {
        inner: SequenceProgram::Neg(Box::new(x.clone())),
        bound: x.bound.clone(),
        jump_bound: x.jump_bound.clone(),
    }
}

/// The smallest `m_x`, `m_y` with `M_X <= 2^{m_x}` and `M_Y <= 2^{m_y}`.
pub fn mul_jump_parameters(mx: &Nat, my: &Nat) -> (u64, u64) {
    (clog2(mx), clog2(my))
}

/// The product jump bound
/// `J(1) = Σ_{i=1}^{m_y} J_X(i) + Σ_{i=1}^{m_x} J_Y(i)` and
/// `J(k) = J_X(k + m_y) + J_Y(k + m_x)` for `k > 1`. `J(0)` is set to `J(1)`.
pub fn mul_jump_bound(jx: &Arc<PrfExpr>, jy: &Arc<PrfExpr>, m_x: u64, m_y: u64) -> PrfExpr {
    let (s, k) = Scope::root(1);
    let k = k[0].clone();
    // Σ_{i=1}^{m} J(i) as Σ_{i=0}^{m} [i >= 1]·J(i)
    let prefix = |s: Scope, j: &Arc<PrfExpr>, m: u64| {
        let j = j.clone();
        s.sum(term::lit(m), move |_, i| {
            term::mul(term::sgn(i.clone()), at_least_one(&j, i))
        })
    };
    let first = term::add(prefix(s, jx, m_y), prefix(s, jy, m_x));
    let later = term::add(
        at_least_one(jx, term::add(k.clone(), term::lit(m_y))),
        at_least_one(jy, term::add(k.clone(), term::lit(m_x))),
    );
    let t = term::cond(term::le(k, term::lit(1)), first, later);
    term::compile(&t, 1)
}

/// `X * Y` with bound `M_X · M_Y` and the jump bound of [`mul_jump_bound`].
pub fn gcn_mul(x: &Gcn, y: &Gcn) -> Gcn {
    let (m_x, m_y) = mul_jump_parameters(&x.bound, &y.bound);
    Gcn {
        inner: SequenceProgram::Product(Box::new(x.clone()), Box::new(y.clone())),
        bound: &x.bound * &y.bound,
        jump_bound: Arc::new(mul_jump_bound(&x.jump_bound, &y.jump_bound, m_x, m_y)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcn::wrapper::ScriptEnd;
    use crate::numeric::Rational;
    use crate::prf::{eval, EvalBudget};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn fixture(items: &[(i64, i64)], end: ScriptEnd, m: u64, j: u64) -> Gcn {
        let items = items.iter().map(|&(n, d)| Some(r(n, d))).collect();
        Gcn::new(SequenceProgram::script("f", items, end), m, PrfExpr::constant(j)).unwrap()
    }

    fn jv(e: &PrfExpr, k: u64) -> u64 {
        eval(e, &[Nat::from(k)], EvalBudget::default())
            .unwrap()
            .try_into()
            .unwrap()
    }

    #[test]
    fn two_halves_interleave() {
        let x = fixture(&[(1, 2)], ScriptEnd::Stall, 1, 3);
        let y = fixture(&[(1, 2)], ScriptEnd::Stall, 1, 3);
        let s = gcn_add(&x, &y);
        assert_eq!(s.bound, Nat::from(2u32));
        let out = s.runner().take(3, 100).unwrap();
        assert_eq!(out, vec![r(0, 1), r(1, 2), r(1, 1)]);
    }

    #[test]
    fn adding_zero_is_identity() {
        let x = fixture(&[(1, 3), (1, 4), (3, 10), (2, 7)], ScriptEnd::Stall, 1, 4);
        let zero = fixture(&[(0, 1)], ScriptEnd::Stall, 1, 1);
        let alone = x.runner().take(5, 100).unwrap();
        let sum = gcn_add(&x, &zero).runner().take(6, 100).unwrap();
        // the zero side contributes one extra proposal of 0 + x's latest
        let distinct: Vec<_> = sum.iter().fold(Vec::new(), |mut v: Vec<Rational>, q| {
            if v.last() != Some(q) {
                v.push(q.clone());
            }
            v
        });
        assert_eq!(distinct, alone);
    }

    #[test]
    fn negation_is_pointwise() {
        let x = fixture(&[(1, 3), (-1, 4)], ScriptEnd::Halt, 1, 4);
        let n = gcn_neg(&x).runner().take(3, 100).unwrap();
        assert_eq!(n, vec![r(0, 1), r(-1, 3), r(1, 4)]);
        let nn = gcn_neg(&gcn_neg(&x)).runner().take(4, 100).unwrap();
        assert_eq!(nn, x.runner().take(4, 100).unwrap());
        let z = fixture(&[(0, 1), (0, 1)], ScriptEnd::Halt, 1, 1);
        assert!(gcn_neg(&z).runner().take(4, 100).unwrap().iter().all(Rational::is_zero));
    }

    #[test]
    fn product_parameters_example() {
        let (m_x, m_y) = mul_jump_parameters(&Nat::from(4u32), &Nat::from(2u32));
        assert_eq!((m_x, m_y), (2, 1));
        let one = Arc::new(PrfExpr::constant(1));
        let j = mul_jump_bound(&one, &one, m_x, m_y);
        assert_eq!(jv(&j, 1), 3);
        for k in 2..8 {
            assert_eq!(jv(&j, k), 2);
        }
    }

    #[test]
    fn product_of_constants_converges() {
        let x = fixture(&[(1, 2)], ScriptEnd::Stall, 1, 2);
        let y = fixture(&[(1, 3)], ScriptEnd::Stall, 1, 2);
        let p = gcn_mul(&x, &y);
        let out = p.runner().take(3, 100).unwrap();
        assert!((&out[2] - &r(1, 6)).abs() <= Rational::pow2(-8));
        let z = fixture(&[(0, 1)], ScriptEnd::Stall, 1, 1);
        let out = gcn_mul(&x, &z).runner().take(3, 100).unwrap();
        assert!(out.iter().all(Rational::is_zero));
    }
}
