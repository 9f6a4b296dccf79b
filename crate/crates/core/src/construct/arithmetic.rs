//! Arithmetic on signed numbers through modulated sequences.
//!
//! An operand's partial sums scale to integers: `2^n p_n = S⁺(n) - S⁻(n)`
//! with `S⁺(n) = 2 S⁺(n-1) + [d_n = +1]`, `S⁻(n) = 2 S⁻(n-1) + [d_n = -1]`,
//! starting from the two halves of the integer part. Sums and products of
//! these are again primitive recursive, so each operation is a [`PrSeq`]
//! handed to [`to_sprcn`].

use std::sync::Arc;

use num_traits::Signed as _;

use super::{split_int, to_sprcn, ConstructError, PrSeq};
use crate::numbers::Sprcn;
use crate::numeric::{clog2, Int, Nat};
use crate::prf::term::{self, Scope, Term};
use crate::prf::{EvalBudget, PrfExpr};

/// `n -> S⁺(n)` (`positive`) or `n -> S⁻(n)`.
fn scaled_half(x: &Sprcn, positive: bool) -> PrfExpr {
    let (s, v) = Scope::root(1);
    let (ip, ineg) = split_int(&x.int_part);
    let init = term::nat(if positive { ip } else { ineg });
    let coeff = x.coeff.clone();
    let t = s.fold(v[0].clone(), init, move |s, i, acc| {
        s.bind(term::apply(&coeff, vec![term::succ(i)]), move |_, out| {
            let bit = if positive {
                term::eq(out, term::lit(1))
            } else {
                term::le(term::lit(2), out)
            };
            term::add(term::mul(term::lit(2), acc), bit)
        })
    });
    term::compile(&t, 1)
}

fn unary(f: impl FnOnce(Scope, Term) -> Term) -> PrfExpr {
    let (s, v) = Scope::root(1);
    term::compile(&f(s, v[0].clone()), 1)
}

/// `n -> f(g(n), h(n))` for a binary builtin-style combinator.
fn combine(f: fn(Term, Term) -> Term, g: &Arc<PrfExpr>, h: &Arc<PrfExpr>) -> PrfExpr {
    unary(|_, n| f(term::apply(g, vec![n.clone()]), term::apply(h, vec![n])))
}

/// The sequence `p_n(x) + p_n(y)` with `B(n) = 2^n` and `C(e) = e + 1`.
pub fn sum_sequence(x: &Sprcn, y: &Sprcn) -> PrSeq {
    let (xp, xn) = (Arc::new(scaled_half(x, true)), Arc::new(scaled_half(x, false)));
    let (yp, yn) = (Arc::new(scaled_half(y, true)), Arc::new(scaled_half(y, false)));
    PrSeq::new(
        combine(term::add, &xp, &yp),
        combine(term::add, &xn, &yn),
        unary(|s, n| s.pow2(n)),
        unary(|_, e| term::succ(e)),
    )
    .expect("generated programs are unary")
}

/// The sequence `p_n(x) p_n(y)` with `B(n) = 4^n` and
/// `C(e) = e + ⌈log2(|I_x| + 2)⌉ + ⌈log2(|I_y| + 2)⌉`.
pub fn product_sequence(x: &Sprcn, y: &Sprcn) -> PrSeq {
    let (xp, xn) = (scaled_half(x, true), scaled_half(x, false));
    let (yp, yn) = (scaled_half(y, true), scaled_half(y, false));
    let (xp, xn, yp, yn) = (Arc::new(xp), Arc::new(xn), Arc::new(yp), Arc::new(yn));
    let cross = |a: &Arc<PrfExpr>, b: &Arc<PrfExpr>, c: &Arc<PrfExpr>, d: &Arc<PrfExpr>| {
        unary(|_, n| {
            let at = |e: &Arc<PrfExpr>| term::apply(e, vec![n.clone()]);
            term::add(term::mul(at(a), at(b)), term::mul(at(c), at(d)))
        })
    };
    let shift = log_bound(&x.int_part) + log_bound(&y.int_part);
    PrSeq::new(
        cross(&xp, &yp, &xn, &yn),
        cross(&xp, &yn, &xn, &yp),
        unary(|s, n| s.pow2(term::mul(term::lit(2), n))),
        unary(|_, e| term::add(e, term::lit(shift))),
    )
    .expect("generated programs are unary")
}

/// `⌈log2(|I| + 2)⌉`; partial sums never exceed `|I| + 1` in size.
fn log_bound(i: &Int) -> u64 {
    clog2(&(i.abs().magnitude() + Nat::from(2u32)))
}

pub fn sprcn_add(x: &Sprcn, y: &Sprcn, budget: EvalBudget) -> Result<Sprcn, ConstructError> {
    to_sprcn(&sum_sequence(x, y), budget)
}

/// Exact negation: `-I` and every digit flipped (`1 ↦ 2`, `≥2 ↦ 1`).
pub fn sprcn_neg(x: &Sprcn) -> Sprcn {
    let coeff = x.coeff.clone();
    let flipped = unary(|s, i| {
        s.bind(term::apply(&coeff, vec![i]), |_, v| {
            term::add(
                term::mul(term::lit(2), term::eq(v.clone(), term::lit(1))),
                term::le(term::lit(2), v),
            )
        })
    });
    Sprcn::new(-x.int_part.clone(), flipped).expect("generated program is unary")
}

pub fn sprcn_sub(x: &Sprcn, y: &Sprcn, budget: EvalBudget) -> Result<Sprcn, ConstructError> {
    sprcn_add(x, &sprcn_neg(y), budget)
}

pub fn sprcn_mul(x: &Sprcn, y: &Sprcn, budget: EvalBudget) -> Result<Sprcn, ConstructError> {
    to_sprcn(&product_sequence(x, y), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;
    use crate::prf::eval;

    fn b() -> EvalBudget {
        EvalBudget::new(200_000_000)
    }

    fn num(i: i64, c: PrfExpr) -> Sprcn {
        Sprcn::new(i, c).unwrap()
    }

    fn near(x: &Sprcn, n: u64, want: Rational) {
        let v = x.approx(n, b()).unwrap().value;
        assert!((&v - &want).abs() <= Rational::pow2(-(n as i64)), "{v} vs {want}");
    }

    #[test]
    fn scaled_partials() {
        // -1/4 = (-1, [i <= 2])
        let x = num(-1, crate::prf::parse("(C (SUGAR le) (P 1 1) (SUGAR const 2))").unwrap());
        let (p, m) = (scaled_half(&x, true), scaled_half(&x, false));
        for n in 0..6u64 {
            let v = |e: &PrfExpr| Int::from(eval(e, &[Nat::from(n)], b()).unwrap());
            let got = Rational::new(v(&p) - v(&m), Int::from(1) << n);
            assert_eq!(got, x.approx(n, b()).unwrap().value);
        }
    }

    #[test]
    fn small_identities() {
        let one_a = num(0, PrfExpr::constant(1));
        let one_b = num(1, PrfExpr::Zero);
        near(&sprcn_add(&one_a, &one_b, b()).unwrap(), 10, Rational::from(2));
        near(&sprcn_sub(&one_b, &one_a, b()).unwrap(), 10, Rational::from(0));
        near(&sprcn_sub(&Sprcn::zero(), &one_b, b()).unwrap(), 10, Rational::from(-1));
        near(&sprcn_mul(&one_a, &one_a, b()).unwrap(), 10, Rational::from(1));
        near(&sprcn_mul(&one_b, &Sprcn::zero(), b()).unwrap(), 10, Rational::from(0));
    }

    #[test]
    fn negation_examples() {
        let x = num(1, PrfExpr::constant(2));
        assert_eq!(sprcn_neg(&x).approx(2, b()).unwrap().value, Rational::new(-1, 4));
        let z = sprcn_neg(&Sprcn::zero());
        for n in 0..8 {
            assert!(z.approx(n, b()).unwrap().value.is_zero());
        }
        let nn = sprcn_neg(&sprcn_neg(&x));
        for n in 0..8 {
            assert_eq!(nn.approx(n, b()).unwrap(), x.approx(n, b()).unwrap());
        }
    }

    #[test]
    fn product_modulus_shift() {
        assert_eq!(log_bound(&Int::from(0)), 1);
        assert_eq!(log_bound(&Int::from(-1)), 2);
        assert_eq!(log_bound(&Int::from(2)), 2);
        assert_eq!(log_bound(&Int::from(3)), 3);
    }
}
