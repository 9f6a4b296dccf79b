//! Named constants and the series behind them.

use std::sync::Arc;

use super::{to_sprcn, ConstructError, PrSeq, RationalSequence};
use crate::numbers::Sprcn;
use crate::numeric::{Int, Nat, Rational};
use crate::prf::term::{self, Scope, Term};
use crate::prf::{EvalBudget, PrfExpr};

fn unary(f: impl FnOnce(Scope, Term) -> Term) -> PrfExpr {
    let (s, v) = Scope::root(1);
    term::compile(&f(s, v[0].clone()), 1)
}

/// `(n -> num_n, n -> den_n)` for a recurrence on `pair(num, den)`;
/// `step(i, num, den)` gives the state after term `i` (0-based).
fn fraction_recurrence(init: (u64, u64), step: fn(Term, Term, Term) -> (Term, Term)) -> (PrfExpr, PrfExpr) {
    let state = |pick: fn(Term) -> Term| {
        unary(|s, n| {
            let fin = s.fold(n, term::pair(term::lit(init.0), term::lit(init.1)), move |s, i, st| {
                s.bind(term::fst(st.clone()), move |s, num| {
                    s.bind(term::snd(st), move |_, den| {
                        let (a, b) = step(i, num, den);
                        term::pair(a, b)
                    })
                })
            });
            pick(fin)
        })
    };
    (state(term::fst), state(term::snd))
}

fn is_even(i: Term) -> Term {
    term::not(term::rem(i, term::lit(2)))
}

/// Leibniz partial sums `π_n = Σ_{k<n} 4 (-1)^k / (2k + 1)`, so `π_1 = 4`
/// and `π_2 = 8/3`, with `C(e) = 2^{e+1}` (the tail after `π_i` is below
/// `4 / (2i + 1)`).
pub fn leibniz_seq() -> PrSeq {
    let (num, den) = fraction_recurrence((0, 1), |i, num, den| {
        let d = term::add(term::mul(term::lit(2), i.clone()), term::lit(1));
        let grown = term::mul(num, d.clone());
        let four_den = term::mul(term::lit(4), den.clone());
        let next = term::cond(
            is_even(i),
            term::add(grown.clone(), four_den.clone()),
            term::monus(grown, four_den),
        );
        (next, term::mul(den, d))
    });
    PrSeq::new(num, PrfExpr::Zero, den, unary(|s, e| s.pow2(term::succ(e)))).expect("unary parts")
}

/// Nilakantha partial sums `s_0 = 3`,
/// `s_n = s_{n-1} ± 4 / ((2n)(2n+1)(2n+2))` (plus for odd `n`), with
/// `C(e) = 2^{⌈e/3⌉}`: the tail after `s_i` is below `1 / (2 (i+1)^3)`.
pub fn nilakantha_seq() -> PrSeq {
    let (num, den) = fraction_recurrence((3, 1), |i, num, den| {
        let two_k = term::mul(term::lit(2), term::succ(i.clone()));
        let t = term::mul(
            term::mul(two_k.clone(), term::succ(two_k.clone())),
            term::add(two_k, term::lit(2)),
        );
        let grown = term::mul(num, t.clone());
        let four_den = term::mul(term::lit(4), den.clone());
        let next = term::cond(
            is_even(i),
            term::add(grown.clone(), four_den.clone()),
            term::monus(grown, four_den),
        );
        (next, term::mul(den, t))
    });
    let modulus = unary(|s, e| {
        // ⌈e/3⌉ = #{t <= e : 3t < e}
        let third = s.sum(e.clone(), move |_, t| term::lt(term::mul(term::lit(3), t), e));
        s.pow2(third)
    });
    PrSeq::new(num, PrfExpr::Zero, den, modulus).expect("unary parts")
}

/// `Σ_{k=0}^{n} 1/k!` with `C(e) = e + 2` (the tail after term `i` is
/// below `2 / (i+1)!`).
pub fn e_seq() -> PrSeq {
    let (num, den) = fraction_recurrence((1, 1), |i, num, den| {
        let k = term::succ(i);
        (term::succ(term::mul(k.clone(), num)), term::mul(k, den))
    });
    PrSeq::new(num, PrfExpr::Zero, den, unary(|_, e| term::add(e, term::lit(2)))).expect("unary parts")
}

/// π through the Nilakantha series.
pub fn const_pi() -> Sprcn {
    to_sprcn(&nilakantha_seq(), EvalBudget::default()).expect("first terms fit the default budget")
}

pub fn const_e() -> Sprcn {
    to_sprcn(&e_seq(), EvalBudget::default()).expect("first terms fit the default budget")
}

/// `√2` by a direct program: `I = 1`, and with `p_{k-1} = N / 2^{k-1}`
/// digit `k` is `+1` exactly when `(p + 2^{-k})^2` lies closer to 2 than
/// `(p - 2^{-k})^2`, i.e. when `p^2 + 4^{-k} < 2`, i.e. `4N^2 + 1 < 2·4^k`.
pub fn const_sqrt2() -> Sprcn {
    let coeff = unary(|s, k| {
        let fin = s.fold(k, term::pair(term::lit(1), term::lit(0)), |s, t, st| {
            s.bind(term::fst(st), move |s, n| {
                // digit t + 1 compares against 2·4^{t+1} = 2^{2t+3}
                let bound = s.pow2(term::add(term::mul(term::lit(2), t), term::lit(3)));
                let lhs = term::succ(term::mul(term::lit(4), term::mul(n.clone(), n.clone())));
                s.bind(term::lt(lhs, bound), move |_, plus| {
                    let doubled = term::mul(term::lit(2), n);
                    let next = term::cond(
                        plus.clone(),
                        term::succ(doubled.clone()),
                        term::monus(doubled, term::lit(1)),
                    );
                    term::pair(next, term::monus(term::lit(2), plus))
                })
            })
        });
        term::snd(fin)
    });
    Sprcn::new(1, coeff).expect("unary program")
}

/// `x -> [x is prime]`, by counting divisors in `2..x`.
fn prime_program() -> Arc<PrfExpr> {
    Arc::new(unary(|s, x| {
        let divisors = s.sum(x.clone(), {
            let x = x.clone();
            move |_, d| {
                let proper = term::mul(term::le(term::lit(2), d.clone()), term::lt(d.clone(), x.clone()));
                term::mul(proper, term::not(term::sgn(term::rem(x, d))))
            }
        });
        term::mul(term::le(term::lit(2), x), term::not(term::sgn(divisors)))
    }))
}

/// Coefficient `i`: 0 when `2i` is a sum of two primes, otherwise `-1` if
/// `13 | i` and `+1` if not. No even number up to `2i = 2` is such a sum,
/// so digit 1 is `+1`; the number is `1/2` if every later even number is.
pub fn goldbach_number() -> Sprcn {
    let prime = prime_program();
    let coeff = unary(move |s, i| {
        let two_i = term::mul(term::lit(2), i.clone());
        let pairs = s.sum(two_i.clone(), move |_, a| {
            term::mul(
                term::apply(&prime, vec![a.clone()]),
                term::apply(&prime, vec![term::monus(two_i, a)]),
            )
        });
        let code = term::cond(
            term::not(term::sgn(term::rem(i, term::lit(13)))),
            term::lit(2),
            term::lit(1),
        );
        term::mul(term::not(term::sgn(pairs)), code)
    });
    Sprcn::new(0, coeff).expect("unary program")
}

/// The constants addressable by name: `pi`, `e`, `sqrt2`, `goldbach`.
pub fn constant(name: &str) -> Option<Sprcn> {
    match name {
        "pi" => Some(const_pi()),
        "e" => Some(const_e()),
        "sqrt2" => Some(const_sqrt2()),
        "goldbach" => Some(goldbach_number()),
        _ => None,
    }
}

/// The Leibniz sequence evaluated natively, for indices far beyond what the
/// expression evaluator can reach. Each element is enclosed in fixed point
/// with 120 fractional bits: every term is rounded both ways, so the
/// enclosure width grows by at most one unit per term.
#[derive(Clone, Debug, Default)]
pub struct LeibnizHost {
    count: u64,
    lo: i128,
    hi: i128,
}

const FRAC_BITS: u32 = 120;

impl LeibnizHost {
    pub const MAX_INDEX: u64 = 1 << 40;

    pub fn new() -> LeibnizHost {
        LeibnizHost::default()
    }

    fn div_both(num: u128, d: u128) -> (i128, i128) {
        let q = num / d;
        let up = q + u128::from(!num.is_multiple_of(d));
        (q as i128, up as i128)
    }

    fn advance_to(&mut self, index: u64) {
        if index < self.count {
            *self = LeibnizHost::default();
        }
        while self.count < index {
            let k = u128::from(self.count);
            if self.count.is_multiple_of(2) && index - self.count >= 2 {
                // 4/(2k+1) - 4/(2k+3) = 8 / ((2k+1)(2k+3))
                let (f, c) = Self::div_both(8u128 << FRAC_BITS, (2 * k + 1) * (2 * k + 3));
                self.lo += f;
                self.hi += c;
                self.count += 2;
            } else {
                let (f, c) = Self::div_both(4u128 << FRAC_BITS, 2 * k + 1);
                if self.count.is_multiple_of(2) {
                    self.lo += f;
                    self.hi += c;
                } else {
                    self.lo -= c;
                    self.hi -= f;
                }
                self.count += 1;
            }
        }
    }
}

impl RationalSequence for LeibnizHost {
    fn modulus(&mut self, e: u64) -> Result<Nat, ConstructError> {
        Ok(Nat::from(1u8) << (e + 1))
    }

    fn enclose(&mut self, index: &Nat) -> Result<(Rational, Rational), ConstructError> {
        let index = u64::try_from(index)
            .ok()
            .filter(|&i| i <= Self::MAX_INDEX)
            .ok_or_else(|| ConstructError::Invalid(format!("index {index} beyond the native Leibniz range")))?;
        self.advance_to(index);
        let scale = Int::from(1u8) << FRAC_BITS;
        Ok((Rational::new(self.lo, scale.clone()), Rational::new(self.hi, scale)))
    }
}
