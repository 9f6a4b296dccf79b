//! The conversion itself, as a native trace and as a generated program.
//!
//! Both routes make the same decisions. The trace is the reference: it
//! records every intermediate value and stops with a diagnostic as soon as
//! the modulus turns out to be wrong. The generated program is what the
//! resulting number carries, and it repeats the trace's arithmetic in
//! integer form: with `p_{k-1} = N / 2^{k-1}` and `a_{k+1} = A / B`,
//! `X = 2^{k+1} A - 4 N B` is `(a_{k+1} - p_{k-1}) 2^{k+1} B`, so the digit
//! is `+1` iff `X >= B`, `-1` iff `X < -B`, and `0` otherwise.

use super::{split_int, ConstructError, PrSeq, RationalSequence};
use crate::numbers::{SignedDigit, Sprcn};
use crate::numeric::{Int, Nat, Rational};
use crate::prf::term::{self, Scope, Signed};
use crate::prf::{EvalBudget, PrfExpr};

/// Everything the conversion decided up to digit `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionTrace {
    pub int_part: Int,
    /// Indices `c(1), ..., c(n+1)` into the input sequence.
    pub indices: Vec<Nat>,
    /// Enclosures of `a_1, ..., a_{n+1}`; degenerate for exact sequences.
    pub subseq: Vec<(Rational, Rational)>,
    /// `p_0, ..., p_n`.
    pub partials: Vec<Rational>,
    /// `d_1, ..., d_n`.
    pub digits: Vec<SignedDigit>,
}

impl ConversionTrace {
    /// Re-checks `|p_m - a_{m+1}| <= 2^{-(m+1)}` for every recorded `m`
    /// and that the partials are the running digit sums.
    pub fn check(&self) -> Result<(), ConstructError> {
        let mut p = Rational::from_int(self.int_part.clone());
        for (m, partial) in self.partials.iter().enumerate() {
            if m > 0 {
                p = &p + &(Rational::pow2(-(m as i64)) * Rational::from(i64::from(self.digits[m - 1].value())));
            }
            if &p != partial {
                return Err(invalid(m as u64, "partial sum does not match the digits"));
            }
            let (lo, hi) = &self.subseq[m];
            let tol = Rational::pow2(-(m as i64) - 1);
            if (&p - lo).abs() > tol || (&p - hi).abs() > tol {
                return Err(invalid(m as u64, "|p_n - a_(n+1)| exceeds 2^-(n+1)"));
            }
        }
        Ok(())
    }
}

fn invalid(n: u64, detail: &str) -> ConstructError {
    ConstructError::InvalidModulus {
        n,
        detail: detail.to_string(),
    }
}

/// Digit for a scaled difference `x = (a_{k+1} - p_{k-1}) 2^{k+1}`.
fn trisect(x: &Rational) -> i8 {
    if x >= &Rational::one() {
        1
    } else if x < &-Rational::one() {
        -1
    } else {
        0
    }
}

/// Runs the conversion of an exact [`PrSeq`] through digit `n`.
pub fn conversion_trace(seq: &PrSeq, n: u64, budget: EvalBudget) -> Result<ConversionTrace, ConstructError> {
    conversion_trace_of(&mut seq.source(budget), n)
}

/// Runs the conversion through digit `n` on any enclosed sequence.
pub fn conversion_trace_of(seq: &mut dyn RationalSequence, n: u64) -> Result<ConversionTrace, ConstructError> {
    let mut index = seq.modulus(1)?;
    let mut indices = Vec::with_capacity(n as usize + 1);
    let mut subseq = Vec::with_capacity(n as usize + 1);
    for m in 1..=n + 1 {
        index = index.max(seq.modulus(m + 1)?);
        subseq.push(seq.enclose(&index)?);
        indices.push(index.clone());
    }

    let half = Rational::new(1, 2);
    let (lo, hi) = &subseq[0];
    let int_part = (lo - &half).ceil();
    if (hi - &half).ceil() != int_part {
        return Err(ConstructError::Ambiguous { n: 0 });
    }

    let mut p = Rational::from_int(int_part.clone());
    let mut partials = vec![p.clone()];
    let mut digits = Vec::with_capacity(n as usize);
    let three = Rational::from(3);
    for k in 1..=n {
        let (lo, hi) = &subseq[k as usize];
        let scale = Rational::pow2(k as i64 + 1);
        let x_lo = (lo - &p) * scale.clone();
        let x_hi = (hi - &p) * scale;
        if x_lo < -three.clone() || x_hi >= three {
            return Err(invalid(k, "a_(n+1) - p_(n-1) outside [-3, 3) * 2^-(n+1)"));
        }
        let d = trisect(&x_lo);
        if trisect(&x_hi) != d {
            return Err(ConstructError::Ambiguous { n: k });
        }
        p = &p + &(Rational::pow2(-(k as i64)) * Rational::from(i64::from(d)));
        let tol = Rational::pow2(-(k as i64) - 1);
        if (&p - lo).abs() > tol || (&p - hi).abs() > tol {
            return Err(invalid(k, "|p_n - a_(n+1)| exceeds 2^-(n+1)"));
        }
        partials.push(p.clone());
        digits.push(SignedDigit::from_value(d).expect("trisection yields a signed digit"));
    }
    Ok(ConversionTrace {
        int_part,
        indices,
        subseq,
        partials,
        digits,
    })
}

/// An SPRCN with the same limit as `seq`, assuming its modulus is valid.
///
/// The integer part is decided here (it needs `a_1` only); the digits are
/// left to the generated coefficient program. Fails only if computing `a_1`
/// exceeds `budget`.
pub fn to_sprcn(seq: &PrSeq, budget: EvalBudget) -> Result<Sprcn, ConstructError> {
    let trace = conversion_trace(seq, 0, budget)?;
    Ok(
        Sprcn::new(trace.int_part.clone(), coefficient_program(seq, &trace.int_part))
            .expect("generated program is unary"),
    )
}

/// `k -> code of digit k`, folding over digits `1..=k` with state
/// `pair(pair(N⁺, N⁻), code)`.
fn coefficient_program(seq: &PrSeq, int_part: &Int) -> PrfExpr {
    let (s, args) = Scope::root(1);
    let (ip, ineg) = split_int(int_part);
    let init = term::pair(term::pair(term::nat(ip), term::nat(ineg)), term::lit(0));
    let seq = seq.clone();
    let fin = s.fold(args[0].clone(), init, move |s, t, st| {
        // iteration t decides digit k = t + 1 from a_{k+1} = q_{c(k+1)}
        let count = term::add(t.clone(), term::lit(3));
        let modulus = seq.modulus.clone();
        let index = s.max_upto(count, move |_, e| term::apply(&modulus, vec![e]));
        s.bind(index, move |s, index| {
            let a = Signed::new(
                term::apply(&seq.num_pos, vec![index.clone()]),
                term::apply(&seq.num_neg, vec![index.clone()]),
            );
            let den = term::max(term::lit(1), term::apply(&seq.den, vec![index]));
            s.bind(den, move |s, b| {
                s.bind(s.pow2(term::add(t, term::lit(2))), move |s, scale| {
                    let n = Signed::new(term::fst(term::fst(st.clone())), term::snd(term::fst(st)));
                    let x = a.scale(scale) - n.clone().scale(term::mul(term::lit(4), b.clone()));
                    s.bind(x.pos, move |s, xp| {
                        s.bind(x.neg, move |s, xn| {
                            let x = Signed::new(xp, xn);
                            let plus = x.clone().ge_nat(b.clone());
                            let minus = x.lt_neg_nat(b);
                            s.bind(plus, move |s, plus| {
                                s.bind(minus, move |s, minus| {
                                    let np = term::add(term::mul(term::lit(2), n.pos), plus.clone());
                                    let nn = term::add(term::mul(term::lit(2), n.neg), minus.clone());
                                    s.bind(np, move |s, np| {
                                        s.bind(nn, move |_, nn| {
                                            let code = term::add(plus, term::mul(term::lit(2), minus));
                                            term::pair(
                                                term::pair(term::monus(np.clone(), nn.clone()), term::monus(nn, np)),
                                                code,
                                            )
                                        })
                                    })
                                })
                            })
                        })
                    })
                })
            })
        })
    });
    term::compile(&term::snd(fin), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prf::term::Term;

    fn b() -> EvalBudget {
        EvalBudget::new(50_000_000)
    }

    fn program(f: impl FnOnce(Scope, Term) -> Term) -> PrfExpr {
        let (s, v) = Scope::root(1);
        term::compile(&f(s, v[0].clone()), 1)
    }

    /// `Σ_{k=1}^{n} 2^{-k} = (2^n - 1) / 2^n`, modulus `C(e) = e`.
    fn geometric() -> PrSeq {
        PrSeq::new(
            program(|s, n| term::monus(s.pow2(n), term::lit(1))),
            PrfExpr::Zero,
            program(|s, n| s.pow2(n)),
            PrfExpr::proj(1, 1),
        )
        .unwrap()
    }

    #[test]
    fn constant_one() {
        let s = PrSeq::new(PrfExpr::constant(1), PrfExpr::Zero, PrfExpr::constant(1), PrfExpr::Zero).unwrap();
        let x = to_sprcn(&s, b()).unwrap();
        assert_eq!(x.int_part, Int::from(1));
        assert!(x.digits(10, b()).unwrap().iter().all(|d| *d == SignedDigit::Zero));
    }

    #[test]
    fn geometric_limit() {
        let s = geometric();
        let x = to_sprcn(&s, b()).unwrap();
        let r = x.approx(8, b()).unwrap();
        assert!((&r.value - &Rational::one()).abs() <= Rational::pow2(-8));
        let t = conversion_trace(&s, 8, b()).unwrap();
        t.check().unwrap();
        assert_eq!(t.digits, x.digits(8, b()).unwrap());
        assert_eq!(t.partials[8], r.value);
    }

    #[test]
    fn ties_round_down() {
        // q_n = 1/2 for all n: I = 0, then digit 1 must be +1
        let s = PrSeq::new(PrfExpr::constant(1), PrfExpr::Zero, PrfExpr::constant(2), PrfExpr::Zero).unwrap();
        let t = conversion_trace(&s, 3, b()).unwrap();
        assert_eq!(t.int_part, Int::from(0));
        assert_eq!(t.partials[1], Rational::new(1, 2));
        let s = PrSeq::new(PrfExpr::Zero, PrfExpr::constant(1), PrfExpr::constant(2), PrfExpr::Zero).unwrap();
        assert_eq!(conversion_trace(&s, 1, b()).unwrap().int_part, Int::from(-1));
    }

    #[test]
    fn bad_modulus_is_reported() {
        // q_n = n with a constant modulus: a_2 jumps away from p_0
        let s = PrSeq::new(PrfExpr::proj(1, 1), PrfExpr::Zero, PrfExpr::constant(1), PrfExpr::Succ).unwrap();
        assert!(matches!(
            conversion_trace(&s, 4, b()),
            Err(ConstructError::InvalidModulus { .. })
        ));
    }

    #[test]
    fn zero_denominator_is_clamped() {
        let s = PrSeq::new(PrfExpr::constant(5), PrfExpr::Zero, PrfExpr::Zero, PrfExpr::Zero).unwrap();
        assert_eq!(s.term(&Nat::from(3u32), b()).unwrap(), Rational::from(5));
    }

    #[test]
    fn arity_is_checked() {
        assert!(PrSeq::new(PrfExpr::proj(1, 2), PrfExpr::Zero, PrfExpr::Zero, PrfExpr::Zero).is_err());
    }
}
