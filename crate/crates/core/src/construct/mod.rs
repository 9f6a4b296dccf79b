//! Building signed numbers from modulated rational sequences.
//!
//! A [`PrSeq`] describes `q_n = A(n) / B(n)` together with a Cauchy modulus
//! `C`: `|q_i - q_j| < 2^{-e}` whenever `i, j >= C(e)`. [`to_sprcn`] turns
//! it into an [`Sprcn`](crate::numbers::Sprcn) with the same limit, whose
//! coefficient program embeds the four input programs. Everything else here
//! (arithmetic, constants) is built on that conversion.
//!
//! The conversion runs along the subsequence `a_n = q_{c(n)}` with
//! `c(n) = max(C(1), ..., C(n+1))`, so `a_n` is within `2^{-(n+1)}` of the
//! limit. Starting from the integer `I` nearest to `a_1` (ties go down), digit
//! `n` is picked by where `a_{n+1} - p_{n-1}` falls among
//! `[-3, -1)`, `[-1, 1)` and `[1, 3)` in units of `2^{-(n+1)}`, which keeps
//! `|p_n - a_{n+1}| <= 2^{-(n+1)}` at every step.

mod arithmetic;
mod constants;
mod convert;
mod demos;

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::numeric::{Int, Nat, Rational};
use crate::prf::{EvalBudget, EvalError, Evaluator, PrfExpr};

pub use arithmetic::{product_sequence, sprcn_add, sprcn_mul, sprcn_neg, sprcn_sub, sum_sequence};
pub use constants::{
    const_e, const_pi, const_sqrt2, constant, e_seq, goldbach_number, leibniz_seq, nilakantha_seq, LeibnizHost,
};
pub use convert::{conversion_trace, conversion_trace_of, to_sprcn, ConversionTrace};
pub use demos::{diagonalize, theorem3_block, theorem3_prefix, unsigned_block};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    /// The sequence moved further than its modulus allows.
    #[error("modulus violated at digit {n}: {detail}")]
    InvalidModulus { n: u64, detail: String },
    /// An enclosure of a sequence element straddles a digit threshold.
    #[error("enclosure too wide to decide digit {n}")]
    Ambiguous { n: u64 },
    #[error("program {index} needs more than {cap} steps")]
    StepCapExceeded { index: u64, cap: u64 },
    #[error("invalid sequence: {0}")]
    Invalid(String),
}

/// A rational sequence given by enclosures of its elements.
pub trait RationalSequence {
    /// `C(e)`.
    fn modulus(&mut self, e: u64) -> Result<Nat, ConstructError>;
    /// Bounds `lo <= q_index <= hi`; exact sequences return `lo == hi`.
    fn enclose(&mut self, index: &Nat) -> Result<(Rational, Rational), ConstructError>;
}

/// `q_n = (A⁺(n) - A⁻(n)) / max(B(n), 1)` with modulus `C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrSeq {
    pub num_pos: Arc<PrfExpr>,
    pub num_neg: Arc<PrfExpr>,
    pub den: Arc<PrfExpr>,
    pub modulus: Arc<PrfExpr>,
}

impl PrSeq {
    pub fn new(
        num_pos: impl Into<Arc<PrfExpr>>,
        num_neg: impl Into<Arc<PrfExpr>>,
        den: impl Into<Arc<PrfExpr>>,
        modulus: impl Into<Arc<PrfExpr>>,
    ) -> Result<PrSeq, ConstructError> {
        let s = PrSeq {
            num_pos: num_pos.into(),
            num_neg: num_neg.into(),
            den: den.into(),
            modulus: modulus.into(),
        };
        for (name, e) in s.parts() {
            match e.arity() {
                Ok(a) if a.accepts(1) => {}
                Ok(a) => return Err(ConstructError::Invalid(format!("{name} has arity {a}, expected 1"))),
                Err(err) => return Err(ConstructError::Invalid(format!("{name}: {err}"))),
            }
        }
        Ok(s)
    }

    pub fn parts(&self) -> [(&'static str, &Arc<PrfExpr>); 4] {
        [
            ("num+", &self.num_pos),
            ("num-", &self.num_neg),
            ("den", &self.den),
            ("mod", &self.modulus),
        ]
    }

    /// `q_n` exactly.
    pub fn term(&self, n: &Nat, budget: EvalBudget) -> Result<Rational, EvalError> {
        self.term_with(&mut Evaluator::new(budget), n)
    }

    fn term_with(&self, ev: &mut Evaluator, n: &Nat) -> Result<Rational, EvalError> {
        let args = [n.clone()];
        let p = ev.call_checked(&self.num_pos, &args)?;
        let m = ev.call_checked(&self.num_neg, &args)?;
        let b = ev.call_checked(&self.den, &args)?;
        let b = if b.is_zero() { Nat::one() } else { b };
        Ok(Rational::new(Int::from(p) - Int::from(m), Int::from(b)))
    }

    /// The sequence as a [`RationalSequence`] metered by one budget.
    pub fn source(&self, budget: EvalBudget) -> PrSeqSource<'_> {
        PrSeqSource {
            seq: self,
            ev: Evaluator::new(budget),
        }
    }
}

pub struct PrSeqSource<'a> {
    seq: &'a PrSeq,
    ev: Evaluator,
}

impl RationalSequence for PrSeqSource<'_> {
    fn modulus(&mut self, e: u64) -> Result<Nat, ConstructError> {
        Ok(self.ev.call_checked(&self.seq.modulus, &[Nat::from(e)])?)
    }

    fn enclose(&mut self, index: &Nat) -> Result<(Rational, Rational), ConstructError> {
        let q = self.seq.term_with(&mut self.ev, index)?;
        Ok((q.clone(), q))
    }
}

/// `(max(v, 0), max(-v, 0))`.
pub(crate) fn split_int(v: &Int) -> (Nat, Nat) {
    let mag = v.magnitude().clone();
    if v.sign() == num_bigint::Sign::Minus {
        (Nat::zero(), mag)
    } else {
        (mag, Nat::zero())
    }
}
