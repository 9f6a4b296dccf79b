//! Number classes built from an integer part and a unary coefficient program.
//!
//! A [`Prcn`] reads coefficient `P(i)` as a binary digit (`0` stays `0`,
//! anything else is `1`). An [`Sprcn`] reads it as a signed digit: `0 ↦ 0`,
//! `1 ↦ +1`, anything larger `↦ -1`. Either way the value is
//! `I + Σ_{i≥1} d_i 2^{-i}`, and the partial sum through `n` is within
//! `2^{-n}` of the limit.
//!
//! Membership is syntactic: any well-formed program of arity 1 is a valid
//! coefficient, because every output has a meaning under the digit rule.

mod format;
mod rcn;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::numeric::{Int, Nat, Rational};
use crate::prf::{ArityError, Builtin, EvalBudget, EvalError, Evaluator, PrfExpr};

pub use format::{deserialize, serialize, validate, Class, FormatError, Number, Rejection, Validation};
pub use rcn::Rcn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignedDigit {
    Minus,
    Zero,
    Plus,
}

impl SignedDigit {
    pub fn value(self) -> i8 {
        match self {
            SignedDigit::Minus => -1,
            SignedDigit::Zero => 0,
            SignedDigit::Plus => 1,
        }
    }

    pub fn from_value(v: i8) -> Option<SignedDigit> {
        match v {
            -1 => Some(SignedDigit::Minus),
            0 => Some(SignedDigit::Zero),
            1 => Some(SignedDigit::Plus),
            _ => None,
        }
    }

    /// The signed reading of a coefficient output.
    pub fn from_output(v: &Nat) -> SignedDigit {
        if v.is_zero() {
            SignedDigit::Zero
        } else if v.is_one() {
            SignedDigit::Plus
        } else {
            SignedDigit::Minus
        }
    }

    pub fn negate(self) -> SignedDigit {
        match self {
            SignedDigit::Minus => SignedDigit::Plus,
            SignedDigit::Zero => SignedDigit::Zero,
            SignedDigit::Plus => SignedDigit::Minus,
        }
    }
}

impl fmt::Display for SignedDigit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NumberError {
    #[error("coefficient program is not unary: {0}")]
    Arity(String),
    #[error(transparent)]
    IllFormed(#[from] ArityError),
}

fn unary(coeff: &PrfExpr) -> Result<(), NumberError> {
    let a = coeff.arity()?;
    if a.accepts(1) {
        Ok(())
    } else {
        Err(NumberError::Arity(format!("arity {a}")))
    }
}

/// Partial sum `I + Σ_{i≤n} d_i 2^{-i}` with its error bound `2^{-n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxResult {
    pub value: Rational,
    pub order: u64,
    pub error_bound: Rational,
}

impl ApproxResult {
    fn from_digits(int_part: &Int, digits: impl Iterator<Item = i8>, n: u64) -> ApproxResult {
        // numerator over 2^n, built Horner-style
        let mut num = int_part.clone();
        for d in digits {
            num = num * 2 + Int::from(d);
        }
        ApproxResult {
            value: Rational::new(num, Int::one() << n),
            order: n,
            error_bound: Rational::pow2(-(n as i64)),
        }
    }

    /// Lower end of the certified enclosure of the limit.
    pub fn lower(&self) -> Rational {
        &self.value - &self.error_bound
    }

    pub fn upper(&self) -> Rational {
        &self.value + &self.error_bound
    }
}

macro_rules! number_class {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash)]
        pub struct $name {
            pub int_part: Int,
            pub coeff: Arc<PrfExpr>,
        }

        impl $name {
            /// Fails unless `coeff` is well-formed and accepts one argument.
            pub fn new(int_part: impl Into<Int>, coeff: impl Into<Arc<PrfExpr>>) -> Result<Self, NumberError> {
                let coeff = coeff.into();
                unary(&coeff)?;
                Ok($name {
                    int_part: int_part.into(),
                    coeff,
                })
            }

            fn output(&self, ev: &mut Evaluator, i: u64) -> Result<Nat, EvalError> {
                ev.call_checked(&self.coeff, &[Nat::from(i)])
            }

            pub fn approx(&self, n: u64, budget: EvalBudget) -> Result<ApproxResult, EvalError> {
                let digits = self.digit_values(n, budget)?;
                Ok(ApproxResult::from_digits(&self.int_part, digits.into_iter(), n))
            }
        }
    };
}

number_class!(Prcn);
number_class!(Sprcn);

impl Prcn {
    /// Digits `d_1..d_n`, each 0 or 1.
    pub fn digits(&self, n: u64, budget: EvalBudget) -> Result<Vec<u8>, EvalError> {
        let mut ev = Evaluator::new(budget);
        (1..=n)
            .map(|i| Ok(u8::from(!self.output(&mut ev, i)?.is_zero())))
            .collect()
    }

    fn digit_values(&self, n: u64, budget: EvalBudget) -> Result<Vec<i8>, EvalError> {
        Ok(self.digits(n, budget)?.into_iter().map(|d| d as i8).collect())
    }

    /// The same program read with the signed rule.
    pub fn as_sprcn_program(&self) -> Sprcn {
        Sprcn {
            int_part: self.int_part.clone(),
            coeff: self.coeff.clone(),
        }
    }

    /// An SPRCN with the same value: outputs pass through `sgn` first, so
    /// large outputs still read as `+1`.
    pub fn to_sprcn(&self) -> Sprcn {
        let coeff = PrfExpr::comp(PrfExpr::Op(Builtin::Sgn), vec![(*self.coeff).clone()]);
        Sprcn {
            int_part: self.int_part.clone(),
            coeff: Arc::new(coeff),
        }
    }
}

impl Sprcn {
    pub fn digits(&self, n: u64, budget: EvalBudget) -> Result<Vec<SignedDigit>, EvalError> {
        let mut ev = Evaluator::new(budget);
        (1..=n)
            .map(|i| Ok(SignedDigit::from_output(&self.output(&mut ev, i)?)))
            .collect()
    }

    fn digit_values(&self, n: u64, budget: EvalBudget) -> Result<Vec<i8>, EvalError> {
        Ok(self.digits(n, budget)?.into_iter().map(SignedDigit::value).collect())
    }

    /// `(0, Z)`.
    pub fn zero() -> Sprcn {
        Sprcn {
            int_part: Int::zero(),
            coeff: Arc::new(PrfExpr::Zero),
        }
    }

    pub fn integer(v: impl Into<Int>) -> Sprcn {
        Sprcn {
            int_part: v.into(),
            coeff: Arc::new(PrfExpr::Zero),
        }
    }
}

/// Binary digit `i` of a PRCN (`i >= 1`).
pub fn coeff_prcn(x: &Prcn, i: u64, budget: EvalBudget) -> Result<u8, EvalError> {
    let v = Evaluator::new(budget).call_checked(&x.coeff, &[Nat::from(i)])?;
    Ok(u8::from(!v.is_zero()))
}

/// Signed digit `i` of an SPRCN (`i >= 1`).
pub fn coeff_sprcn(x: &Sprcn, i: u64, budget: EvalBudget) -> Result<SignedDigit, EvalError> {
    let v = Evaluator::new(budget).call_checked(&x.coeff, &[Nat::from(i)])?;
    Ok(SignedDigit::from_output(&v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// The limit of `x` is certainly below that of `y`.
    ApartBelow,
    ApartAbove,
    /// The approximations are too close to separate; says nothing about equality.
    WithinTolerance,
}

/// Compares two SPRCNs at order `n`; only separations larger than the two
/// tails combined (`2·2^{-n}`) are reported.
pub fn compare_tol(x: &Sprcn, y: &Sprcn, n: u64, budget: EvalBudget) -> Result<Comparison, EvalError> {
    let a = x.approx(n, budget)?.value;
    let b = y.approx(n, budget)?.value;
    let gap = &a - &b;
    let tol = Rational::pow2(1 - n as i64);
    Ok(if gap.abs() <= tol {
        Comparison::WithinTolerance
    } else if gap.is_negative() {
        Comparison::ApartBelow
    } else {
        Comparison::ApartAbove
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prf::parse;

    fn b() -> EvalBudget {
        EvalBudget::new(1_000_000)
    }

    fn sp(i: i64, text: &str) -> Sprcn {
        Sprcn::new(i, parse(text).unwrap()).unwrap()
    }

    #[test]
    fn digit_rules() {
        let zero = Prcn::new(0, PrfExpr::Zero).unwrap();
        assert_eq!(coeff_prcn(&zero, 5, b()).unwrap(), 0);
        let one = Prcn::new(0, PrfExpr::constant(1)).unwrap();
        assert_eq!(coeff_prcn(&one, 1, b()).unwrap(), 1);
        let seven = Prcn::new(0, PrfExpr::constant(7)).unwrap();
        assert_eq!(coeff_prcn(&seven, 2, b()).unwrap(), 1);

        for (out, want) in [(0u64, 0i8), (1, 1), (2, -1), (3, -1), (17, -1)] {
            let x = Sprcn::new(0, PrfExpr::constant(out)).unwrap();
            assert_eq!(coeff_sprcn(&x, 3, b()).unwrap().value(), want, "output {out}");
        }
    }

    #[test]
    fn approximations() {
        assert_eq!(sp(0, "Z").approx(10, b()).unwrap().value, Rational::zero());
        assert_eq!(
            sp(0, "(SUGAR const 1)").approx(3, b()).unwrap().value,
            Rational::new(7, 8)
        );
        assert_eq!(
            sp(1, "(SUGAR const 2)").approx(2, b()).unwrap().value,
            Rational::new(1, 4)
        );
        let r = sp(-2, "S").approx(4, b()).unwrap();
        assert_eq!(r.error_bound, Rational::new(1, 16));
        // digits: P(i) = i + 1 >= 2, all -1
        assert_eq!(r.value, Rational::new(-2 * 16 - 15, 16));
    }

    #[test]
    fn prcn_value_survives_conversion() {
        let x = Prcn::new(-1, PrfExpr::Succ).unwrap();
        for n in 0..6 {
            assert_eq!(x.to_sprcn().approx(n, b()).unwrap(), x.approx(n, b()).unwrap());
        }
        // the plain reinterpretation reads the same outputs as -1
        assert_ne!(x.as_sprcn_program().approx(2, b()).unwrap(), x.approx(2, b()).unwrap());
    }

    #[test]
    fn non_unary_coefficients_are_refused() {
        assert!(Sprcn::new(0, PrfExpr::proj(1, 2)).is_err());
        assert!(Sprcn::new(0, PrfExpr::proj(0, 1)).is_err());
        assert!(Sprcn::new(0, PrfExpr::comp(PrfExpr::Succ, vec![PrfExpr::Zero])).is_ok());
    }

    #[test]
    fn tolerance_comparison() {
        let x = sp(0, "Z");
        assert_eq!(compare_tol(&x, &x, 5, b()).unwrap(), Comparison::WithinTolerance);
        assert_eq!(compare_tol(&x, &sp(1, "Z"), 3, b()).unwrap(), Comparison::ApartBelow);
        assert_eq!(compare_tol(&sp(1, "Z"), &x, 3, b()).unwrap(), Comparison::ApartAbove);
        assert_eq!(
            compare_tol(&sp(0, "(SUGAR const 1)"), &sp(1, "Z"), 8, b()).unwrap(),
            Comparison::WithinTolerance
        );
    }

    #[test]
    fn budget_is_shared_across_digits() {
        let x = sp(0, "(R Z (C S (P 2 2)))");
        assert!(x.approx(3, b()).is_ok());
        assert!(matches!(
            x.approx(50, EvalBudget::new(100)),
            Err(EvalError::BudgetExceeded { .. })
        ));
    }
}
