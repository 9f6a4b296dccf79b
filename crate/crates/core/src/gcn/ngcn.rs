//! Power series whose binary coefficients may be revised a bounded number
//! of times.
//!
//! Coefficient `i` is observed through versions `P(i, 1), P(i, 2), ...`
//! (read as bits, `0 ↦ 0`, `≥1 ↦ 1`). Up to stage `n` only versions
//! `1..=n` are visible; the digit used is the value after the `J(i)`-th
//! change among them, or after the last change if there were fewer.

use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::numeric::{Int, Nat, Rational};
use crate::prf::{Arity, EvalBudget, EvalError, Evaluator, PrfExpr};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ngcn {
    pub int_part: Int,
    pub coeff2: Arc<PrfExpr>,
    pub revision_bound: Arc<PrfExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct NgcnError(pub String);

impl Ngcn {
    pub fn new(
        int_part: impl Into<Int>,
        coeff2: impl Into<Arc<PrfExpr>>,
        revision_bound: impl Into<Arc<PrfExpr>>,
    ) -> Result<Ngcn, NgcnError> {
        let coeff2 = coeff2.into();
        let revision_bound = revision_bound.into();
        match coeff2.arity() {
            Ok(a) if a.accepts(2) => {}
            Ok(a) => return Err(NgcnError(format!("coefficient program has arity {a}, expected 2"))),
            Err(e) => return Err(NgcnError(e.to_string())),
        }
        match revision_bound.arity() {
            Ok(Arity::Any) | Ok(Arity::Exact(1)) => {}
            Ok(a) => return Err(NgcnError(format!("revision bound has arity {a}, expected 1"))),
            Err(e) => return Err(NgcnError(e.to_string())),
        }
        Ok(Ngcn {
            int_part: int_part.into(),
            coeff2,
            revision_bound,
        })
    }

    /// Frozen digits `d_0..=d_n` at stage `n`.
    pub fn digits(&self, n: u64, budget: EvalBudget) -> Result<Vec<u8>, EvalError> {
        let mut ev = Evaluator::new(budget);
        let mut out = Vec::with_capacity(n as usize + 1);
        for i in 0..=n {
            if n == 0 {
                out.push(0);
                break;
            }
            let allowed = ev.call_checked(&self.revision_bound, &[Nat::from(i)])?;
            let allowed = allowed.to_u64().unwrap_or(u64::MAX);
            let mut value = None;
            let mut changes = 0u64;
            for j in 1..=n {
                let v = u8::from(!ev.call_checked(&self.coeff2, &[Nat::from(i), Nat::from(j)])?.is_zero());
                match value {
                    None => value = Some(v),
                    Some(prev) if prev != v => {
                        if changes == allowed {
                            break;
                        }
                        changes += 1;
                        value = Some(v);
                    }
                    Some(_) => {}
                }
            }
            out.push(value.unwrap_or(0));
        }
        Ok(out)
    }
}

/// `I + Σ_{i=0}^{n} d_i 2^{-i}` with the frozen digits at stage `n`.
pub fn ngcn_partial(x: &Ngcn, n: u64, budget: EvalBudget) -> Result<Rational, EvalError> {
    let digits = x.digits(n, budget)?;
    let mut num = Int::zero();
    for d in &digits {
        num = num * 2 + Int::from(*d);
    }
    let scale = Int::from(1u8) << n;
    Ok(Rational::from_int(x.int_part.clone()) + Rational::new(num, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prf::term::{self, Scope};
    use crate::prf::{parse, term::compile};

    fn b() -> EvalBudget {
        EvalBudget::new(1_000_000)
    }

    /// P(i, m) for i = 1 given by `f(m)`, zero elsewhere.
    fn first_digit(f: impl FnOnce(term::Term) -> term::Term) -> PrfExpr {
        let (_, v) = Scope::root(2);
        let t = term::mul(term::eq(v[0].clone(), term::lit(1)), f(v[1].clone()));
        compile(&t, 2)
    }

    #[test]
    fn constant_zero() {
        let x = Ngcn::new(3, parse("(C Z (P 1 2))").unwrap(), PrfExpr::constant(1)).unwrap();
        for n in 0..6 {
            assert_eq!(ngcn_partial(&x, n, b()).unwrap(), Rational::from(3));
        }
    }

    #[test]
    fn late_flip_counts() {
        // P(1, m) = [m >= 4]
        let p = first_digit(|m| term::le(term::lit(4), m));
        let x = Ngcn::new(0, p, PrfExpr::constant(1)).unwrap();
        assert_eq!(ngcn_partial(&x, 5, b()).unwrap(), Rational::new(1, 2));
        assert_eq!(ngcn_partial(&x, 3, b()).unwrap(), Rational::zero());
    }

    #[test]
    fn freeze_at_first_change() {
        // P(1, m) = m mod 2: 1, 0, 1, 0, ... ; first change (at m = 2) gives 0
        let p = first_digit(|m| term::rem(m, term::lit(2)));
        let x = Ngcn::new(0, p, PrfExpr::constant(1)).unwrap();
        assert_eq!(ngcn_partial(&x, 1, b()).unwrap(), Rational::new(1, 2));
        for n in 2..10 {
            assert_eq!(ngcn_partial(&x, n, b()).unwrap(), Rational::zero(), "n = {n}");
        }
        // P(1, m) = (m + 1) mod 2: 0, 1, 0, 1, ... ; frozen at 1
        let p = first_digit(|m| term::rem(term::succ(m), term::lit(2)));
        let x = Ngcn::new(0, p, PrfExpr::constant(1)).unwrap();
        for n in 2..10 {
            assert_eq!(ngcn_partial(&x, n, b()).unwrap(), Rational::new(1, 2), "n = {n}");
        }
        // two revisions allowed: 0 -> 1 -> 0 then frozen
        let p = first_digit(|m| term::rem(term::succ(m), term::lit(2)));
        let x = Ngcn::new(0, p, PrfExpr::constant(2)).unwrap();
        assert_eq!(ngcn_partial(&x, 2, b()).unwrap(), Rational::new(1, 2));
        for n in 3..10 {
            assert_eq!(ngcn_partial(&x, n, b()).unwrap(), Rational::zero(), "n = {n}");
        }
    }

    #[test]
    fn arity_checks() {
        assert!(Ngcn::new(0, PrfExpr::Succ, PrfExpr::constant(1)).is_err());
        assert!(Ngcn::new(0, PrfExpr::proj(1, 2), PrfExpr::proj(1, 2)).is_err());
        assert!(Ngcn::new(0, PrfExpr::Zero, PrfExpr::Zero).is_ok());
    }
}
