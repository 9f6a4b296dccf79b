//! Two diagonal constructions, run at desk scale.
//!
//! [`diagonalize`] builds a number in `[0, 1]` that differs from each of the
//! first `k` enumerated SPRCNs, fixing two binary digits per number.
//! [`theorem3_prefix`] writes out the start of a signed expansion whose
//! digits encode the running times and outputs of the enumerated programs.

use super::ConstructError;
use crate::numbers::{SignedDigit, Sprcn};
use crate::numeric::{Nat, Rational};
use crate::prf::{enumerate, eval_steps, EvalBudget, EvalError};

/// A closed interval of width `4^{-k}` inside `[0, 1]` disjoint from the
/// certified enclosure of each of `s_1, ..., s_k`, where `s_i` has integer
/// part 0 and coefficient program number `i - 1` of the enumeration.
///
/// The enclosure of `s_i` is `approx(s_i, 2i+1) ± 2^{-(2i+1)}`, one quarter
/// of the current interval wide. A closed interval that narrow meets at
/// most three of the four closed quarters, so one always remains; the
/// lowest such quarter is taken.
pub fn diagonalize(k: u64, budget: EvalBudget) -> Result<(Rational, Rational), ConstructError> {
    assert!(k >= 1, "diagonalize needs k >= 1");
    let mut lo = Rational::zero();
    let mut width = Rational::one();
    for i in 1..=k {
        let s = Sprcn::new(0, enumerate(i - 1)).expect("enumerated programs are unary");
        let a = s.approx(2 * i + 1, budget)?;
        let (c_lo, c_hi) = (a.lower(), a.upper());
        width = width * Rational::new(1, 4);
        let pick = (0..4)
            .map(|j| &lo + &(&width * &Rational::from(j)))
            .find(|q_lo| {
                let q_hi = q_lo + &width;
                q_hi < c_lo || q_lo > &c_hi
            })
            .expect("a quarter is always free");
        lo = pick;
    }
    let hi = &lo + &width;
    Ok((lo, hi))
}

/// The block `1 0^T s` for a program that ran `T` steps with output mapped
/// to the sign `s`: outputs `>= 2` give `-1`, everything else `+1` (the
/// signed digit reading with 0 folded into `+1`).
pub fn theorem3_block(output: &Nat, steps: u64) -> Vec<SignedDigit> {
    let sign = if output >= &Nat::from(2u32) {
        SignedDigit::Minus
    } else {
        SignedDigit::Plus
    };
    let mut block = vec![SignedDigit::Plus];
    block.extend(std::iter::repeat_n(SignedDigit::Zero, steps as usize));
    block.push(sign);
    block
}

/// The first `count` blocks: program `g_i` is expression number `i - 1`
/// of the enumeration applied to `i`, run with at most `step_cap` steps.
pub fn theorem3_prefix(count: u64, step_cap: u64) -> Result<Vec<SignedDigit>, ConstructError> {
    let mut out = Vec::new();
    for i in 1..=count {
        let g = enumerate(i - 1);
        let (v, steps) = match eval_steps(&g, &[Nat::from(i)], EvalBudget::new(step_cap.max(1))) {
            Ok(r) => r,
            Err(EvalError::BudgetExceeded { .. }) => {
                return Err(ConstructError::StepCapExceeded {
                    index: i,
                    cap: step_cap,
                })
            }
            Err(e) => return Err(e.into()),
        };
        out.extend(theorem3_block(&v, steps));
    }
    Ok(out)
}

/// The same value written with unsigned bits of the same length:
/// `1 0^T 1` stays, `1 0^T (-1)` becomes `0 1^{T+1}`.
pub fn unsigned_block(block: &[SignedDigit]) -> Vec<u8> {
    // subtract the negative digits from the positive ones, borrowing
    // leftwards
    let mut out = vec![0u8; block.len()];
    let mut borrow = 0i8;
    for (slot, d) in out.iter_mut().zip(block).rev() {
        let v = d.value() - borrow;
        (*slot, borrow) = if v < 0 { ((v + 2) as u8, 1) } else { (v as u8, 0) };
    }
    assert_eq!(borrow, 0, "block value is nonnegative");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signs(v: &[i8]) -> Vec<SignedDigit> {
        v.iter().map(|&d| SignedDigit::from_value(d).unwrap()).collect()
    }

    #[test]
    fn block_shapes() {
        assert_eq!(theorem3_block(&Nat::from(1u32), 3), signs(&[1, 0, 0, 0, 1]));
        assert_eq!(theorem3_block(&Nat::from(2u32), 2), signs(&[1, 0, 0, -1]));
        assert_eq!(unsigned_block(&signs(&[1, 0, 0, 0, 0, -1])), vec![0, 1, 1, 1, 1, 1]);
        assert_eq!(unsigned_block(&signs(&[1, 0, 0, 0, 0, 1])), vec![1, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn prefix_and_cap() {
        let p = theorem3_prefix(4, 10_000).unwrap();
        assert_eq!(p[0], SignedDigit::Plus);
        assert!(matches!(
            theorem3_prefix(30, 1),
            Err(ConstructError::StepCapExceeded { cap: 1, .. })
        ));
    }

    #[test]
    fn diagonal_intervals_nest() {
        let b = EvalBudget::new(10_000_000);
        let (lo1, hi1) = diagonalize(1, b).unwrap();
        assert_eq!(&hi1 - &lo1, Rational::new(1, 4));
        let (lo2, hi2) = diagonalize(2, b).unwrap();
        assert!(lo1 <= lo2 && hi2 <= hi1);
    }
}
