//! Metered evaluation.
//!
//! Cost model: every node application costs one step, and every unrolled
//! iteration of a recursion, bounded sum or bounded loop costs one more step
//! on top of the work done inside it. So `Zero` and `Succ` cost 1, a
//! composition costs 1 plus the cost of its inner and outer calls, and
//! `R(b, s)(x, y)` costs `1 + cost(b) + Σ_{i<y} (1 + cost(s at i))`.

use num_traits::{One, ToPrimitive, Zero};

use super::{ArityError, Builtin, PrfExpr};
use crate::numeric::Nat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    max_steps: u64,
}

impl EvalBudget {
    /// # Panics
    /// If `max_steps` is zero.
    pub fn new(max_steps: u64) -> EvalBudget {
        assert!(max_steps > 0, "budget must allow at least one step");
        EvalBudget { max_steps }
    }

    pub fn max_steps(self) -> u64 {
        self.max_steps
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget::new(50_000_000)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation budget of {limit} steps exhausted")]
    BudgetExceeded { limit: u64 },
    #[error("expression of arity {expected} applied to {got} arguments")]
    ArityMismatch { expected: String, got: usize },
    #[error(transparent)]
    IllFormed(#[from] ArityError),
}

/// Checks arity, then evaluates within `budget`.
pub fn eval(expr: &PrfExpr, args: &[Nat], budget: EvalBudget) -> Result<Nat, EvalError> {
    eval_steps(expr, args, budget).map(|(v, _)| v)
}

/// Like [`eval`], also returning the step count under the cost model.
pub fn eval_steps(expr: &PrfExpr, args: &[Nat], budget: EvalBudget) -> Result<(Nat, u64), EvalError> {
    let mut ev = Evaluator::new(budget);
    let v = ev.call(expr, args)?;
    Ok((v, ev.used()))
}

/// A step meter shared across several calls, so that a whole computation
/// (for example all digits of one approximation) draws on one budget.
#[derive(Debug)]
pub struct Evaluator {
    used: u64,
    limit: u64,
}

impl Evaluator {
    pub fn new(budget: EvalBudget) -> Evaluator {
        Evaluator {
            used: 0,
            limit: budget.max_steps,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    /// Arity-checked application.
    pub fn call(&mut self, expr: &PrfExpr, args: &[Nat]) -> Result<Nat, EvalError> {
        let a = expr.arity()?;
        if !a.accepts(args.len()) {
            return Err(EvalError::ArityMismatch {
                expected: a.to_string(),
                got: args.len(),
            });
        }
        self.run(expr, args)
    }

    /// Application of an expression already known to accept `args.len()`.
    pub(crate) fn call_checked(&mut self, expr: &PrfExpr, args: &[Nat]) -> Result<Nat, EvalError> {
        self.run(expr, args)
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.used >= self.limit {
            return Err(EvalError::BudgetExceeded { limit: self.limit });
        }
        self.used += 1;
        Ok(())
    }

    /// Fails early when `n` further iterations can't possibly fit.
    fn iterations(&self, n: &Nat) -> Result<u64, EvalError> {
        match n.to_u64() {
            Some(k) if k <= self.limit - self.used => Ok(k),
            _ => Err(EvalError::BudgetExceeded { limit: self.limit }),
        }
    }

    fn run(&mut self, e: &PrfExpr, args: &[Nat]) -> Result<Nat, EvalError> {
        self.tick()?;
        match e {
            PrfExpr::Zero => Ok(Nat::zero()),
            PrfExpr::Succ => Ok(&args[0] + 1u32),
            PrfExpr::Proj { k, .. } => Ok(args[k - 1].clone()),
            PrfExpr::Const(c) => Ok(c.clone()),
            PrfExpr::Op(b) => Ok(apply_builtin(*b, args)),
            PrfExpr::Comp(f, gs) => {
                let mut vals = Vec::with_capacity(gs.len());
                for g in gs {
                    vals.push(self.run(g, args)?);
                }
                self.run(f, &vals)
            }
            PrfExpr::PrimRec(base, step) => {
                let Some((y, xs)) = args.split_last() else {
                    return self.run(base, &[]);
                };
                let count = self.iterations(y)?;
                let mut acc = self.run(base, xs)?;
                let mut buf: Vec<Nat> = xs.to_vec();
                let n = xs.len();
                buf.push(Nat::zero());
                buf.push(Nat::zero());
                for i in 0..count {
                    self.tick()?;
                    buf[n] = Nat::from(i);
                    buf[n + 1] = acc;
                    acc = self.run(step, &buf)?;
                }
                Ok(acc)
            }
            PrfExpr::BoundedSum(body, bound) => {
                let top = self.run(bound, args)?;
                let count = self.iterations(&(top + 1u32))?;
                let mut buf = args.to_vec();
                buf.push(Nat::zero());
                let mut total = Nat::zero();
                for i in 0..count {
                    self.tick()?;
                    *buf.last_mut().unwrap() = Nat::from(i);
                    total += self.run(body, &buf)?;
                }
                Ok(total)
            }
            PrfExpr::BoundedLoop(body, bound) => {
                let top = self.run(bound, args)?;
                let count = self.iterations(&top)?;
                let n = args.len();
                let mut buf = args.to_vec();
                buf.push(Nat::zero());
                buf.push(Nat::zero());
                let mut acc = Nat::zero();
                for i in 0..count {
                    self.tick()?;
                    buf[n] = Nat::from(i);
                    buf[n + 1] = acc;
                    acc = self.run(body, &buf)?;
                }
                Ok(acc)
            }
        }
    }
}

fn bit(b: bool) -> Nat {
    if b {
        Nat::one()
    } else {
        Nat::zero()
    }
}

fn tri(w: &Nat) -> Nat {
    (w * (w + 1u32)) >> 1
}

/// Inverse of the Cantor pairing `pair(x, y) = (x+y)(x+y+1)/2 + y`.
pub(crate) fn unpair(z: &Nat) -> (Nat, Nat) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) >> 1;
    let y = z - tri(&w);
    let x = &w - &y;
    (x, y)
}

pub(crate) fn apply_builtin(b: Builtin, args: &[Nat]) -> Nat {
    let x = &args[0];
    match b {
        Builtin::Sgn | Builtin::AbsSgn => bit(!x.is_zero()),
        Builtin::Fst => unpair(x).0,
        Builtin::Snd => unpair(x).1,
        _ => {
            let y = &args[1];
            match b {
                Builtin::Add => x + y,
                Builtin::Mul => x * y,
                Builtin::TruncSub => {
                    if x >= y {
                        x - y
                    } else {
                        Nat::zero()
                    }
                }
                Builtin::Le => bit(x <= y),
                Builtin::Max => x.max(y).clone(),
                Builtin::Pair => tri(&(x + y)) + y,
                Builtin::Div => {
                    if y.is_zero() {
                        Nat::zero()
                    } else {
                        x / y
                    }
                }
                Builtin::Mod => {
                    if y.is_zero() {
                        x.clone()
                    } else {
                        x % y
                    }
                }
                Builtin::Sgn | Builtin::AbsSgn | Builtin::Fst | Builtin::Snd => unreachable!(),
            }
        }
    }
}
