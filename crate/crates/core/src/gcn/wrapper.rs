//! The censoring wrapper around an unconstrained proposal source.
//!
//! The wrapper emits 0 first. After that it runs the inner program until it
//! proposes a rational `q` and emits `q` when doing so keeps the emitted
//! sequence within the output bound `M` and within the jump bound at every
//! scale; otherwise it emits its previous output again. A halted inner
//! program also just repeats the previous output.
//!
//! # Jump bound
//!
//! At scale `k` the emitted sequence may contain fewer than `J*(k)`
//! non-overlapping jumps of size above `2^{-k}`, where
//! `J*(k) = max(1, j(1), ..., j(k))`. The running maximum is what makes the
//! bound enforceable online: the jump count at scale `k` grows with `k` and
//! is the same for every scale finer than the smallest gap between distinct
//! emitted values, so checking scales `1..=K` for that cut-off `K` covers all
//! of them. For nondecreasing `j` (the usual case) `J*` is `max(1, j)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::jumps::ScanState;
use super::machine::{Event, Machine, Run};
use crate::numeric::{Int, Nat, Rational};
use crate::prf::{EvalBudget, EvalError, Evaluator, PrfExpr};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GcnError {
    #[error("inner program made no proposal within {steps} steps")]
    BudgetExceeded { steps: u64 },
    #[error("jump bound evaluation failed: {0}")]
    Jump(EvalError),
    #[error("invalid generalized number: {0}")]
    Invalid(String),
}

/// Outcome of one unit of inner work.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Working,
    Proposal(Rational),
    Halted,
}

/// Anything that can be stepped to produce proposals.
pub trait ProposalSource: Send {
    fn step(&mut self) -> Result<Step, GcnError>;
}

pub type SourceFactory = Arc<dyn Fn() -> Box<dyn ProposalSource> + Send + Sync>;

/// The inner program of a [`Gcn`].
#[derive(Clone)]
pub enum SequenceProgram {
    /// A toy machine run on input 0; `EMIT` and `OUT` make proposals.
    Machine(Machine),
    /// A generator supplied by the host program.
    Host {
        name: String,
        factory: SourceFactory,
    },
    Sum(Box<Gcn>, Box<Gcn>),
    Product(Box<Gcn>, Box<Gcn>),
    Neg(Box<Gcn>),
}

impl fmt::Debug for SequenceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceProgram::Machine(m) => write!(f, "Machine({m})"),
            SequenceProgram::Host { name, .. } => write!(f, "Host({name})"),
            SequenceProgram::Sum(x, y) => write!(f, "Sum({:?}, {:?})", x.inner, y.inner),
            SequenceProgram::Product(x, y) => write!(f, "Product({:?}, {:?})", x.inner, y.inner),
            SequenceProgram::Neg(x) => write!(f, "Neg({:?})", x.inner),
        }
    }
}

/// What a scripted source does after its script runs out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScriptEnd {
    Halt,
    /// Keep working forever without proposing.
    Stall,
}

struct ScriptSource {
    items: Arc<[Option<Rational>]>,
    pos: usize,
    end: ScriptEnd,
}

impl ProposalSource for ScriptSource {
    fn step(&mut self) -> Result<Step, GcnError> {
        let Some(item) = self.items.get(self.pos) else {
            return Ok(match self.end {
                ScriptEnd::Halt => Step::Halted,
                ScriptEnd::Stall => Step::Working,
            });
        };
        self.pos += 1;
        Ok(match item {
            Some(q) => Step::Proposal(q.clone()),
            None => Step::Working,
        })
    }
}

struct FnSource<F> {
    f: F,
    k: u64,
}

impl<F: FnMut(u64) -> Rational + Send> ProposalSource for FnSource<F> {
    fn step(&mut self) -> Result<Step, GcnError> {
        self.k += 1;
        Ok(Step::Proposal((self.f)(self.k)))
    }
}

struct MachineSource(Run);

impl ProposalSource for MachineSource {
    fn step(&mut self) -> Result<Step, GcnError> {
        Ok(match self.0.step() {
            Event::Step => Step::Working,
            Event::Emit(q) => Step::Proposal(q),
            Event::Out(b) => Step::Proposal(Rational::from(i64::from(b))),
            Event::Halted => Step::Halted,
        })
    }
}

struct NegSource(Box<dyn ProposalSource>);

impl ProposalSource for NegSource {
    fn step(&mut self) -> Result<Step, GcnError> {
        Ok(match self.0.step()? {
            Step::Proposal(q) => Step::Proposal(-q),
            other => other,
        })
    }
}

#[derive(Clone, Copy)]
enum Combine {
    Add,
    Mul,
}

/// Runs two wrapped operands in strict alternation, one step each, and
/// proposes the combination of their latest outputs after every fresh output.
struct PairSource {
    sides: [GcnRunner; 2],
    last: [Rational; 2],
    done: [bool; 2],
    turn: usize,
    op: Combine,
}

impl ProposalSource for PairSource {
    fn step(&mut self) -> Result<Step, GcnError> {
        if self.done[0] && self.done[1] {
            return Ok(Step::Halted);
        }
        let side = if self.done[self.turn] { 1 - self.turn } else { self.turn };
        self.turn = 1 - side;
        match self.sides[side].poll()? {
            Poll::Pending => Ok(Step::Working),
            Poll::Exhausted => {
                self.done[side] = true;
                Ok(Step::Working)
            }
            Poll::Emitted(v) => {
                self.last[side] = v;
                let [a, b] = &self.last;
                Ok(Step::Proposal(match self.op {
                    Combine::Add => a + b,
                    Combine::Mul => a * b,
                }))
            }
        }
    }
}

impl SequenceProgram {
    /// Proposals taken from a list; `None` entries are steps without output.
    pub fn script(name: &str, items: Vec<Option<Rational>>, end: ScriptEnd) -> SequenceProgram {
        let items: Arc<[Option<Rational>]> = items.into();
        SequenceProgram::Host {
            name: name.to_string(),
            factory: Arc::new(move || {
                Box::new(ScriptSource {
                    items: items.clone(),
                    pos: 0,
                    end,
                })
            }),
        }
    }

    /// Proposes `f(1), f(2), ...`, one per step, forever.
    pub fn from_fn<F>(name: &str, f: F) -> SequenceProgram
    where
        F: Fn(u64) -> Rational + Clone + Send + Sync + 'static,
    {
        SequenceProgram::Host {
            name: name.to_string(),
            factory: Arc::new(move || Box::new(FnSource { f: f.clone(), k: 0 })),
        }
    }

    pub fn source(&self) -> Box<dyn ProposalSource> {
        match self {
            SequenceProgram::Machine(m) => Box::new(MachineSource(m.start(0))),
            SequenceProgram::Host { factory, .. } => factory(),
            SequenceProgram::Neg(x) => Box::new(NegSource(x.inner.source())),
            SequenceProgram::Sum(x, y) => Box::new(pair_source(x, y, Combine::Add)),
            SequenceProgram::Product(x, y) => Box::new(pair_source(x, y, Combine::Mul)),
        }
    }
}

fn pair_source(x: &Gcn, y: &Gcn, op: Combine) -> PairSource {
    let mut sides = [x.runner(), y.runner()];
    // the operands' mandatory initial zeros are not forwarded
    for s in &mut sides {
        s.emit_initial();
    }
    PairSource {
        sides,
        last: [Rational::zero(), Rational::zero()],
        done: [false, false],
        turn: 0,
        op,
    }
}

/// A jump-bounded generalized number: inner program, output bound `M` and
/// jump bound `j`.
#[derive(Clone, Debug)]
pub struct Gcn {
    pub inner: SequenceProgram,
    pub bound: Nat,
    pub jump_bound: Arc<PrfExpr>,
}

impl Gcn {
    pub fn new(
        inner: SequenceProgram,
        bound: impl Into<Nat>,
        jump_bound: impl Into<Arc<PrfExpr>>,
    ) -> Result<Gcn, GcnError> {
        let bound = bound.into();
        let jump_bound = jump_bound.into();
        if bound < Nat::from(1u32) {
            return Err(GcnError::Invalid("output bound must be at least 1".into()));
        }
        if !jump_bound.is_unary() {
            return Err(GcnError::Invalid("jump bound must be a unary program".into()));
        }
        Ok(Gcn {
            inner,
            bound,
            jump_bound,
        })
    }

    pub fn runner(&self) -> GcnRunner {
        GcnRunner {
            source: self.inner.source(),
            ledger: JumpLedger::default(),
            bound: Rational::from(Int::from(self.bound.clone())),
            jump: self.jump_bound.clone(),
            jump_budget: EvalBudget::new(1_000_000),
            halted: false,
        }
    }
}

pub enum Poll {
    Emitted(Rational),
    Pending,
    Exhausted,
}

/// Accepted outputs and the per-scale greedy jump counts behind them.
#[derive(Clone, Debug, Default)]
pub struct JumpLedger {
    emitted: Vec<Rational>,
    distinct: BTreeSet<Rational>,
    min_gap: Option<Rational>,
    // scan states for thresholds 2^-1 .. 2^-K
    scales: Vec<ScanState>,
    // shared state of every finer scale
    tail: ScanState,
    // J*(1..)
    envelope: Vec<u64>,
    censored: u64,
}

impl JumpLedger {
    pub fn emitted(&self) -> &[Rational] {
        &self.emitted
    }

    /// Greedy jump count at scale `k >= 1`.
    pub fn count_at(&self, k: usize) -> u64 {
        match self.scales.get(k.wrapping_sub(1)) {
            Some(s) => s.count(),
            None => self.tail.count(),
        }
    }

    /// Number of scales tracked individually; all finer ones share one count.
    pub fn tracked_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn censored(&self) -> u64 {
        self.censored
    }

    /// `J*(k)` as used so far; `None` if scale `k` was never needed.
    pub fn envelope_at(&self, k: usize) -> Option<u64> {
        self.envelope.get(k.wrapping_sub(1)).copied()
    }

    fn push_unchecked(&mut self, q: Rational) {
        for (i, s) in self.scales.iter_mut().enumerate() {
            s.push(&q, Some(&Rational::pow2(-(i as i64) - 1)));
        }
        self.tail.push(&q, None);
        self.distinct.insert(q.clone());
        self.emitted.push(q);
    }

    fn gap_with(&self, q: &Rational) -> Option<Rational> {
        if self.distinct.contains(q) {
            return self.min_gap.clone();
        }
        let below = self.distinct.range(..q.clone()).next_back().map(|b| q - b);
        let above = self.distinct.range(q.clone()..).next().map(|a| a - q);
        [self.min_gap.clone(), below, above].into_iter().flatten().min()
    }

    fn extend_envelope(&mut self, k: usize, j: &mut dyn FnMut(u64) -> Result<u64, GcnError>) -> Result<(), GcnError> {
        while self.envelope.len() < k {
            let next = self.envelope.len() as u64 + 1;
            let prev = self.envelope.last().copied().unwrap_or(1);
            self.envelope.push(prev.max(j(next)?));
        }
        Ok(())
    }

    /// Emits `q` if it keeps every bound, else repeats the last output.
    /// Returns the value emitted.
    fn offer(
        &mut self,
        q: Rational,
        bound: &Rational,
        j: &mut dyn FnMut(u64) -> Result<u64, GcnError>,
    ) -> Result<Rational, GcnError> {
        let prev = self.emitted.last().expect("initial output precedes offers").clone();
        if &q.abs() > bound {
            return Ok(self.censor(prev));
        }
        let gap = self.gap_with(&q);
        let needed = gap.as_ref().map_or(0, finest_needed_scale);
        self.extend_envelope(needed.max(1), j)?;
        let mut trial = Vec::with_capacity(needed);
        for k in 1..=needed {
            let mut s = self.scales.get(k - 1).cloned().unwrap_or_else(|| self.tail.clone());
            s.push(&q, Some(&Rational::pow2(-(k as i64))));
            if s.count() >= self.envelope[k - 1] {
                return Ok(self.censor(prev));
            }
            trial.push(s);
        }
        let mut tail = self.tail.clone();
        tail.push(&q, None);
        if tail.count() >= self.envelope[needed.max(1) - 1] {
            return Ok(self.censor(prev));
        }
        self.scales = trial;
        self.tail = tail;
        self.min_gap = gap;
        self.distinct.insert(q.clone());
        self.emitted.push(q.clone());
        Ok(q)
    }

    fn censor(&mut self, prev: Rational) -> Rational {
        self.censored += 1;
        self.repeat(prev)
    }

    fn repeat(&mut self, prev: Rational) -> Rational {
        // a repeat can re-anchor a window but never completes a jump
        self.push_unchecked(prev.clone());
        prev
    }
}

/// Smallest `k >= 1` with `2^{-k} < gap`, for a positive gap.
fn finest_needed_scale(gap: &Rational) -> usize {
    let mut k = 1usize;
    while &Rational::pow2(-(k as i64)) >= gap {
        k += 1;
    }
    k
}

/// A running wrapper: inner execution state plus its ledger.
pub struct GcnRunner {
    source: Box<dyn ProposalSource>,
    ledger: JumpLedger,
    bound: Rational,
    jump: Arc<PrfExpr>,
    jump_budget: EvalBudget,
    halted: bool,
}

impl GcnRunner {
    pub fn ledger(&self) -> &JumpLedger {
        &self.ledger
    }

    pub fn set_jump_budget(&mut self, budget: EvalBudget) {
        self.jump_budget = budget;
    }

    fn emit_initial(&mut self) -> Rational {
        debug_assert!(self.ledger.emitted.is_empty());
        self.ledger.push_unchecked(Rational::zero());
        Rational::zero()
    }

    fn offer(&mut self, q: Rational) -> Result<Rational, GcnError> {
        let jump = self.jump.clone();
        let budget = self.jump_budget;
        let mut j = |k: u64| -> Result<u64, GcnError> {
            let v = Evaluator::new(budget)
                .call(&jump, &[Nat::from(k)])
                .map_err(GcnError::Jump)?;
            Ok(v.to_u64().unwrap_or(u64::MAX).max(1))
        };
        self.ledger.offer(q, &self.bound, &mut j)
    }

    fn repeat_last(&mut self) -> Rational {
        let prev = self.ledger.emitted.last().expect("initial output emitted").clone();
        self.ledger.repeat(prev)
    }

    /// The next accepted output, running the inner program for at most
    /// `max_steps` steps. On [`GcnError::BudgetExceeded`] the inner state is
    /// kept, so calling again resumes where the previous call stopped.
    pub fn next(&mut self, max_steps: u64) -> Result<Rational, GcnError> {
        if self.ledger.emitted.is_empty() {
            return Ok(self.emit_initial());
        }
        let mut used = 0;
        loop {
            if self.halted {
                return Ok(self.repeat_last());
            }
            if used == max_steps {
                return Err(GcnError::BudgetExceeded { steps: max_steps });
            }
            used += 1;
            match self.source.step()? {
                Step::Working => {}
                Step::Halted => self.halted = true,
                Step::Proposal(q) => return self.offer(q),
            }
        }
    }

    /// One unit of inner work, for schedulers that interleave runners.
    /// Must follow the initial output.
    pub fn poll(&mut self) -> Result<Poll, GcnError> {
        if self.halted {
            return Ok(Poll::Exhausted);
        }
        match self.source.step()? {
            Step::Working => Ok(Poll::Pending),
            Step::Halted => {
                self.halted = true;
                Ok(Poll::Exhausted)
            }
            Step::Proposal(q) => Ok(Poll::Emitted(self.offer(q)?)),
        }
    }

    /// Collects `count` outputs; fails if any one of them takes more than
    /// `steps_per_output` steps.
    pub fn take(&mut self, count: usize, steps_per_output: u64) -> Result<Vec<Rational>, GcnError> {
        (0..count).map(|_| self.next(steps_per_output)).collect()
    }
}

/// Free-function form of [`GcnRunner::next`].
pub fn wrapper_next(runner: &mut GcnRunner, max_steps: u64) -> Result<Rational, GcnError> {
    runner.next(max_steps)
}
