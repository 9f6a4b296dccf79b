//! Generalized numbers: sequences with no convergence modulus whose
//! convergence is forced by bounding how often they may jump.
//!
//! [`Ngcn`] limits revisions of individual binary digits. [`Gcn`] runs an
//! arbitrary (possibly divergent) proposal source inside a censoring wrapper
//! that enforces an output bound and a per-scale jump bound.

mod arithmetic;
mod jumps;
mod machine;
mod ngcn;
mod specker;
mod wrapper;

pub use arithmetic::{gcn_add, gcn_mul, gcn_neg, mul_jump_bound, mul_jump_parameters};
pub use jumps::{count_jumps, ScanState};
pub use machine::{enumerate_machines, Event, Instr, Machine, MachineEnumerator, MachineError, Run};
pub use ngcn::{ngcn_partial, Ngcn, NgcnError};
pub use specker::{demo_fixtures, specker, specker_ngcn, MachineSource, SpeckerError};
pub use wrapper::{
    wrapper_next, Gcn, GcnError, GcnRunner, JumpLedger, Poll, ProposalSource, ScriptEnd, SequenceProgram,
    SourceFactory, Step,
};
