//! Decidable representations of constructive real numbers.
//!
//! A number is a finite, syntactically checkable object: an integer part
//! plus a program in a total expression language ([`prf`]) whose outputs are
//! read as binary or signed binary digits ([`numbers`]). Approximations are
//! exact rationals with explicit error bounds.

pub mod cli;
pub mod construct;
pub mod gcn;
pub mod numbers;
pub mod numeric;
pub mod prf;
