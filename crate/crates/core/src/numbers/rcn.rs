//! Numbers whose digits come from arbitrary (possibly diverging) programs.
//!
//! The digit program is a counter machine run on input `i`. Its only output
//! instruction is `OUT b` with `b` a literal 0 or 1, so every digit that is
//! ever produced is a bit; this is a syntactic property checked once. What
//! cannot be checked is whether an output arrives at all, so digits are
//! sampled under a step cap and there is no error bound to offer.

use crate::gcn::{Event, Instr, Machine};
use crate::numeric::Int;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rcn {
    pub int_part: Int,
    pub program: Machine,
}

impl Rcn {
    /// Fails if the program contains an `EMIT`, the one instruction that
    /// could output something other than a bit.
    pub fn new(int_part: impl Into<Int>, program: Machine) -> Result<Rcn, String> {
        if let Some(line) = program.instructions().iter().position(|i| matches!(i, Instr::Emit(..))) {
            return Err(format!(
                "line {line}: EMIT is not allowed, digits are output with OUT 0 or OUT 1"
            ));
        }
        Ok(Rcn {
            int_part: int_part.into(),
            program,
        })
    }

    /// Digit `i`: the first bit output on input `i`, `Some(0)` if the program
    /// halts without output, `None` if neither happens within `step_cap` steps.
    pub fn digit(&self, i: u64, step_cap: u64) -> Option<u8> {
        let mut run = self.program.start(i);
        while run.steps() < step_cap {
            match run.step() {
                Event::Out(b) => return Some(b),
                Event::Halted => return Some(0),
                Event::Step | Event::Emit(_) => {}
            }
        }
        None
    }

    /// Digits `1..=n`, each under its own step cap.
    pub fn sample(&self, n: u64, step_cap: u64) -> Vec<Option<u8>> {
        (1..=n).map(|i| self.digit(i, step_cap)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(text: &str) -> Machine {
        Machine::parse_lines(text.lines().enumerate()).unwrap()
    }

    #[test]
    fn emit_is_refused() {
        assert!(Rcn::new(0, machine("0: EMIT 0 0 0")).is_err());
        assert!(Rcn::new(0, machine("0: OUT 1")).is_ok());
    }

    #[test]
    fn sampling() {
        // odd inputs output 1, even inputs output 0
        let parity = machine("0: DEC 0 4\n1: DEC 0 3\n2: DEC 1 0\n3: OUT 1\n4: OUT 0");
        let x = Rcn::new(0, parity).unwrap();
        assert_eq!(x.sample(4, 100), vec![Some(1), Some(0), Some(1), Some(0)]);
        // loops forever
        let spin = Rcn::new(0, machine("0: INC 1\n1: DEC 2 0")).unwrap();
        assert_eq!(spin.digit(1, 1000), None);
        assert_eq!(Rcn::new(0, machine("0: HALT")).unwrap().digit(7, 5), Some(0));
    }
}
