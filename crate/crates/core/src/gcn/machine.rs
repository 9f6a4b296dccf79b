//! Counter machines: the one place where programs may run forever.
//!
//! Registers hold naturals and start at zero, except register 0, which holds
//! the input. Instructions:
//!
//! | text          | effect                                                   |
//! |---------------|----------------------------------------------------------|
//! | `INC r`       | `R[r] += 1`                                              |
//! | `DEC r t`     | if `R[r] = 0` jump to line `t`, else `R[r] -= 1`         |
//! | `HALT`        | stop                                                     |
//! | `EMIT p n d`  | output the rational `(R[p] - R[n]) / max(R[d], 1)`       |
//! | `OUT b`       | output the bit `b` (0 or 1)                              |
//!
//! Running past the last line also stops. Every executed instruction,
//! `HALT` included, takes one step.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::numeric::{Int, Rational};
use crate::prf::term::{self, Scope, Term};
use crate::prf::PrfExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    Halt,
    Inc(usize),
    Out(u8),
    Dec(usize, usize),
    Emit(usize, usize, usize),
}

impl Instr {
    /// Enumeration weight; there are finitely many instructions of each weight.
    pub fn weight(self) -> usize {
        match self {
            Instr::Halt => 1,
            Instr::Inc(r) => 2 + r,
            Instr::Out(b) => 2 + b as usize,
            Instr::Dec(r, t) => 3 + r + t,
            Instr::Emit(p, n, d) => 4 + p + n + d,
        }
    }

    fn registers(self) -> Vec<usize> {
        match self {
            Instr::Inc(r) | Instr::Dec(r, _) => vec![r],
            Instr::Emit(p, n, d) => vec![p, n, d],
            Instr::Halt | Instr::Out(_) => vec![],
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Halt => write!(f, "HALT"),
            Instr::Inc(r) => write!(f, "INC {r}"),
            Instr::Out(b) => write!(f, "OUT {b}"),
            Instr::Dec(r, t) => write!(f, "DEC {r} {t}"),
            Instr::Emit(p, n, d) => write!(f, "EMIT {p} {n} {d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct MachineError {
    pub line: usize,
    pub message: String,
}

impl FromStr for Instr {
    type Err = String;

    fn from_str(s: &str) -> Result<Instr, String> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let num = |w: &str| -> Result<usize, String> {
            if w.len() > 1 && w.starts_with('0') || !w.bytes().all(|b| b.is_ascii_digit()) || w.is_empty() {
                return Err(format!("bad operand `{w}`"));
            }
            w.parse().map_err(|_| format!("operand `{w}` too large"))
        };
        match words.as_slice() {
            ["HALT"] => Ok(Instr::Halt),
            ["INC", r] => Ok(Instr::Inc(num(r)?)),
            ["DEC", r, t] => Ok(Instr::Dec(num(r)?, num(t)?)),
            ["EMIT", p, n, d] => Ok(Instr::Emit(num(p)?, num(n)?, num(d)?)),
            ["OUT", b] => match num(b)? {
                v @ (0 | 1) => Ok(Instr::Out(v as u8)),
                _ => Err("OUT takes 0 or 1".into()),
            },
            _ => Err(format!("unknown instruction `{s}`")),
        }
    }
}

/// A non-empty program whose jump targets are all in range.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Machine {
    program: Arc<[Instr]>,
}

/// Register indices above this are refused, keeping register files small.
pub const MAX_REGISTER: usize = 1 << 16;

impl Machine {
    pub fn new(program: Vec<Instr>) -> Result<Machine, MachineError> {
        if program.is_empty() {
            return Err(MachineError {
                line: 0,
                message: "empty program".into(),
            });
        }
        for (line, ins) in program.iter().enumerate() {
            if let Instr::Dec(_, t) = ins {
                if *t >= program.len() {
                    return Err(MachineError {
                        line,
                        message: format!("jump target {t} out of range"),
                    });
                }
            }
            if ins.registers().iter().any(|&r| r > MAX_REGISTER) {
                return Err(MachineError {
                    line,
                    message: "register index too large".into(),
                });
            }
        }
        Ok(Machine {
            program: program.into(),
        })
    }

    pub fn instructions(&self) -> &[Instr] {
        &self.program
    }

    pub fn weight(&self) -> usize {
        self.program.iter().map(|i| i.weight()).sum()
    }

    fn register_count(&self) -> usize {
        self.program
            .iter()
            .flat_map(|i| i.registers())
            .max()
            .map_or(1, |r| r + 1)
    }

    pub fn start(&self, input: u64) -> Run {
        let mut regs = vec![0u64; self.register_count()];
        regs[0] = input;
        Run {
            program: self.program.clone(),
            regs,
            pc: 0,
            steps: 0,
        }
    }

    /// Steps until halting, if that happens within `cap` steps.
    pub fn halting_time(&self, input: u64, cap: u64) -> Option<u64> {
        let mut run = self.start(input);
        while run.steps() < cap {
            if let Event::Halted = run.step() {
                return Some(run.steps());
            }
        }
        run.is_halted().then(|| run.steps())
    }

    /// Numbered-line text, one instruction per line.
    pub fn to_text(&self) -> String {
        self.program
            .iter()
            .enumerate()
            .map(|(i, ins)| format!("{i}: {ins}\n"))
            .collect()
    }

    /// Parses numbered lines `k: INSTR` with `k = 0, 1, 2, ...` in order.
    pub fn parse_lines<'a>(lines: impl IntoIterator<Item = (usize, &'a str)>) -> Result<Machine, MachineError> {
        let mut program = Vec::new();
        for (line, text) in lines {
            let err = |m: String| MachineError { line, message: m };
            let (num, ins) = text.split_once(':').ok_or_else(|| err("expected `k: INSTR`".into()))?;
            if num != program.len().to_string() {
                return Err(err(format!("expected line number {}", program.len())));
            }
            program.push(ins.trim().parse::<Instr>().map_err(err)?);
        }
        Machine::new(program)
    }

    /// A program that simulates this machine on input 0 and returns 1 once
    /// it has halted within the given number of steps:
    /// `m -> [halting_time(0) <= m]`.
    pub fn halted_within_program(&self) -> PrfExpr {
        let (s, args) = Scope::root(1);
        let t = self.halted_term(s, args[0].clone());
        term::compile(&t, 1)
    }

    pub(crate) fn halted_term(&self, s: Scope, steps: Term) -> Term {
        let regs = self.register_count();
        let len = self.program.len() as u64;
        // state: pc, then registers, as right-nested pairs
        let init = encode(&vec![term::lit(0); regs + 1]);
        let program = self.program.to_vec();
        let fin = s.fold(steps, init, move |s, _, st| {
            s.bind(st, |_, st| {
                let fields = decode(&st, regs + 1);
                let pc = fields[0].clone();
                let at = |l: usize| term::eq(pc.clone(), term::lit(l as u64));
                let done = term::le(term::lit(len), pc.clone());
                let mut new_pc = term::mul(done.clone(), pc.clone());
                // each slot is a sum over mutually exclusive cases, starting
                // with the halted one where nothing changes
                let mut new_regs: Vec<Term> = fields[1..].iter().map(|r| term::mul(done.clone(), r.clone())).collect();
                for (l, ins) in program.iter().enumerate() {
                    let next = term::lit(l as u64 + 1);
                    let target = match *ins {
                        Instr::Halt => term::lit(len),
                        Instr::Dec(r, t) => term::cond(term::sgn(fields[r + 1].clone()), next, term::lit(t as u64)),
                        _ => next,
                    };
                    new_pc = term::add(new_pc, term::mul(at(l), target));
                    for (r, slot) in new_regs.iter_mut().enumerate() {
                        let old = fields[r + 1].clone();
                        let val = match *ins {
                            Instr::Inc(q) if q == r => term::succ(old),
                            Instr::Dec(q, _) if q == r => term::monus(old, term::lit(1)),
                            _ => old,
                        };
                        *slot = term::add(slot.clone(), term::mul(at(l), val));
                    }
                }
                let mut out = vec![new_pc];
                out.extend(new_regs);
                encode(&out)
            })
        });
        term::le(term::lit(len), decode(&fin, regs + 1)[0].clone())
    }
}

fn encode(fields: &[Term]) -> Term {
    match fields {
        [last] => last.clone(),
        [first, rest @ ..] => term::pair(first.clone(), encode(rest)),
        [] => term::lit(0),
    }
}

fn decode(code: &Term, len: usize) -> Vec<Term> {
    let mut out = Vec::with_capacity(len);
    let mut cur = code.clone();
    for _ in 1..len {
        out.push(term::fst(cur.clone()));
        cur = term::snd(cur);
    }
    out.push(cur);
    out
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.program.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// An instruction ran without output.
    Step,
    Emit(Rational),
    Out(u8),
    Halted,
}

/// Execution state of one machine.
#[derive(Clone, Debug)]
pub struct Run {
    program: Arc<[Instr]>,
    regs: Vec<u64>,
    pc: usize,
    steps: u64,
}

impl Run {
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn is_halted(&self) -> bool {
        self.pc >= self.program.len()
    }

    /// Executes one instruction. A halted run stays halted and costs nothing.
    pub fn step(&mut self) -> Event {
        let Some(&ins) = self.program.get(self.pc) else {
            return Event::Halted;
        };
        self.steps += 1;
        self.pc += 1;
        let ev = match ins {
            Instr::Halt => {
                self.pc = self.program.len();
                Event::Halted
            }
            Instr::Inc(r) => {
                self.regs[r] += 1;
                Event::Step
            }
            Instr::Dec(r, t) => {
                if self.regs[r] == 0 {
                    self.pc = t;
                } else {
                    self.regs[r] -= 1;
                }
                Event::Step
            }
            Instr::Out(b) => Event::Out(b),
            Instr::Emit(p, n, d) => {
                let num = Int::from(self.regs[p]) - Int::from(self.regs[n]);
                let den = self.regs[d].max(1);
                Event::Emit(Rational::new(num, Int::from(den)))
            }
        };
        if self.is_halted() {
            Event::Halted.or(ev)
        } else {
            ev
        }
    }
}

impl Event {
    /// Output events win over the halt they coincide with.
    fn or(self, ev: Event) -> Event {
        match ev {
            Event::Step => self,
            other => other,
        }
    }
}

/// Counting tables for [`enumerate_machines`].
#[derive(Default)]
pub struct MachineEnumerator {
    // (program length, remaining instructions, remaining weight)
    seqs: std::collections::HashMap<(usize, usize, usize), u128>,
}

/// Instructions of weight exactly `w` usable in a program of `len` lines, in order.
fn instrs_of_weight(w: usize, len: usize) -> Vec<Instr> {
    let mut out = Vec::new();
    if w == 1 {
        out.push(Instr::Halt);
    }
    if w >= 2 {
        out.push(Instr::Inc(w - 2));
    }
    if w == 2 || w == 3 {
        out.push(Instr::Out((w - 2) as u8));
    }
    if w >= 3 {
        for r in 0..=w - 3 {
            let t = w - 3 - r;
            if t < len {
                out.push(Instr::Dec(r, t));
            }
        }
    }
    if w >= 4 {
        let k = w - 4;
        for p in 0..=k {
            for n in 0..=k - p {
                out.push(Instr::Emit(p, n, k - p - n));
            }
        }
    }
    out.sort();
    out
}

impl MachineEnumerator {
    pub fn new() -> MachineEnumerator {
        MachineEnumerator::default()
    }

    fn seq(&mut self, len: usize, k: usize, w: usize) -> u128 {
        if k == 0 {
            return u128::from(w == 0);
        }
        if w < k {
            return 0;
        }
        if let Some(&v) = self.seqs.get(&(len, k, w)) {
            return v;
        }
        let mut total = 0u128;
        for wi in 1..=w - (k - 1) {
            let c = instrs_of_weight(wi, len).len() as u128;
            total = total.saturating_add(c.saturating_mul(self.seq(len, k - 1, w - wi)));
        }
        self.seqs.insert((len, k, w), total);
        total
    }

    /// Machines are ordered by total weight, then length, then
    /// lexicographically by instruction (`HALT < INC < OUT < DEC < EMIT`,
    /// then operands).
    pub fn nth(&mut self, index: u64) -> Machine {
        let mut idx = index as u128;
        let mut w = 1;
        loop {
            for len in 1..=w {
                let c = self.seq(len, len, w);
                if idx < c {
                    return Machine::new(self.unrank(len, w, idx)).expect("enumerated machine is valid");
                }
                idx -= c;
            }
            w += 1;
        }
    }

    fn unrank(&mut self, len: usize, w: usize, mut idx: u128) -> Vec<Instr> {
        let mut out = Vec::with_capacity(len);
        let mut left = w;
        for k in (1..=len).rev() {
            let mut cands: Vec<Instr> = (1..=left - (k - 1)).flat_map(|wi| instrs_of_weight(wi, len)).collect();
            cands.sort();
            let mut picked = None;
            for ins in cands {
                let block = self.seq(len, k - 1, left - ins.weight());
                if idx < block {
                    picked = Some(ins);
                    break;
                }
                idx -= block;
            }
            let ins = picked.expect("machine index in range");
            left -= ins.weight();
            out.push(ins);
        }
        out
    }
}

/// The `i`-th toy machine (0-based); index 0 is `[HALT]`.
pub fn enumerate_machines(i: u64) -> Machine {
    MachineEnumerator::new().nth(i)
}
