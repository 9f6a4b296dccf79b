//! The `.ecn` text format.
//!
//! ```text
//! class: SPRCN
//! I: -3
//! P: (R Z (P 2 2))
//! ```
//!
//! Line 1 names the class, line 2 the integer part, and the remaining lines
//! carry the payload as `label: value` lines in a fixed order:
//!
//! | class   | payload                                              |
//! |---------|------------------------------------------------------|
//! | `PRCN`  | `P:` unary expression                                |
//! | `SPRCN` | `P:` unary expression                                |
//! | `NGCN`  | `P:` binary expression, `J:` unary expression        |
//! | `PRSEQ` | `num+:`, `num-:`, `den:`, `mod:` unary expressions   |
//! | `RCN`   | numbered machine lines `0: OUT 1`, `1: HALT`, ...    |
//! | `GCN`   | `M:` natural, `j:` unary expression, machine lines   |
//!
//! `PRSEQ` and `GCN` have no integer part of their own and require `I: 0`.
//! [`serialize`] writes one space after each colon, expressions in their
//! canonical printed form, and a newline after every line; the reader
//! tolerates extra spaces around values and a missing final newline.

use std::fmt;
use std::str::FromStr;

use super::{Prcn, Rcn, Sprcn};
use crate::construct::PrSeq;
use crate::gcn::{Gcn, Machine, Ngcn, SequenceProgram};
use crate::numeric::{parse_int, Int, Nat};
use crate::prf::{parse, PrfExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Prcn,
    Sprcn,
    Rcn,
    Ngcn,
    Gcn,
    PrSeq,
}

impl Class {
    pub const ALL: [Class; 6] = [
        Class::Prcn,
        Class::Sprcn,
        Class::Rcn,
        Class::Ngcn,
        Class::Gcn,
        Class::PrSeq,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Class::Prcn => "PRCN",
            Class::Sprcn => "SPRCN",
            Class::Rcn => "RCN",
            Class::Ngcn => "NGCN",
            Class::Gcn => "GCN",
            Class::PrSeq => "PRSEQ",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Class, String> {
        Class::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| format!("unknown class `{s}`"))
    }
}

/// Anything an `.ecn` file can hold.
#[derive(Clone, Debug)]
pub enum Number {
    Prcn(Prcn),
    Sprcn(Sprcn),
    Rcn(Rcn),
    Ngcn(Ngcn),
    /// Only machine-backed GCNs can be written out.
    Gcn(Gcn),
    PrSeq(PrSeq),
}

impl Number {
    pub fn class(&self) -> Class {
        match self {
            Number::Prcn(_) => Class::Prcn,
            Number::Sprcn(_) => Class::Sprcn,
            Number::Rcn(_) => Class::Rcn,
            Number::Ngcn(_) => Class::Ngcn,
            Number::Gcn(_) => Class::Gcn,
            Number::PrSeq(_) => Class::PrSeq,
        }
    }
}

/// Structural equality; host-backed GCNs are never equal to anything.
impl PartialEq for Number {
    fn eq(&self, other: &Number) -> bool {
        match (self, other) {
            (Number::Prcn(a), Number::Prcn(b)) => a == b,
            (Number::Sprcn(a), Number::Sprcn(b)) => a == b,
            (Number::Rcn(a), Number::Rcn(b)) => a == b,
            (Number::Ngcn(a), Number::Ngcn(b)) => a == b,
            (Number::PrSeq(a), Number::PrSeq(b)) => a == b,
            (Number::Gcn(a), Number::Gcn(b)) => match (&a.inner, &b.inner) {
                (SequenceProgram::Machine(ma), SequenceProgram::Machine(mb)) => {
                    ma == mb && a.bound == b.bound && a.jump_bound == b.jump_bound
                }
                _ => false,
            },
            _ => false,
        }
    }
}

/// Why a text is not in any class. Lines are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Rejection {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("arity error at line {line}: {message}")]
    Arity { line: usize, message: String },
    /// Parses, but breaks a class rule (an `EMIT` in an RCN, `M: 0`, ...).
    #[error("invalid at line {line}: {message}")]
    Structure { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Validation {
    Accept(Class, Number),
    Reject(Rejection),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("a GCN with a host-supplied inner program has no text form")]
    HostProgram,
}

pub fn validate(text: &str) -> Validation {
    match deserialize(text) {
        Ok(n) => Validation::Accept(n.class(), n),
        Err(r) => Validation::Reject(r),
    }
}

pub fn serialize(x: &Number) -> Result<String, FormatError> {
    let mut out = format!("class: {}\n", x.class());
    let mut line = |label: &str, value: &dyn fmt::Display| out.push_str(&format!("{label}: {value}\n"));
    match x {
        Number::Prcn(p) => {
            line("I", &p.int_part);
            line("P", &p.coeff);
        }
        Number::Sprcn(p) => {
            line("I", &p.int_part);
            line("P", &p.coeff);
        }
        Number::Ngcn(p) => {
            line("I", &p.int_part);
            line("P", &p.coeff2);
            line("J", &p.revision_bound);
        }
        Number::PrSeq(s) => {
            line("I", &0);
            for (label, e) in s.parts() {
                line(label, e);
            }
        }
        Number::Rcn(r) => {
            line("I", &r.int_part);
            out.push_str(&r.program.to_text());
        }
        Number::Gcn(g) => {
            let SequenceProgram::Machine(m) = &g.inner else {
                return Err(FormatError::HostProgram);
            };
            line("I", &0);
            line("M", &g.bound);
            line("j", &g.jump_bound);
            out.push_str(&m.to_text());
        }
    }
    Ok(out)
}

/// Reader over numbered lines.
struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let text = text.strip_suffix('\n').unwrap_or(text);
        Lines {
            lines: text.split('\n').enumerate().map(|(i, l)| (i + 1, l)).collect(),
            pos: 0,
        }
    }

    fn next_line(&self) -> usize {
        self.lines.get(self.pos).map_or(self.lines.len() + 1, |l| l.0)
    }

    fn field(&mut self, label: &str) -> Result<(usize, &'a str), Rejection> {
        let line = self.next_line();
        let missing = || Rejection::Syntax {
            line,
            message: format!("expected `{label}: ...`"),
        };
        let &(line, text) = self.lines.get(self.pos).ok_or_else(missing)?;
        let (key, value) = text.split_once(':').ok_or_else(missing)?;
        if key != label {
            return Err(missing());
        }
        self.pos += 1;
        Ok((line, value.trim()))
    }

    fn expr(&mut self, label: &str) -> Result<(usize, PrfExpr), Rejection> {
        let (line, text) = self.field(label)?;
        let e = parse(text).map_err(|e| Rejection::Syntax {
            line,
            message: e.to_string(),
        })?;
        Ok((line, e))
    }

    fn int(&mut self, label: &str) -> Result<(usize, Int), Rejection> {
        let (line, text) = self.field(label)?;
        let v = parse_int(text).map_err(|e| Rejection::Syntax {
            line,
            message: e.to_string(),
        })?;
        Ok((line, v))
    }

    fn machine(&mut self) -> Result<Machine, Rejection> {
        let rest = &self.lines[self.pos..];
        self.pos = self.lines.len();
        let first = rest.first().map_or(self.next_line(), |l| l.0);
        Machine::parse_lines(rest.iter().copied()).map_err(|e| Rejection::Syntax {
            line: e.line.max(first),
            message: e.message,
        })
    }

    fn finish(&self) -> Result<(), Rejection> {
        match self.lines.get(self.pos) {
            None => Ok(()),
            Some(&(line, _)) => Err(Rejection::Syntax {
                line,
                message: "unexpected trailing line".into(),
            }),
        }
    }
}

fn arity(line: usize) -> impl Fn(String) -> Rejection {
    move |message| Rejection::Arity { line, message }
}

fn unary(line: usize, e: &PrfExpr) -> Result<(), Rejection> {
    match e.arity() {
        Ok(a) if a.accepts(1) => Ok(()),
        Ok(a) => Err(arity(line)(format!("expression has arity {a}, expected 1"))),
        Err(err) => Err(arity(line)(err.to_string())),
    }
}

fn zero_int_part(line: usize, i: &Int) -> Result<(), Rejection> {
    if i == &Int::from(0) {
        Ok(())
    } else {
        Err(Rejection::Structure {
            line,
            message: "this class has no integer part; write `I: 0`".into(),
        })
    }
}

pub fn deserialize(text: &str) -> Result<Number, Rejection> {
    let mut r = Lines::new(text);
    let (line, tag) = r.field("class")?;
    let class = tag
        .parse::<Class>()
        .map_err(|message| Rejection::Syntax { line, message })?;
    let (iline, int_part) = r.int("I")?;
    let n = match class {
        Class::Prcn | Class::Sprcn => {
            let (line, p) = r.expr("P")?;
            unary(line, &p)?;
            if class == Class::Prcn {
                Number::Prcn(Prcn::new(int_part, p).map_err(|e| arity(line)(e.to_string()))?)
            } else {
                Number::Sprcn(Sprcn::new(int_part, p).map_err(|e| arity(line)(e.to_string()))?)
            }
        }
        Class::Ngcn => {
            let (line, p) = r.expr("P")?;
            let (jline, j) = r.expr("J")?;
            unary(jline, &j)?;
            Number::Ngcn(Ngcn::new(int_part, p, j).map_err(|e| arity(line)(e.0))?)
        }
        Class::PrSeq => {
            zero_int_part(iline, &int_part)?;
            let mut parts = Vec::with_capacity(4);
            for label in ["num+", "num-", "den", "mod"] {
                let (line, e) = r.expr(label)?;
                unary(line, &e)?;
                parts.push(e);
            }
            let [a, b, c, d]: [PrfExpr; 4] = parts.try_into().expect("four parts");
            Number::PrSeq(PrSeq::new(a, b, c, d).map_err(|e| arity(iline)(e.to_string()))?)
        }
        Class::Rcn => {
            let start = r.next_line();
            let m = r.machine()?;
            Number::Rcn(Rcn::new(int_part, m).map_err(|message| Rejection::Structure { line: start, message })?)
        }
        Class::Gcn => {
            zero_int_part(iline, &int_part)?;
            let (mline, bound) = r.int("M")?;
            let bound = bound
                .to_biguint()
                .filter(|b| b >= &Nat::from(1u32))
                .ok_or(Rejection::Structure {
                    line: mline,
                    message: "M must be at least 1".into(),
                })?;
            let (jline, j) = r.expr("j")?;
            unary(jline, &j)?;
            let m = r.machine()?;
            Number::Gcn(
                Gcn::new(SequenceProgram::Machine(m), bound, j).map_err(|e| Rejection::Structure {
                    line: mline,
                    message: e.to_string(),
                })?,
            )
        }
    };
    r.finish()?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn accept(text: &str) -> Number {
        match validate(text) {
            Validation::Accept(_, n) => n,
            Validation::Reject(r) => panic!("rejected: {r}"),
        }
    }

    fn round_trip(text: &str) {
        let n = accept(text);
        let s = serialize(&n).unwrap();
        assert_eq!(s, text);
        assert_eq!(deserialize(&s).unwrap(), n);
    }

    #[test]
    fn canonical_files_round_trip() {
        round_trip("class: SPRCN\nI: 0\nP: Z\n");
        round_trip("class: PRCN\nI: -3\nP: (R (C S Z) (C (SUGAR add) (P 2 2) (C S (P 1 2))))\n");
        round_trip("class: NGCN\nI: 1\nP: (P 2 2)\nJ: (SUGAR const 1)\n");
        round_trip("class: PRSEQ\nI: 0\nnum+: (SUGAR const 1)\nnum-: Z\nden: S\nmod: (P 1 1)\n");
        round_trip("class: RCN\nI: 2\n0: DEC 0 2\n1: OUT 1\n2: HALT\n");
        round_trip("class: GCN\nI: 0\nM: 4\nj: (SUGAR const 3)\n0: INC 1\n1: EMIT 1 0 0\n2: DEC 2 0\n");
    }

    #[test]
    fn loose_spacing_is_read() {
        let n = accept("class: SPRCN\nI:   5\nP:    (C S   (P 1 1))");
        assert_eq!(serialize(&n).unwrap(), "class: SPRCN\nI: 5\nP: (C S (P 1 1))\n");
    }

    #[test]
    fn rejections() {
        let syntax = |t: &str| matches!(deserialize(t), Err(Rejection::Syntax { .. }));
        assert!(syntax("\u{7f}garbage"));
        assert!(syntax("class: SPRCN\nI: 0\n"));
        assert!(syntax("class: SPRCN\nI: 0\nP: (C S"));
        assert!(syntax("class: SPRCN\nI: 0\nP: Z\nextra\n"));
        assert!(syntax("class: REAL\nI: 0\nP: Z\n"));
        assert!(matches!(
            deserialize("class: SPRCN\nI: 0\nP: (P 1 2)\n"),
            Err(Rejection::Arity { line: 3, .. })
        ));
        assert!(matches!(
            deserialize("class: NGCN\nI: 0\nP: (P 1 3)\nJ: Z\n"),
            Err(Rejection::Arity { .. })
        ));
        assert!(matches!(
            deserialize("class: RCN\nI: 0\n0: EMIT 0 0 0\n"),
            Err(Rejection::Structure { line: 3, .. })
        ));
        assert!(matches!(
            deserialize("class: GCN\nI: 0\nM: 0\nj: Z\n0: HALT\n"),
            Err(Rejection::Structure { .. })
        ));
        assert!(matches!(
            deserialize("class: GCN\nI: 1\nM: 1\nj: Z\n0: HALT\n"),
            Err(Rejection::Structure { line: 2, .. })
        ));
    }

    #[test]
    fn host_gcn_has_no_text() {
        let g = Gcn::new(SequenceProgram::from_fn("zero", |_| 0.into()), 1u32, PrfExpr::Zero).unwrap();
        assert_eq!(serialize(&Number::Gcn(g)), Err(FormatError::HostProgram));
    }
}
