//! S-expression reader and printer.
//!
//! ```text
//! expr := Z | S | (P k n) | (C f g1 ... gm) | (R base step) | (SUGAR name args...)
//! ```
//!
//! Sugar names: `const c`, `add`, `mul`, `monus`, `sgn`, `abssgn`, `le`,
//! `max`, `pair`, `fst`, `snd`, `div`, `mod`, `sum body bound`,
//! `loop body bound`. Numerals are canonical decimal (no leading zeros).

use std::fmt;
use std::sync::Arc;

use super::{Builtin, PrfExpr};
use crate::numeric::Nat;

/// Nesting deeper than this is rejected rather than risking the stack.
pub const MAX_DEPTH: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(start) else {
            return Ok((start, Tok::End));
        };
        match b {
            b'(' => {
                self.pos += 1;
                Ok((start, Tok::Open))
            }
            b')' => {
                self.pos += 1;
                Ok((start, Tok::Close))
            }
            b if b.is_ascii_alphanumeric() || b == b'_' => {
                while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                    self.pos += 1;
                }
                Ok((start, Tok::Atom(&self.src[start..self.pos])))
            }
            _ => Err(ParseError {
                pos: start,
                message: "unexpected character".into(),
            }),
        }
    }

    fn peek(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let saved = self.pos;
        let t = self.next();
        self.pos = saved;
        t
    }
}

fn fail<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// Parses a single expression; trailing input other than whitespace is an error.
pub fn parse(text: &str) -> Result<PrfExpr, ParseError> {
    let mut lx = Lexer { src: text, pos: 0 };
    let e = parse_expr(&mut lx, 0)?;
    match lx.next()? {
        (_, Tok::End) => Ok(e),
        (pos, _) => fail(pos, "trailing input after expression"),
    }
}

fn numeral(pos: usize, tok: Tok<'_>) -> Result<Nat, ParseError> {
    match tok {
        Tok::Atom(s) if s.bytes().all(|b| b.is_ascii_digit()) => {
            if s.len() > 1 && s.starts_with('0') {
                return fail(pos, "numeral with leading zero");
            }
            Ok(s.parse().expect("digits parse"))
        }
        _ => fail(pos, "expected numeral"),
    }
}

fn small_numeral(pos: usize, tok: Tok<'_>) -> Result<usize, ParseError> {
    let n = numeral(pos, tok)?;
    usize::try_from(n).or_else(|_| fail(pos, "numeral too large"))
}

fn close(lx: &mut Lexer<'_>) -> Result<(), ParseError> {
    match lx.next()? {
        (_, Tok::Close) => Ok(()),
        (pos, _) => fail(pos, "expected `)`"),
    }
}

fn parse_expr(lx: &mut Lexer<'_>, depth: usize) -> Result<PrfExpr, ParseError> {
    let (pos, tok) = lx.next()?;
    if depth > MAX_DEPTH {
        return fail(pos, "expression nested too deeply");
    }
    match tok {
        Tok::Atom("Z") => Ok(PrfExpr::Zero),
        Tok::Atom("S") => Ok(PrfExpr::Succ),
        Tok::Atom(_) => fail(pos, "unknown atom"),
        Tok::Close => fail(pos, "unexpected `)`"),
        Tok::End => fail(pos, "unexpected end of input"),
        Tok::Open => {
            let (hpos, head) = lx.next()?;
            let e = match head {
                Tok::Atom("P") => {
                    let (p, t) = lx.next()?;
                    let k = small_numeral(p, t)?;
                    let (p, t) = lx.next()?;
                    let n = small_numeral(p, t)?;
                    PrfExpr::Proj { k, n }
                }
                Tok::Atom("C") => {
                    let f = parse_expr(lx, depth + 1)?;
                    let mut gs = Vec::new();
                    while !matches!(lx.peek()?.1, Tok::Close) {
                        gs.push(Arc::new(parse_expr(lx, depth + 1)?));
                    }
                    PrfExpr::Comp(Arc::new(f), gs)
                }
                Tok::Atom("R") => {
                    let b = parse_expr(lx, depth + 1)?;
                    let s = parse_expr(lx, depth + 1)?;
                    PrfExpr::PrimRec(Arc::new(b), Arc::new(s))
                }
                Tok::Atom("SUGAR") => parse_sugar(lx, depth)?,
                _ => return fail(hpos, "expected P, C, R or SUGAR after `(`"),
            };
            close(lx)?;
            Ok(e)
        }
    }
}

fn parse_sugar(lx: &mut Lexer<'_>, depth: usize) -> Result<PrfExpr, ParseError> {
    let (pos, tok) = lx.next()?;
    let Tok::Atom(name) = tok else {
        return fail(pos, "expected sugar name");
    };
    match name {
        "const" => {
            let (p, t) = lx.next()?;
            Ok(PrfExpr::Const(numeral(p, t)?))
        }
        "sum" | "loop" => {
            let body = Arc::new(parse_expr(lx, depth + 1)?);
            let bound = Arc::new(parse_expr(lx, depth + 1)?);
            Ok(if name == "sum" {
                PrfExpr::BoundedSum(body, bound)
            } else {
                PrfExpr::BoundedLoop(body, bound)
            })
        }
        _ => match Builtin::from_name(name) {
            Some(b) => Ok(PrfExpr::Op(b)),
            None => fail(pos, format!("unknown sugar `{name}`")),
        },
    }
}

pub(super) fn write_expr(e: &PrfExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        PrfExpr::Zero => f.write_str("Z"),
        PrfExpr::Succ => f.write_str("S"),
        PrfExpr::Proj { k, n } => write!(f, "(P {k} {n})"),
        PrfExpr::Comp(g, hs) => {
            f.write_str("(C ")?;
            write_expr(g, f)?;
            for h in hs {
                f.write_str(" ")?;
                write_expr(h, f)?;
            }
            f.write_str(")")
        }
        PrfExpr::PrimRec(b, s) => {
            f.write_str("(R ")?;
            write_expr(b, f)?;
            f.write_str(" ")?;
            write_expr(s, f)?;
            f.write_str(")")
        }
        PrfExpr::Const(c) => write!(f, "(SUGAR const {c})"),
        PrfExpr::Op(b) => write!(f, "(SUGAR {})", b.name()),
        PrfExpr::BoundedSum(body, bound) | PrfExpr::BoundedLoop(body, bound) => {
            let name = if matches!(e, PrfExpr::BoundedSum(..)) {
                "sum"
            } else {
                "loop"
            };
            write!(f, "(SUGAR {name} ")?;
            write_expr(body, f)?;
            f.write_str(" ")?;
            write_expr(bound, f)?;
            f.write_str(")")
        }
    }
}
