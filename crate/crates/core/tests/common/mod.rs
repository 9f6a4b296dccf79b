//! Independent oracles and fixture generators shared by the integration tests.
//!
//! Nothing here calls into the code under test except to build inputs.

#![allow(dead_code)]

use std::sync::Arc;

use ecn::gcn::{Instr, Machine};
use ecn::numbers::Sprcn;
use ecn::numeric::{Int, Rational};
use ecn::prf::{parse, Enumerator, PrfExpr};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn sp(i: i64, text: &str) -> Sprcn {
    Sprcn::new(i, parse(text).unwrap()).unwrap()
}

/// Partial sum `I + Σ d_i 2^{-i}` straight from the digit values.
pub fn partial_from_digits(int_part: &Int, digits: &[i8]) -> Rational {
    let mut p = Rational::from_int(int_part.clone());
    for (i, d) in digits.iter().enumerate() {
        p = p + Rational::pow2(-(i as i64) - 1) * Rational::from(i64::from(*d));
    }
    p
}

/// A uniformly chosen unary core expression of size at most `max_size`.
pub fn random_expr(rng: &mut StdRng, en: &mut Enumerator, max_size: usize) -> PrfExpr {
    let total = en.count_up_to(max_size) as u64;
    en.nth(rng.gen_range(0..total))
}

pub fn random_sprcn(rng: &mut StdRng, en: &mut Enumerator) -> Sprcn {
    let e = random_expr(rng, en, 6);
    Sprcn::new(rng.gen_range(-5i64..=5), e).unwrap()
}

/// Maximal non-overlapping jumps by trying every choice; small inputs only.
pub fn exhaustive_jumps(q: &[Rational], t: &Rational) -> u64 {
    fn go(q: &[Rational], t: &Rational, from: usize) -> u64 {
        let mut best = 0;
        for a in from..q.len() {
            for b in a + 1..q.len() {
                if &(&q[a] - &q[b]).abs() > t {
                    best = best.max(1 + go(q, t, b + 1));
                }
            }
        }
        best
    }
    go(q, t, 0)
}

/// The same maximum by dynamic programming over prefixes, `O(n^2)`:
/// `best[b + 1] = max(best[b], max_{a < b, |q_a - q_b| > t} best[a] + 1)`.
pub fn dp_jumps(q: &[Rational], t: &Rational) -> u64 {
    let mut best = vec![0u64; q.len() + 1];
    for b in 0..q.len() {
        best[b + 1] = best[b];
        for a in 0..b {
            if &(&q[a] - &q[b]).abs() > t {
                best[b + 1] = best[b + 1].max(best[a] + 1);
            }
        }
    }
    best[q.len()]
}

/// Smallest `k >= 0` with `2^{-k} < d`, for a positive `d`.
pub fn finest_jump_scale(d: &Rational) -> u64 {
    let (p, q) = (d.numer(), d.denom());
    let mut k = (q.bits() as i64 - p.bits() as i64 - 1).max(0) as usize;
    while (p << k) <= *q {
        k += 1;
    }
    k as u64
}

/// [`dp_jumps`] at every scale `2^{-1}, ..., 2^{-k_max}` at once; each
/// pair's difference is classified a single time.
pub fn dp_jumps_by_scale(q: &[Rational], k_max: u64) -> Vec<u64> {
    let n = q.len();
    // first scale at which (a, b) is a jump; u64::MAX if never
    let mut first = vec![u64::MAX; n * n];
    for b in 0..n {
        for a in 0..b {
            let d = (&q[a] - &q[b]).abs();
            if !d.is_zero() {
                first[a * n + b] = finest_jump_scale(&d);
            }
        }
    }
    (1..=k_max)
        .map(|k| {
            let mut best = vec![0u64; n + 1];
            for b in 0..n {
                best[b + 1] = best[b];
                for a in 0..b {
                    if first[a * n + b] <= k {
                        best[b + 1] = best[b + 1].max(best[a] + 1);
                    }
                }
            }
            best[n]
        })
        .collect()
}

/// `arctan(1/x)` enclosed by two consecutive partial sums of its alternating
/// series, after `terms` terms.
fn arctan_inv(x: i64, terms: u64) -> (Rational, Rational) {
    let mut s = Rational::zero();
    let x2 = Int::from(x) * Int::from(x);
    let mut pow = Int::from(x);
    let mut prev = s.clone();
    for k in 0..terms {
        let term = Rational::new(Int::from(1), pow.clone() * Int::from(2 * k + 1));
        prev = s.clone();
        s = if k % 2 == 0 { s + term } else { s - term };
        pow *= x2.clone();
    }
    if prev < s {
        (prev, s)
    } else {
        (s, prev)
    }
}

/// `π = 16 arctan(1/5) - 4 arctan(1/239)`, enclosed in `[lo, hi]`.
pub fn machin_pi(terms: u64) -> (Rational, Rational) {
    let (a_lo, a_hi) = arctan_inv(5, terms);
    let (b_lo, b_hi) = arctan_inv(239, terms);
    let k16 = Rational::from(16);
    let k4 = Rational::from(4);
    (&k16 * &a_lo - &k4 * &b_hi, &k16 * &a_hi - &k4 * &b_lo)
}

pub fn primes_below(n: usize) -> Vec<bool> {
    let mut is = vec![true; n];
    is[0] = false;
    if n > 1 {
        is[1] = false;
    }
    let mut p = 2;
    while p * p < n {
        if is[p] {
            for m in (p * p..n).step_by(p) {
                is[m] = false;
            }
        }
        p += 1;
    }
    is
}

/// `INC 0` repeated, then `HALT`: halts on input 0 after exactly `steps` steps.
pub fn halting_after(steps: usize) -> Machine {
    let mut p = vec![Instr::Inc(0); steps - 1];
    p.push(Instr::Halt);
    Machine::new(p).unwrap()
}

pub fn diverging() -> Machine {
    Machine::new(vec![Instr::Inc(1), Instr::Dec(2, 0)]).unwrap()
}

/// Halting time on input 0 by stepping the machine directly.
pub fn halting_time(m: &Machine, cap: u64) -> Option<u64> {
    let mut run = m.start(0);
    for _ in 0..cap {
        if run.is_halted() {
            break;
        }
        run.step();
    }
    run.is_halted().then(|| run.steps())
}

/// A random fixture list mixing quick halters, divergers and enumerated machines.
pub fn random_fixtures(rng: &mut StdRng, len: usize) -> Arc<[Machine]> {
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => halting_after(rng.gen_range(1..=45)),
            1 => diverging(),
            _ => ecn::gcn::enumerate_machines(rng.gen_range(0..5000)),
        })
        .collect::<Vec<_>>()
        .into()
}

/// Bit `k` (1-based) of a rational in `[0, 1)`.
pub fn bit(x: &Rational, k: u64) -> u8 {
    let scaled = (x * &Rational::pow2(k as i64)).floor();
    u8::from(scaled % Int::from(2) == Int::from(1))
}
