//! The Specker sequence over toy machines.
//!
//! `S_m = Σ_{k=1}^{m} b_k(m) 2^{-k}` where `b_k(m) = 1` iff machine `P_k`
//! halts within `m` steps. The sequence is increasing and bounded by 1, yet
//! how fast it settles depends on the halting problem.

use std::sync::Arc;

use num_bigint::BigInt;

use super::machine::{enumerate_machines, Instr, Machine};
use super::ngcn::Ngcn;
use crate::numeric::Rational;
use crate::prf::term::{self, Scope};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("step cap {cap} is below the requested length {n}")]
pub struct SpeckerError {
    pub n: u64,
    pub cap: u64,
}

/// Where `P_1, P_2, ...` come from.
#[derive(Clone, Debug)]
pub enum MachineSource {
    /// `P_k` is machine number `k - 1` of the enumeration.
    Enumeration,
    /// `P_k` is entry `k - 1`; missing entries diverge.
    Fixed(Arc<[Machine]>),
}

impl MachineSource {
    pub fn machine(&self, k: u64) -> Machine {
        assert!(k >= 1, "machines are numbered from 1");
        match self {
            MachineSource::Enumeration => enumerate_machines(k - 1),
            MachineSource::Fixed(list) => match list.get((k - 1) as usize) {
                Some(m) => m.clone(),
                None => diverging(),
            },
        }
    }
}

fn diverging() -> Machine {
    Machine::new(vec![Instr::Dec(0, 0)]).expect("valid program")
}

fn halting_after(steps: usize) -> Machine {
    let mut p = vec![Instr::Inc(0); steps - 1];
    p.push(Instr::Halt);
    Machine::new(p).expect("valid program")
}

/// `P_1` halts at step 3, `P_2` diverges, `P_3` halts at step 1, `P_4` at
/// step 4, everything after diverges.
pub fn demo_fixtures() -> MachineSource {
    MachineSource::Fixed(vec![halting_after(3), diverging(), halting_after(1), halting_after(4)].into())
}

/// `S_1, ..., S_n`, running every machine at most `step_cap >= n` steps.
pub fn specker(n: u64, step_cap: u64, machines: &MachineSource) -> Result<Vec<Rational>, SpeckerError> {
    if step_cap < n {
        return Err(SpeckerError { n, cap: step_cap });
    }
    let times: Vec<Option<u64>> = (1..=n).map(|k| machines.machine(k).halting_time(0, n)).collect();
    Ok((1..=n)
        .map(|m| {
            let mut num = BigInt::from(0);
            for k in 1..=m {
                let bit = matches!(times[(k - 1) as usize], Some(t) if t <= m);
                num = num * 2 + u8::from(bit);
            }
            Rational::new(num, BigInt::from(1) << m)
        })
        .collect())
}

/// The Specker sequence for `P_1..P_count` as an NGCN with `J ≡ 1`:
/// `P(k, m) = [machine k has halted within m steps]`.
pub fn specker_ngcn(machines: &MachineSource, count: u64) -> Ngcn {
    let (s, v) = Scope::root(2);
    let (k, m) = (v[0].clone(), v[1].clone());
    let mut body = term::lit(0);
    for j in 1..=count {
        let halted = machines.machine(j).halted_term(s, m.clone());
        body = term::add(body, term::mul(term::eq(k.clone(), term::lit(j)), halted));
    }
    Ngcn::new(0, term::compile(&body, 2), crate::prf::PrfExpr::constant(1)).expect("arity 2 program")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcn::ngcn_partial;
    use crate::prf::EvalBudget;

    fn bin(bits: &str) -> Rational {
        let v = i64::from_str_radix(bits, 2).unwrap();
        Rational::new(v, 1i64 << bits.len())
    }

    #[test]
    fn worked_example() {
        let s = specker(4, 4, &demo_fixtures()).unwrap();
        assert_eq!(s[0], bin("0"));
        assert_eq!(s[1], bin("00"));
        assert_eq!(s[2], bin("101"));
        assert_eq!(s[3], bin("1011"));
    }

    #[test]
    fn all_diverging_is_zero() {
        let none = MachineSource::Fixed(Vec::new().into());
        assert!(specker(10, 10, &none).unwrap().iter().all(Rational::is_zero));
        assert!(specker(10, 9, &none).is_err());
    }

    #[test]
    fn ngcn_form_matches() {
        let fx = demo_fixtures();
        let x = specker_ngcn(&fx, 6);
        let s = specker(6, 6, &fx).unwrap();
        for n in 1..=6u64 {
            let p = ngcn_partial(&x, n, EvalBudget::new(50_000_000)).unwrap();
            assert_eq!(p, s[n as usize - 1], "n = {n}");
        }
    }
}
