//! Browser demo: three views of the `ecn` crate compiled to WebAssembly.
//!
//! Each operation returns tab-separated rows, one per line, so the page can
//! render them without a serialization layer. The plain functions are the
//! tested surface; the `wasm_*` exports only translate errors.

use ecn::construct::{self, diagonalize};
use ecn::gcn::{self, MachineSource};
use ecn::numbers::Sprcn;
use ecn::numeric::{Int, Rational};
use ecn::prf::{enumerate, EvalBudget};
use wasm_bindgen::prelude::*;

const BUDGET: u64 = 20_000_000;
const DECIMALS: usize = 12;

/// Rows `n  p_n  bound  lower  upper` for `n = 0..=max_bits`, where
/// `[lower, upper]` is a decimal enclosure of `p_n ± 2^-n`.
pub fn approximations(name: &str, max_bits: u64) -> Result<String, String> {
    let x = construct::constant(name).ok_or_else(|| format!("unknown constant `{name}`"))?;
    let mut rows = String::new();
    for n in 0..=max_bits {
        let a = x
            .approx(n, EvalBudget::new(BUDGET))
            .map_err(|e| format!("n = {n}: {e}"))?;
        rows += &format!(
            "{n}\t{}\t{}\t{}\t{}\n",
            a.value,
            a.error_bound,
            a.lower().to_decimal(DECIMALS, false),
            a.upper().to_decimal(DECIMALS, true)
        );
    }
    Ok(rows)
}

/// Rows `m  S_m  bits` for the first `count` Specker elements; `bits` are
/// the `m` binary digits of `S_m`. `source` is `demo` or `enumeration`.
pub fn specker(source: &str, count: u64, step_cap: u64) -> Result<String, String> {
    let machines = match source {
        "demo" => gcn::demo_fixtures(),
        "enumeration" => MachineSource::Enumeration,
        other => return Err(format!("unknown machine source `{other}`")),
    };
    let seq = gcn::specker(count, step_cap.max(count), &machines).map_err(|e| e.to_string())?;
    let mut rows = String::new();
    for (m, s) in (1u64..).zip(&seq) {
        rows += &format!("{m}\t{s}\t{}\n", binary_digits(s, m));
    }
    Ok(rows)
}

/// Rows `i  lo  hi  enc_lo  enc_hi` for stages `i = 1..=k`: the interval
/// kept after stage `i` and the enclosure of the number it avoids.
pub fn diagonal_intervals(k: u64) -> Result<String, String> {
    if k == 0 {
        return Err("k must be at least 1".into());
    }
    let budget = EvalBudget::new(BUDGET);
    let mut rows = String::new();
    for i in 1..=k {
        let (lo, hi) = diagonalize(i, budget).map_err(|e| e.to_string())?;
        let s = Sprcn::new(0, enumerate(i - 1)).map_err(|e| e.to_string())?;
        let a = s.approx(2 * i + 1, budget).map_err(|e| e.to_string())?;
        rows += &format!("{i}\t{lo}\t{hi}\t{}\t{}\n", a.lower(), a.upper());
    }
    Ok(rows)
}

fn binary_digits(x: &Rational, m: u64) -> String {
    let two = Int::from(2);
    (1..=m)
        .map(|k| {
            let scaled = (x * &Rational::pow2(k as i64)).floor();
            if scaled % &two == Int::from(1) {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

#[wasm_bindgen(js_name = approximations)]
pub fn wasm_approximations(name: &str, max_bits: u32) -> Result<String, JsError> {
    approximations(name, max_bits.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = specker)]
pub fn wasm_specker(source: &str, count: u32, step_cap: u32) -> Result<String, JsError> {
    specker(source, count.into(), step_cap.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = diagonalIntervals)]
pub fn wasm_diagonal_intervals(k: u32) -> Result<String, JsError> {
    diagonal_intervals(k.into()).map_err(|e| JsError::new(&e))
}
