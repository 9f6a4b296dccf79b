//! The product jump bound should be large enough that wrapping the product
//! of two wrapped sequences never has to censor a proposal.

mod common;

use common::*;
use ecn::gcn::{gcn_mul, Gcn, GcnError, ScriptEnd, SequenceProgram};
use ecn::numeric::{Nat, Rational};
use ecn::prf::PrfExpr;
use rand::rngs::StdRng;
use rand::Rng;

fn factor(rng: &mut StdRng) -> Gcn {
    let bound = rng.gen_range(1..=3i64);
    let mut x = Rational::zero();
    let items = (0..rng.gen_range(20..120))
        .map(|_| {
            if rng.gen_bool(0.1) {
                return None;
            }
            Some(if rng.gen_bool(0.3) {
                r(rng.gen_range(-2 * bound..=2 * bound), rng.gen_range(1..8))
            } else {
                x = &x + &(Rational::pow2(-rng.gen_range(0..12)) * Rational::from(rng.gen_range(-1..=1i64)));
                x.clone()
            })
        })
        .collect();
    let end = if rng.gen_bool(0.5) {
        ScriptEnd::Halt
    } else {
        ScriptEnd::Stall
    };
    let j = PrfExpr::constant(rng.gen_range(0..4u64));
    Gcn::new(
        SequenceProgram::script("factor", items, end),
        Nat::from(bound as u64),
        j,
    )
    .unwrap()
}

#[test]
fn product_of_wrapped_sequences_is_never_censored() {
    let mut rng = rng(21);
    let mut outputs = 0;
    for case in 0..40 {
        let (x, y) = (factor(&mut rng), factor(&mut rng));
        let mut runner = gcn_mul(&x, &y).runner();
        for _ in 0..120 {
            match runner.next(20_000) {
                Ok(_) => outputs += 1,
                Err(GcnError::BudgetExceeded { .. }) => break,
                Err(e) => panic!("case {case}: {e}"),
            }
        }
        assert_eq!(
            runner.ledger().censored(),
            0,
            "case {case}: the product wrapper censored a proposal"
        );
    }
    assert!(outputs > 1000, "only {outputs} outputs");
}
