mod common;

use std::sync::OnceLock;

use common::*;
use ecn::construct::{sprcn_neg, PrSeq};
use ecn::gcn::{count_jumps, specker, Gcn, GcnError, MachineSource, Ngcn, ScriptEnd, SequenceProgram};
use ecn::numbers::{deserialize, serialize, Number, Prcn, Sprcn};
use ecn::numeric::{Nat, Rational};
use ecn::prf::{enumerate, eval, parse, Enumerator, EvalBudget, PrfExpr};
use proptest::prelude::*;

fn budget() -> EvalBudget {
    EvalBudget::new(20_000_000)
}

/// How many core expressions have size at most 6.
fn small_count() -> u64 {
    static COUNT: OnceLock<u64> = OnceLock::new();
    *COUNT.get_or_init(|| Enumerator::new().count_up_to(6) as u64)
}

fn small_expr() -> impl Strategy<Value = PrfExpr> {
    (0..small_count()).prop_map(enumerate)
}

fn small_sprcn() -> impl Strategy<Value = Sprcn> {
    (-5i64..=5, small_expr()).prop_map(|(i, e)| Sprcn::new(i, e).unwrap())
}

fn dyadic() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 0i64..=4).prop_map(|(n, k)| Rational::new(n, 1 << k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_then_parsing_is_the_identity(i in 0..small_count()) {
        let e = enumerate(i);
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e.clone());
        prop_assert_eq!(Enumerator::new().rank(&e), Some(i));
    }

    #[test]
    fn approximations_are_modulated(x in small_sprcn()) {
        let p: Vec<Rational> = (0..=16).map(|n| x.approx(n, budget()).unwrap().value).collect();
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                prop_assert!((&p[j] - &p[i]).abs() < Rational::pow2(-(i as i64)));
            }
        }
    }

    #[test]
    fn every_prcn_is_an_sprcn(i in -5i64..=5, e in small_expr()) {
        let x = Prcn::new(i, e).unwrap();
        let y = x.to_sprcn();
        for n in 0..=12 {
            prop_assert_eq!(x.approx(n, budget()).unwrap().value, y.approx(n, budget()).unwrap().value);
        }
        // digit by digit as well
        let digits = x.digits(12, budget()).unwrap();
        let direct: Vec<i8> = y.digits(12, budget()).unwrap().iter().map(|d| d.value()).collect();
        prop_assert_eq!(digits.iter().map(|&d| d as i8).collect::<Vec<_>>(), direct);
    }

    #[test]
    fn greedy_jump_count_matches_dynamic_programming(
        q in prop::collection::vec(dyadic(), 0..24),
        k in 0i64..=5,
    ) {
        let t = Rational::pow2(-k);
        prop_assert_eq!(count_jumps(&q, &t), dp_jumps(&q, &t));
    }

    #[test]
    fn jump_counts_by_scale_agree_with_single_scale(q in prop::collection::vec(dyadic(), 0..16)) {
        let by_scale = dp_jumps_by_scale(&q, 6);
        for (k, count) in (1..=6).zip(by_scale) {
            prop_assert_eq!(count, dp_jumps(&q, &Rational::pow2(-k)));
        }
    }

    #[test]
    fn serialization_round_trips(x in small_sprcn(), e in small_expr(), tag in 0..3u8) {
        let number = match tag {
            0 => Number::Sprcn(x),
            1 => Number::Prcn(Prcn::new(x.int_part.clone(), e).unwrap()),
            _ => Number::PrSeq(PrSeq::new(e.clone(), x.coeff.clone(), parse("S").unwrap(), e).unwrap()),
        };
        let text = serialize(&number).unwrap();
        let back = deserialize(&text).unwrap();
        prop_assert_eq!(back.class(), number.class());
        prop_assert_eq!(serialize(&back).unwrap(), text);
    }

    #[test]
    fn double_negation_is_exact(x in small_sprcn()) {
        let y = sprcn_neg(&sprcn_neg(&x));
        for n in 0..=12 {
            prop_assert_eq!(y.approx(n, budget()).unwrap().value, x.approx(n, budget()).unwrap().value);
        }
    }

    #[test]
    fn specker_sequence_only_grows(seed in any::<u64>(), n in 1u64..=30) {
        let src = MachineSource::Fixed(random_fixtures(&mut rng(seed), 30));
        let s = specker(n, n, &src).unwrap();
        prop_assert!(s.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.iter().all(|x| x >= &Rational::zero() && x < &Rational::one()));
    }

    #[test]
    fn wrapper_output_starts_at_zero_and_stays_bounded(
        script in prop::collection::vec(prop::option::of(dyadic()), 0..60),
        bound in 1u64..=4,
        c in 0u64..=3,
    ) {
        let inner = SequenceProgram::script("prop", script, ScriptEnd::Halt);
        let g = Gcn::new(inner, Nat::from(bound), parse(&format!("(SUGAR const {c})")).unwrap()).unwrap();
        let mut runner = g.runner();
        let mut seq = Vec::new();
        while seq.len() < 80 {
            match runner.next(2_000) {
                Ok(q) => seq.push(q),
                Err(GcnError::BudgetExceeded { .. }) => break,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
        prop_assert_eq!(seq.first(), Some(&Rational::zero()));
        prop_assert!(seq.iter().all(|q| q.abs() <= Rational::from(bound as i64)));
        for (k, count) in (1..=8).zip(dp_jumps_by_scale(&seq, 8)) {
            prop_assert!(count < c.max(1), "{count} jumps above 2^-{k} with J = {c}");
        }
    }

    /// Digit `i` at stage `n` follows `P(i, 1..=n)` through at most `J(i)`
    /// changes and then freezes.
    #[test]
    fn ngcn_digits_freeze_after_the_revision_bound(e in small_expr(), c in 0u64..=3, n in 1u64..=8) {
        // a binary program from a unary one: P(i, j) = e(i + j)
        let p = parse(&format!("(C {e} (C (SUGAR add) (P 1 2) (P 2 2)))")).unwrap();
        let x = Ngcn::new(0, p.clone(), parse(&format!("(SUGAR const {c})")).unwrap()).unwrap();
        let digits = x.digits(n, budget()).unwrap();
        prop_assert_eq!(digits.len() as u64, n + 1);
        for i in 0..=n {
            let seen: Vec<u8> = (1..=n)
                .map(|j| u8::from(eval(&p, &[Nat::from(i), Nat::from(j)], budget()).unwrap() != Nat::from(0u8)))
                .collect();
            // the value after the first c changes, walking left to right
            let mut want = seen[0];
            let mut changes = 0;
            for &v in &seen[1..] {
                if v != want {
                    if changes == c {
                        break;
                    }
                    changes += 1;
                    want = v;
                }
            }
            prop_assert_eq!(digits[i as usize], want, "digit {} of {:?}", i, seen);
        }
    }
}
