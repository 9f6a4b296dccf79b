//! Rewriting sugar into the five core combinators.

use std::sync::Arc;

use super::{Arity, Builtin, PrfExpr};

type E = Arc<PrfExpr>;

fn p(k: usize, n: usize) -> E {
    Arc::new(PrfExpr::Proj { k, n })
}

fn c(f: &E, gs: &[&E]) -> E {
    Arc::new(PrfExpr::Comp(f.clone(), gs.iter().map(|g| (*g).clone()).collect()))
}

fn r(b: &E, s: &E) -> E {
    Arc::new(PrfExpr::PrimRec(b.clone(), s.clone()))
}

fn projections(n: usize) -> Vec<E> {
    (1..=n).map(|k| p(k, n)).collect()
}

/// `e` restricted to exactly `n` arguments (`n >= 1`).
fn pin(e: E, n: usize) -> E {
    Arc::new(PrfExpr::Comp(e, projections(n)))
}

/// Zero as a function of exactly `n` arguments, or polymorphic zero for `n = 0`.
fn zero_of(n: usize) -> E {
    let z = Arc::new(PrfExpr::Zero);
    if n == 0 {
        z
    } else {
        pin(z, n)
    }
}

/// Core definitions of the builtins, built once per desugaring.
struct Kit {
    succ: E,
    add: E,
    mul: E,
    monus: E,
    sgn: E,
    le: E,
    max: E,
    pair: E,
    fst: E,
    snd: E,
    div: E,
    modulo: E,
}

impl Kit {
    fn new() -> Kit {
        let succ = Arc::new(PrfExpr::Succ);
        let zero = Arc::new(PrfExpr::Zero);
        let pred = r(&zero, &p(1, 2));
        let add = r(&p(1, 1), &c(&succ, &[&p(3, 3)]));
        let mul = r(&zero_of(1), &c(&add, &[&p(3, 3), &p(1, 3)]));
        let monus = r(&p(1, 1), &c(&pred, &[&p(3, 3)]));
        let one2 = c(&succ, &[&zero_of(2)]);
        let sgn = r(&zero, &one2);
        let le = c(&monus, &[&one2, &c(&monus, &[&p(1, 2), &p(2, 2)])]);
        let max = c(&add, &[&p(1, 2), &c(&monus, &[&p(2, 2), &p(1, 2)])]);
        // tri(y) = 0 + 1 + ... + y
        let tri = r(&zero, &c(&add, &[&p(2, 2), &c(&succ, &[&p(1, 2)])]));
        let pair = c(&add, &[&c(&tri, &[&c(&add, &[&p(1, 2), &p(2, 2)])]), &p(2, 2)]);
        // w(z) = #{1 <= t <= z : tri(t) <= z}, the diagonal index of code z
        let tri_le = c(&le, &[&c(&tri, &[&c(&succ, &[&p(2, 3)])]), &p(1, 3)]);
        let count = r(&zero_of(1), &c(&add, &[&p(3, 3), &tri_le]));
        let w = c(&count, &[&p(1, 1), &p(1, 1)]);
        let snd = c(&monus, &[&p(1, 1), &c(&tri, &[&w])]);
        let fst = c(&monus, &[&w, &snd]);
        // D(x, y, k) = #{1 <= t <= k : t*y <= x}; div = D(x, y, x) * sgn(y)
        let fits = c(&le, &[&c(&mul, &[&c(&succ, &[&p(3, 4)]), &p(2, 4)]), &p(1, 4)]);
        let d = r(&zero_of(2), &c(&add, &[&p(4, 4), &fits]));
        let div = c(&mul, &[&c(&d, &[&p(1, 2), &p(2, 2), &p(1, 2)]), &c(&sgn, &[&p(2, 2)])]);
        let modulo = c(&monus, &[&p(1, 2), &c(&mul, &[&p(2, 2), &div])]);
        Kit {
            succ,
            add,
            mul,
            monus,
            sgn,
            le,
            max,
            pair,
            fst,
            snd,
            div,
            modulo,
        }
    }

    fn builtin(&self, b: Builtin) -> E {
        match b {
            Builtin::Add => self.add.clone(),
            Builtin::Mul => self.mul.clone(),
            Builtin::TruncSub => self.monus.clone(),
            Builtin::Sgn | Builtin::AbsSgn => self.sgn.clone(),
            Builtin::Le => self.le.clone(),
            Builtin::Max => self.max.clone(),
            Builtin::Pair => self.pair.clone(),
            Builtin::Fst => self.fst.clone(),
            Builtin::Snd => self.snd.clone(),
            Builtin::Div => self.div.clone(),
            Builtin::Mod => self.modulo.clone(),
        }
    }
}

/// Rewrites a well-formed expression into core combinators only, preserving
/// its value at every argument list it accepts.
///
/// Core expressions never have exact arity 0, so sugar of arity 0 comes back
/// polymorphic; every other exact arity is preserved.
///
/// # Panics
/// If `expr` is ill-formed.
pub fn desugar(expr: &PrfExpr) -> PrfExpr {
    let kit = Kit::new();
    let out = go(&kit, expr);
    Arc::try_unwrap(out).unwrap_or_else(|a| (*a).clone())
}

fn go(kit: &Kit, e: &PrfExpr) -> E {
    let want = e.arity().expect("desugar needs a well-formed expression");
    let d = match e {
        PrfExpr::Zero | PrfExpr::Succ | PrfExpr::Proj { .. } => Arc::new(e.clone()),
        PrfExpr::Comp(f, gs) => Arc::new(PrfExpr::Comp(go(kit, f), gs.iter().map(|g| go(kit, g)).collect())),
        PrfExpr::PrimRec(b, s) => r(&go(kit, b), &go(kit, s)),
        PrfExpr::Const(v) => {
            let mut acc = Arc::new(PrfExpr::Zero);
            let mut k = v.clone();
            while k > 0u32.into() {
                acc = c(&kit.succ, &[&acc]);
                k -= 1u32;
            }
            acc
        }
        PrfExpr::Op(b) => kit.builtin(*b),
        PrfExpr::BoundedSum(body, bound) => {
            let Arity::Exact(n) = want else { unreachable!() };
            let body = go(kit, body);
            let body_args = projections(n + 2)[..n + 1].to_vec();
            let step = c(&kit.add, &[&p(n + 2, n + 2), &Arc::new(PrfExpr::Comp(body, body_args))]);
            let partial = r(&zero_of(n), &step);
            let top = c(&kit.succ, &[&go(kit, bound)]);
            finish_bounded(partial, top, n)
        }
        PrfExpr::BoundedLoop(body, bound) => {
            let Arity::Exact(n) = want else { unreachable!() };
            let lp = r(&zero_of(n), &go(kit, body));
            finish_bounded(lp, go(kit, bound), n)
        }
    };
    match (want, d.arity()) {
        (Arity::Exact(n), Ok(Arity::Any)) if n >= 1 => pin(d, n),
        _ => d,
    }
}

/// `rec(x.., top(x..))` for a recursion `rec` of arity `n + 1`.
fn finish_bounded(rec: E, top: E, n: usize) -> E {
    let mut args = projections(n);
    args.push(top);
    Arc::new(PrfExpr::Comp(rec, args))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Nat;
    use crate::prf::{eval, parse, EvalBudget};

    fn ev(e: &PrfExpr, args: &[u64]) -> Nat {
        let a: Vec<Nat> = args.iter().map(|&v| Nat::from(v)).collect();
        eval(e, &a, EvalBudget::new(10_000_000)).unwrap()
    }

    #[test]
    fn constants_unfold_to_successors() {
        let d = desugar(&PrfExpr::constant(2));
        assert_eq!(d, parse("(C S (C S Z))").unwrap());
        assert_eq!(desugar(&PrfExpr::Succ), PrfExpr::Succ);
    }

    #[test]
    fn truncated_subtraction() {
        let d = desugar(&PrfExpr::Op(Builtin::TruncSub));
        assert!(d.is_core());
        assert_eq!(ev(&d, &[5, 2]), Nat::from(3u32));
        assert_eq!(ev(&d, &[2, 5]), Nat::from(0u32));
    }

    #[test]
    fn every_builtin_matches_on_a_grid() {
        for b in Builtin::ALL {
            let sugar = PrfExpr::Op(b);
            let core = desugar(&sugar);
            assert!(core.is_core(), "{b:?}");
            assert_eq!(core.arity(), sugar.arity(), "{b:?}");
            for x in 0..9 {
                if b.arity() == 1 {
                    assert_eq!(ev(&core, &[x]), ev(&sugar, &[x]), "{b:?}({x})");
                    continue;
                }
                for y in 0..7 {
                    assert_eq!(ev(&core, &[x, y]), ev(&sugar, &[x, y]), "{b:?}({x},{y})");
                }
            }
        }
    }

    #[test]
    fn bounded_forms() {
        let s = parse("(SUGAR sum (C (SUGAR mul) (P 2 2) (P 1 2)) (P 1 1))").unwrap();
        let d = desugar(&s);
        assert!(d.is_core());
        for x in 0..6 {
            assert_eq!(ev(&d, &[x]), ev(&s, &[x]));
        }
        let nullary = parse("(SUGAR sum (P 1 1) (SUGAR const 4))").unwrap();
        assert_eq!(ev(&desugar(&nullary), &[]), Nat::from(10u32));
        let lp = parse("(SUGAR loop (C (SUGAR add) (P 3 3) (P 2 3)) (P 1 1))").unwrap();
        let d = desugar(&lp);
        assert!(d.is_core());
        assert_eq!(ev(&d, &[5]), Nat::from(10u32));
    }

    #[test]
    fn arity_zero_base_keeps_outer_arity() {
        // base of exact arity 0 under a polymorphic step: arity 1 before and after
        let e = parse("(R (SUGAR sum (P 1 1) (SUGAR const 2)) Z)").unwrap();
        assert_eq!(e.arity(), Ok(Arity::Exact(1)));
        let d = desugar(&e);
        assert_eq!(d.arity(), Ok(Arity::Exact(1)));
        assert_eq!(ev(&d, &[0]), Nat::from(3u32));
        assert_eq!(ev(&d, &[4]), Nat::from(0u32));
    }
}
