//! Ranking of the unary core expressions.
//!
//! The enumerated set is every well-formed core expression (`Z`, `S`, `P`,
//! `C`, `R` only) that accepts exactly one argument, i.e. whose arity is 1 or
//! polymorphic. The order is:
//!
//! 1. by [`PrfExpr::size`];
//! 2. by tag, `Z < S < P < C < R`;
//! 3. within a tag, `(P k n)` by `k`; `(C f g1..gm)` by size of `f`, then
//!    `m`, then `f`, then `g1`, `g2`, ... each compared by this same order;
//!    `(R b s)` by `b`, then `s`.
//!
//! Counting is exact up to `2^64` and saturates beyond, which is enough to
//! rank any `u64` index.

use std::collections::HashMap;
use std::sync::Arc;

use super::PrfExpr;

/// The `index`-th unary core expression (0-based).
pub fn enumerate(index: u64) -> PrfExpr {
    Enumerator::new().nth(index)
}

/// Memoized counting tables. Reuse one instance for many lookups.
#[derive(Default)]
pub struct Enumerator {
    // (size, n) -> count of class T_n at that size, where T_0 is the
    // polymorphic expressions and T_n (n >= 1) adds exact arity n
    classes: HashMap<(usize, usize), u128>,
    // (n, total size, length) -> count of argument lists drawn from T_n
    lists: HashMap<(usize, usize, usize), u128>,
}

impl Enumerator {
    pub fn new() -> Enumerator {
        Enumerator::default()
    }

    /// Number of enumerated expressions of exactly this size.
    pub fn count_of_size(&mut self, size: usize) -> u128 {
        self.class(size, 1)
    }

    /// Number of enumerated expressions of size at most `size`.
    pub fn count_up_to(&mut self, size: usize) -> u128 {
        (1..=size).fold(0u128, |acc, s| acc.saturating_add(self.count_of_size(s)))
    }

    pub fn nth(&mut self, index: u64) -> PrfExpr {
        let mut idx = index as u128;
        let mut s = 1;
        loop {
            let c = self.class(s, 1);
            if idx < c {
                return self.unrank(s, 1, idx);
            }
            idx -= c;
            s += 1;
        }
    }

    /// Position of `e` in the enumeration, if it is enumerated at all.
    pub fn rank(&mut self, e: &PrfExpr) -> Option<u64> {
        if !e.is_core() || !e.accepts(1) {
            return None;
        }
        let s = e.size();
        let before: u128 = (1..s).map(|t| self.class(t, 1)).fold(0, u128::saturating_add);
        let r = before.checked_add(self.rank_in(e, 1)?)?;
        u64::try_from(r).ok()
    }

    fn class(&mut self, s: usize, n: usize) -> u128 {
        if s == 0 {
            return 0;
        }
        if let Some(&v) = self.classes.get(&(s, n)) {
            return v;
        }
        let mut total: u128 = 0;
        if s == 1 {
            total += 1 + u128::from(n == 1);
        }
        if s >= 2 && n == s - 1 {
            total += n as u128;
        }
        if s >= 2 {
            for sf in 1..s {
                let rest = s - 1 - sf;
                for m in 0..=rest {
                    let a = self.class(sf, m);
                    if a == 0 {
                        continue;
                    }
                    let b = self.list(n, rest, m);
                    total = total.saturating_add(a.saturating_mul(b));
                }
            }
        }
        if s >= 3 {
            let (nb, ns) = rec_classes(n);
            for sb in 1..=s - 2 {
                let a = self.class(sb, nb);
                let b = self.class(s - 1 - sb, ns);
                total = total.saturating_add(a.saturating_mul(b));
            }
        }
        self.classes.insert((s, n), total);
        total
    }

    fn list(&mut self, n: usize, t: usize, m: usize) -> u128 {
        if m == 0 {
            return u128::from(t == 0);
        }
        if t < m {
            return 0;
        }
        if let Some(&v) = self.lists.get(&(n, t, m)) {
            return v;
        }
        let mut total: u128 = 0;
        for s1 in 1..=t - (m - 1) {
            let a = self.class(s1, n);
            if a == 0 {
                continue;
            }
            let b = self.list(n, t - s1, m - 1);
            total = total.saturating_add(a.saturating_mul(b));
        }
        self.lists.insert((n, t, m), total);
        total
    }

    fn unrank(&mut self, s: usize, n: usize, mut idx: u128) -> PrfExpr {
        if s == 1 {
            if idx == 0 {
                return PrfExpr::Zero;
            }
            idx -= 1;
            if n == 1 {
                if idx == 0 {
                    return PrfExpr::Succ;
                }
                idx -= 1;
            }
        }
        if s >= 2 && n == s - 1 {
            if idx < n as u128 {
                return PrfExpr::Proj { k: idx as usize + 1, n };
            }
            idx -= n as u128;
        }
        if s >= 2 {
            for sf in 1..s {
                let rest = s - 1 - sf;
                for m in 0..=rest {
                    let a = self.class(sf, m);
                    if a == 0 {
                        continue;
                    }
                    let b = self.list(n, rest, m);
                    let block = a.saturating_mul(b);
                    if idx < block {
                        let f = self.unrank(sf, m, idx / b);
                        let gs = self.unrank_list(n, rest, m, idx % b);
                        return PrfExpr::Comp(Arc::new(f), gs);
                    }
                    idx -= block;
                }
            }
        }
        assert!(s >= 3, "index out of range for size {s}");
        let (nb, ns) = rec_classes(n);
        for sb in 1..=s - 2 {
            let a = self.class(sb, nb);
            let b = self.class(s - 1 - sb, ns);
            let block = a.saturating_mul(b);
            if idx < block {
                let base = self.unrank(sb, nb, idx / b);
                let step = self.unrank(s - 1 - sb, ns, idx % b);
                return PrfExpr::PrimRec(Arc::new(base), Arc::new(step));
            }
            idx -= block;
        }
        panic!("index out of range for size {s}");
    }

    fn unrank_list(&mut self, n: usize, t: usize, m: usize, mut idx: u128) -> Vec<Arc<PrfExpr>> {
        let mut out = Vec::with_capacity(m);
        let (mut t, mut m) = (t, m);
        while m > 0 {
            let mut picked = false;
            for s1 in 1..=t - (m - 1) {
                let a = self.class(s1, n);
                if a == 0 {
                    continue;
                }
                let b = self.list(n, t - s1, m - 1);
                let block = a.saturating_mul(b);
                if idx < block {
                    out.push(Arc::new(self.unrank(s1, n, idx / b)));
                    idx %= b;
                    t -= s1;
                    m -= 1;
                    picked = true;
                    break;
                }
                idx -= block;
            }
            assert!(picked, "list index out of range");
        }
        out
    }

    /// Rank of `e` within `T_n` at its own size.
    fn rank_in(&mut self, e: &PrfExpr, n: usize) -> Option<u128> {
        let s = e.size();
        let mut base: u128 = 0;
        if s == 1 {
            match e {
                PrfExpr::Zero => return Some(0),
                PrfExpr::Succ if n == 1 => return Some(1),
                _ => return None,
            }
        }
        if n == s - 1 {
            if let PrfExpr::Proj { k, n: pn } = e {
                return (*pn == n).then_some(*k as u128 - 1);
            }
            base += n as u128;
        }
        match e {
            PrfExpr::Comp(f, gs) => {
                let sf = f.size();
                let rest = s - 1 - sf;
                let m = gs.len();
                for sf2 in 1..s {
                    for m2 in 0..=(s - 1 - sf2) {
                        if (sf2, m2) == (sf, m) {
                            let b = self.list(n, rest, m);
                            let fr = self.rank_in(f, m)?;
                            let lr = self.rank_list(gs, n)?;
                            return Some(base.saturating_add(fr.saturating_mul(b)).saturating_add(lr));
                        }
                        let a = self.class(sf2, m2);
                        let b = self.list(n, s - 1 - sf2, m2);
                        base = base.saturating_add(a.saturating_mul(b));
                    }
                }
                None
            }
            PrfExpr::PrimRec(b0, st) => {
                for sf in 1..s {
                    for m in 0..=(s - 1 - sf) {
                        base = base.saturating_add(self.class(sf, m).saturating_mul(self.list(n, s - 1 - sf, m)));
                    }
                }
                let (nb, ns) = rec_classes(n);
                let sb = b0.size();
                for sb2 in 1..sb {
                    base = base.saturating_add(self.class(sb2, nb).saturating_mul(self.class(s - 1 - sb2, ns)));
                }
                let b = self.class(s - 1 - sb, ns);
                Some(
                    base.saturating_add(self.rank_in(b0, nb)?.saturating_mul(b))
                        .saturating_add(self.rank_in(st, ns)?),
                )
            }
            _ => None,
        }
    }

    fn rank_list(&mut self, gs: &[Arc<PrfExpr>], n: usize) -> Option<u128> {
        let Some((g, rest)) = gs.split_first() else {
            return Some(0);
        };
        let t: usize = gs.iter().map(|g| g.size()).sum();
        let m = gs.len();
        let s1 = g.size();
        let mut base = 0u128;
        for s2 in 1..s1 {
            base = base.saturating_add(self.class(s2, n).saturating_mul(self.list(n, t - s2, m - 1)));
        }
        let b = self.list(n, t - s1, m - 1);
        Some(
            base.saturating_add(self.rank_in(g, n)?.saturating_mul(b))
                .saturating_add(self.rank_list(rest, n)?),
        )
    }
}

/// Classes for base and step of a recursion landing in `T_n`.
fn rec_classes(n: usize) -> (usize, usize) {
    if n == 0 {
        (0, 0)
    } else {
        (n - 1, n + 1)
    }
}
