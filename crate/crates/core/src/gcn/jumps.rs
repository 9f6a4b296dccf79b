//! Counting non-overlapping jumps.
//!
//! A jump above threshold `t` is an index pair `a < b` with
//! `|q_a - q_b| > t`; jumps are non-overlapping when their index ranges are
//! disjoint (`a_1 < b_1 < a_2 < b_2 < ...`). The maximal number of them is
//! found by a greedy left-to-right scan: keep the minimum and maximum of the
//! current window, close a jump at the first element that leaves the band
//! `[max - t, min + t]`, then start an empty window after it. Ending every
//! jump as early as possible can only leave more room for later ones.

use crate::numeric::Rational;

/// Greedy scan state for one threshold.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanState {
    window: Option<(Rational, Rational)>,
    count: u64,
}

impl ScanState {
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Feeds one value. `threshold = None` stands for an infinitesimal
    /// threshold: any two distinct values form a jump.
    pub fn push(&mut self, v: &Rational, threshold: Option<&Rational>) {
        let Some((lo, hi)) = &mut self.window else {
            self.window = Some((v.clone(), v.clone()));
            return;
        };
        let jumped = match threshold {
            Some(t) => &(v - &*lo) > t || &(&*hi - v) > t,
            None => v != lo || v != hi,
        };
        if jumped {
            self.count += 1;
            self.window = None;
        } else if v < lo {
            *lo = v.clone();
        } else if v > hi {
            *hi = v.clone();
        }
    }
}

/// Maximal number of non-overlapping jumps above `threshold` in `q`.
pub fn count_jumps(q: &[Rational], threshold: &Rational) -> u64 {
    let mut s = ScanState::default();
    for v in q {
        s.push(v, Some(threshold));
    }
    s.count()
}
