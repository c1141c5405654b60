use std::sync::atomic::{AtomicUsize, Ordering};

use super::kvector::KVector;
use super::table::TableFunction;
use super::value::Value;

/// A partial assignment: `Some(a)` pins coordinate `i` to label `a`.
pub type Fixing = Vec<Option<u8>>;

/// A k-SFM oracle: minimization of `f` restricted by a [`Fixing`], with a call counter.
///
/// Implementations must be safe to call concurrently.
pub trait MinimizingOracle: Sync {
    fn n(&self) -> usize;
    fn k(&self) -> u8;
    fn evaluate(&self, x: &KVector) -> Value;
    /// A point consistent with `fixing` attaining the minimum over all such points.
    fn minimize(&self, fixing: &[Option<u8>]) -> (KVector, Value);
    /// Number of `minimize` calls so far.
    fn calls(&self) -> usize;
}

/// Which minimizer a [`TableOracle`] reports when several tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    First,
    Last,
    /// A pseudo-random tied point chosen from this seed and the call number.
    Scrambled(u64),
}

/// Exhaustive oracle over a [`TableFunction`].
pub struct TableOracle<'a> {
    table: &'a TableFunction,
    tie: TieBreak,
    calls: AtomicUsize,
}

impl<'a> TableOracle<'a> {
    pub fn new(table: &'a TableFunction) -> Self {
        Self::with_tie_break(table, TieBreak::First)
    }

    pub fn with_tie_break(table: &'a TableFunction, tie: TieBreak) -> Self {
        TableOracle { table, tie, calls: AtomicUsize::new(0) }
    }
}

impl MinimizingOracle for TableOracle<'_> {
    fn n(&self) -> usize {
        self.table.n()
    }

    fn k(&self) -> u8 {
        self.table.k()
    }

    fn evaluate(&self, x: &KVector) -> Value {
        self.table.eval(x)
    }

    fn minimize(&self, fixing: &[Option<u8>]) -> (KVector, Value) {
        assert_eq!(fixing.len(), self.n(), "fixing length must equal n");
        let call = self.calls.fetch_add(1, Ordering::Relaxed) as u64;
        let (n, k) = (self.n(), self.k());
        let free: Vec<usize> = (0..n).filter(|&i| fixing[i].is_none()).collect();
        let mut labels: Vec<u8> = fixing.iter().map(|a| a.unwrap_or(0)).collect();
        let count = (k as usize + 1).pow(free.len() as u32);
        let mut best: Option<Value> = None;
        let mut ties: Vec<KVector> = Vec::new();
        for mut idx in 0..count {
            for &i in free.iter().rev() {
                labels[i] = (idx % (k as usize + 1)) as u8;
                idx /= k as usize + 1;
            }
            let x = KVector::new(k, labels.clone()).expect("labels within range");
            let v = self.table.eval(&x);
            match best {
                Some(b) if v > b => {}
                Some(b) if v == b => ties.push(x),
                _ => {
                    best = Some(v);
                    ties.clear();
                    ties.push(x);
                }
            }
        }
        let pick = match self.tie {
            TieBreak::First => 0,
            TieBreak::Last => ties.len() - 1,
            TieBreak::Scrambled(seed) => {
                let h = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(call.wrapping_mul(0xBF58_476D_1CE4_E5B9));
                (h >> 17) as usize % ties.len()
            }
        };
        (ties.swap_remove(pick), best.expect("at least one point"))
    }

    fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_fixings_and_counts_calls() {
        let f = TableFunction::from_fn(2, 2, |x| Value::int(x.index() as i128)).unwrap();
        let o = TableOracle::new(&f);
        let (x, v) = o.minimize(&[None, None]);
        assert!(x.is_zero() && v == Value::int(0));
        let (x, _) = o.minimize(&[Some(2), None]);
        assert_eq!(x.labels(), &[2, 0]);
        assert_eq!(o.calls(), 2);
    }

    #[test]
    fn tie_breaks_differ_but_stay_optimal() {
        let f = TableFunction::from_fn(2, 1, |_| Value::int(0)).unwrap();
        let first = TableOracle::with_tie_break(&f, TieBreak::First).minimize(&[None, None]).0;
        let last = TableOracle::with_tie_break(&f, TieBreak::Last).minimize(&[None, None]).0;
        assert_ne!(first, last);
    }
}
