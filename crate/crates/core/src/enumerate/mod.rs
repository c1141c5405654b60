//! Streaming enumeration of ideals and exact ideal counting.

mod count;
mod rposet;

use fixedbitset::FixedBitSet;

use crate::pip::Pip;

pub use count::{count_poset_ideals, FactoredCount};
pub use rposet::{build_r_poset, count_maximal_minimizers, maximal_minimizers_via_r, RPoset};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Poset,
    Consistent,
    Maximal,
}

/// Backtracking over a fixed linear extension; each branch decides one element
/// (exclude first, then include), so every ideal is reached by exactly one path.
pub struct IdealIter<'a> {
    pip: &'a Pip,
    order: Vec<usize>,
    mode: Mode,
    set: FixedBitSet,
    choices: Vec<bool>,
    started: bool,
    done: bool,
}

impl<'a> IdealIter<'a> {
    fn new(pip: &'a Pip, mode: Mode) -> Self {
        IdealIter {
            pip,
            order: pip.linear_extension(),
            mode,
            set: FixedBitSet::with_capacity(pip.len()),
            choices: Vec::with_capacity(pip.len()),
            started: false,
            done: false,
        }
    }

    fn blocked_by_partner(&self, e: usize) -> bool {
        self.pip.mic_partners(e).into_iter().any(|q| self.set.contains(q))
    }

    fn can_include(&self, e: usize) -> bool {
        let below_ok = self.pip.down(e).ones().all(|b| b == e || self.set.contains(b));
        below_ok && (self.mode == Mode::Poset || !self.blocked_by_partner(e))
    }

    /// In maximal mode: every excluded element that could still be added must keep some
    /// partner that is included or undecided.
    fn viable(&self) -> bool {
        if self.mode != Mode::Maximal {
            return true;
        }
        let depth = self.choices.len();
        let mut pos = vec![usize::MAX; self.pip.len()];
        for (i, &e) in self.order.iter().enumerate() {
            pos[e] = i;
        }
        self.order[..depth].iter().all(|&e| {
            if self.set.contains(e) || !self.pip.down(e).ones().all(|b| b == e || self.set.contains(b)) {
                return true;
            }
            self.pip.mic_partners(e).into_iter().any(|q| self.set.contains(q) || pos[q] >= depth)
        })
    }

    fn is_maximal(&self) -> bool {
        (0..self.pip.len()).all(|e| self.set.contains(e) || !self.can_include(e))
    }

    fn descend(&mut self) -> bool {
        while self.choices.len() < self.order.len() {
            self.choices.push(false);
            if !self.viable() {
                return false;
            }
        }
        true
    }

    fn backtrack(&mut self) -> bool {
        while let Some(last) = self.choices.pop() {
            let e = self.order[self.choices.len()];
            if last {
                self.set.set(e, false);
                continue;
            }
            if self.can_include(e) {
                self.set.insert(e);
                self.choices.push(true);
                if self.viable() {
                    return true;
                }
                self.choices.pop();
                self.set.set(e, false);
            }
        }
        false
    }
}

impl Iterator for IdealIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.done {
                return None;
            }
            let ok = if !self.started {
                self.started = true;
                self.descend()
            } else if self.backtrack() {
                self.descend()
            } else {
                self.done = true;
                return None;
            };
            if ok && self.choices.len() == self.order.len() && (self.mode != Mode::Maximal || self.is_maximal()) {
                return Some(self.set.ones().collect());
            }
        }
    }
}

/// Every consistent ideal of `p`, each once, as sorted element lists.
pub fn consistent_ideals(p: &Pip) -> IdealIter<'_> {
    IdealIter::new(p, Mode::Consistent)
}

/// Inclusion-maximal consistent ideals of `p`, each once; maximality is certified before
/// every emission.
pub fn maximal_consistent_ideals(p: &Pip) -> IdealIter<'_> {
    IdealIter::new(p, Mode::Maximal)
}

/// Every order ideal of the poset underlying `p`, ignoring inconsistency.
pub fn poset_ideals(p: &Pip) -> IdealIter<'_> {
    IdealIter::new(p, Mode::Poset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pip::{Element, Payload};

    fn build(n: usize, order: &[(usize, usize)], mic: &[(usize, usize)]) -> Pip {
        Pip::new(vec![Element::new(Payload::None); n], order, mic).unwrap()
    }

    #[test]
    fn empty_pip_has_one_ideal() {
        let p = build(0, &[], &[]);
        assert_eq!(consistent_ideals(&p).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(maximal_consistent_ideals(&p).count(), 1);
        assert_eq!(poset_ideals(&p).count(), 1);
    }

    #[test]
    fn antichain_has_all_subsets() {
        let p = build(4, &[], &[]);
        assert_eq!(consistent_ideals(&p).count(), 16);
        assert_eq!(maximal_consistent_ideals(&p).collect::<Vec<_>>(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn single_pair_has_two_maximal_ideals() {
        let p = build(2, &[], &[(0, 1)]);
        let mut got: Vec<_> = maximal_consistent_ideals(&p).collect();
        got.sort();
        assert_eq!(got, vec![vec![0], vec![1]]);
        assert_eq!(consistent_ideals(&p).count(), 3);
    }

    #[test]
    fn chain_ideals() {
        let p = build(3, &[(0, 1), (1, 2)], &[]);
        assert_eq!(poset_ideals(&p).count(), 4);
    }
}
