use std::fmt;

use crate::error::{Error, Result};

/// A point of `S_k^n = {0,…,k}^n`.
///
/// Label `0` is the bottom of each coordinate; labels `1..=k` are pairwise
/// incomparable and sit above `0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct KVector {
    k: u8,
    labels: Vec<u8>,
}

impl KVector {
    pub fn new(k: u8, labels: Vec<u8>) -> Result<Self> {
        if k == 0 {
            return Err(Error::validation("k must be positive"));
        }
        if let Some(&bad) = labels.iter().find(|&&a| a > k) {
            return Err(Error::validation(format!("label {bad} exceeds k = {k}")));
        }
        Ok(KVector { k, labels })
    }

    pub fn zeros(n: usize, k: u8) -> Self {
        KVector { k, labels: vec![0; n] }
    }

    /// Parses a compact digit string such as `"13002"` (requires `k ≤ 9`).
    pub fn from_digits(k: u8, digits: &str) -> Result<Self> {
        let labels = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::parse(format!("bad digit {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        KVector::new(k, labels)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn with(&self, i: usize, a: u8) -> KVector {
        let mut labels = self.labels.clone();
        labels[i] = a;
        KVector { k: self.k, labels }
    }

    pub fn is_zero(&self) -> bool {
        self.labels.iter().all(|&a| a == 0)
    }

    fn check(&self, other: &KVector) -> Result<()> {
        if self.k != other.k || self.n() != other.n() {
            return Err(Error::validation(format!(
                "shape mismatch: (n={}, k={}) vs (n={}, k={})",
                self.n(),
                self.k,
                other.n(),
                other.k
            )));
        }
        Ok(())
    }

    /// `x ⊓ y`; panics on a shape mismatch (see [`sq_meet`] for the checked form).
    pub fn meet(&self, other: &KVector) -> KVector {
        sq_meet(self, other).expect("meet of mismatched vectors")
    }

    /// `x ⊔ y`; panics on a shape mismatch (see [`sq_join`] for the checked form).
    pub fn join(&self, other: &KVector) -> KVector {
        sq_join(self, other).expect("join of mismatched vectors")
    }

    /// `x ⪯ y`; panics on a shape mismatch.
    pub fn leq(&self, other: &KVector) -> bool {
        partial_leq(self, other).expect("comparison of mismatched vectors")
    }

    /// Whether the lattice join `x ∨ y` exists, i.e. no coordinate carries two different nonzero labels.
    pub fn joinable(&self, other: &KVector) -> bool {
        self.labels.iter().zip(&other.labels).all(|(&a, &b)| label_comparable(a, b))
    }

    pub fn support(&self) -> Vec<usize> {
        support(self)
    }

    /// Mixed-radix index in base `k+1`, first coordinate most significant.
    pub fn index(&self) -> usize {
        let base = self.k as usize + 1;
        self.labels.iter().fold(0, |acc, &a| acc * base + a as usize)
    }

    pub fn from_index(n: usize, k: u8, mut idx: usize) -> KVector {
        let base = k as usize + 1;
        let mut labels = vec![0u8; n];
        for slot in labels.iter_mut().rev() {
            *slot = (idx % base) as u8;
            idx /= base;
        }
        KVector { k, labels }
    }
}

impl fmt::Display for KVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k <= 9 {
            for a in &self.labels {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.labels.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

fn label_comparable(a: u8, b: u8) -> bool {
    a == 0 || b == 0 || a == b
}

pub fn sq_meet(x: &KVector, y: &KVector) -> Result<KVector> {
    x.check(y)?;
    let labels = x
        .labels
        .iter()
        .zip(&y.labels)
        .map(|(&a, &b)| if label_comparable(a, b) { a.min(b) } else { 0 })
        .collect();
    Ok(KVector { k: x.k, labels })
}

pub fn sq_join(x: &KVector, y: &KVector) -> Result<KVector> {
    x.check(y)?;
    let labels = x
        .labels
        .iter()
        .zip(&y.labels)
        .map(|(&a, &b)| if label_comparable(a, b) { a.max(b) } else { 0 })
        .collect();
    Ok(KVector { k: x.k, labels })
}

pub fn partial_leq(x: &KVector, y: &KVector) -> Result<bool> {
    x.check(y)?;
    Ok(x.labels.iter().zip(&y.labels).all(|(&a, &b)| a == 0 || a == b))
}

pub fn support(x: &KVector) -> Vec<usize> {
    x.labels.iter().enumerate().filter(|(_, &a)| a != 0).map(|(i, _)| i).collect()
}

/// Iterates over all `(k+1)^n` points in index order.
pub fn all_points(n: usize, k: u8) -> impl Iterator<Item = KVector> {
    let total = (k as usize + 1).pow(n as u32);
    (0..total).map(move |i| KVector::from_index(n, k, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: u8, s: &str) -> KVector {
        KVector::from_digits(k, s).unwrap()
    }

    #[test]
    fn meet_examples() {
        assert_eq!(v(3, "13002").meet(&v(3, "00012")), v(3, "00002"));
        assert_eq!(v(2, "12").meet(&v(2, "22")), v(2, "02"));
        let x = v(3, "13102");
        assert_eq!(x.meet(&x), x);
    }

    #[test]
    fn join_examples() {
        assert_eq!(v(3, "13102").join(&v(3, "00012")), v(3, "13112"));
        assert_eq!(v(3, "13102").join(&v(3, "13202")), v(3, "13002"));
        assert_eq!(v(3, "13102").join(&KVector::zeros(5, 3)), v(3, "13102"));
    }

    #[test]
    fn order_and_support() {
        assert!(v(3, "00012").leq(&v(3, "13012")));
        assert!(!v(2, "10").leq(&v(2, "21")));
        assert_eq!(v(3, "13002").support(), vec![0, 1, 4]);
        assert!(KVector::zeros(4, 2).support().is_empty());
        assert_eq!(v(3, "333").support(), vec![0, 1, 2]);
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(sq_meet(&v(2, "12"), &v(3, "12")).is_err());
        assert!(sq_join(&v(2, "12"), &v(2, "120")).is_err());
        assert!(partial_leq(&v(2, "1"), &v(2, "10")).is_err());
        assert!(KVector::new(2, vec![3]).is_err());
    }

    #[test]
    fn index_round_trip() {
        for x in all_points(3, 2) {
            assert_eq!(KVector::from_index(3, 2, x.index()), x);
        }
        assert_eq!(all_points(3, 2).count(), 27);
    }
}
