use std::collections::HashSet;

use super::kvector::{all_points, KVector};
use super::table::TableFunction;
use crate::error::{Error, Result};

/// Exact argmin set, sorted. Points valued `+∞` never qualify since a finite value exists.
pub fn brute_minimizer_set(f: &TableFunction) -> Vec<KVector> {
    let m = f.min_value();
    all_points(f.n(), f.k()).filter(|x| f.eval(x) == m).collect()
}

/// The `⪯`-maximal elements of a set of points, in input order.
pub fn maximal_elements(m: &[KVector]) -> Vec<KVector> {
    m.iter().filter(|x| !m.iter().any(|y| y != *x && x.leq(y))).cloned().collect()
}

/// Whether `m` is closed under `⊓` and `⊔`.
pub fn is_closed_set(m: &[KVector]) -> Result<bool> {
    if m.is_empty() {
        return Err(Error::validation("closedness is undefined for the empty set"));
    }
    let set: HashSet<&KVector> = m.iter().collect();
    for (a, x) in m.iter().enumerate() {
        for y in &m[a + 1..] {
            if !set.contains(&x.meet(y)) || !set.contains(&x.join(y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `⪯`-minimum of a closed set, i.e. the meet of all its elements.
pub fn minimum_of(m: &[KVector]) -> Option<KVector> {
    let mut it = m.iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, x| acc.meet(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcore::value::Value;

    #[test]
    fn constant_function_minimizes_everywhere() {
        let f = TableFunction::from_fn(2, 2, |_| Value::int(1)).unwrap();
        assert_eq!(brute_minimizer_set(&f).len(), 9);
    }

    #[test]
    fn unique_finite_cell() {
        let f = TableFunction::from_fn(2, 2, |x| if x.index() == 5 { Value::int(9) } else { Value::Inf }).unwrap();
        assert_eq!(brute_minimizer_set(&f), vec![KVector::from_index(2, 2, 5)]);
    }

    #[test]
    fn closedness_examples() {
        let a = KVector::from_digits(1, "10").unwrap();
        let b = KVector::from_digits(1, "01").unwrap();
        assert!(!is_closed_set(&[a.clone(), b]).unwrap());
        assert!(is_closed_set(&[a]).unwrap());
        assert!(is_closed_set(&[]).is_err());
    }
}
