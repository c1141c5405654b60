use crate::enumerate::consistent_ideals;
use crate::error::{Error, Result};
use crate::kcore::{is_closed_set, minimum_of, KVector};

use super::{is_elementary, Element, Payload, Pip};

fn require_closed(m: &[KVector]) -> Result<()> {
    if !is_closed_set(m)? {
        return Err(Error::validation("input set is not closed under meet and join"));
    }
    Ok(())
}

fn join_all<'a>(items: impl IntoIterator<Item = &'a KVector>, base: &KVector) -> KVector {
    items.into_iter().fold(base.clone(), |acc, y| acc.join(y))
}

/// Join-irreducible elements of a closed set, sorted by index.
pub fn join_irreducibles(m: &[KVector]) -> Result<Vec<KVector>> {
    require_closed(m)?;
    let min = minimum_of(m).expect("nonempty");
    let mut out: Vec<KVector> = m
        .iter()
        .filter(|x| {
            **x != min && {
                let below = join_all(m.iter().filter(|y| y.leq(x) && y != x), &min);
                below != **x
            }
        })
        .cloned()
        .collect();
    out.sort_by_key(|x| x.index());
    out.dedup();
    Ok(out)
}

/// The unique lower cover of an irreducible `x`, computed from the irreducibles alone.
pub fn lower_cover_from_irreducibles(x: &KVector, irreducibles: &[KVector], min: &KVector) -> KVector {
    join_all(irreducibles.iter().filter(|y| y.leq(x) && *y != x), min)
}

fn differential_against(x: &KVector, lower: &KVector) -> KVector {
    let labels = x.labels().iter().zip(lower.labels()).map(|(&a, &b)| if b == 0 { a } else { 0 }).collect();
    KVector::new(x.k(), labels).expect("same shape")
}

/// Differentials of all irreducibles, in the same order.
pub fn differentials_from_irreducibles(irreducibles: &[KVector], min: &KVector) -> Vec<KVector> {
    irreducibles
        .iter()
        .map(|x| differential_against(x, &lower_cover_from_irreducibles(x, irreducibles, min)))
        .collect()
}

/// `x̄`: keeps the labels of `x` where its lower cover in `M` is zero.
pub fn differential(x: &KVector, m: &[KVector]) -> Result<KVector> {
    require_closed(m)?;
    let min = minimum_of(m).expect("nonempty");
    if !min.is_zero() {
        return Err(Error::validation("closed set is not simple: its minimum is not the zero vector"));
    }
    if !m.contains(x) {
        return Err(Error::validation(format!("{x} is not a member of the set")));
    }
    let lower = join_all(m.iter().filter(|y| y.leq(x) && *y != x), &min);
    if lower == *x {
        return Err(Error::validation(format!("{x} is not join-irreducible")));
    }
    Ok(differential_against(x, &lower))
}

/// Result of [`normalize`]: the contracted set and, per new coordinate, the original
/// coordinates merged into it.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub set: Vec<KVector>,
    pub classes: Vec<Vec<usize>>,
}

impl Normalization {
    /// Image of a member of the original set.
    pub fn map(&self, x: &KVector) -> KVector {
        let labels = self.classes.iter().map(|c| x.get(c[0])).collect();
        KVector::new(x.k(), labels).expect("labels bounded by k")
    }
}

fn support_classes(diffs: &[KVector]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for d in diffs {
        let s = d.support();
        if !s.is_empty() && !classes.contains(&s) {
            classes.push(s);
        }
    }
    classes.sort();
    classes
}

/// Contracts coordinates whose differential supports coincide, giving an isomorphic closed
/// set in which every differential has a single-coordinate support.
pub fn normalize(m: &[KVector]) -> Result<Normalization> {
    let j = join_irreducibles(m)?;
    let min = minimum_of(m).expect("nonempty");
    if !min.is_zero() {
        return Err(Error::validation("closed set is not simple: its minimum is not the zero vector"));
    }
    let classes = support_classes(&differentials_from_irreducibles(&j, &min));
    let mut norm = Normalization { set: Vec::new(), classes };
    let mut set: Vec<KVector> = m.iter().map(|x| norm.map(x)).collect();
    set.sort_by_key(|x| x.index());
    set.dedup();
    norm.set = set;
    Ok(norm)
}

/// Builds the PIP of a closed set: its irreducibles ordered by `⪯`, with minimal
/// non-joinable pairs and parts given by differential supports.
pub fn pip_from_closed_set(m: &[KVector]) -> Result<Pip> {
    let j = join_irreducibles(m)?;
    let min = minimum_of(m).expect("nonempty");
    Ok(pip_from_irreducibles(&j, &min))
}

/// Same as [`pip_from_closed_set`] given only the irreducibles and the minimum.
pub fn pip_from_irreducibles(irreducibles: &[KVector], min: &KVector) -> Pip {
    let j = irreducibles;
    let t = j.len();
    let mut mic = Vec::new();
    for a in 0..t {
        for b in a + 1..t {
            if j[a].joinable(&j[b]) {
                continue;
            }
            let minimal = j.iter().all(|z| {
                z == &j[a] || z == &j[b] || !((z.leq(&j[a]) && !z.joinable(&j[b])) || (z.leq(&j[b]) && !z.joinable(&j[a])))
            });
            if minimal {
                mic.push((a, b));
            }
        }
    }
    let elements = j.iter().map(|x| Element::new(Payload::Vector(x.clone()))).collect();
    let mut pip = Pip::from_order(elements, |a, b| j[a].leq(&j[b]), &mic);
    let diffs = differentials_from_irreducibles(j, min);
    let classes = support_classes(&diffs);
    let parts: Vec<usize> = diffs.iter().map(|d| classes.iter().position(|c| *c == d.support()).unwrap_or(0)).collect();
    pip.set_parts(&parts);
    pip
}

/// Encodes a consistent ideal as a vector: coordinate `i` holds the 1-based position, within
/// part `i`, of the ideal's element in that part (or 0).
pub fn ideal_vector(parts: &[Vec<usize>], k: u8, ideal: &[usize]) -> KVector {
    let labels = parts
        .iter()
        .map(|members| members.iter().position(|m| ideal.contains(m)).map_or(0, |p| p as u8 + 1))
        .collect();
    KVector::new(k, labels).expect("labels bounded by part size")
}

/// Inverse direction: the closed set `{ x(I) : I consistent ideal }` of an elementary PIP.
/// Coordinates are the `⌣̇` components ordered by smallest element; labels are positions
/// within a component.
pub fn closed_set_from_pip(p: &Pip) -> Result<Vec<KVector>> {
    if let Err(v) = is_elementary(p) {
        return Err(Error::validation(format!("PIP is not elementary: {v}")));
    }
    let parts = p.recovered_parts();
    let width = parts.iter().map(Vec::len).max().unwrap_or(1).max(1);
    if width > u8::MAX as usize {
        return Err(Error::validation(format!("part of size {width} exceeds the label range")));
    }
    let k = width as u8;
    let mut set: Vec<KVector> = consistent_ideals(p).map(|ideal| ideal_vector(&parts, k, &ideal)).collect();
    set.sort_by_key(|x| x.index());
    set.dedup();
    require_closed(&set).map_err(|_| Error::internal("constructed set is not closed"))?;
    Ok(set)
}

/// Checks that `map` is an order isomorphism from the consistent ideals of `p` (under
/// inclusion) onto `target` (under `⪯`). Returns a description of the first failure.
pub fn check_ideal_isomorphism(
    p: &Pip,
    target: &[KVector],
    map: impl Fn(&[usize]) -> KVector,
) -> std::result::Result<(), String> {
    let ideals: Vec<Vec<usize>> = consistent_ideals(p).collect();
    let images: Vec<KVector> = ideals.iter().map(|i| map(i)).collect();
    if ideals.len() != target.len() {
        return Err(format!("{} consistent ideals but {} target elements", ideals.len(), target.len()));
    }
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != images.len() {
        return Err("map is not injective".into());
    }
    let mut want = target.to_vec();
    want.sort();
    if sorted != want {
        return Err("image differs from target".into());
    }
    for (a, ia) in ideals.iter().enumerate() {
        for (b, ib) in ideals.iter().enumerate() {
            let sub = ia.iter().all(|x| ib.contains(x));
            if sub != images[a].leq(&images[b]) {
                return Err(format!("order not preserved between {} and {}", images[a], images[b]));
            }
        }
    }
    Ok(())
}

/// `I ↦ ⋁ I` for a PIP whose payloads are vectors, with `∅ ↦ min`.
pub fn ideal_join(p: &Pip, ideal: &[usize], min: &KVector) -> KVector {
    ideal.iter().fold(min.clone(), |acc, &e| match p.element(e).vector() {
        Some(x) => acc.join(x),
        None => acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(k: u8, items: &[&str]) -> Vec<KVector> {
        items.iter().map(|s| KVector::from_digits(k, s).unwrap()).collect()
    }

    fn fig2() -> Vec<KVector> {
        vs(
            3,
            &["00002", "13002", "00012", "13102", "13012", "13202", "00312", "13112", "13212", "13312", "22312"],
        )
    }

    #[test]
    fn irreducibles_of_example_set() {
        let j = join_irreducibles(&fig2()).unwrap();
        let mut want = vs(3, &["13002", "00012", "13102", "13202", "00312", "22312"]);
        want.sort_by_key(|x| x.index());
        assert_eq!(j, want);
    }

    #[test]
    fn pip_of_example_set() {
        let p = pip_from_closed_set(&fig2()).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.covers().len(), 4);
        assert_eq!(p.min_inconsistent().len(), 4);
        let m = fig2();
        let min = minimum_of(&m).unwrap();
        check_ideal_isomorphism(&p, &m, |i| ideal_join(&p, i, &min)).unwrap();
    }

    #[test]
    fn non_closed_input_is_rejected() {
        assert!(join_irreducibles(&vs(2, &["10", "20"])).is_err());
    }

    fn fig4() -> Vec<KVector> {
        let j = vs(3, &["1300", "1310", "1320", "0001", "0031", "2231"]);
        let zero = KVector::zeros(4, 3);
        let p = pip_from_irreducibles(&j, &zero);
        consistent_ideals(&p).map(|i| ideal_join(&p, &i, &zero)).collect()
    }

    #[test]
    fn differentials_of_simple_example() {
        let m = fig4();
        for (x, d) in [("1300", "1300"), ("1310", "0010"), ("1320", "0020"), ("0001", "0001"), ("0031", "0030"), ("2231", "2200")] {
            let x = KVector::from_digits(3, x).unwrap();
            assert_eq!(differential(&x, &m).unwrap(), KVector::from_digits(3, d).unwrap());
        }
        assert!(differential(&KVector::zeros(4, 3), &m).is_err());
    }

    #[test]
    fn normalization_contracts_first_two_coordinates() {
        let m = fig4();
        let norm = normalize(&m).unwrap();
        assert_eq!(norm.classes, vec![vec![0, 1], vec![2], vec![3]]);
        let j = join_irreducibles(&norm.set).unwrap();
        let mut want = vs(3, &["100", "110", "120", "001", "031", "231"]);
        want.sort_by_key(|x| x.index());
        assert_eq!(j, want);
        assert_eq!(norm.set.len(), m.len());
    }

    #[test]
    fn round_trip_through_closed_set() {
        let p = pip_from_closed_set(&fig2()).unwrap();
        let back = closed_set_from_pip(&p).unwrap();
        assert_eq!(back.len(), 11);
        let q = pip_from_closed_set(&back).unwrap();
        assert_eq!(q.len(), p.len());
        assert_eq!(q.covers().len(), p.covers().len());
        assert_eq!(q.min_inconsistent().len(), p.min_inconsistent().len());
    }

    #[test]
    fn singleton_pip_gives_two_element_chain() {
        let p = Pip::new(vec![Element::new(Payload::None)], &[], &[]).unwrap();
        let m = closed_set_from_pip(&p).unwrap();
        assert_eq!(m, vs(1, &["0", "1"]));
    }
}
