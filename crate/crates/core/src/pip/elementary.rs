use std::fmt;

use super::Pip;

/// The clause of the elementary definition that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryViolation {
    /// A `⌣̇` component that is not a clique.
    Ep0 { a: usize, b: usize },
    /// `x` in a part of size ≥ 2 lies strictly below the singleton part `{y}`.
    Ep1 { x: usize, y: usize },
    /// Two parts of size ≥ 2, identified by their smallest elements, that are comparable
    /// without the required crossing shape.
    Ep2 { part_i: usize, part_j: usize },
}

impl fmt::Display for ElementaryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryViolation::Ep0 { a, b } => write!(f, "EP0: {a} and {b} share a part but are not minimally inconsistent"),
            ElementaryViolation::Ep1 { x, y } => write!(f, "EP1: {x} lies below singleton part {y}"),
            ElementaryViolation::Ep2 { part_i, part_j } => {
                write!(f, "EP2: parts containing {part_i} and {part_j} are neither incomparable nor crossing")
            }
        }
    }
}

fn crossing(p: &Pip, pi: &[usize], pj: &[usize]) -> bool {
    pi.iter().any(|&xo| {
        pj.iter().any(|&yo| {
            pj.iter().all(|&y| y == yo || p.lt(xo, y)) && pi.iter().all(|&x| x == xo || p.lt(yo, x))
        })
    })
}

/// Recovers parts as `⌣̇` components and checks EP0, EP1 and EP2.
pub fn is_elementary(p: &Pip) -> Result<(), ElementaryViolation> {
    let parts = p.recovered_parts();
    for part in &parts {
        for (i, &a) in part.iter().enumerate() {
            for &b in &part[i + 1..] {
                if !p.is_min_inconsistent(a, b) {
                    return Err(ElementaryViolation::Ep0 { a, b });
                }
            }
        }
    }
    for pi in parts.iter().filter(|q| q.len() >= 2) {
        for pj in parts.iter().filter(|q| q.len() == 1) {
            let y = pj[0];
            if let Some(&x) = pi.iter().find(|&&x| p.lt(x, y)) {
                return Err(ElementaryViolation::Ep1 { x, y });
            }
        }
    }
    let big: Vec<&Vec<usize>> = parts.iter().filter(|q| q.len() >= 2).collect();
    for (a, pi) in big.iter().enumerate() {
        for pj in &big[a + 1..] {
            let any_comparable = pi.iter().any(|&x| pj.iter().any(|&y| p.comparable(x, y)));
            if any_comparable && !crossing(p, pi, pj) && !crossing(p, pj, pi) {
                return Err(ElementaryViolation::Ep2 { part_i: pi[0], part_j: pj[0] });
            }
        }
    }
    Ok(())
}

/// For every pair of comparable parts of size at least 2, all crossing pairs
/// `(x°, y°)`: `x°` lies below every other member of the second part, `y°` below every
/// other member of the first.
pub fn crossing_elements(p: &Pip) -> Vec<Vec<(usize, usize)>> {
    let parts = p.recovered_parts();
    let big: Vec<&Vec<usize>> = parts.iter().filter(|q| q.len() >= 2).collect();
    let mut out = Vec::new();
    for (a, pi) in big.iter().enumerate() {
        for pj in &big[a + 1..] {
            if !pi.iter().any(|&x| pj.iter().any(|&y| p.comparable(x, y))) {
                continue;
            }
            let witnesses: Vec<(usize, usize)> = pi
                .iter()
                .flat_map(|&xo| pj.iter().map(move |&yo| (xo, yo)))
                .filter(|&(xo, yo)| pj.iter().all(|&y| y == yo || p.lt(xo, y)) && pi.iter().all(|&x| x == xo || p.lt(yo, x)))
                .collect();
            out.push(witnesses);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{Element, Payload};
    use super::*;

    fn clique(ids: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                out.push((a, b));
            }
        }
        out
    }

    fn build(n: usize, order: &[(usize, usize)], mic: &[(usize, usize)]) -> Pip {
        Pip::new(vec![Element::new(Payload::None); n], order, mic).unwrap()
    }

    // Part {0,1,2}; element 3 is a singleton part.
    #[test]
    fn singleton_above_big_part_violates_ep1() {
        let p = build(4, &[(0, 3)], &clique(&[0, 1, 2]));
        assert_eq!(is_elementary(&p), Err(ElementaryViolation::Ep1 { x: 0, y: 3 }));
    }

    #[test]
    fn singleton_below_big_part_is_elementary() {
        let p = build(4, &[(3, 0)], &clique(&[0, 1, 2]));
        assert_eq!(is_elementary(&p), Ok(()));
    }

    // Parts {0,1,2} and {3,4,5}: 0>3, 1>4, 2>5.
    #[test]
    fn parallel_parts_violate_ep2() {
        let mut mic = clique(&[0, 1, 2]);
        mic.extend(clique(&[3, 4, 5]));
        let p = build(6, &[(3, 0), (4, 1), (5, 2)], &mic);
        assert!(matches!(is_elementary(&p), Err(ElementaryViolation::Ep2 { .. })));
    }

    // Parts {3(x°),4,5} and {0(y°),1,2}: 1>3, 2>3, 4>0, 5>0.
    #[test]
    fn crossing_parts_are_elementary() {
        let mut mic = clique(&[0, 1, 2]);
        mic.extend(clique(&[3, 4, 5]));
        let p = build(6, &[(3, 1), (3, 2), (0, 4), (0, 5)], &mic);
        assert_eq!(p.validate(), Ok(()));
        assert_eq!(is_elementary(&p), Ok(()));
    }

    #[test]
    fn path_component_violates_ep0() {
        let p = build(3, &[], &[(0, 1), (1, 2)]);
        assert_eq!(is_elementary(&p), Err(ElementaryViolation::Ep0 { a: 0, b: 2 }));
    }
}
