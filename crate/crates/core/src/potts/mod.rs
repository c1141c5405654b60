//! Potts k-submodular functions: unary relaxations, the terminal-and-fringe network,
//! isolating cuts, the glued PIP and locking multiflows.

mod glue;
mod locking;
mod network;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::kcore::value::{value_from_json, value_to_json};
use crate::kcore::{KVector, Rat, TableFunction, Value};

pub use glue::{build_pip_potts, glue_pip, layered_minimizer, PottsPip, Route};
pub use locking::{
    locking_multiflow, multiflow_capacity_violation, multiflow_value, sigma_from_multiflow, Multiflow, PathEnd, WeightedPath,
};
pub use network::{
    alpha_mincut, alpha_network, min_semi_multicut, semi_multicut_capacity, semi_multicut_of, AlphaCut, PottsNetwork,
    SemiMulticut, VertexKind,
};

/// How raw label costs `g_i : [k] → ℚ` become a unary function on `S_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relaxation {
    /// `g̃(α) = g(α)`, `g̃(0) = min over β ≠ γ of (g(β) + g(γ)) / 2`.
    Average,
    /// `g̃(α) = (g(α) − min over β ≠ α of g(β)) / 2`, `g̃(0) = 0`.
    Kovtun,
}

impl std::str::FromStr for Relaxation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(Relaxation::Average),
            "kovtun" => Ok(Relaxation::Kovtun),
            _ => Err(Error::parse(format!("unknown relaxation {s:?} (expected average or kovtun)"))),
        }
    }
}

/// Relaxes raw label costs (`raw[i][α - 1]`) into tables over `S_k` (`[g̃(0), g̃(1), …]`).
pub fn relax_potts(raw: &[Vec<Rat>], mode: Relaxation) -> Result<Vec<Vec<Rat>>> {
    raw.iter()
        .map(|g| {
            let k = g.len();
            if k < 2 {
                return Err(Error::validation("relaxation needs at least two labels"));
            }
            let mut out = Vec::with_capacity(k + 1);
            match mode {
                Relaxation::Average => {
                    let mut sorted = g.clone();
                    sorted.sort();
                    out.push((sorted[0] + sorted[1]) / Rat::from_integer(2));
                    out.extend_from_slice(g);
                }
                Relaxation::Kovtun => {
                    out.push(Rat::zero());
                    for a in 0..k {
                        let other = (0..k).filter(|&b| b != a).map(|b| g[b]).min().expect("k ≥ 2");
                        out.push((g[a] - other) / Rat::from_integer(2));
                    }
                }
            }
            Ok(out)
        })
        .collect()
}

/// `d(a, b)`: 0 if equal, 1 if both nonzero and different, ½ otherwise.
pub fn potts_distance(a: u8, b: u8) -> Rat {
    if a == b {
        Rat::zero()
    } else if a != 0 && b != 0 {
        Rat::from_integer(1)
    } else {
        Rat::new(1, 2)
    }
}

/// A Potts k-submodular function on a connected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PottsInstance {
    pub n: usize,
    pub k: u8,
    /// `(u, v, λ)` with `λ > 0`.
    pub edges: Vec<(usize, usize, Rat)>,
    /// `unary[i][a]` is `g̃_i(a)` for `a ∈ S_k`.
    pub unary: Vec<Vec<Rat>>,
    /// Raw label costs `g_i(α)` when the instance came from a relaxation.
    pub raw: Option<Vec<Vec<Rat>>>,
}

impl PottsInstance {
    pub fn new(n: usize, k: u8, edges: Vec<(usize, usize, Rat)>, unary: Vec<Vec<Rat>>) -> Result<Self> {
        let inst = PottsInstance { n, k, edges, unary, raw: None };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_raw(n: usize, k: u8, edges: Vec<(usize, usize, Rat)>, raw: Vec<Vec<Rat>>, mode: Relaxation) -> Result<Self> {
        if raw.len() != n || raw.iter().any(|g| g.len() != k as usize) {
            return Err(Error::validation(format!("raw unary costs must be {n} rows of {k} values")));
        }
        let unary = relax_potts(&raw, mode)?;
        let inst = PottsInstance { n, k, edges, unary, raw: Some(raw) };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 {
            return Err(Error::validation("a Potts instance needs n ≥ 1 and k ≥ 1"));
        }
        if self.unary.len() != self.n || self.unary.iter().any(|g| g.len() != self.k as usize + 1) {
            return Err(Error::validation(format!("unary tables must be {} rows of {} values", self.n, self.k as usize + 1)));
        }
        for &(u, v, l) in &self.edges {
            if u >= self.n || v >= self.n || u == v {
                return Err(Error::validation(format!("edge ({u},{v}) is not between distinct vertices")));
            }
            if !l.is_positive() {
                return Err(Error::validation(format!("edge ({u},{v}) has non-positive weight")));
            }
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::validation("the graph must be connected"));
        }
        for (i, g) in self.unary.iter().enumerate() {
            for a in 1..g.len() {
                for b in a + 1..g.len() {
                    if g[a] + g[b] < g[0] + g[0] {
                        return Err(Error::validation(format!(
                            "unary table of vertex {i} is not k-submodular at labels {a},{b}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `g̃(x)`.
    pub fn eval(&self, x: &KVector) -> Rat {
        let unary: Rat = (0..self.n).map(|i| self.unary[i][x.get(i) as usize]).sum();
        let pair: Rat = self.edges.iter().map(|&(u, v, l)| l * potts_distance(x.get(u), x.get(v))).sum();
        unary + pair
    }

    /// The Potts energy `g(x)` on full labelings `x ∈ [k]^n` (needs raw costs).
    pub fn energy(&self, labels: &[u8]) -> Option<Rat> {
        let raw = self.raw.as_ref()?;
        let unary: Rat = labels.iter().enumerate().map(|(i, &a)| raw[i][a as usize - 1]).sum();
        let pair: Rat = self.edges.iter().filter(|&&(u, v, _)| labels[u] != labels[v]).map(|&(_, _, l)| l).sum();
        Some(unary + pair)
    }

    pub fn to_table(&self) -> TableFunction {
        TableFunction::from_fn(self.n, self.k, |x| Value::Finite(self.eval(x))).expect("finite table")
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let n = v.get("n").and_then(Json::as_u64).ok_or_else(|| Error::parse("missing integer 'n'"))? as usize;
        let k = v.get("k").and_then(Json::as_u64).ok_or_else(|| Error::parse("missing integer 'k'"))?;
        let k = u8::try_from(k).map_err(|_| Error::parse("k out of range"))?;
        let rat = |x: &Json| -> Result<Rat> {
            value_from_json(x)?.finite().ok_or_else(|| Error::validation("Potts values must be finite"))
        };
        let mut edges = Vec::new();
        for e in v.get("edges").and_then(Json::as_array).ok_or_else(|| Error::parse("missing array 'edges'"))? {
            let u = e.get("u").and_then(Json::as_u64).ok_or_else(|| Error::parse("edge needs integer 'u'"))? as usize;
            let w = e.get("v").and_then(Json::as_u64).ok_or_else(|| Error::parse("edge needs integer 'v'"))? as usize;
            let l = rat(e.get("lambda").ok_or_else(|| Error::parse("edge needs 'lambda'"))?)?;
            edges.push((u, w, l));
        }
        let rows = |key: &str| -> Result<Option<Vec<Vec<Rat>>>> {
            match v.get(key) {
                None => Ok(None),
                Some(arr) => arr
                    .as_array()
                    .ok_or_else(|| Error::parse(format!("'{key}' must be an array")))?
                    .iter()
                    .map(|row| row.as_array().ok_or_else(|| Error::parse(format!("'{key}' rows must be arrays")))?.iter().map(rat).collect())
                    .collect::<Result<Vec<Vec<Rat>>>>()
                    .map(Some),
            }
        };
        match (rows("unary")?, rows("unary_raw")?) {
            (Some(unary), None) => PottsInstance::new(n, k, edges, unary),
            (None, Some(raw)) => {
                let mode = match v.get("relaxation").and_then(Json::as_str) {
                    None => Relaxation::Average,
                    Some(s) => s.parse()?,
                };
                PottsInstance::from_raw(n, k, edges, raw, mode)
            }
            _ => Err(Error::parse("exactly one of 'unary' and 'unary_raw' is required")),
        }
    }

    pub fn to_json(&self) -> Json {
        let r = |x: &Rat| value_to_json(&Value::Finite(*x));
        json!({
            "n": self.n,
            "k": self.k,
            "edges": self.edges.iter().map(|(u, v, l)| json!({"u": u, "v": v, "lambda": r(l)})).collect::<Vec<_>>(),
            "unary": self.unary.iter().map(|g| g.iter().map(r).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Per-vertex decomposition `g̃_i(x) = g̃_i(γ_i) + μ_i d(γ_i, x) + Σ σ_{i,α} [α = x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryDecomposition {
    pub gamma: Vec<u8>,
    pub mu: Vec<Rat>,
    /// `sigma[i][α - 1]`; zero for `α = γ_i`.
    pub sigma: Vec<Vec<Rat>>,
}

/// Chooses `γ_i` as the smallest minimizing label (0 first) and derives `μ`, `σ`.
pub fn decompose_unary(inst: &PottsInstance) -> Result<UnaryDecomposition> {
    let k = inst.k as usize;
    let mut out = UnaryDecomposition { gamma: Vec::new(), mu: Vec::new(), sigma: Vec::new() };
    for (i, g) in inst.unary.iter().enumerate() {
        let gamma = (0..=k).min_by_key(|&a| (g[a], a)).expect("nonempty");
        let mu = Rat::from_integer(2) * (g[0] - g[gamma]);
        let mut sig = Vec::with_capacity(k);
        for a in 1..=k {
            let s = if a == gamma { Rat::zero() } else { g[a] - Rat::from_integer(2) * g[0] + g[gamma] };
            if s.is_negative() {
                return Err(Error::validation(format!("unary table of vertex {i} is not k-submodular (σ < 0 at label {a})")));
            }
            sig.push(s);
        }
        for x in 0..=k {
            let mut rebuilt = g[gamma] + mu * potts_distance(gamma as u8, x as u8);
            if x != 0 && x != gamma {
                rebuilt += sig[x - 1];
            }
            if rebuilt != g[x] {
                return Err(Error::internal(format!("unary decomposition of vertex {i} does not reproduce g̃({x})")));
            }
        }
        out.gamma.push(gamma as u8);
        out.mu.push(mu);
        out.sigma.push(sig);
    }
    Ok(out)
}

/// A random connected instance with small integer weights, biased towards ties.
///
/// Half of the vertices get raw costs relaxed by averaging, the rest get unary tables
/// drawn directly.
pub fn random_instance(rng: &mut impl Rng, n: usize, k: u8) -> PottsInstance {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, Rat::from_integer(rng.gen_range(1..=3))));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u, v, Rat::new(rng.gen_range(1..=4), 2)));
        }
    }
    let unary = (0..n)
        .map(|_| {
            if k >= 2 && rng.gen_bool(0.5) {
                let raw: Vec<Rat> = (0..k).map(|_| Rat::from_integer(rng.gen_range(0..4))).collect();
                relax_potts(&[raw], Relaxation::Average).expect("k ≥ 2").remove(0)
            } else {
                let base = Rat::from_integer(rng.gen_range(0..3));
                let mut d: Vec<i128> = (0..k).map(|_| rng.gen_range(0..4)).collect();
                if rng.gen_bool(0.5) {
                    let a = rng.gen_range(0..k as usize);
                    let floor = (0..k as usize).filter(|&b| b != a).map(|b| d[b]).min().unwrap_or(0);
                    d[a] = -rng.gen_range(0..=floor);
                }
                std::iter::once(base).chain(d.into_iter().map(|x| base + Rat::from_integer(x))).collect()
            }
        })
        .collect();
    PottsInstance::new(n, k, edges, unary).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i128) -> Rat {
        Rat::from_integer(v)
    }

    #[test]
    fn average_relaxation() {
        let t = relax_potts(&[vec![r(0), r(10)]], Relaxation::Average).unwrap();
        assert_eq!(t[0], vec![r(5), r(0), r(10)]);
        let c = relax_potts(&[vec![r(4), r(4), r(4)]], Relaxation::Average).unwrap();
        assert_eq!(c[0][0], r(4));
        assert!(relax_potts(&[vec![r(1)]], Relaxation::Average).is_err());
    }

    #[test]
    fn kovtun_relaxation() {
        let t = relax_potts(&[vec![r(3), r(7)]], Relaxation::Kovtun).unwrap();
        assert_eq!(t[0], vec![r(0), r(-2), r(2)]);
    }

    #[test]
    fn decomposition_of_constant_and_peaked_tables() {
        let inst = PottsInstance::new(2, 2, vec![(0, 1, r(1))], vec![vec![r(3), r(3), r(3)], vec![r(0), r(1), r(1)]]).unwrap();
        let d = decompose_unary(&inst).unwrap();
        assert_eq!(d.gamma, vec![0, 0]);
        assert_eq!(d.mu, vec![r(0), r(0)]);
        assert_eq!(d.sigma, vec![vec![r(0), r(0)], vec![r(1), r(1)]]);
    }

    #[test]
    fn non_k_submodular_unary_is_rejected() {
        let err = PottsInstance::new(1, 2, vec![], vec![vec![r(5), r(0), r(0)]]);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        assert!(PottsInstance::new(2, 2, vec![], vec![vec![r(0); 3]; 2]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = json!({"n": 2, "k": 2, "edges": [{"u": 0, "v": 1, "lambda": "1/2"}], "unary_raw": [[0, 10], [3, 7]], "relaxation": "kovtun"});
        let inst = PottsInstance::from_json(&v).unwrap();
        assert_eq!(inst.unary[1], vec![r(0), r(-2), r(2)]);
        let back = PottsInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.unary, inst.unary);
        assert_eq!(back.edges, inst.edges);
    }
}
