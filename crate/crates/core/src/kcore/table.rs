use std::collections::BTreeMap;

use num_integer::Integer;
use serde_json::json;

use super::kvector::{all_points, KVector};
use super::value::{value_from_json, value_to_json, Value};
use crate::error::{Error, Result};

/// A function `S_k^n → ℚ ∪ {+∞}` stored densely by mixed-radix index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFunction {
    n: usize,
    k: u8,
    values: Vec<Value>,
}

impl TableFunction {
    pub fn new(n: usize, k: u8, values: Vec<Value>) -> Result<Self> {
        if k == 0 {
            return Err(Error::validation("k must be positive"));
        }
        let expected = (k as usize + 1)
            .checked_pow(n as u32)
            .ok_or_else(|| Error::validation("table too large"))?;
        if values.len() != expected {
            return Err(Error::validation(format!("expected {expected} values, got {}", values.len())));
        }
        if !values.iter().any(Value::is_finite) {
            return Err(Error::validation("table has no finite value"));
        }
        Ok(TableFunction { n, k, values })
    }

    pub fn from_fn(n: usize, k: u8, f: impl Fn(&KVector) -> Value) -> Result<Self> {
        let values = all_points(n, k).map(|x| f(&x)).collect();
        TableFunction::new(n, k, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn eval(&self, x: &KVector) -> Value {
        assert!(x.n() == self.n && x.k() == self.k, "point shape does not match table");
        self.values[x.index()]
    }

    pub fn min_value(&self) -> Value {
        *self.values.iter().min().expect("nonempty table")
    }

    /// First pair `(x, y)` in index order with `f(x)+f(y) < f(x⊓y)+f(x⊔y)`, if any.
    pub fn k_submodularity_violation(&self) -> Option<(KVector, KVector)> {
        let ints = ScaledTable::new(self);
        let total = self.values.len();
        let digits: Vec<KVector> = all_points(self.n, self.k).collect();
        for a in 0..total {
            for b in (a + 1)..total {
                let (x, y) = (&digits[a], &digits[b]);
                let lhs = add(ints.at(a), ints.at(b));
                if lhs.is_none() {
                    continue;
                }
                let rhs = add(ints.at(x.meet(y).index()), ints.at(x.join(y).index()));
                let violated = match (lhs, rhs) {
                    (Some(l), Some(r)) => l < r,
                    (Some(_), None) => true,
                    (None, _) => false,
                };
                if violated {
                    return Some((x.clone(), y.clone()));
                }
            }
        }
        None
    }

    pub fn is_k_submodular(&self) -> bool {
        self.k_submodularity_violation().is_none()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let n = v["n"].as_u64().ok_or_else(|| Error::parse("table: missing integer \"n\""))? as usize;
        let k = v["k"].as_u64().ok_or_else(|| Error::parse("table: missing integer \"k\""))?;
        if k == 0 || k > u8::MAX as u64 {
            return Err(Error::parse("table: k out of range"));
        }
        let k = k as u8;
        let default = match v.get("default") {
            Some(d) => value_from_json(d)?,
            None => Value::Inf,
        };
        let size = (k as usize + 1)
            .checked_pow(n as u32)
            .filter(|&s| s <= 50_000_000)
            .ok_or_else(|| Error::parse("table: (k+1)^n too large"))?;
        let mut values = vec![default; size];
        if let Some(entries) = v.get("entries") {
            let entries = entries.as_array().ok_or_else(|| Error::parse("table: \"entries\" must be an array"))?;
            for e in entries {
                let xs = e["x"].as_array().ok_or_else(|| Error::parse("table entry: missing \"x\""))?;
                if xs.len() != n {
                    return Err(Error::parse(format!("table entry has {} labels, expected {n}", xs.len())));
                }
                let labels = xs
                    .iter()
                    .map(|a| a.as_u64().filter(|&a| a <= k as u64).map(|a| a as u8))
                    .collect::<Option<Vec<u8>>>()
                    .ok_or_else(|| Error::parse("table entry: labels must be integers in 0..=k"))?;
                let x = KVector::new(k, labels)?;
                values[x.index()] = value_from_json(&e["value"])?;
            }
        }
        TableFunction::new(n, k, values)
    }

    /// Canonical JSON: the most frequent value becomes `default`, the rest are listed in index order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut freq: BTreeMap<String, (usize, Value)> = BTreeMap::new();
        for v in &self.values {
            freq.entry(v.to_canonical()).or_insert((0, *v)).0 += 1;
        }
        let default = freq.values().max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1))).map(|p| p.1).unwrap();
        let entries: Vec<serde_json::Value> = all_points(self.n, self.k)
            .zip(&self.values)
            .filter(|(_, v)| **v != default)
            .map(|(x, v)| json!({"x": x.labels(), "value": value_to_json(v)}))
            .collect();
        json!({"n": self.n, "k": self.k, "default": value_to_json(&default), "entries": entries})
    }
}

fn add(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    Some(a? + b?)
}

/// Finite values over a common denominator, for fast exact comparisons.
struct ScaledTable {
    ints: Vec<Option<i128>>,
}

impl ScaledTable {
    fn new(t: &TableFunction) -> Self {
        let lcm = t
            .values
            .iter()
            .filter_map(Value::finite)
            .fold(1i128, |acc, r| acc.lcm(r.denom()));
        let ints = t
            .values
            .iter()
            .map(|v| v.finite().map(|r| r.numer() * (lcm / r.denom())))
            .collect();
        ScaledTable { ints }
    }

    fn at(&self, i: usize) -> Option<i128> {
        self.ints[i]
    }
}
