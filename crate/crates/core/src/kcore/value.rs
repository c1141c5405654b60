use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational used for every function value and capacity.
pub type Rat = Ratio<i128>;

/// An extended real: a finite rational or `+∞`.
///
/// Addition saturates at `Inf`, and `Inf` compares greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Finite(Rat),
    Inf,
}

impl Value {
    pub fn int(v: i128) -> Self {
        Value::Finite(Rat::from_integer(v))
    }

    pub fn zero() -> Self {
        Value::Finite(Rat::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn finite(&self) -> Option<Rat> {
        match self {
            Value::Finite(r) => Some(*r),
            Value::Inf => None,
        }
    }

    /// Canonical text: `"inf"`, an integer, or `"p/q"`.
    pub fn to_canonical(&self) -> String {
        match self {
            Value::Inf => "inf".to_string(),
            Value::Finite(r) => rat_to_string(r),
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Inf, Value::Inf) => Ordering::Equal,
            (Value::Inf, _) => Ordering::Greater,
            (_, Value::Inf) => Ordering::Less,
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Inf,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl FromStr for Value {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("+inf") {
            return Ok(Value::Inf);
        }
        parse_rat(t).map(Value::Finite)
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"p/q"` or an exact decimal such as `"-1.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let ip: i128 = if int.is_empty() || int == "-" || int == "+" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let fp: i128 = frac.parse().map_err(|_| bad())?;
        let den = 10i128.pow(frac.len() as u32);
        let mag = Rat::from_integer(ip.abs()) + Rat::new(fp, den);
        return Ok(if neg { -mag } else { mag });
    }
    t.parse::<i128>().map(Rat::from_integer).map_err(|_| bad())
}

/// Reads a JSON number or string into a [`Value`].
pub fn value_from_json(v: &serde_json::Value) -> Result<Value> {
    match v {
        serde_json::Value::Number(n) => n.to_string().parse(),
        serde_json::Value::String(s) => s.parse(),
        other => Err(Error::parse(format!("expected a number, \"p/q\" or \"inf\", got {other}"))),
    }
}

/// Writes a finite value as a JSON integer when integral, else as a `"p/q"` string.
pub fn value_to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Inf => serde_json::Value::String("inf".into()),
        Value::Finite(r) if r.is_integer() && r.numer().abs() < (1i128 << 53) => {
            serde_json::Value::from(*r.numer() as i64)
        }
        Value::Finite(r) => serde_json::Value::String(rat_to_string(r)),
    }
}

pub fn rat_is_nonneg(r: &Rat) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inf_is_absorbing_and_largest() {
        let a = Value::int(3);
        assert_eq!(a + Value::Inf, Value::Inf);
        assert!(Value::Inf > Value::int(i64::MAX as i128));
        assert!(Value::int(-1) < a);
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!("7".parse::<Value>().unwrap(), Value::int(7));
        assert_eq!("-3/6".parse::<Value>().unwrap(), Value::Finite(Rat::new(-1, 2)));
        assert_eq!("1.25".parse::<Value>().unwrap(), Value::Finite(Rat::new(5, 4)));
        assert_eq!("-0.5".parse::<Value>().unwrap(), Value::Finite(Rat::new(-1, 2)));
        assert_eq!("inf".parse::<Value>().unwrap(), Value::Inf);
        assert!("1/0".parse::<Value>().is_err());
        assert!("abc".parse::<Value>().is_err());
    }

    #[test]
    fn json_round_trip() {
        for s in ["0", "-4", "5/3", "inf"] {
            let v: Value = s.parse().unwrap();
            assert_eq!(value_from_json(&value_to_json(&v)).unwrap(), v);
        }
    }
}
