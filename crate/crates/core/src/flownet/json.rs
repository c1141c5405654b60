use std::collections::HashMap;

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};

use super::FlowNetwork;

pub(crate) fn int_from_json(v: &Json, what: &str) -> Result<i128> {
    if let Some(i) = v.as_i64() {
        return Ok(i as i128);
    }
    if let Some(s) = v.as_str() {
        return s.trim().parse::<i128>().map_err(|_| Error::parse(format!("{what} must be an integer, got {s:?}")));
    }
    Err(Error::parse(format!("{what} must be an integer")))
}

pub(crate) fn int_to_json(v: i128) -> Json {
    if v.unsigned_abs() < (1u128 << 53) {
        json!(v as i64)
    } else {
        json!(v.to_string())
    }
}

/// Parses `{vertices, s, t, arcs:[{from,to,cap}]}`; returns the network and a name lookup.
pub fn network_from_json(v: &Json) -> Result<(FlowNetwork, HashMap<String, usize>)> {
    let names: Vec<String> = v
        .get("vertices")
        .and_then(Json::as_array)
        .ok_or_else(|| Error::parse("missing array 'vertices'"))?
        .iter()
        .map(|x| match x {
            Json::String(s) => Ok(s.clone()),
            Json::Number(n) => Ok(n.to_string()),
            _ => Err(Error::parse("vertex names must be strings")),
        })
        .collect::<Result<_>>()?;
    let mut index = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::parse(format!("duplicate vertex name {name:?}")));
        }
    }
    let lookup = |key: &Json| -> Result<usize> {
        let name = match key {
            Json::String(s) => s.clone(),
            Json::Number(n) => n.to_string(),
            _ => return Err(Error::parse("vertex references must be names")),
        };
        index.get(&name).copied().ok_or_else(|| Error::parse(format!("unknown vertex {name:?}")))
    };
    let s = lookup(v.get("s").ok_or_else(|| Error::parse("missing 's'"))?)?;
    let t = lookup(v.get("t").ok_or_else(|| Error::parse("missing 't'"))?)?;
    let mut net = FlowNetwork::with_names(names.clone(), s, t)?;
    for a in v.get("arcs").and_then(Json::as_array).ok_or_else(|| Error::parse("missing array 'arcs'"))? {
        let from = lookup(a.get("from").ok_or_else(|| Error::parse("arc needs 'from'"))?)?;
        let to = lookup(a.get("to").ok_or_else(|| Error::parse("arc needs 'to'"))?)?;
        let cap = int_from_json(a.get("cap").ok_or_else(|| Error::parse("arc needs 'cap'"))?, "cap")?;
        net.add_arc(from, to, cap)?;
    }
    Ok((net, index))
}

pub fn network_to_json(net: &FlowNetwork) -> Json {
    let names = net.names();
    json!({
        "vertices": names,
        "s": names[net.s],
        "t": names[net.t],
        "arcs": net.arcs().iter().map(|a| json!({"from": names[a.from], "to": names[a.to], "cap": int_to_json(a.cap)})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let v = json!({"vertices": ["s", "a", "t"], "s": "s", "t": "t",
            "arcs": [{"from": "s", "to": "a", "cap": 2}, {"from": "a", "to": "t", "cap": "3"}]});
        let (net, _) = network_from_json(&v).unwrap();
        assert_eq!(super::super::max_flow(&net).value, 2);
        let back = network_to_json(&net);
        assert_eq!(back["arcs"][1]["cap"], json!(3));
    }

    #[test]
    fn rejects_negative_and_unknown() {
        let neg = json!({"vertices": ["s", "t"], "s": "s", "t": "t", "arcs": [{"from": "s", "to": "t", "cap": -1}]});
        assert!(matches!(network_from_json(&neg), Err(Error::Validation(_))));
        let unk = json!({"vertices": ["s", "t"], "s": "s", "t": "x", "arcs": []});
        assert!(matches!(network_from_json(&unk), Err(Error::Parse(_))));
    }
}
