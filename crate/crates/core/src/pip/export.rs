use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::kcore::KVector;

use super::{Element, Payload, Pip};

fn payload_json(p: &Payload) -> Json {
    match p {
        Payload::None => Json::Null,
        Payload::Vector(x) => json!(x.labels()),
        Payload::Vertices(vs) => json!(vs),
        Payload::Layered { label, vertices } => json!({ "label": label, "vertices": vertices }),
    }
}

/// Serializes a PIP. Keys are sorted; a top-level `"k"` is present iff payloads are vectors.
pub fn pip_to_json(p: &Pip) -> Json {
    let elements: Vec<Json> = p
        .elements()
        .iter()
        .enumerate()
        .map(|(i, e)| json!({ "id": i, "part": e.part, "payload": payload_json(&e.payload) }))
        .collect();
    let mut obj = Map::new();
    obj.insert("elements".into(), Json::Array(elements));
    obj.insert("covers".into(), json!(p.covers()));
    obj.insert("min_inconsistent".into(), json!(p.min_inconsistent()));
    if let Some(x) = p.elements().iter().find_map(Element::vector) {
        obj.insert("k".into(), json!(x.k()));
    }
    Json::Object(obj)
}

fn pairs(v: &Json, key: &str) -> Result<Vec<(usize, usize)>> {
    let arr = v.get(key).and_then(Json::as_array).ok_or_else(|| Error::parse(format!("missing array '{key}'")))?;
    arr.iter()
        .map(|pair| {
            let a = pair.get(0).and_then(Json::as_u64);
            let b = pair.get(1).and_then(Json::as_u64);
            match (a, b, pair.as_array().map(Vec::len)) {
                (Some(a), Some(b), Some(2)) => Ok((a as usize, b as usize)),
                _ => Err(Error::parse(format!("'{key}' entries must be pairs of indices"))),
            }
        })
        .collect()
}

fn index_list(v: &Json) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| Error::parse("payload must be an array"))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::parse("payload entries must be nonnegative integers")))
        .collect()
}

/// Parses the format written by [`pip_to_json`].
pub fn pip_from_json(v: &Json) -> Result<Pip> {
    let k = v.get("k").and_then(Json::as_u64);
    let raw = v.get("elements").and_then(Json::as_array).ok_or_else(|| Error::parse("missing array 'elements'"))?;
    let mut elements = Vec::with_capacity(raw.len());
    for (i, e) in raw.iter().enumerate() {
        if let Some(id) = e.get("id") {
            if id.as_u64() != Some(i as u64) {
                return Err(Error::parse(format!("element ids must be 0..n in order (found {id} at {i})")));
            }
        }
        let part = match e.get("part") {
            None | Some(Json::Null) => None,
            Some(p) => Some(p.as_u64().ok_or_else(|| Error::parse("part must be an integer"))? as usize),
        };
        let payload = match e.get("payload") {
            None | Some(Json::Null) => Payload::None,
            Some(obj @ Json::Object(_)) => {
                let label = obj.get("label").and_then(Json::as_u64).ok_or_else(|| Error::parse("layered payload needs 'label'"))?;
                let label = u8::try_from(label).map_err(|_| Error::parse("label out of range"))?;
                let vertices = index_list(obj.get("vertices").ok_or_else(|| Error::parse("layered payload needs 'vertices'"))?)?;
                Payload::Layered { label, vertices }
            }
            Some(arr) => {
                let items = index_list(arr)?;
                match k {
                    Some(k) => {
                        let k = u8::try_from(k).map_err(|_| Error::parse("k out of range"))?;
                        let labels = items
                            .into_iter()
                            .map(|a| u8::try_from(a).map_err(|_| Error::parse("label out of range")))
                            .collect::<Result<Vec<u8>>>()?;
                        Payload::Vector(KVector::new(k, labels)?)
                    }
                    None => Payload::Vertices(items),
                }
            }
        };
        elements.push(Element { payload, part });
    }
    let covers = pairs(v, "covers")?;
    let mic = pairs(v, "min_inconsistent")?;
    let pip = Pip::new(elements, &covers, &mic)?;
    pip.validate().map_err(|e| Error::validation(e.to_string()))?;
    Ok(pip)
}

fn payload_label(p: &Payload) -> String {
    match p {
        Payload::None => String::new(),
        Payload::Vector(x) => x.to_string(),
        Payload::Vertices(vs) => format!("{vs:?}"),
        Payload::Layered { label, vertices } => format!("{label}:{vertices:?}"),
    }
}

/// Graphviz rendering: solid arrows from higher to lower elements along covers, dashed
/// undirected edges for minimal inconsistent pairs.
pub fn pip_to_dot(p: &Pip) -> String {
    let mut out = String::from("digraph pip {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, e) in p.elements().iter().enumerate() {
        let label = payload_label(&e.payload);
        let label = if label.is_empty() { i.to_string() } else { label };
        out.push_str(&format!("  n{i} [label=\"{}\"];\n", label.replace('"', "\\\"")));
    }
    for &(lo, hi) in p.covers() {
        out.push_str(&format!("  n{hi} -> n{lo};\n"));
    }
    for &(a, b) in p.min_inconsistent() {
        out.push_str(&format!("  n{a} -> n{b} [style=dashed, dir=none, constraint=false];\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_keeps_structure() {
        let x = KVector::from_digits(2, "10").unwrap();
        let y = KVector::from_digits(2, "20").unwrap();
        let z = KVector::from_digits(2, "11").unwrap();
        let els = [x, y, z].into_iter().map(|v| Element::new(Payload::Vector(v))).collect();
        let p = Pip::new(els, &[(0, 2)], &[(0, 1)]).unwrap();
        let j = pip_to_json(&p);
        let q = pip_from_json(&j).unwrap();
        assert_eq!(pip_to_json(&q), j);
        assert!(j.to_string().starts_with("{\"covers\""));
    }

    #[test]
    fn dot_draws_covers_downward() {
        let p = Pip::new(vec![Element::new(Payload::Vertices(vec![3])); 2], &[(0, 1)], &[]).unwrap();
        let dot = pip_to_dot(&p);
        assert!(dot.contains("n1 -> n0;"));
    }

    #[test]
    fn invalid_json_is_rejected() {
        assert!(pip_from_json(&json!({"elements": [{}, {}], "covers": [], "min_inconsistent": [[0]]})).is_err());
        let bad = json!({"elements": [{}, {}], "covers": [[0, 1]], "min_inconsistent": [[0, 1]]});
        assert!(matches!(pip_from_json(&bad), Err(Error::Validation(_))));
    }
}
