//! JSON form of elements:
//! `{"kind", "left", "right", "terms": [{"subgroup": [...], "coeff": "p/q"}]}`.
//! Subgroups are listed by their elements `g * |H| + h` of `G x H`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::burnside::{BisetElement, GhostElement};
use crate::rational::{format_q, parse_q, Q};
use crate::space::{ProductSpace, Universe};
use crate::subgroup::SubgroupSet;

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("missing or malformed field {0:?}")]
    Field(&'static str),
    #[error("unknown element kind {0:?}")]
    Kind(String),
    #[error("{0:?} is not a subgroup of the product")]
    NotSubgroup(Vec<u32>),
    #[error(transparent)]
    Rational(#[from] crate::rational::ParseRationalError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Biset(BisetElement),
    Ghost(GhostElement),
}

fn encode(kind: &str, space: &ProductSpace, coeffs: &BTreeMap<usize, Q>) -> Value {
    let terms: Vec<Value> = coeffs
        .iter()
        .map(|(&l, c)| json!({"subgroup": space.subgroup(l).elements(), "coeff": format_q(c)}))
        .collect();
    json!({
        "kind": kind,
        "left": space.left().label(),
        "right": space.right().label(),
        "terms": terms,
    })
}

pub fn ghost_to_json(x: &GhostElement) -> Value {
    encode("ghost", x.space(), x.coeffs())
}

pub fn biset_to_json(x: &BisetElement) -> Value {
    encode("biset", x.space(), x.coeffs())
}

pub fn element_to_json(x: &Element) -> Value {
    match x {
        Element::Biset(b) => biset_to_json(b),
        Element::Ghost(g) => ghost_to_json(g),
    }
}

/// Reads an element back; biset terms are moved to their class representatives.
pub fn element_from_json(u: &Universe, v: &Value) -> Result<Element, JsonError> {
    let text = |k: &'static str| v.get(k).and_then(Value::as_str).ok_or(JsonError::Field(k));
    let kind = text("kind")?;
    let space: Arc<ProductSpace> = u.space(&u.group(text("left")?)?, &u.group(text("right")?)?)?;
    let mut terms = Vec::new();
    for t in v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or(JsonError::Field("terms"))?
    {
        let elems: Vec<u32> = t
            .get("subgroup")
            .and_then(Value::as_array)
            .ok_or(JsonError::Field("subgroup"))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .map(|x| x as u32)
                    .ok_or(JsonError::Field("subgroup"))
            })
            .collect::<Result<_, _>>()?;
        let s = SubgroupSet::from_elements(space.group(), elems.iter().copied())
            .map_err(|_| JsonError::NotSubgroup(elems.clone()))?;
        let l = space.index_of(&s).ok_or(JsonError::NotSubgroup(elems))?;
        let c = parse_q(
            t.get("coeff")
                .and_then(Value::as_str)
                .ok_or(JsonError::Field("coeff"))?,
        )?;
        terms.push((l, c));
    }
    match kind {
        "biset" => Ok(Element::Biset(BisetElement::from_terms(&space, terms))),
        "ghost" => Ok(Element::Ghost(GhostElement::from_terms(&space, terms))),
        other => Err(JsonError::Kind(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn round_trip() {
        let u = Universe::new();
        let s3 = u.group("S3").unwrap();
        let sp = u.space(&s3, &s3).unwrap();
        let x = GhostElement::from_terms(&sp, [(0, q(1, 2)), (sp.diagonal_index(), q(-3, 1))]);
        let v = ghost_to_json(&x);
        assert_eq!(v["kind"], "ghost");
        assert_eq!(v["terms"][0]["coeff"], "1/2");
        assert_eq!(element_from_json(&u, &v).unwrap(), Element::Ghost(x));
        let b = BisetElement::from_terms(&sp, [(sp.diagonal_index(), q(2, 1))]);
        let v = biset_to_json(&b);
        assert_eq!(element_from_json(&u, &v).unwrap(), Element::Biset(b));
        // keys come out sorted
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.find("\"kind\"").unwrap() < s.find("\"left\"").unwrap());
        assert!(s.find("\"right\"").unwrap() < s.find("\"terms\"").unwrap());
    }

    #[test]
    fn rejects_non_subgroups() {
        let u = Universe::new();
        let v = json!({"kind": "ghost", "left": "C2", "right": "C2", "terms": [{"subgroup": [1], "coeff": "1"}]});
        assert!(matches!(
            element_from_json(&u, &v),
            Err(JsonError::NotSubgroup(_))
        ));
        let v = json!({"kind": "thing", "left": "C2", "right": "C2", "terms": []});
        assert!(matches!(element_from_json(&u, &v), Err(JsonError::Kind(_))));
    }
}
