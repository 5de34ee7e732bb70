use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::linalg::{CoeffRing, ExactMatrix, Scalar};
use crate::poset::{Poset, PosetJson};

use super::{ColouredError, ColouredPoset};

/// A matrix entry: an integer, or a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Int(i64),
    Text(String),
}

/// A matrix as a list of rows.
pub type MatrixJson = Vec<Vec<EntryJson>>;

pub fn matrix_from_json(ring: CoeffRing, rows: usize, cols: usize, m: &MatrixJson) -> Result<ExactMatrix, ColouredError> {
    let bad = |msg: String| ColouredError::Json(msg);
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(bad(format!("expected a {rows}x{cols} matrix")));
    }
    let scalars = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| {
                    let s = match e {
                        EntryJson::Int(v) => Scalar::Int(*v),
                        EntryJson::Text(t) => t.parse::<Scalar>()?,
                    };
                    ring.reduce(&s)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExactMatrix::from_scalar_rows(ring, &scalars, cols)?)
}

pub fn matrix_to_json(m: &ExactMatrix) -> MatrixJson {
    m.to_dense()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|s| match s {
                    Scalar::Int(v) => EntryJson::Int(v),
                    big => EntryJson::Text(big.to_string()),
                })
                .collect()
        })
        .collect()
}

/// `{"poset":{..}, "ring":"q", "dims":{"x":d}, "maps":{"x<y":[[..]]}}`.
///
/// The poset may also be given inline as `"elements"` and `"relations"`.
/// Maps are given on covers and have `dims[y]` rows and `dims[x]` columns.
/// `ring` is informational; callers choose the ring when parsing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouredPosetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub maps: BTreeMap<String, MatrixJson>,
}

pub(crate) fn split_cover_key(key: &str) -> Result<(&str, &str), ColouredError> {
    key.split_once('<').ok_or_else(|| ColouredError::Json(format!("map key `{key}` is not of the form x<y")))
}

impl ColouredPoset {
    pub fn from_json(json: &ColouredPosetJson, ring: CoeffRing) -> Result<ColouredPoset, ColouredError> {
        let poset = match &json.poset {
            Some(p) => Poset::from_json(p)?,
            None => Poset::from_json(&PosetJson { elements: json.elements.clone(), relations: json.relations.clone() })?,
        };
        let dims = poset
            .labels()
            .iter()
            .map(|l| json.dims.get(l).copied().ok_or_else(|| ColouredError::Json(format!("no dimension for `{l}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut covers = HashMap::new();
        for (key, m) in &json.maps {
            let (a, b) = split_cover_key(key)?;
            let x = poset.index_of(a).ok_or_else(|| ColouredError::Json(format!("unknown element `{a}`")))?;
            let y = poset.index_of(b).ok_or_else(|| ColouredError::Json(format!("unknown element `{b}`")))?;
            covers.insert((x, y), matrix_from_json(ring, dims[y], dims[x], m)?);
        }
        ColouredPoset::new(poset, ring, dims, covers)
    }

    pub fn parse_json(text: &str, ring: CoeffRing) -> Result<ColouredPoset, ColouredError> {
        let json: ColouredPosetJson = serde_json::from_str(text).map_err(|e| ColouredError::Json(e.to_string()))?;
        Self::from_json(&json, ring)
    }

    pub fn to_json(&self) -> ColouredPosetJson {
        let p = self.poset();
        let dims = (0..p.len()).map(|x| (p.label(x).to_string(), self.dim(x))).collect();
        let maps = p
            .covers()
            .map(|(x, y)| (format!("{}<{}", p.label(x), p.label(y)), matrix_to_json(self.map(x, y))))
            .collect();
        ColouredPosetJson {
            poset: Some(p.to_json()),
            elements: Vec::new(),
            relations: Vec::new(),
            ring: Some(self.ring().to_string()),
            dims,
            maps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_round_trip() {
        let text = r#"{"elements":["0","1"],"relations":[["0","1"]],"dims":{"0":2,"1":1},"maps":{"0<1":[[1,"1/2"]]}}"#;
        let cp = ColouredPoset::parse_json(text, CoeffRing::Rationals).unwrap();
        assert_eq!(cp.map(0, 1).get(0, 1), "1/2".parse().unwrap());
        let again = ColouredPoset::from_json(&cp.to_json(), CoeffRing::Rationals).unwrap();
        assert_eq!(again.map(0, 1), cp.map(0, 1));
        // 1/2 is 2 in F_3
        let f3 = ColouredPoset::parse_json(text, CoeffRing::Prime(3)).unwrap();
        assert_eq!(f3.map(0, 1).get(0, 1), Scalar::Int(2));
    }

    #[test]
    fn nested_poset_form() {
        let text = r#"{"poset":{"elements":["a","b"],"relations":[["a","b"]]},"ring":"f2","dims":{"a":1,"b":1},"maps":{"a<b":[[1]]}}"#;
        let cp = ColouredPoset::parse_json(text, CoeffRing::Prime(2)).unwrap();
        assert_eq!(cp.poset().len(), 2);
        assert_eq!(cp.to_json().ring.as_deref(), Some("f2"));
    }
}
