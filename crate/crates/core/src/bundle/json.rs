use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::coloured::{matrix_from_json, matrix_to_json, ColouredPoset, ColouredPosetJson, ColouredPosetMorphism, MatrixJson};
use crate::linalg::CoeffRing;
use crate::poset::{Poset, PosetJson};

use super::{Bundle, BundleError};

/// `f` sends fibre labels to fibre labels; `tau` gives a matrix per source fibre element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreMorphismJson {
    pub f: BTreeMap<String, String>,
    pub tau: BTreeMap<String, MatrixJson>,
}

/// `{"base":.., "fibres":{"x":..}, "morphisms":{"x<z":{"f":..,"tau":..}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub base: PosetJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    pub fibres: BTreeMap<String, ColouredPosetJson>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, FibreMorphismJson>,
}

fn err(msg: String) -> BundleError {
    BundleError::Json(msg)
}

impl Bundle {
    pub fn from_json(json: &BundleJson, ring: CoeffRing) -> Result<Bundle, BundleError> {
        let base = Poset::from_json(&json.base)?;
        let fibres = base
            .labels()
            .iter()
            .map(|l| {
                let f = json.fibres.get(l).ok_or_else(|| err(format!("no fibre over `{l}`")))?;
                Ok(ColouredPoset::from_json(f, ring)?)
            })
            .collect::<Result<Vec<_>, BundleError>>()?;
        let mut covers = HashMap::new();
        for (key, m) in &json.morphisms {
            let (a, b) = key.split_once('<').ok_or_else(|| err(format!("morphism key `{key}` is not x<z")))?;
            let x = base.index_of(a).ok_or_else(|| err(format!("unknown base element `{a}`")))?;
            let z = base.index_of(b).ok_or_else(|| err(format!("unknown base element `{b}`")))?;
            let (src, dst) = (&fibres[x], &fibres[z]);
            let mut f = Vec::with_capacity(src.poset().len());
            let mut tau = Vec::with_capacity(src.poset().len());
            for (y, label) in src.poset().labels().iter().enumerate() {
                let target = m.f.get(label).ok_or_else(|| err(format!("`{key}` does not map `{label}`")))?;
                let fy = dst.poset().index_of(target).ok_or_else(|| err(format!("unknown fibre element `{target}`")))?;
                let t = m.tau.get(label).ok_or_else(|| err(format!("`{key}` has no tau at `{label}`")))?;
                tau.push(matrix_from_json(ring, dst.dim(fy), src.dim(y), t)?);
                f.push(fy);
            }
            covers.insert((x, z), ColouredPosetMorphism { f, tau });
        }
        Bundle::new(base, fibres, covers)
    }

    pub fn parse_json(text: &str, ring: CoeffRing) -> Result<Bundle, BundleError> {
        let json: BundleJson = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
        Self::from_json(&json, ring)
    }

    pub fn to_json(&self) -> BundleJson {
        let base = self.base();
        let fibres = (0..base.len()).map(|x| (base.label(x).to_string(), self.fibre(x).to_json())).collect();
        let morphisms = base
            .covers()
            .map(|(x, z)| {
                let m = self.morphism(x, z);
                let (src, dst) = (self.fibre(x).poset(), self.fibre(z).poset());
                let f = (0..src.len()).map(|y| (src.label(y).to_string(), dst.label(m.f[y]).to_string())).collect();
                let tau = (0..src.len()).map(|y| (src.label(y).to_string(), matrix_to_json(&m.tau[y]))).collect();
                (format!("{}<{}", base.label(x), base.label(z)), FibreMorphismJson { f, tau })
            })
            .collect();
        BundleJson { base: base.to_json(), ring: Some(self.ring().to_string()), fibres, morphisms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{
            "base": {"elements": ["0", "1"], "relations": [["0", "1"]]},
            "fibres": {
                "0": {"elements": ["p"], "dims": {"p": 1}},
                "1": {"elements": ["a", "t"], "relations": [["a", "t"]], "dims": {"a": 1, "t": 2}, "maps": {"a<t": [[1], [0]]}}
            },
            "morphisms": {"0<1": {"f": {"p": "t"}, "tau": {"p": [[0], [1]]}}}
        }"#;
        let xi = Bundle::parse_json(text, CoeffRing::Rationals).unwrap();
        assert_eq!(xi.total().total.poset().len(), 3);
        let again = Bundle::from_json(&xi.to_json(), CoeffRing::Rationals).unwrap();
        assert_eq!(again.to_json(), xi.to_json());
    }
}
