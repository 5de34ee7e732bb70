//! The property suite behind `colposet selftest`. Reports hold no timings, so
//! equal configurations give byte-identical output.

use std::collections::BTreeMap;

use colposet::coloured::ColouredPoset;
use colposet::khovanov::{fixed_crossing_spectral_sequences, normalised_homology, parse_pd, unnormalised_homology};
use colposet::linalg::CoeffRing;
use colposet::poset::Poset;
use colposet::specseq::LesComplex;
use serde::Serialize;

use crate::gen::{random_coloured_poset, BaseSelector, GenParams};
use crate::suite::{self, Case, CORPUS_BASES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Bundles per property.
    pub cases: usize,
    /// Highest total degree checked.
    pub max_degree: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 1, cases: 12, max_degree: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

fn property<T>(name: &str, items: &[T], label: impl Fn(&T) -> String, check: impl Fn(&T) -> Result<(), String>) -> PropertyResult {
    let failures: Vec<String> = items.iter().filter_map(|t| check(t).err().map(|e| format!("{}: {e}", label(t)))).collect();
    PropertyResult { name: name.into(), checked: items.len(), failed: failures.len(), failures }
}

fn single(name: &str, check: impl FnOnce() -> Result<(), String>) -> PropertyResult {
    let failures: Vec<String> = check().err().into_iter().collect();
    PropertyResult { name: name.into(), checked: 1, failed: failures.len(), failures }
}

fn khovanov_baseline() -> Result<(), String> {
    let q = CoeffRing::Rationals;
    let unknot = parse_pd("PD[] circles=1").map_err(|e| e.to_string())?;
    let kink = parse_pd("PD[X[1,1,2,2]]").map_err(|e| e.to_string())?;
    let a = normalised_homology(&unknot, q).map_err(|e| e.to_string())?.ranks();
    let b = normalised_homology(&kink, q).map_err(|e| e.to_string())?.ranks();
    if a != b {
        return Err(format!("kink {b:?} vs unknot {a:?}"));
    }
    let trefoil = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").map_err(|e| e.to_string())?;
    let total = unnormalised_homology(&trefoil, q).map_err(|e| e.to_string())?.total_rank();
    if total != 4 {
        return Err(format!("trefoil total rank {total}"));
    }
    for r in fixed_crossing_spectral_sequences(&trefoil, &[0], CoeffRing::prime(2).expect("prime")).map_err(|e| e.to_string())? {
        if !(r.e2_matches && r.converges) {
            return Err(format!("trefoil, crossing 1 fixed, q-degree {}", r.q_degree));
        }
    }
    Ok(())
}

/// Runs every property on a corpus drawn from `config.seed`.
pub fn selftest(config: SelftestConfig) -> SelftestReport {
    let rings = [CoeffRing::prime(2).expect("prime"), CoeffRing::Rationals];
    let n = config.max_degree.max(1);
    let mut properties = Vec::new();

    let posets: Vec<(String, Result<ColouredPoset, String>)> = (0..config.cases * 4)
        .map(|i| {
            let ring = rings[i % 2];
            let path = format!("coloured/{ring}/{i}");
            let params = GenParams::new(config.seed, 6, 3, ring).expect("positive bounds");
            let cp = random_coloured_poset(&params, &path).map_err(|e| e.to_string());
            (path, cp)
        })
        .collect();
    properties.push(property("coloured posets are path independent", &posets, |p| p.0.clone(), |p| p.1.clone().map(|_| ())));

    let cases: Vec<Case> = match suite::corpus(config.seed, config.cases, &CORPUS_BASES, &rings, 5, 2) {
        Ok(c) => c,
        Err(e) => {
            properties.push(single("bundle generation", || Err(e.to_string())));
            return SelftestReport { config, properties, passed: false };
        }
    };
    let name = |c: &Case| c.name.clone();
    properties.push(property("bicomplex identities", &cases, name, |c| suite::check_bicomplex(&c.bundle, n + 1)));
    properties.push(property("phi is a chain map", &cases, name, |c| suite::check_phi(&c.bundle, n + 1)));
    properties.push(property("phi is a quasi-isomorphism", &cases, name, |c| suite::check_quasi_iso(&c.bundle, n)));
    properties.push(property("E2 and abutment", &cases, name, |c| suite::check_e2_and_abutment(&c.bundle, n)));
    properties.push(property("long exact sequences", &cases, name, |c| {
        suite::check_les(&c.bundle, n, LesComplex::Total)
    }));

    let fibre = ColouredPoset::constant(Poset::boolean(2), CoeffRing::Rationals, 2);
    let bases = [BaseSelector::Boolean(1), BaseSelector::Boolean(2), BaseSelector::Dihedral(3)];
    properties.push(property("products over a base with bottom are acyclic", &bases, |b| b.name(), |b| {
        suite::check_acyclic_product(&b.poset(), &fibre, n)
    }));

    let rows = suite::admissibility_suite();
    properties.push(property("admissibility", &rows, |r| format!("{} {}", r.poset, r.expected), |r| {
        if r.ok {
            Ok(())
        } else {
            Err("wrong verdict".into())
        }
    }));
    properties.push(single("khovanov baseline", khovanov_baseline));

    let passed = properties.iter().all(|p| p.failed == 0);
    SelftestReport { config, properties, passed }
}

/// Property name to failure count, for quick summaries.
pub fn failure_counts(r: &SelftestReport) -> BTreeMap<String, usize> {
    r.properties.iter().map(|p| (p.name.clone(), p.failed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_repeats() {
        let config = SelftestConfig { seed: 5, cases: 4, max_degree: 2 };
        let a = selftest(config);
        assert!(a.passed, "{:#?}", failure_counts(&a));
        let b = selftest(config);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
