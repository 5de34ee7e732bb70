//! Property checks shared by `selftest` and the acceptance tests.

use colposet::bundle::Bundle;
use colposet::coloured::{homology, ColouredPoset};
use colposet::linalg::{CoeffRing, ExactMatrix};
use colposet::poset::{admissible_for, is_admissible, is_specially_admissible, Poset};
use colposet::specseq::{
    check_phi_chain_map, e2_direct, les_check, quasi_iso_check, spectral_sequence, Bicomplex, LesComplex,
};

use crate::gen::{random_bundle, BaseSelector, GenError, GenParams};

/// One generated bundle with where it came from.
#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub base: BaseSelector,
    pub ring: CoeffRing,
    pub bundle: Bundle,
}

pub const CORPUS_BASES: [BaseSelector; 6] = [
    BaseSelector::Boolean(1),
    BaseSelector::Boolean(2),
    BaseSelector::Boolean(3),
    BaseSelector::Dihedral(2),
    BaseSelector::Dihedral(3),
    BaseSelector::Dihedral(4),
];

/// `count` bundles cycling through `bases` and `rings`, fibres of at most
/// `max_fibre_size` elements and rank at most `max_dim`.
pub fn corpus(
    seed: u64,
    count: usize,
    bases: &[BaseSelector],
    rings: &[CoeffRing],
    max_fibre_size: usize,
    max_dim: usize,
) -> Result<Vec<Case>, GenError> {
    (0..count)
        .map(|i| {
            let base = bases[i % bases.len()];
            let ring = rings[(i / bases.len()) % rings.len()];
            let params = GenParams::new(seed, max_fibre_size, max_dim, ring)?;
            let name = format!("{}/{}/{i}", base.name(), ring);
            let bundle = random_bundle(&params, &base.poset(), &name)?;
            Ok(Case { name, base, ring, bundle })
        })
        .collect()
}

fn is_zero_sum(a: Option<ExactMatrix>, b: Option<ExactMatrix>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a.add(&b).map(|m| m.is_zero()).unwrap_or(false),
        (Some(m), None) | (None, Some(m)) => m.is_zero(),
        (None, None) => true,
    }
}

/// Checks `dh dh = dv dv = dh dv + dv dh = 0` on every block of the bicomplex.
pub fn check_bicomplex(xi: &Bundle, q_max: usize) -> Result<(), String> {
    let k = Bicomplex::new(xi, q_max, false).map_err(|e| e.to_string())?;
    let compose = |outer: Option<&ExactMatrix>, inner: Option<&ExactMatrix>| -> Option<ExactMatrix> {
        Some(outer?.mul(inner?).expect("composable blocks"))
    };
    for p in 0..=k.p_max() {
        for q in 0..=q_max {
            let hh = p >= 2 && !is_zero_sum(compose(k.dh(p - 1, q), k.dh(p, q)), None);
            let vv = q >= 2 && !is_zero_sum(compose(k.dv(p, q - 1), k.dv(p, q)), None);
            let mixed = p >= 1
                && q >= 1
                && !is_zero_sum(compose(k.dh(p, q - 1), k.dv(p, q)), compose(k.dv(p - 1, q), k.dh(p, q)));
            if hh || vv || mixed {
                return Err(format!("identity fails at ({p}, {q}): hh={hh} vv={vv} mixed={mixed}"));
            }
        }
    }
    Ok(())
}

pub fn check_phi(xi: &Bundle, n_max: usize) -> Result<(), String> {
    let k = Bicomplex::new(xi, n_max, false).map_err(|e| e.to_string())?;
    check_phi_chain_map(xi, &k, n_max).map_err(|e| e.to_string())
}

/// `dim H_n(T) = dim H_n(E, F)`, with `phi` inducing the isomorphism, for `n <= n_top`.
pub fn check_quasi_iso(xi: &Bundle, n_top: usize) -> Result<(), String> {
    let r = quasi_iso_check(xi, n_top + 1, false).map_err(|e| e.to_string())?;
    if r.is_iso {
        Ok(())
    } else {
        Err(format!("{:?}", r.degrees))
    }
}

/// `E^2 = H_p(B, H_q^fib)` cell by cell and `sum_{p+q=n} E^inf = H_n(E, F)` for `n <= n_top`.
pub fn check_e2_and_abutment(xi: &Bundle, n_top: usize) -> Result<(), String> {
    let n_max = n_top + 1;
    let k = Bicomplex::new(xi, n_max, false).map_err(|e| e.to_string())?;
    let ss = spectral_sequence(&k, n_max, k.p_max() + 2).map_err(|e| e.to_string())?;
    let direct = e2_direct(xi, n_max).map_err(|e| e.to_string())?;
    let e2 = ss.page(2).ok_or("no second page")?;
    for n in 0..=ss.window {
        for p in 0..=n {
            let (a, b) = (e2.dim(p, n - p), direct.get(&(p, n - p)).copied().unwrap_or(0));
            if a != b {
                return Err(format!("E2({p},{}) = {a}, direct {b}", n - p));
            }
        }
    }
    let h = homology(&xi.total().total).map_err(|e| e.to_string())?;
    for n in 0..=ss.window.min(n_top) {
        if ss.einf_total(n) != h.rank(n) {
            return Err(format!("degree {n}: E-infinity {} vs H {}", ss.einf_total(n), h.rank(n)));
        }
    }
    Ok(())
}

/// Exactness at every spot of the long exact sequence for every coatom, degrees `<= n_top`.
pub fn check_les(xi: &Bundle, n_top: usize, which: LesComplex) -> Result<(), String> {
    for x in xi.base().coatoms() {
        let r = les_check(xi, x, n_top, which).map_err(|e| e.to_string())?;
        if let Some(p) = r.positions.iter().find(|p| !p.exact) {
            return Err(format!("coatom {}: not exact at {}_{}", r.witness, p.term, p.n));
        }
        if !r.quotient_matches {
            return Err(format!("coatom {}: quotient {:?}", r.witness, r.quotient_shift));
        }
    }
    Ok(())
}

/// Product bundles over a base with `0 < 1`: `H_n(T) = 0` for `1 <= n <= n_top`, and `E^2 = 0`.
pub fn check_acyclic_product(base: &Poset, fibre: &ColouredPoset, n_top: usize) -> Result<(), String> {
    let xi = Bundle::product(base.clone(), fibre.clone());
    let n_max = n_top + 1;
    let k = Bicomplex::new(&xi, n_max, false).map_err(|e| e.to_string())?;
    let ss = spectral_sequence(&k, n_max, k.p_max() + 2).map_err(|e| e.to_string())?;
    if let Some(n) = (1..=n_top.min(ss.window)).find(|&n| ss.homology[n] != 0) {
        return Err(format!("H_{n}(T) = {}", ss.homology[n]));
    }
    let e2 = ss.page(2).ok_or("no second page")?;
    if let Some((cell, d)) = e2.dims.iter().find(|(_, &d)| d != 0) {
        return Err(format!("E2{cell:?} = {d}"));
    }
    Ok(())
}

/// One line of the admissibility suite.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AdmissibilityRow {
    pub poset: String,
    pub expected: &'static str,
    pub ok: bool,
}

pub fn admissibility_suite() -> Vec<AdmissibilityRow> {
    let mut rows = Vec::new();
    let mut push = |poset: String, expected, ok| rows.push(AdmissibilityRow { poset, expected, ok });
    for n in 1..=5 {
        push(format!("boolean({n})"), "specially admissible", is_specially_admissible(&Poset::boolean(n)).is_some());
    }
    for n in 3..=6 {
        push(format!("chain({n})"), "not admissible", is_admissible(&Poset::chain(n)).is_none());
    }
    for m in 2..=6 {
        let p = Poset::bruhat_dihedral(m);
        push(format!("bruhat_dihedral({m})"), "specially admissible", is_specially_admissible(&p).is_some());
    }
    let s4 = Poset::bruhat_symmetric(4);
    let every = s4.coatoms().into_iter().all(|x| admissible_for(&s4, x).is_some());
    push("bruhat_symmetric(4)".into(), "admissible for every coatom", every);
    push("bruhat_symmetric(4)".into(), "specially admissible", is_specially_admissible(&s4).is_some());
    rows
}
