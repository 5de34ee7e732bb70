//! The bicomplex of a bundle, its spectral sequence, the comparison map to the
//! total coloured poset and the long exact sequences.

mod bicomplex;
mod filtered;
mod les;
mod phi;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bundle::{fibre_homology_colouring, Bundle, BundleError};
use crate::coloured::{homology, ColouredError};
use crate::linalg::{complex_homology, induced_homology_map, ChainMap, LinalgError};
use crate::poset::is_specially_admissible;

pub use bicomplex::{Bicomplex, BlockBasis, Generator};
pub use filtered::{CellJson, FilteredComplex, Page, PageJson, PageSet, PageSetJson};
pub use les::{les_check, LesComplex, LesPosition, LesReport};
pub use phi::{alpha, check_phi_chain_map, grid_paths, normalized_phi_matrices, phi_matrices, phi_terms, GridPath};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SpecSeqError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Coloured(#[from] ColouredError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{which} is nonzero at (p, q) = ({p}, {q})")]
    Identity { which: &'static str, p: usize, q: usize },
    #[error("total degree {n_max} needs fibre sequences up to length {n_max}, have {q_max}")]
    InsufficientQ { n_max: usize, q_max: usize },
    #[error("spectral sequences and homology comparisons need a field")]
    RequiresField,
    #[error("page {r} is not the homology of the previous page at ({p}, {q})")]
    Inconsistent { r: usize, p: usize, q: usize },
    #[error("phi does not commute with the differentials in degree {n}")]
    NotAChainMap { n: usize },
    #[error("base is not specially admissible; rerun with the override to compute anyway")]
    Unsupported,
    #[error("`{0}` is not covered by the top of the base")]
    NotACoatom(String),
    #[error("the degree window is empty")]
    EmptyWindow,
}

/// The spectral sequence of the total complex filtered by base degree `p`,
/// in total degrees `0..n_max`.
pub fn spectral_sequence(k: &Bicomplex, n_max: usize, r_max: usize) -> Result<PageSet, SpecSeqError> {
    if !k.ring().is_field() {
        return Err(SpecSeqError::RequiresField);
    }
    k.total_complex(n_max)?.spectral_sequence(r_max)
}

/// `E^2_{p,q} = H_p(B, H_q^fib)` computed directly, for `q <= q_max`.
pub fn e2_direct(xi: &Bundle, q_max: usize) -> Result<BTreeMap<(usize, usize), usize>, SpecSeqError> {
    let mut out = BTreeMap::new();
    for q in 0..=q_max {
        let colouring = fibre_homology_colouring(xi, q)?;
        for (p, d) in homology(&colouring)?.ranks().into_iter().enumerate() {
            out.insert((p, q), d);
        }
    }
    Ok(out)
}

/// Whether the base satisfies the hypotheses of the comparison theorems.
/// A one-element base is accepted: there the bicomplex is the fibre's own complex.
pub fn base_supported(xi: &Bundle) -> bool {
    xi.base().len() == 1 || is_specially_admissible(xi.base()).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoDegree {
    pub n: usize,
    pub dim_total_complex: usize,
    pub dim_total_poset: usize,
    pub induced_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    /// False when the base is outside the theorem's hypotheses and the check was forced.
    pub supported: bool,
    pub degrees: Vec<QuasiIsoDegree>,
    pub is_iso: bool,
}

/// Checks that `phi` induces isomorphisms `H_n(T) -> H_n(E, F)` for `n < n_max`.
///
/// The induced map is computed through the projection to strict sequences,
/// which is itself a quasi-isomorphism.
pub fn quasi_iso_check(xi: &Bundle, n_max: usize, force: bool) -> Result<QuasiIsoReport, SpecSeqError> {
    if !xi.ring().is_field() {
        return Err(SpecSeqError::RequiresField);
    }
    if n_max == 0 {
        return Err(SpecSeqError::EmptyWindow);
    }
    let supported = base_supported(xi);
    if !supported && !force {
        return Err(SpecSeqError::Unsupported);
    }
    let k = Bicomplex::new(xi, n_max, false)?;
    let t = k.total_complex(n_max)?;
    let total = xi.total();
    let (_, c) = phi::strict_complex(&total.total, n_max);
    let (_, maps) = normalized_phi_matrices(xi, &k, n_max);
    let f = ChainMap { maps };
    f.verify(t.complex(), &c)?;
    let ht = complex_homology(t.complex(), 0..=n_max - 1)?;
    let hc = complex_homology(&c, 0..=n_max - 1)?;
    let mut degrees = Vec::new();
    for n in 0..n_max {
        let m = induced_homology_map(&f, t.complex(), &c, n)?;
        degrees.push(QuasiIsoDegree {
            n,
            dim_total_complex: ht.rank(n),
            dim_total_poset: hc.rank(n),
            induced_rank: m.rank(),
        });
    }
    let is_iso = degrees.iter().all(|d| d.dim_total_complex == d.dim_total_poset && d.induced_rank == d.dim_total_poset);
    Ok(QuasiIsoReport { supported, degrees, is_iso })
}

#[cfg(test)]
mod tests;
