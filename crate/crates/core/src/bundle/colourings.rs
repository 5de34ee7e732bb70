//! Colourings of the base built from the fibres.

use std::collections::HashMap;

use crate::coloured::{sequence_differential, ColouredPoset, SequenceBasis};
use crate::linalg::{ExactMatrix, HomologyBasis};

use super::{Bundle, BundleError};

/// `x -> S_q(E_x)` (or `C_q(E_x)` when `strict`), with the maps induced by the bundle.
pub fn chain_colouring(xi: &Bundle, q: usize, strict: bool) -> ColouredPoset {
    let bases: Vec<SequenceBasis> = xi.fibres().iter().map(|f| SequenceBasis::new(f, q, strict)).collect();
    let dims = bases.iter().map(SequenceBasis::dim).collect();
    let covers = xi
        .base()
        .covers()
        .map(|(x, z)| ((x, z), xi.morphism(x, z).chain_map(xi.fibre(x), &bases[x], &bases[z])))
        .collect();
    ColouredPoset::new(xi.base().clone(), xi.ring(), dims, covers).expect("chains form a functor")
}

/// The `q`-chain colouring `x -> S_q(E_x)`.
pub fn q_chain_colouring(xi: &Bundle, q: usize) -> ColouredPoset {
    chain_colouring(xi, q, false)
}

struct FibreHomology {
    chains: SequenceBasis,
    basis: HomologyBasis,
}

fn fibre_homology(fibre: &ColouredPoset, q: usize) -> Result<FibreHomology, BundleError> {
    let chains = SequenceBasis::new(fibre, q, true);
    let above = SequenceBasis::new(fibre, q + 1, true);
    let d_out = if q == 0 {
        ExactMatrix::zeros(fibre.ring(), 0, chains.dim())
    } else {
        sequence_differential(fibre, &chains, &SequenceBasis::new(fibre, q - 1, true))
    };
    let d_in = sequence_differential(fibre, &above, &chains);
    let basis = HomologyBasis::from_differentials(&d_out, &d_in)?;
    Ok(FibreHomology { chains, basis })
}

/// `x -> H_q(E_x, F_x)` with the induced maps in homology.
///
/// Fibre homology is computed from the strict-sequence complex; the maps act
/// on it by sending sequences whose image has a repeat to zero.
pub fn fibre_homology_colouring(xi: &Bundle, q: usize) -> Result<ColouredPoset, BundleError> {
    if !xi.ring().is_field() {
        return Err(BundleError::RequiresField("fibre homology colouring"));
    }
    let data = xi.fibres().iter().map(|f| fibre_homology(f, q)).collect::<Result<Vec<_>, _>>()?;
    let dims = data.iter().map(|h| h.basis.dim()).collect();
    let mut covers = HashMap::new();
    for (x, z) in xi.base().covers() {
        let chain = xi.morphism(x, z).chain_map(xi.fibre(x), &data[x].chains, &data[z].chains);
        let columns = data[x]
            .basis
            .representatives()
            .iter()
            .map(|r| data[z].basis.coordinates(&chain.apply(r)))
            .collect::<Result<Vec<_>, _>>()?;
        covers.insert((x, z), ExactMatrix::from_columns(xi.ring(), data[z].basis.dim(), columns));
    }
    Ok(ColouredPoset::new(xi.base().clone(), xi.ring(), dims, covers)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloured::homology;
    use crate::linalg::CoeffRing;
    use crate::poset::Poset;

    #[test]
    fn product_bundle_colourings_are_constant() {
        let q = CoeffRing::Rationals;
        // the fibre is two incomparable points under a top, with homology in degree 1
        let p = Poset::build(
            vec!["a".into(), "b".into(), "t".into()],
            &[("a".into(), "t".into()), ("b".into(), "t".into())],
        )
        .unwrap();
        let fibre = ColouredPoset::constant(p, q, 1);
        let h = homology(&fibre).unwrap();
        assert_eq!(h.ranks(), vec![0, 1]);
        let xi = Bundle::product(Poset::boolean(2), fibre);
        for k in 0..3 {
            let c = fibre_homology_colouring(&xi, k).unwrap();
            assert!(c.dims().iter().all(|&d| d == h.rank(k)));
            for (x, y) in c.poset().covers() {
                assert_eq!(c.map(x, y), &ExactMatrix::identity(q, h.rank(k)));
            }
            let s = q_chain_colouring(&xi, k);
            for (x, y) in s.poset().covers() {
                assert_eq!(s.map(x, y), &ExactMatrix::identity(q, s.dim(x)));
            }
        }
        assert_eq!(q_chain_colouring(&xi, 0).dims(), &[1, 1, 1, 1]);
        assert!(fibre_homology_colouring(&xi, 5).unwrap().dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn integers_rejected() {
        let fibre = ColouredPoset::constant(Poset::boolean(1), CoeffRing::Integers, 1);
        let xi = Bundle::product(Poset::boolean(1), fibre);
        assert!(matches!(fibre_homology_colouring(&xi, 0), Err(BundleError::RequiresField(_))));
    }
}
