use super::*;
use crate::bundle::boolean_decompose;
use crate::coloured::ColouredPoset;
use crate::linalg::{CoeffRing, ExactMatrix, Scalar};
use crate::poset::Poset;

/// Boolean lattice coloured by the ground ring, the cover adding element `b` acting by `scales[b]`.
fn scaled_boolean(ring: CoeffRing, scales: &[i64]) -> ColouredPoset {
    let p = Poset::boolean(scales.len());
    let covers = p
        .covers()
        .map(|(x, y)| {
            let bit = (x ^ y).trailing_zeros() as usize;
            ((x, y), ExactMatrix::identity(ring, 1).scaled(&Scalar::Int(scales[bit])))
        })
        .collect();
    ColouredPoset::new(p, ring, vec![1; 1 << scales.len()], covers).unwrap()
}

#[test]
fn product_over_base_with_bottom_is_acyclic() {
    let q = CoeffRing::Rationals;
    let fibre = ColouredPoset::constant(Poset::chain(3), q, 2);
    for base in [Poset::boolean(1), Poset::boolean(2), Poset::bruhat_dihedral(3)] {
        let xi = Bundle::product(base, fibre.clone());
        let k = Bicomplex::new(&xi, 5, false).unwrap();
        let ss = spectral_sequence(&k, 5, 3).unwrap();
        assert!(ss.homology.iter().all(|&d| d == 0));
        assert!(ss.page(2).unwrap().dims.values().all(|&d| d == 0));
        assert!(ss.converges);
    }
}

#[test]
fn one_element_base_is_the_fibre() {
    let q = CoeffRing::Rationals;
    let fibre = scaled_boolean(q, &[0, 2]);
    let xi = Bundle::product(Poset::chain(1), fibre.clone());
    let k = Bicomplex::new(&xi, 4, false).unwrap();
    assert_eq!(k.p_max(), 0);
    let t = k.total_complex(4).unwrap();
    let s = crate::coloured::s_complex(&fibre, 4);
    assert_eq!(t.complex().dims(), s.dims());
    for n in 1..=4 {
        // d^v carries the sign (-1)^q, which does not change the homology
        assert_eq!(t.complex().differential(n).unwrap().rank(), s.differential(n).unwrap().rank());
    }
    let r = quasi_iso_check(&xi, 4, false).unwrap();
    assert!(r.supported && r.is_iso);
}

#[test]
fn decomposed_lattice_matches_on_every_page() {
    for ring in [CoeffRing::Rationals, CoeffRing::prime(2).unwrap(), CoeffRing::prime(3).unwrap()] {
        let cp = scaled_boolean(ring, &[0, 1, 2]);
        for a in [vec!["1".to_string()], vec!["2".into(), "3".into()]] {
            let xi = boolean_decompose(&cp, &a).unwrap();
            let k = Bicomplex::new(&xi, 5, false).unwrap();
            check_phi_chain_map(&xi, &k, 5).unwrap();
            let ss = spectral_sequence(&k, 5, 4).unwrap();
            let direct = e2_direct(&xi, 4).unwrap();
            let e2 = ss.page(2).unwrap();
            for (&(p, q), &d) in &e2.dims {
                assert_eq!(direct.get(&(p, q)).copied().unwrap_or(0), d, "{ring} {a:?} ({p},{q})");
            }
            let h = homology(&cp).unwrap();
            for n in 0..=ss.window {
                assert_eq!(ss.einf_total(n), h.rank(n));
            }
            let r = quasi_iso_check(&xi, 4, false).unwrap();
            assert!(r.is_iso, "{r:?}");
        }
    }
}

#[test]
fn differentials_have_the_right_bidegree() {
    let ring = CoeffRing::Rationals;
    let cp = scaled_boolean(ring, &[1, 0, 1]);
    let xi = boolean_decompose(&cp, &["3".to_string()]).unwrap();
    let k = Bicomplex::new(&xi, 5, false).unwrap();
    let ss = spectral_sequence(&k, 5, 4).unwrap();
    for page in &ss.pages {
        for (&(p, q), m) in &page.differentials {
            let target = page.dim(p - page.r, q + page.r - 1);
            assert_eq!(m.rows(), target);
            assert_eq!(m.cols(), page.dim(p, q));
        }
    }
}

#[test]
fn strict_fibre_variant_has_the_same_homology() {
    let ring = CoeffRing::Rationals;
    let cp = scaled_boolean(ring, &[0, 1, 2]);
    let xi = boolean_decompose(&cp, &["1".to_string()]).unwrap();
    let full = Bicomplex::new(&xi, 4, false).unwrap().total_complex(4).unwrap();
    let strict = Bicomplex::new(&xi, 4, true).unwrap().total_complex(4).unwrap();
    let a = complex_homology(full.complex(), 0..=3).unwrap();
    let b = complex_homology(strict.complex(), 0..=3).unwrap();
    assert_eq!(a.ranks(), b.ranks());
}

#[test]
fn unsupported_base_needs_force() {
    let fibre = ColouredPoset::constant(Poset::boolean(1), CoeffRing::Rationals, 1);
    let xi = Bundle::product(Poset::chain(3), fibre);
    assert_eq!(quasi_iso_check(&xi, 3, false), Err(SpecSeqError::Unsupported));
    let r = quasi_iso_check(&xi, 3, true).unwrap();
    assert!(!r.supported);
}

#[test]
fn integers_are_rejected() {
    let fibre = ColouredPoset::constant(Poset::boolean(1), CoeffRing::Integers, 1);
    let xi = Bundle::product(Poset::boolean(1), fibre);
    let k = Bicomplex::new(&xi, 3, false).unwrap();
    assert_eq!(spectral_sequence(&k, 3, 2).unwrap_err(), SpecSeqError::RequiresField);
}

#[test]
fn les_on_decomposed_lattice() {
    let ring = CoeffRing::prime(2).unwrap();
    let cp = scaled_boolean(ring, &[0, 1, 1]);
    let xi = boolean_decompose(&cp, &["3".to_string()]).unwrap();
    for x in xi.base().coatoms() {
        for which in [LesComplex::Total, LesComplex::Sequences] {
            let r = les_check(&xi, x, 3, which).unwrap();
            assert!(r.exact && r.quotient_matches, "{r:?}");
        }
    }
}
