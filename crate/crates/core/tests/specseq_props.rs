use colposet::bundle::Bundle;
use colposet::linalg::CoeffRing;
use colposet::specseq::grid_paths;
use colposet_testkit::suite::{self, CORPUS_BASES};
use colposet_testkit::{random_bundle, BaseSelector, GenParams};
use proptest::prelude::*;

fn ring(which: usize) -> CoeffRing {
    [CoeffRing::Rationals, CoeffRing::Prime(2), CoeffRing::Prime(3)][which % 3]
}

fn bundle(seed: u64, base: BaseSelector, which: usize) -> Bundle {
    let params = GenParams::new(seed, 5, 2, ring(which)).unwrap();
    random_bundle(&params, &base.poset(), "specseq").unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // these hold over any base, admissible or not
    #[test]
    fn bicomplex_and_phi_over_any_base(seed in any::<u64>(), which in 0usize..12, chain in any::<bool>()) {
        let base = if chain { BaseSelector::Chain(3 + which % 2) } else { CORPUS_BASES[which % CORPUS_BASES.len()] };
        let xi = bundle(seed, base, which);
        prop_assert_eq!(suite::check_bicomplex(&xi, 4), Ok(()));
        prop_assert_eq!(suite::check_phi(&xi, 4), Ok(()));
    }

    #[test]
    fn admissible_bases_satisfy_the_comparison(seed in any::<u64>(), which in 0usize..12) {
        let xi = bundle(seed, CORPUS_BASES[which % CORPUS_BASES.len()], which);
        prop_assert_eq!(suite::check_quasi_iso(&xi, 3), Ok(()));
        prop_assert_eq!(suite::check_e2_and_abutment(&xi, 3), Ok(()));
        prop_assert_eq!(suite::check_les(&xi, 3, colposet::specseq::LesComplex::Total), Ok(()));
    }

    #[test]
    fn grid_path_count(p in 0usize..6, q in 0usize..6) {
        let paths = grid_paths(p, q);
        prop_assert_eq!(paths.len(), binomial(p + q, p).max(1));
        for path in &paths {
            prop_assert_eq!(path.vertices.len(), p + q);
            prop_assert!(!path.vertices.contains(&(p + 1, q + 1)));
        }
    }
}
