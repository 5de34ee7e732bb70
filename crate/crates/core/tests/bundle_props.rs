use colposet::bundle::{boolean_decompose, fibre_homology_colouring, Bundle};
use colposet::linalg::{CoeffRing, ExactMatrix};
use colposet::poset::Poset;
use colposet_testkit::suite::CORPUS_BASES;
use colposet_testkit::{random_bundle, random_coloured_poset, random_colouring_on, GenParams};
use proptest::prelude::*;

fn bundle(seed: u64, which: usize) -> Bundle {
    let base = CORPUS_BASES[which % CORPUS_BASES.len()];
    let ring = [CoeffRing::Rationals, CoeffRing::Prime(2)][which % 2];
    let params = GenParams::new(seed, 5, 2, ring).unwrap();
    random_bundle(&params, &base.poset(), "bundle").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_order_preserving_and_fibrewise_bijective(seed in any::<u64>(), which in 0usize..12) {
        let xi = bundle(seed, which);
        let t = xi.total();
        let e = t.total.poset();
        for (u, v) in e.covers() {
            prop_assert!(xi.base().leq(t.projection(u), t.projection(v)));
        }
        for x in 0..xi.base().len() {
            let mut ys: Vec<usize> = (0..e.len()).filter(|&z| t.projection(z) == x).map(|z| t.member(z).1).collect();
            ys.sort_unstable();
            prop_assert_eq!(ys, (0..xi.fibre(x).poset().len()).collect::<Vec<_>>());
            for y in 0..xi.fibre(x).poset().len() {
                prop_assert_eq!(t.member(t.element(x, y)), (x, y));
            }
        }
    }

    #[test]
    fn restrictions_partition_the_total(seed in any::<u64>(), which in 0usize..12) {
        let xi = bundle(seed, which);
        let base = xi.base();
        let n = xi.total().total.poset().len();
        for x in base.coatoms() {
            let lower = xi.restrict(&base.below(x)).unwrap().total().total.poset().len();
            let upper = xi.restrict(&base.not_below(x)).unwrap().total().total.poset().len();
            prop_assert_eq!(lower + upper, n);
        }
    }

    #[test]
    fn decomposing_a_boolean_colouring_recovers_it(seed in any::<u64>(), n in 1usize..4, mask in 1u8..8) {
        let ground: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let a: Vec<String> = ground.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, g)| g.clone()).collect();
        prop_assume!(!a.is_empty() && a.len() < n);
        let params = GenParams::new(seed, 1, 2, CoeffRing::Rationals).unwrap();
        let cp = random_colouring_on(&params, &Poset::boolean(n), "decompose").unwrap();
        let xi = boolean_decompose(&cp, &a).unwrap();
        let t = xi.total();
        let e = &t.total;
        prop_assert!(e.poset().find_isomorphism(cp.poset()).is_some());
        // element (Y, Z) of the total is the subset Y u Z of the ground set
        let a_bits: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let free_bits: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        let spread = |bits: &[usize], m: usize| {
            bits.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).fold(0usize, |acc, (_, &b)| acc | 1 << b)
        };
        let to_cp: Vec<usize> = (0..e.poset().len())
            .map(|z| {
                let (y, i) = t.member(z);
                spread(&free_bits, y) | spread(&a_bits, i)
            })
            .collect();
        let mut seen = to_cp.clone();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), cp.poset().len());
        for u in 0..e.poset().len() {
            prop_assert_eq!(e.dim(u), cp.dim(to_cp[u]));
            for v in 0..e.poset().len() {
                prop_assert_eq!(e.poset().leq(u, v), cp.poset().leq(to_cp[u], to_cp[v]));
                if e.poset().leq(u, v) {
                    prop_assert_eq!(e.map(u, v), cp.map(to_cp[u], to_cp[v]));
                }
            }
        }
    }

    #[test]
    fn product_bundles_have_constant_fibre_homology(seed in any::<u64>(), q in 0usize..3, which in 0usize..6) {
        let params = GenParams::new(seed, 5, 2, CoeffRing::Rationals).unwrap();
        let fibre = random_coloured_poset(&params, "fibre").unwrap();
        let xi = Bundle::product(CORPUS_BASES[which].poset(), fibre);
        let h = fibre_homology_colouring(&xi, q).unwrap();
        let d = h.dim(0);
        prop_assert!(h.dims().iter().all(|&x| x == d));
        for (x, y) in h.poset().covers() {
            prop_assert_eq!(h.map(x, y), &ExactMatrix::identity(CoeffRing::Rationals, d));
        }
    }
}
