use colposet::coloured::c_complex;
use colposet::linalg::{complex_homology, integer_determinant, smith_normal_form, CoeffRing, ExactMatrix, FreeChainComplex};
use colposet_testkit::{random_coloured_poset, GenParams};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn build(ring: CoeffRing, rows: &[Vec<i64>]) -> ExactMatrix {
    ExactMatrix::from_rows(ring, rows, rows[0].len()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(rows in small_matrix(6)) {
        for ring in [CoeffRing::Rationals, CoeffRing::Prime(2), CoeffRing::Prime(5)] {
            let m = build(ring, &rows);
            let k = m.kernel_basis().unwrap();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }
    }

    #[test]
    fn smith_form_is_a_factorisation(rows in small_matrix(5)) {
        let m = build(CoeffRing::Integers, &rows);
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(integer_determinant(&s.u).unwrap().abs(), BigInt::from(1));
        prop_assert_eq!(integer_determinant(&s.v).unwrap().abs(), BigInt::from(1));
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|x| x.is_positive()));
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert_eq!(f.len(), m.rank());
    }

    #[test]
    fn complexes_with_nonzero_composite_are_rejected(a in small_matrix(4), b_cols in 1usize..4, seed in any::<u64>()) {
        let ring = CoeffRing::Rationals;
        let a = build(ring, &a);
        let n = a.cols();
        let b_rows: Vec<Vec<i64>> = (0..n).map(|i| (0..b_cols).map(|j| ((seed >> ((i * 7 + j) % 60)) & 3) as i64 - 1).collect()).collect();
        let b = build(ring, &b_rows);
        let dims = vec![a.rows(), n, b_cols];
        let ok = FreeChainComplex::bounded(ring, dims, vec![a.clone(), b.clone()]).is_ok();
        prop_assert_eq!(ok, a.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn integer_free_rank_matches_rational_rank(seed in any::<u64>()) {
        let params = GenParams::new(seed, 6, 3, CoeffRing::Integers).unwrap();
        let cp = random_coloured_poset(&params, "linalg").unwrap();
        let c = c_complex(&cp);
        let top = c.homology_top().unwrap();
        let z = complex_homology(&c, 0..=top).unwrap();
        let q = complex_homology(&c.change_ring(CoeffRing::Rationals).unwrap(), 0..=top).unwrap();
        prop_assert_eq!(z.ranks(), q.ranks());
    }
}
