use std::collections::BTreeMap;

use colposet::khovanov::{
    fixed_crossing_complex, fixed_crossing_homology, fixed_crossing_spectral_sequences, parse_pd, unnormalised_homology,
    LinkDiagram,
};
use colposet::linalg::CoeffRing;
use proptest::prelude::*;
use proptest::sample::subsequence;

const DIAGRAMS: [&str; 5] = [
    "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]",
    "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]",
    "PD[X[4,1,3,2],X[2,3,1,4]]",
    "PD[X[1,4,2,5],X[3,8,4,1],X[5,2,6,3],X[6,8,7,7]]",
    "PD[X[1,6,2,7],X[3,8,4,9],X[5,10,6,1],X[7,2,8,3],X[9,4,10,5]]",
];

fn diagram(which: usize) -> LinkDiagram {
    parse_pd(DIAGRAMS[which % DIAGRAMS.len()]).unwrap()
}

fn ring(f2: bool) -> CoeffRing {
    if f2 {
        CoeffRing::Prime(2)
    } else {
        CoeffRing::Rationals
    }
}

fn collapse(t: &BTreeMap<(usize, usize, i64), usize>, f: impl Fn(usize, usize) -> i64) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for (&(p, h, j), &r) in t {
        *out.entry((f(p, h), j)).or_default() += r;
    }
    out
}

/// A diagram, a permutation of its crossings and a subset of them.
fn setup() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>, bool)> {
    (0..DIAGRAMS.len(), any::<bool>()).prop_flat_map(|(which, f2)| {
        let n = diagram(which).crossing_count();
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (Just(which), perm, subsequence((0..n).collect::<Vec<_>>(), 0..=n), Just(f2))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fixed_homology_ignores_crossing_order((which, perm, fixed, f2) in setup()) {
        let d = diagram(which);
        let e = d.reordered(&perm);
        // new crossing i is old crossing perm[i]
        let mut moved: Vec<usize> = fixed.iter().map(|&c| perm.iter().position(|&x| x == c).unwrap()).collect();
        moved.sort_unstable();
        prop_assert_eq!(fixed_crossing_homology(&d, &fixed, ring(f2)).unwrap(), fixed_crossing_homology(&e, &moved, ring(f2)).unwrap());
    }

    #[test]
    fn differentials_square_to_zero((which, _perm, fixed, f2) in setup()) {
        let t = fixed_crossing_complex(&diagram(which), &fixed, ring(f2)).unwrap();
        for c in t.rows.values() {
            for n in 2..c.dims().len() {
                if let (Some(a), Some(b)) = (c.differential(n - 1), c.differential(n)) {
                    prop_assert!(a.mul(b).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn spectral_sequence_converges((which, _perm, fixed, f2) in setup()) {
        prop_assume!(!fixed.is_empty());
        for r in fixed_crossing_spectral_sequences(&diagram(which), &fixed, ring(f2)).unwrap() {
            prop_assert!(r.e2_matches, "q-degree {}", r.q_degree);
            prop_assert!(r.converges, "q-degree {}", r.q_degree);
        }
    }

    #[test]
    fn extreme_subsets_are_the_whole_cube(which in 0..DIAGRAMS.len(), f2 in any::<bool>()) {
        let d = diagram(which);
        let kh = unnormalised_homology(&d, ring(f2)).unwrap().ranks();
        let none = fixed_crossing_homology(&d, &[], ring(f2)).unwrap();
        prop_assert!(none.keys().all(|&(_, h, _)| h == 0));
        prop_assert_eq!(collapse(&none, |p, _| p as i64), kh.clone());
        let all: Vec<usize> = (0..d.crossing_count()).collect();
        let full = fixed_crossing_homology(&d, &all, ring(f2)).unwrap();
        prop_assert!(full.keys().all(|&(p, _, _)| p == 0));
        prop_assert_eq!(collapse(&full, |_, h| h as i64), kh);
    }
}
