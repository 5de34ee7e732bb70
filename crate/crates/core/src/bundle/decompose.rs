use std::collections::HashMap;

use crate::coloured::{ColouredPoset, ColouredPosetMorphism};
use crate::poset::Poset;

use super::{Bundle, BundleError};

/// Splits a coloured Boolean lattice on `X` into a bundle over `B(X \ A)`.
///
/// The fibre over `Y` is `{Y u Z | Z in B(A)}` with the restricted colouring;
/// over `Y < Y'` the poset map is `Y u Z -> Y' u Z` and `tau` is the colouring
/// map between them. Fibre element `i` corresponds to the `i`-th subset of `A`
/// in bitmask order.
pub fn boolean_decompose(cp: &ColouredPoset, a: &[String]) -> Result<Bundle, BundleError> {
    let ground = cp.poset().ground().ok_or(BundleError::NotBoolean)?;
    let mut a_mask = 0usize;
    for label in a {
        let i = ground.iter().position(|g| g == label).ok_or_else(|| BundleError::NotInGround(label.clone()))?;
        a_mask |= 1 << i;
    }
    let a_bits: Vec<usize> = (0..ground.len()).filter(|i| a_mask >> i & 1 == 1).collect();
    let free_bits: Vec<usize> = (0..ground.len()).filter(|i| a_mask >> i & 1 == 0).collect();
    let spread = |bits: &[usize], m: usize| {
        bits.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).fold(0usize, |acc, (_, &b)| acc | 1 << b)
    };

    let base = Poset::boolean_on(free_bits.iter().map(|&i| ground[i].clone()).collect())?;
    let fibre_members = |y: usize| -> Vec<usize> {
        let y_set = spread(&free_bits, y);
        (0..1usize << a_bits.len()).map(|z| y_set | spread(&a_bits, z)).collect()
    };
    let fibres = (0..base.len())
        .map(|y| cp.restrict(&fibre_members(y)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut covers = HashMap::new();
    for (y, y2) in base.covers() {
        let (src, dst) = (fibre_members(y), fibre_members(y2));
        let f: Vec<usize> = (0..src.len()).collect();
        let tau = src.iter().zip(&dst).map(|(&u, &v)| cp.map(u, v).clone()).collect();
        covers.insert((y, y2), ColouredPosetMorphism { f, tau });
    }
    Bundle::new(base, fibres, covers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CoeffRing, ExactMatrix, Scalar};

    /// A Boolean lattice coloured by `R` with cover maps scaled by 1, 2, 3, ... along each ground element.
    fn scaled_boolean(n: usize) -> ColouredPoset {
        let q = CoeffRing::Rationals;
        let p = Poset::boolean(n);
        let covers = p
            .covers()
            .map(|(x, y)| {
                let bit = (x ^ y).trailing_zeros() as i64;
                ((x, y), ExactMatrix::identity(q, 1).scaled(&Scalar::Int(bit + 1)))
            })
            .collect();
        ColouredPoset::new(p, q, vec![1; 1 << n], covers).unwrap()
    }

    #[test]
    fn extremes() {
        let cp = scaled_boolean(2);
        let none = boolean_decompose(&cp, &[]).unwrap();
        assert_eq!(none.base().len(), 4);
        assert!(none.fibres().iter().all(|f| f.poset().len() == 1));
        let all = boolean_decompose(&cp, &["1".into(), "2".into()]).unwrap();
        assert_eq!(all.base().len(), 1);
        assert_eq!(all.fibre(0).poset().len(), 4);
        assert!(matches!(boolean_decompose(&cp, &["9".into()]), Err(BundleError::NotInGround(_))));
    }

    #[test]
    fn total_reassembles_the_lattice() {
        let cp = scaled_boolean(3);
        for a in [vec!["2".to_string()], vec!["1".into(), "3".into()]] {
            let xi = boolean_decompose(&cp, &a).unwrap();
            let t = xi.total();
            let e = t.total.poset();
            // (Y, Y u Z) corresponds to the subset labelled by its second coordinate
            let to_cp: Vec<usize> = (0..e.len())
                .map(|i| {
                    let (x, y) = t.member(i);
                    cp.poset().index_of(xi.fibre(x).poset().label(y)).unwrap()
                })
                .collect();
            for u in 0..e.len() {
                for v in 0..e.len() {
                    assert_eq!(e.leq(u, v), cp.poset().leq(to_cp[u], to_cp[v]));
                    if e.leq(u, v) {
                        assert_eq!(t.total.map(u, v), cp.map(to_cp[u], to_cp[v]));
                    }
                }
            }
        }
    }
}
