use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::{Poset, PosetError};

/// Label of a subset of `ground` given by a bitmask, e.g. `{1,3}`.
pub(crate) fn subset_label(ground: &[String], mask: usize) -> String {
    let parts: Vec<&str> = (0..ground.len()).filter(|i| mask >> i & 1 == 1).map(|i| ground[i].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

impl Poset {
    /// The Boolean lattice of subsets of `{1, ..., n}`.
    pub fn boolean(n: usize) -> Poset {
        Self::boolean_on((1..=n).map(|i| i.to_string()).collect()).expect("distinct ground labels")
    }

    /// The Boolean lattice of subsets of `ground`; element `i` is the subset with bitmask `i`.
    pub fn boolean_on(ground: Vec<String>) -> Result<Poset, PosetError> {
        let n = ground.len();
        assert!(n < usize::BITS as usize - 1, "ground set too large");
        let size = 1usize << n;
        let labels = (0..size).map(|m| subset_label(&ground, m)).collect();
        let leq = (0..size).map(|a| (0..size).map(|b| a & !b == 0).collect()).collect();
        let mut p = Self::from_order(labels, leq)?;
        p.ground = Some(ground);
        Ok(p)
    }

    /// The chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Poset {
        assert!(n >= 1);
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Self::from_order(labels, leq).expect("a chain has a top")
    }

    /// Componentwise order on pairs, labelled `(p,q)`.
    pub fn product(&self, other: &Poset) -> Poset {
        let (n, m) = (self.len(), other.len());
        let mut labels = Vec::with_capacity(n * m);
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("({a},{b})"));
            }
        }
        let leq = (0..n * m)
            .map(|u| (0..n * m).map(|v| self.leq(u / m, v / m) && other.leq(u % m, v % m)).collect())
            .collect();
        Self::from_order(labels, leq).expect("a product of posets with 1 has a 1")
    }

    /// Bruhat order of the dihedral group of order `2m`, labelled by reduced words in `s`, `t`.
    pub fn bruhat_dihedral(m: usize) -> Poset {
        assert!(m >= 2);
        let m = m as i64;
        // r^a s^b with s r s = r^-1
        let mul = |x: &(i64, u8), y: &(i64, u8)| {
            let a = if x.1 == 0 { x.0 + y.0 } else { x.0 - y.0 };
            (a.rem_euclid(m), x.1 ^ y.1)
        };
        let gens = [(0, 1u8), (1, 1u8)];
        bruhat_order((0, 0), &gens, mul, |_, word| {
            if word.is_empty() {
                "e".to_string()
            } else {
                word.iter().map(|&g| ["s", "t"][g]).collect()
            }
        })
    }

    /// Bruhat order of the symmetric group `S_n`, labelled in one-line notation.
    pub fn bruhat_symmetric(n: usize) -> Poset {
        assert!((1..=9).contains(&n));
        let identity: Vec<u8> = (1..=n as u8).collect();
        let gens: Vec<Vec<u8>> = (0..n.saturating_sub(1))
            .map(|i| {
                let mut g = identity.clone();
                g.swap(i, i + 1);
                g
            })
            .collect();
        let mul = |w: &Vec<u8>, v: &Vec<u8>| v.iter().map(|&i| w[i as usize - 1]).collect::<Vec<u8>>();
        bruhat_order(identity, &gens, mul, |w, _| w.iter().map(|d| d.to_string()).collect())
    }
}

/// Bruhat order of the finite group generated by the involutions `gens`.
///
/// Lengths come from a breadth-first search over right multiplication,
/// reflections are the conjugates of the generators, and `w' < w` is the
/// transitive closure of `w = w't` with `l(w) > l(w')`.
fn bruhat_order<G, M, L>(identity: G, gens: &[G], mul: M, label: L) -> Poset
where
    G: Clone + Eq + Hash,
    M: Fn(&G, &G) -> G,
    L: Fn(&G, &[usize]) -> String,
{
    let mut elements = vec![identity.clone()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<G, usize> = HashMap::from([(identity, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (k, g) in gens.iter().enumerate() {
            let w = mul(&elements[i], g);
            if !index.contains_key(&w) {
                let mut word = words[i].clone();
                word.push(k);
                index.insert(w.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(w);
                words.push(word);
            }
        }
    }
    let length: Vec<usize> = words.iter().map(Vec::len).collect();

    let mut reflections: Vec<G> = gens.to_vec();
    let mut k = 0;
    while k < reflections.len() {
        for g in gens {
            let c = mul(&mul(g, &reflections[k]), g);
            if !reflections.contains(&c) {
                reflections.push(c);
            }
        }
        k += 1;
    }

    let n = elements.len();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
        for t in &reflections {
            let j = index[&mul(&elements[i], t)];
            if length[j] > length[i] {
                row[j] = true;
            }
        }
    }
    // elements are in length order, so closing from the top down suffices
    for i in (0..n).rev() {
        for j in 0..n {
            if i != j && leq[i][j] {
                let above = leq[j].clone();
                for (x, a) in above.into_iter().enumerate() {
                    if a {
                        leq[i][x] = true;
                    }
                }
            }
        }
    }
    let labels = elements.iter().zip(&words).map(|(g, w)| label(g, w)).collect();
    Poset::from_order(labels, leq).expect("a finite Coxeter group has a longest element")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_sizes(p: &Poset) -> Vec<usize> {
        let mut sizes = Vec::new();
        for x in 0..p.len() {
            let r = p.interval(x).longest_chain_below_top();
            if sizes.len() <= r {
                sizes.resize(r + 1, 0);
            }
            sizes[r] += 1;
        }
        sizes
    }

    #[test]
    fn boolean_lattices() {
        assert_eq!(Poset::boolean(0).len(), 1);
        let b2 = Poset::boolean(2);
        assert_eq!((b2.len(), b2.cover_count()), (4, 4));
        let b3 = Poset::boolean(3);
        assert_eq!((b3.len(), b3.cover_count()), (8, 12));
        assert_eq!(b3.label(5), "{1,3}");
        assert_eq!(b3.top(), 7);
        assert_eq!(b3.bottom(), Some(0));
    }

    #[test]
    fn chains() {
        assert!(Poset::chain(2).find_isomorphism(&Poset::boolean(1)).is_some());
        assert_eq!(Poset::chain(4).longest_chain_below_top(), 3);
    }

    #[test]
    fn dihedral() {
        let d2 = Poset::bruhat_dihedral(2);
        assert!(d2.find_isomorphism(&Poset::boolean(2)).is_some());
        for m in 3..=6 {
            let d = Poset::bruhat_dihedral(m);
            assert_eq!(d.len(), 2 * m);
            assert_eq!(rank_sizes(&d), [vec![1], vec![2; m - 1], vec![1]].concat());
            // every element of length k lies below every element of length k + 1
            assert_eq!(d.cover_count(), 2 + 4 * (m - 2) + 2);
        }
    }

    #[test]
    fn symmetric() {
        let s3 = Poset::bruhat_symmetric(3);
        assert_eq!(s3.len(), 6);
        assert_eq!(rank_sizes(&s3), vec![1, 2, 2, 1]);
        assert_eq!(s3.label(s3.top()), "321");
        let s4 = Poset::bruhat_symmetric(4);
        assert_eq!(rank_sizes(&s4), vec![1, 3, 5, 6, 5, 3, 1]);
        assert_eq!(s4.label(s4.top()), "4321");
        assert!(s4.lt(s4.index_of("1234").unwrap(), s4.index_of("2143").unwrap()));
        assert!(!s4.leq(s4.index_of("2143").unwrap(), s4.index_of("1423").unwrap()));
    }

    #[test]
    fn products() {
        let b1 = Poset::boolean(1);
        assert!(b1.product(&b1).find_isomorphism(&Poset::boolean(2)).is_some());
        assert!(Poset::boolean(2).product(&b1).find_isomorphism(&Poset::boolean(3)).is_some());
        let p = Poset::bruhat_dihedral(3);
        assert!(p.product(&Poset::chain(1)).find_isomorphism(&p).is_some());
        assert!(Poset::chain(4).find_isomorphism(&Poset::boolean(2)).is_none());
    }
}
