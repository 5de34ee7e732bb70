//! The chain complexes `S_*` (multi-sequences) and `C_*` (strict sequences).

use std::collections::HashMap;

use crate::linalg::{complex_homology, ExactMatrix, FreeChainComplex, HomologySummary, Scalar};
use crate::poset::Poset;

use super::{ColouredError, ColouredPoset};

/// Truncation degree for `S_*` when the caller has no preference.
pub const DEFAULT_S_DEGREE: usize = 6;

/// Sequences `x_1 <= ... <= x_k` below `1` in lexicographic index order.
pub(crate) fn sequences(poset: &Poset, k: usize, strict: bool) -> Vec<Vec<usize>> {
    let top = poset.top();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(poset: &Poset, top: usize, k: usize, strict: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for y in 0..poset.len() {
            if y == top {
                continue;
            }
            if let Some(&last) = cur.last() {
                if !poset.leq(last, y) || (strict && last == y) {
                    continue;
                }
            }
            cur.push(y);
            go(poset, top, k, strict, cur, out);
            cur.pop();
        }
    }
    go(poset, top, k, strict, &mut cur, &mut out);
    out
}

/// A basis of one degree of `S_*` or `C_*`: a block `F(x_1)` per sequence.
#[derive(Clone, Debug)]
pub struct SequenceBasis {
    seqs: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    dim: usize,
}

impl SequenceBasis {
    /// Degree `k` of `S_*` (or of `C_*` when `strict`).
    pub fn new(cp: &ColouredPoset, k: usize, strict: bool) -> Self {
        let seqs = sequences(cp.poset(), k, strict);
        Self::from_sequences(seqs, |s| cp.dim(s.first().copied().unwrap_or(cp.poset().top())))
    }

    /// A basis with the given sequences; `block_dim` gives the size of each block.
    pub fn from_sequences(seqs: Vec<Vec<usize>>, block_dim: impl Fn(&[usize]) -> usize) -> Self {
        let mut offsets = Vec::with_capacity(seqs.len());
        let mut index = HashMap::with_capacity(seqs.len());
        let mut dim = 0;
        for (i, s) in seqs.iter().enumerate() {
            offsets.push(dim);
            index.insert(s.clone(), i);
            dim += block_dim(s);
        }
        SequenceBasis { seqs, offsets, index, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sequences(&self) -> &[Vec<usize>] {
        &self.seqs
    }

    /// Start of the block of `seq`, if it is a basis sequence.
    pub fn offset(&self, seq: &[usize]) -> Option<usize> {
        self.index.get(seq).map(|&i| self.offsets[i])
    }

    /// Blocks as `(sequence, offset)`.
    pub fn blocks(&self) -> impl Iterator<Item = (&[usize], usize)> {
        self.seqs.iter().map(Vec::as_slice).zip(self.offsets.iter().copied())
    }
}

/// The differential `src -> dst` of `S_*` or `C_*`.
///
/// `d(l x_1...x_k) = F(x_1 <= x_2)(l) x_2...x_k - sum_{i>=2} (-1)^i l x_1..^x_i..x_k`,
/// with `x_{k+1} = 1`.
pub fn sequence_differential(cp: &ColouredPoset, src: &SequenceBasis, dst: &SequenceBasis) -> ExactMatrix {
    let ring = cp.ring();
    let top = cp.poset().top();
    let mut columns = Vec::with_capacity(src.dim());
    for (seq, _) in src.blocks() {
        let x1 = seq[0];
        let x2 = seq.get(1).copied().unwrap_or(top);
        let f = cp.map(x1, x2);
        let head = dst.offset(&seq[1..]).expect("face of a basis sequence");
        let faces: Vec<(usize, Scalar)> = (2..=seq.len())
            .map(|i| {
                let mut face = seq.to_vec();
                face.remove(i - 1);
                let sign = if i % 2 == 0 { -1 } else { 1 };
                (dst.offset(&face).expect("face of a basis sequence"), ring.from_i64(sign))
            })
            .collect();
        for a in 0..cp.dim(x1) {
            let mut col = f.column(a).shifted(head);
            for (off, s) in &faces {
                col.add_at(ring, off + a, s);
            }
            columns.push(col);
        }
    }
    ExactMatrix::from_columns(ring, dst.dim(), columns)
}

fn complex_from_bases(cp: &ColouredPoset, bases: &[SequenceBasis], bounded: bool) -> FreeChainComplex {
    let dims = bases.iter().map(SequenceBasis::dim).collect();
    let diffs = bases.windows(2).map(|w| sequence_differential(cp, &w[1], &w[0])).collect();
    let c = if bounded {
        FreeChainComplex::bounded(cp.ring(), dims, diffs)
    } else {
        FreeChainComplex::truncated(cp.ring(), dims, diffs)
    };
    c.expect("sequence differentials square to zero")
}

/// `S_*` in degrees `0..=k_max`; homology is determined up to `k_max - 1`.
pub fn s_complex(cp: &ColouredPoset, k_max: usize) -> FreeChainComplex {
    let bases: Vec<SequenceBasis> = (0..=k_max).map(|k| SequenceBasis::new(cp, k, false)).collect();
    complex_from_bases(cp, &bases, false)
}

/// `C_*`, which is bounded by the longest chain below `1`.
pub fn c_complex(cp: &ColouredPoset) -> FreeChainComplex {
    let top = cp.poset().longest_chain_below_top();
    let bases: Vec<SequenceBasis> = (0..=top).map(|k| SequenceBasis::new(cp, k, true)).collect();
    complex_from_bases(cp, &bases, true)
}

/// Homology of the coloured poset in every degree where `C_*` is nonzero.
pub fn homology(cp: &ColouredPoset) -> Result<HomologySummary, ColouredError> {
    let c = c_complex(cp);
    let top = c.homology_top().expect("C_* is bounded");
    Ok(complex_homology(&c, 0..=top)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CoeffRing;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn one_element() {
        let cp = ColouredPoset::constant(Poset::boolean(0), CoeffRing::Rationals, 3);
        let s = s_complex(&cp, 3);
        assert_eq!(s.dims(), &[3, 0, 0, 0]);
        assert_eq!(homology(&cp).unwrap().ranks(), vec![3]);
    }

    #[test]
    fn boolean_one() {
        let cp = ColouredPoset::constant(Poset::boolean(1), CoeffRing::Rationals, 1);
        let s = s_complex(&cp, 4);
        assert_eq!(s.dims(), &[1, 1, 1, 1, 1]);
        let c = c_complex(&cp);
        assert_eq!(&c.dims()[..2], &[1, 1]);
        assert!(homology(&cp).unwrap().is_zero());
    }

    #[test]
    fn chain_three_strict_degree() {
        let cp = ColouredPoset::constant(Poset::chain(3), CoeffRing::Prime(2), 1);
        assert_eq!(c_complex(&cp).homology_top(), Some(2));
    }

    #[test]
    fn multisequence_counts() {
        // a chain with n elements below the top has C(n+k-1, k) multi-sequences of length k
        let cp = ColouredPoset::constant(Poset::chain(4), CoeffRing::Rationals, 2);
        let s = s_complex(&cp, 4);
        for k in 1..=4 {
            assert_eq!(s.dim(k), 2 * binom(3 + k - 1, k));
        }
    }

    #[test]
    fn constant_colouring_with_bottom_is_acyclic() {
        for p in [Poset::boolean(2), Poset::bruhat_dihedral(3), Poset::chain(3)] {
            let cp = ColouredPoset::constant(p, CoeffRing::Rationals, 2);
            assert!(homology(&cp).unwrap().is_zero());
            let s = s_complex(&cp, 4);
            assert!(complex_homology(&s, 0..=3).unwrap().is_zero());
        }
    }
}
