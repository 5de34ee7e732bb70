//! The comparison map `phi : T_*(E, F) -> S_*(E, F)` built from grid paths.

use std::collections::BTreeMap;

use crate::bundle::{Bundle, TotalColouredPoset};
use crate::coloured::{sequence_differential, ColouredPoset, SequenceBasis};
use crate::linalg::{CoeffRing, ExactMatrix, FreeChainComplex, Scalar, SparseVec};

use super::bicomplex::{first_base, first_fibre, Bicomplex, Generator};
use super::SpecSeqError;

/// `alpha(q) = 1` when `q = 1, 2 mod 4`, so `(-1)^alpha(q) = (-1)^(1+2+..+q)`.
pub fn alpha(q: usize) -> usize {
    usize::from(matches!(q % 4, 1 | 2))
}

/// A monotone path in the grid with vertices `(i, j)`, both 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPath {
    pub vertices: Vec<(usize, usize)>,
}

impl GridPath {
    /// Number of squares `(i, j)`, `1 <= i <= p`, `1 <= j <= q`, below and right of the path:
    /// the path leaves column `i` at a row above `j`, or never leaves it.
    pub fn lower_right_squares(&self, p: usize, q: usize) -> usize {
        let mut count = 0;
        for i in 1..=p {
            let exit_row = self.vertices.windows(2).find(|w| w[0].0 == i && w[1].0 == i + 1).map(|w| w[0].1);
            count += match exit_row {
                Some(row) => (1..=q).filter(|&j| row > j).count(),
                None => q,
            };
        }
        count
    }
}

/// Paths of `p + q` vertices from `(1, 1)` through the `(p+1) x (q+1)` grid,
/// avoiding the corner `(p+1, q+1)`; they end at `(p+1, q)` or `(p, q+1)`.
pub fn grid_paths(p: usize, q: usize) -> Vec<GridPath> {
    let mut out = Vec::new();
    if p + q == 0 {
        return vec![GridPath { vertices: Vec::new() }];
    }
    fn go(p: usize, q: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<GridPath>) {
        if cur.len() == p + q {
            out.push(GridPath { vertices: cur.clone() });
            return;
        }
        let (i, j) = *cur.last().expect("path starts at (1, 1)");
        for next in [(i + 1, j), (i, j + 1)] {
            if next.0 <= p + 1 && next.1 <= q + 1 && next != (p + 1, q + 1) {
                cur.push(next);
                go(p, q, cur, out);
                cur.pop();
            }
        }
    }
    go(p, q, &mut vec![(1, 1)], &mut out);
    out
}

/// `phi(l x y) = (-1)^alpha(q) sum_z (-1)^m(z) l z` as signed sequences in the total poset.
pub fn phi_terms(xi: &Bundle, total: &TotalColouredPoset, (xs, ys): &Generator) -> Vec<(Vec<usize>, bool)> {
    let (p, q) = (xs.len(), ys.len());
    let top = xi.base().top();
    let x1 = first_base(xi, xs);
    let column_base = |i: usize| if i <= p { xs[i - 1] } else { top };
    let entry = |i: usize, j: usize| {
        let xi_ = column_base(i);
        let y = if j <= q { xi.morphism(x1, xi_).f[ys[j - 1]] } else { xi.fibre(xi_).poset().top() };
        total.element(xi_, y)
    };
    grid_paths(p, q)
        .into_iter()
        .map(|path| {
            let z = path.vertices.iter().map(|&(i, j)| entry(i, j)).collect();
            (z, (alpha(q) + path.lower_right_squares(p, q)) % 2 == 1)
        })
        .collect()
}

/// Chains as sums of `sequence -> vector in F(z_1)`.
type SparseChain = BTreeMap<Vec<usize>, SparseVec>;

fn add_term(ring: CoeffRing, chain: &mut SparseChain, seq: Vec<usize>, c: &Scalar, v: &SparseVec) {
    let slot = chain.entry(seq).or_default();
    slot.axpy(ring, c, v);
}

fn prune(chain: &mut SparseChain) {
    chain.retain(|_, v| !v.is_zero());
}

/// The differential of `S_*` applied to a sparse chain.
fn s_differential(cp: &ColouredPoset, chain: &SparseChain) -> SparseChain {
    let ring = cp.ring();
    let top = cp.poset().top();
    let mut out = SparseChain::new();
    for (seq, v) in chain {
        let z2 = seq.get(1).copied().unwrap_or(top);
        add_term(ring, &mut out, seq[1..].to_vec(), &Scalar::ONE, &cp.map(seq[0], z2).apply(v));
        for i in 2..=seq.len() {
            let mut face = seq.clone();
            face.remove(i - 1);
            add_term(ring, &mut out, face, &ring.from_i64(if i % 2 == 0 { -1 } else { 1 }), v);
        }
    }
    prune(&mut out);
    out
}

/// Locates the blocks of `T_n` so vectors can be split by generator.
struct TotalBlocks {
    /// `(offset in T_n, generator, block dim)` in coordinate order.
    blocks: Vec<(usize, Generator, usize)>,
}

impl TotalBlocks {
    fn new(xi: &Bundle, k: &Bicomplex, n: usize) -> Self {
        let mut blocks = Vec::new();
        for p in 0..=n.min(k.p_max()) {
            let base = k.total_offset(p, n);
            let b = k.block(p, n - p).expect("block in range");
            for (g, off) in b.blocks() {
                let x1 = first_base(xi, &g.0);
                let dim = xi.fibre(x1).dim(first_fibre(xi, x1, &g.1));
                blocks.push((base + off, g.clone(), dim));
            }
        }
        TotalBlocks { blocks }
    }

    fn split(&self, v: &SparseVec) -> Vec<(&Generator, SparseVec)> {
        let mut out = Vec::new();
        for (off, g, dim) in &self.blocks {
            let w = v.window(*off, off + dim);
            if !w.is_zero() {
                out.push((g, w));
            }
        }
        out
    }
}

fn phi_chain(xi: &Bundle, total: &TotalColouredPoset, g: &Generator, v: &SparseVec) -> SparseChain {
    let ring = xi.ring();
    let mut out = SparseChain::new();
    for (z, negative) in phi_terms(xi, total, g) {
        add_term(ring, &mut out, z, &ring.from_i64(if negative { -1 } else { 1 }), v);
    }
    prune(&mut out);
    out
}

/// Checks `phi d_T = d_S phi` on every basis vector of `T_n`, `1 <= n <= n_max`,
/// with chains of `S_*(E)` kept sparse.
pub fn check_phi_chain_map(xi: &Bundle, k: &Bicomplex, n_max: usize) -> Result<(), SpecSeqError> {
    let t = k.total_complex(n_max)?;
    let total = xi.total();
    let e = &total.total;
    for n in 1..=n_max {
        let d = t.complex().differential(n).expect("degree in range");
        let lower = TotalBlocks::new(xi, k, n - 1);
        for (off, g, dim) in TotalBlocks::new(xi, k, n).blocks {
            for a in 0..dim {
                let unit = SparseVec::unit(a);
                let lhs = lower.split(&d.column(off + a)).into_iter().fold(SparseChain::new(), |mut acc, (h, w)| {
                    for (seq, u) in phi_chain(xi, &total, h, &w) {
                        add_term(xi.ring(), &mut acc, seq, &Scalar::ONE, &u);
                    }
                    acc
                });
                let mut lhs = lhs;
                prune(&mut lhs);
                let rhs = s_differential(e, &phi_chain(xi, &total, &g, &unit));
                if lhs != rhs {
                    return Err(SpecSeqError::NotAChainMap { n });
                }
            }
        }
    }
    Ok(())
}

/// The strict-sequence complex `C_*(E)` in degrees `0..=n_max`, with its bases.
pub(crate) fn strict_complex(cp: &ColouredPoset, n_max: usize) -> (Vec<SequenceBasis>, FreeChainComplex) {
    let bases: Vec<SequenceBasis> = (0..=n_max).map(|k| SequenceBasis::new(cp, k, true)).collect();
    let dims = bases.iter().map(SequenceBasis::dim).collect();
    let diffs = bases.windows(2).map(|w| sequence_differential(cp, &w[1], &w[0])).collect();
    let c = FreeChainComplex::truncated(cp.ring(), dims, diffs).expect("sequence differentials square to zero");
    (bases, c)
}

/// Matrices of `phi` into `S_n(E)` for `n <= n_max`, with the bases used.
pub fn phi_matrices(xi: &Bundle, k: &Bicomplex, n_max: usize) -> (Vec<SequenceBasis>, Vec<ExactMatrix>) {
    phi_into(xi, k, n_max, false)
}

/// `phi` followed by the projection onto strict sequences, `T_n -> C_n(E)`.
pub fn normalized_phi_matrices(xi: &Bundle, k: &Bicomplex, n_max: usize) -> (Vec<SequenceBasis>, Vec<ExactMatrix>) {
    phi_into(xi, k, n_max, true)
}

fn phi_into(xi: &Bundle, k: &Bicomplex, n_max: usize, strict: bool) -> (Vec<SequenceBasis>, Vec<ExactMatrix>) {
    let ring = xi.ring();
    let total = xi.total();
    let e = &total.total;
    let bases: Vec<SequenceBasis> = (0..=n_max).map(|n| SequenceBasis::new(e, n, strict)).collect();
    let maps = (0..=n_max)
        .map(|n| {
            let mut columns = Vec::new();
            for (_, g, dim) in TotalBlocks::new(xi, k, n).blocks {
                let terms = phi_terms(xi, &total, &g);
                for a in 0..dim {
                    let mut col = SparseVec::new();
                    for (z, negative) in &terms {
                        if let Some(off) = bases[n].offset(z) {
                            col.add_at(ring, off + a, &ring.from_i64(if *negative { -1 } else { 1 }));
                        }
                    }
                    columns.push(col);
                }
            }
            ExactMatrix::from_columns(ring, bases[n].dim(), columns)
        })
        .collect();
    (bases, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn alpha_values() {
        assert_eq!([alpha(0), alpha(1), alpha(2), alpha(3), alpha(4), alpha(5)], [0, 1, 1, 0, 0, 1]);
        for q in 0..12 {
            assert_eq!(alpha(q) % 2, (q * (q + 1) / 2) % 2);
        }
    }

    #[test]
    fn path_counts_are_binomial() {
        for p in 0..=4 {
            for q in 0..=4 {
                let paths = grid_paths(p, q);
                assert_eq!(paths.len(), binom(p + q, p), "p={p} q={q}");
                // exhaustive check against all monotone words with p+q-1 steps
                for path in &paths {
                    assert_eq!(path.vertices.len(), p + q);
                }
            }
        }
    }

    #[test]
    fn single_square() {
        let paths = grid_paths(1, 1);
        let m: Vec<(Vec<(usize, usize)>, usize)> =
            paths.iter().map(|p| (p.vertices.clone(), p.lower_right_squares(1, 1))).collect();
        assert!(m.contains(&(vec![(1, 1), (2, 1)], 0)));
        assert!(m.contains(&(vec![(1, 1), (1, 2)], 1)));
    }

    #[test]
    fn p_equals_q_equals_one() {
        let q = CoeffRing::Rationals;
        let fibre = ColouredPoset::constant(Poset::boolean(1), q, 1);
        let xi = Bundle::product(Poset::boolean(1), fibre);
        let total = xi.total();
        let (x, y) = (0, 0);
        let terms = phi_terms(&xi, &total, &(vec![x], vec![y]));
        let e = |b: usize, f: usize| total.element(b, f);
        // -(l y f(y) - l y 1_x)
        assert_eq!(terms.len(), 2);
        assert!(terms.contains(&(vec![e(x, y), e(1, y)], true)));
        assert!(terms.contains(&(vec![e(x, y), e(x, 1)], false)));
    }

    #[test]
    fn phi_is_a_chain_map_on_a_product() {
        let q = CoeffRing::Rationals;
        let fibre = ColouredPoset::constant(Poset::boolean(2), q, 2);
        let xi = Bundle::product(Poset::boolean(2), fibre);
        let k = Bicomplex::new(&xi, 4, false).unwrap();
        check_phi_chain_map(&xi, &k, 4).unwrap();
        let t = k.total_complex(4).unwrap();
        let (_, maps) = phi_matrices(&xi, &k, 4);
        let total = xi.total();
        let s = crate::coloured::s_complex(&total.total, 4);
        crate::linalg::ChainMap { maps }.verify(t.complex(), &s).unwrap();
    }
}
