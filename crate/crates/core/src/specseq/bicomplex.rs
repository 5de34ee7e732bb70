//! The bicomplex `K_{p,q} = C_p(B, S_q)` of a bundle and its total complex.

use std::collections::{BTreeMap, HashMap};

use crate::bundle::Bundle;
use crate::coloured::SequenceBasis;
use crate::linalg::{CoeffRing, ExactMatrix, FreeChainComplex, Scalar, SparseVec};

use super::filtered::FilteredComplex;
use super::SpecSeqError;

/// A generator `x_1 < ... < x_p` in `B \ 1` with `y_1 <= ... <= y_q` in `E_{x_1} \ 1`.
pub type Generator = (Vec<usize>, Vec<usize>);

/// The basis of one block `K_{p,q}`.
#[derive(Clone, Debug, Default)]
pub struct BlockBasis {
    gens: Vec<Generator>,
    offsets: Vec<usize>,
    index: HashMap<Generator, usize>,
    dim: usize,
}

impl BlockBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Blocks as `(generator, offset)`.
    pub fn blocks(&self) -> impl Iterator<Item = (&Generator, usize)> {
        self.gens.iter().zip(self.offsets.iter().copied())
    }

    pub fn offset(&self, g: &Generator) -> Option<usize> {
        self.index.get(g).map(|&i| self.offsets[i])
    }
}

/// The bicomplex of a bundle, truncated at `q <= q_max`.
///
/// With `strict_fibres` the fibre sequences have no repeats, giving the
/// smaller bicomplex `C_p(B, C_q)`; maps then drop sequences that acquire
/// a repeat.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    ring: CoeffRing,
    p_max: usize,
    q_max: usize,
    strict_fibres: bool,
    blocks: BTreeMap<(usize, usize), BlockBasis>,
    dh: BTreeMap<(usize, usize), ExactMatrix>,
    dv: BTreeMap<(usize, usize), ExactMatrix>,
}

/// Base element `x_1`, or the top when the base sequence is empty.
pub(crate) fn first_base(xi: &Bundle, xs: &[usize]) -> usize {
    xs.first().copied().unwrap_or(xi.base().top())
}

/// Fibre element `y_1`, or the top of the fibre when the fibre sequence is empty.
pub(crate) fn first_fibre(xi: &Bundle, x1: usize, ys: &[usize]) -> usize {
    ys.first().copied().unwrap_or(xi.fibre(x1).poset().top())
}

fn sign(ring: CoeffRing, negative: bool) -> Scalar {
    ring.from_i64(if negative { -1 } else { 1 })
}

impl Bicomplex {
    pub fn new(xi: &Bundle, q_max: usize, strict_fibres: bool) -> Result<Bicomplex, SpecSeqError> {
        let base = xi.base();
        let p_max = base.longest_chain_below_top();
        let mut blocks = BTreeMap::new();
        for p in 0..=p_max {
            let base_seqs = crate::coloured::chains_sequences(base, p, true);
            for q in 0..=q_max {
                let mut b = BlockBasis::default();
                for xs in &base_seqs {
                    let x1 = first_base(xi, xs);
                    let fibre = xi.fibre(x1);
                    let fb = SequenceBasis::new(fibre, q, strict_fibres);
                    for ys in fb.sequences() {
                        let g = (xs.clone(), ys.clone());
                        b.offsets.push(b.dim);
                        b.index.insert(g.clone(), b.gens.len());
                        b.dim += fibre.dim(first_fibre(xi, x1, ys));
                        b.gens.push(g);
                    }
                }
                blocks.insert((p, q), b);
            }
        }
        let mut k = Bicomplex {
            ring: xi.ring(),
            p_max,
            q_max,
            strict_fibres,
            blocks,
            dh: BTreeMap::new(),
            dv: BTreeMap::new(),
        };
        for p in 0..=p_max {
            for q in 0..=q_max {
                if p > 0 {
                    let m = k.horizontal(xi, p, q);
                    k.dh.insert((p, q), m);
                }
                if q > 0 {
                    let m = k.vertical(xi, p, q);
                    k.dv.insert((p, q), m);
                }
            }
        }
        k.check_identities()?;
        Ok(k)
    }

    /// `d^h(l x y) = tau(l) x_2..x_p f(y) - sum_{i>=2} (-1)^i l x_1..^x_i..x_p y`.
    fn horizontal(&self, xi: &Bundle, p: usize, q: usize) -> ExactMatrix {
        let ring = self.ring;
        let (src, dst) = (&self.blocks[&(p, q)], &self.blocks[&(p - 1, q)]);
        let mut columns = Vec::with_capacity(src.dim);
        for ((xs, ys), _) in src.blocks() {
            let x1 = xs[0];
            let x2 = xs.get(1).copied().unwrap_or(xi.base().top());
            let m = xi.morphism(x1, x2);
            let y1 = first_fibre(xi, x1, ys);
            let pushed: Generator = (xs[1..].to_vec(), ys.iter().map(|&y| m.f[y]).collect());
            let head = dst.offset(&pushed);
            let faces: Vec<(usize, Scalar)> = (2..=p)
                .map(|i| {
                    let mut face = xs.clone();
                    face.remove(i - 1);
                    (dst.offset(&(face, ys.clone())).expect("face is a generator"), sign(ring, i % 2 == 0))
                })
                .collect();
            for a in 0..xi.fibre(x1).dim(y1) {
                let mut col = match head {
                    Some(off) => m.tau[y1].column(a).shifted(off),
                    None => SparseVec::new(),
                };
                for (off, s) in &faces {
                    col.add_at(ring, off + a, s);
                }
                columns.push(col);
            }
        }
        ExactMatrix::from_columns(ring, dst.dim, columns)
    }

    /// `d^v(l x y) = (-1)^{p+q} (F(y_1 <= y_2)(l) x y_2..y_q - sum_{j>=2} (-1)^j l x y_1..^y_j..y_q)`.
    fn vertical(&self, xi: &Bundle, p: usize, q: usize) -> ExactMatrix {
        let ring = self.ring;
        let (src, dst) = (&self.blocks[&(p, q)], &self.blocks[&(p, q - 1)]);
        let overall = (p + q) % 2 == 1;
        let mut columns = Vec::with_capacity(src.dim);
        for ((xs, ys), _) in src.blocks() {
            let x1 = first_base(xi, xs);
            let fibre = xi.fibre(x1);
            let y1 = ys[0];
            let y2 = ys.get(1).copied().unwrap_or(fibre.poset().top());
            let colour = fibre.map(y1, y2);
            let head = dst.offset(&(xs.clone(), ys[1..].to_vec())).expect("face is a generator");
            let faces: Vec<(usize, Scalar)> = (2..=q)
                .map(|j| {
                    let mut face = ys.clone();
                    face.remove(j - 1);
                    let off = dst.offset(&(xs.clone(), face)).expect("face is a generator");
                    (off, sign(ring, (j % 2 == 0) != overall))
                })
                .collect();
            for a in 0..fibre.dim(y1) {
                let mut col = colour.column(a).shifted(head);
                if overall {
                    col = col.scaled(ring, &ring.from_i64(-1));
                }
                for (off, s) in &faces {
                    col.add_at(ring, off + a, s);
                }
                columns.push(col);
            }
        }
        ExactMatrix::from_columns(ring, dst.dim, columns)
    }

    fn check_identities(&self) -> Result<(), SpecSeqError> {
        for p in 0..=self.p_max {
            for q in 0..=self.q_max {
                if p >= 2 && !self.dh[&(p - 1, q)].mul(&self.dh[&(p, q)])?.is_zero() {
                    return Err(SpecSeqError::Identity { which: "d^h d^h", p, q });
                }
                if q >= 2 && !self.dv[&(p, q - 1)].mul(&self.dv[&(p, q)])?.is_zero() {
                    return Err(SpecSeqError::Identity { which: "d^v d^v", p, q });
                }
                if p >= 1 && q >= 1 {
                    let a = self.dv[&(p - 1, q)].mul(&self.dh[&(p, q)])?;
                    let b = self.dh[&(p, q - 1)].mul(&self.dv[&(p, q)])?;
                    if !a.add(&b)?.is_zero() {
                        return Err(SpecSeqError::Identity { which: "d^v d^h + d^h d^v", p, q });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    /// Longest strict chain in `B \ 1`; blocks exist for `p <= p_max`.
    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn strict_fibres(&self) -> bool {
        self.strict_fibres
    }

    pub fn block(&self, p: usize, q: usize) -> Option<&BlockBasis> {
        self.blocks.get(&(p, q))
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.blocks.get(&(p, q)).map_or(0, BlockBasis::dim)
    }

    /// `d^h: K_{p,q} -> K_{p-1,q}`.
    pub fn dh(&self, p: usize, q: usize) -> Option<&ExactMatrix> {
        self.dh.get(&(p, q))
    }

    /// `d^v: K_{p,q} -> K_{p,q-1}`.
    pub fn dv(&self, p: usize, q: usize) -> Option<&ExactMatrix> {
        self.dv.get(&(p, q))
    }

    /// Offset of block `(p, n - p)` inside `T_n`; blocks are stacked by increasing `p`.
    pub fn total_offset(&self, p: usize, n: usize) -> usize {
        (0..p).map(|s| self.dim(s, n - s)).sum()
    }

    /// `T_n = sum_{p+q=n} K_{p,q}` for `n <= n_max`, with `d = d^h + d^v`,
    /// filtered by `p`.
    pub fn total_complex(&self, n_max: usize) -> Result<FilteredComplex, SpecSeqError> {
        if n_max > self.q_max {
            return Err(SpecSeqError::InsufficientQ { n_max, q_max: self.q_max });
        }
        let ps = |n: usize| 0..=n.min(self.p_max);
        let dims: Vec<usize> = (0..=n_max).map(|n| ps(n).map(|p| self.dim(p, n - p)).sum()).collect();
        let mut diffs = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut columns = Vec::with_capacity(dims[n]);
            for p in ps(n) {
                let q = n - p;
                let h = (p > 0).then(|| (&self.dh[&(p, q)], self.total_offset(p - 1, n - 1)));
                let v = (q > 0).then(|| (&self.dv[&(p, q)], self.total_offset(p, n - 1)));
                for j in 0..self.dim(p, q) {
                    let mut col = SparseVec::new();
                    for (m, off) in h.iter().chain(v.iter()) {
                        col.axpy(self.ring, &Scalar::ONE, &m.column(j).shifted(*off));
                    }
                    columns.push(col);
                }
            }
            diffs.push(ExactMatrix::from_columns(self.ring, dims[n - 1], columns));
        }
        let complex = FreeChainComplex::truncated(self.ring, dims, diffs)?;
        let prefix = (0..=n_max)
            .map(|n| (0..=self.p_max).map(|s| (0..=s.min(n)).map(|p| self.dim(p, n - p)).sum()).collect())
            .collect();
        Ok(FilteredComplex::new(complex, prefix)?)
    }
}
