//! Long exact sequences of the pair (whole complex, part over `B \ B(x)`).

use serde::Serialize;

use crate::bundle::Bundle;
use crate::linalg::{CoeffRing, ExactMatrix, FreeChainComplex, HomologyBasis, SparseVec};
use crate::poset::admissible_for;

use super::bicomplex::{first_base, Bicomplex};
use super::phi::strict_complex;
use super::SpecSeqError;

/// Which complex the sequence is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LesComplex {
    /// `T_*(E)`, split by whether `x_1` lies over `B(x)`.
    Total,
    /// Sequences in the total poset, split by whether `z_1` lies over `B(x)`.
    /// Computed on strict sequences, which carry the same homology as `S_*`.
    Sequences,
}

/// Exactness data at one spot `H_n(A)`, `H_n(X)` or `H_n(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesPosition {
    pub term: &'static str,
    pub n: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub complex: LesComplex,
    pub witness: String,
    pub witness_admissible: bool,
    pub n_max: usize,
    pub positions: Vec<LesPosition>,
    /// `(n, dim H_n(Q), dim H_{n-1})` of the complex over `B(x)`.
    pub quotient_shift: Vec<(usize, usize, usize)>,
    pub exact: bool,
    pub quotient_matches: bool,
}

struct Split {
    /// Coordinates of `X_n` in `A`, in order.
    a: Vec<Vec<usize>>,
    /// Coordinates of `X_n` in `Q`, in order.
    q: Vec<Vec<usize>>,
}

/// The part of `v` on `coords` (sorted), renumbered `0..coords.len()`.
fn restrict(ring: CoeffRing, v: &SparseVec, coords: &[usize]) -> SparseVec {
    let entries = v.iter().filter_map(|(i, c)| coords.binary_search(i).ok().map(|k| (k, c.clone()))).collect();
    SparseVec::from_entries(ring, entries)
}

fn embed(ring: CoeffRing, v: &SparseVec, coords: &[usize]) -> SparseVec {
    SparseVec::from_entries(ring, v.iter().map(|(k, c)| (coords[*k], c.clone())).collect())
}

fn sub_differentials(x: &FreeChainComplex, coords: &[Vec<usize>]) -> Vec<ExactMatrix> {
    (0..coords.len())
        .map(|n| match x.differential(n) {
            Some(d) if n > 0 => d.select(&coords[n - 1], &coords[n]),
            _ => ExactMatrix::zeros(x.ring(), 0, coords[n].len()),
        })
        .collect()
}

fn homology_bases(diffs: &[ExactMatrix], top: usize) -> Result<Vec<HomologyBasis>, SpecSeqError> {
    (0..=top).map(|n| Ok(HomologyBasis::from_differentials(&diffs[n], &diffs[n + 1])?)).collect()
}

fn matrix_of(
    x: &FreeChainComplex,
    source: &HomologyBasis,
    target: &HomologyBasis,
    f: impl Fn(&SparseVec) -> SparseVec,
) -> Result<ExactMatrix, SpecSeqError> {
    let cols = source.representatives().iter().map(|r| target.coordinates(&f(r))).collect::<Result<Vec<_>, _>>()?;
    Ok(ExactMatrix::from_columns(x.ring(), target.dim(), cols))
}

/// Builds the long exact sequence of `0 -> A -> X -> Q -> 0` and checks it in degrees `<= n_max`.
fn run(x: &FreeChainComplex, split: &Split, n_max: usize) -> Result<Vec<LesPosition>, SpecSeqError> {
    let da = sub_differentials(x, &split.a);
    let dq = sub_differentials(x, &split.q);
    let top = n_max + 1;
    let ha = homology_bases(&da, top)?;
    let hq = homology_bases(&dq, top)?;
    let hx = (0..=top).map(|n| HomologyBasis::new(x, n)).collect::<Result<Vec<_>, _>>()?;
    let ring = x.ring();
    let mut inc = Vec::new();
    let mut proj = Vec::new();
    let mut conn = Vec::new();
    for n in 0..=top {
        let (a, q) = (&split.a[n], &split.q[n]);
        inc.push(matrix_of(x, &ha[n], &hx[n], |v| embed(ring, v, a))?);
        proj.push(matrix_of(x, &hx[n], &hq[n], |v| restrict(ring, v, q))?);
        conn.push(if n == 0 {
            ExactMatrix::zeros(x.ring(), 0, hq[0].dim())
        } else {
            let d = x.differential(n).expect("degree in range");
            let below = &split.a[n - 1];
            matrix_of(x, &hq[n], &ha[n - 1], |v| restrict(ring, &d.apply(&embed(ring, v, q)), below))?
        });
    }
    let mut out = Vec::new();
    let mut push = |term, n, dim: usize, m_in: &ExactMatrix, m_out: &ExactMatrix| -> Result<(), SpecSeqError> {
        let (rank_in, rank_out) = (m_in.rank(), m_out.rank());
        let composite_zero = m_in.rows() == 0 || m_out.cols() == 0 || m_out.mul(m_in)?.is_zero();
        let exact = composite_zero && rank_in + rank_out == dim;
        out.push(LesPosition { term, n, dim, rank_in, rank_out, exact });
        Ok(())
    };
    for n in 0..=n_max {
        push("A", n, ha[n].dim(), &conn[n + 1], &inc[n])?;
        push("X", n, hx[n].dim(), &inc[n], &proj[n])?;
        push("Q", n, hq[n].dim(), &proj[n], &conn[n])?;
    }
    Ok(out)
}

fn split_by(dims_and_keys: Vec<Vec<(bool, usize)>>) -> Split {
    let mut a = Vec::new();
    let mut q = Vec::new();
    for degree in dims_and_keys {
        let (mut an, mut qn) = (Vec::new(), Vec::new());
        let mut i = 0;
        for (in_a, dim) in degree {
            let target = if in_a { &mut an } else { &mut qn };
            target.extend(i..i + dim);
            i += dim;
        }
        a.push(an);
        q.push(qn);
    }
    Split { a, q }
}

/// Checks the long exact sequence for the coatom `x` of the base in degrees `<= n_max`,
/// and that `H_n(Q)` has the dimension of `H_{n-1}` of the matching complex over `B(x)`.
pub fn les_check(xi: &Bundle, x: usize, n_max: usize, which: LesComplex) -> Result<LesReport, SpecSeqError> {
    if !xi.ring().is_field() {
        return Err(SpecSeqError::RequiresField);
    }
    if n_max == 0 {
        return Err(SpecSeqError::EmptyWindow);
    }
    let base = xi.base();
    if !base.down_covers(base.top()).contains(&x) {
        return Err(SpecSeqError::NotACoatom(base.label(x).to_string()));
    }
    let witness_admissible = admissible_for(base, x).is_some();
    let over_bx = |b: usize| base.leq(b, x);
    let lower = xi.restrict(&base.below(x))?;
    // X needs degrees up to n_max + 2 so every spot up to n_max has both neighbours
    let len = n_max + 2;
    let (complex, split, shifted) = match which {
        LesComplex::Total => {
            let k = Bicomplex::new(xi, len, false)?;
            let t = k.total_complex(len)?;
            let keys = (0..=len)
                .map(|n| {
                    let mut v = Vec::new();
                    for p in 0..=n.min(k.p_max()) {
                        for (g, _) in k.block(p, n - p).expect("block in range").blocks() {
                            let x1 = first_base(xi, &g.0);
                            let y1 = g.1.first().copied().unwrap_or(xi.fibre(x1).poset().top());
                            v.push((!over_bx(x1), xi.fibre(x1).dim(y1)));
                        }
                    }
                    v
                })
                .collect();
            let kl = Bicomplex::new(&lower, n_max, false)?;
            let tl = kl.total_complex(n_max)?;
            (t.complex().clone(), split_by(keys), tl.complex().clone())
        }
        LesComplex::Sequences => {
            let total = xi.total();
            let (bases, c) = strict_complex(&total.total, len);
            let e = &total.total;
            let keys = bases
                .iter()
                .map(|b| {
                    b.sequences()
                        .iter()
                        .map(|z| {
                            let z1 = z.first().copied().unwrap_or(e.poset().top());
                            (!over_bx(total.projection(z1)), e.dim(z1))
                        })
                        .collect()
                })
                .collect();
            let lower_total = lower.total();
            let (_, cl) = strict_complex(&lower_total.total, n_max);
            (c, split_by(keys), cl)
        }
    };
    let positions = run(&complex, &split, n_max)?;
    let exact = positions.iter().all(|p| p.exact);
    let lower_h = crate::linalg::complex_homology(&shifted, 0..=n_max - 1)?;
    let mut quotient_shift = Vec::new();
    for pos in positions.iter().filter(|p| p.term == "Q") {
        let expected = if pos.n == 0 { 0 } else { lower_h.rank(pos.n - 1) };
        quotient_shift.push((pos.n, pos.dim, expected));
    }
    let quotient_matches = quotient_shift.iter().all(|(_, a, b)| a == b);
    Ok(LesReport {
        complex: which,
        witness: base.label(x).to_string(),
        witness_admissible,
        n_max,
        positions,
        quotient_shift,
        exact,
        quotient_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloured::ColouredPoset;
    use crate::linalg::CoeffRing;
    use crate::poset::Poset;

    #[test]
    fn product_over_boolean_one() {
        let fibre = ColouredPoset::constant(Poset::boolean(2), CoeffRing::Rationals, 1);
        let xi = Bundle::product(Poset::boolean(1), fibre);
        for which in [LesComplex::Total, LesComplex::Sequences] {
            let r = les_check(&xi, 0, 3, which).unwrap();
            assert!(r.exact, "{which:?}: {:?}", r.positions);
            assert!(r.quotient_matches, "{which:?}: {:?}", r.quotient_shift);
            assert!(r.witness_admissible);
        }
    }

    #[test]
    fn coatom_required() {
        let fibre = ColouredPoset::constant(Poset::boolean(1), CoeffRing::Rationals, 1);
        let xi = Bundle::product(Poset::boolean(2), fibre);
        assert!(matches!(les_check(&xi, 0, 2, LesComplex::Total), Err(SpecSeqError::NotACoatom(_))));
    }
}
