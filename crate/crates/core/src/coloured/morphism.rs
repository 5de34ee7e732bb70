use crate::linalg::ExactMatrix;

use super::{ColouredError, ColouredPoset, SequenceBasis};

/// A morphism `(f, tau)` of coloured posets.
///
/// `f` maps elements of the source to elements of the target and
/// `tau[x]: F_1(x) -> F_2(f(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredPosetMorphism {
    pub f: Vec<usize>,
    pub tau: Vec<ExactMatrix>,
}

impl ColouredPosetMorphism {
    pub fn identity(cp: &ColouredPoset) -> Self {
        ColouredPosetMorphism {
            f: (0..cp.poset().len()).collect(),
            tau: cp.dims().iter().map(|&d| ExactMatrix::identity(cp.ring(), d)).collect(),
        }
    }

    /// Checks that `f` preserves order and the top exactly, and that
    /// `tau` is natural along every cover.
    pub fn validate(&self, src: &ColouredPoset, dst: &ColouredPoset) -> Result<(), ColouredError> {
        let (p, q) = (src.poset(), dst.poset());
        let bad = |msg: String| Err(ColouredError::Morphism(msg));
        if self.f.len() != p.len() || self.tau.len() != p.len() {
            return bad(format!("expected data for {} elements", p.len()));
        }
        for x in 0..p.len() {
            let fx = self.f[x];
            if fx >= q.len() {
                return bad(format!("{} is sent outside the target", p.label(x)));
            }
            if (fx == q.top()) != (x == p.top()) {
                return bad(format!("{} maps to {} but only the top may map to the top", p.label(x), q.label(fx)));
            }
            if self.tau[x].shape() != (dst.dim(fx), src.dim(x)) {
                return bad(format!("tau at {} has shape {:?}", p.label(x), self.tau[x].shape()));
            }
        }
        for (x, y) in p.covers() {
            let (fx, fy) = (self.f[x], self.f[y]);
            if !q.leq(fx, fy) {
                return bad(format!("order not preserved on {} < {}", p.label(x), p.label(y)));
            }
            let left = self.tau[y].mul(src.map(x, y))?;
            let right = dst.map(fx, fy).mul(&self.tau[x])?;
            if left != right {
                return bad(format!("naturality fails on {} < {}", p.label(x), p.label(y)));
            }
        }
        Ok(())
    }

    /// `other . self`.
    pub fn then(&self, other: &ColouredPosetMorphism) -> Result<ColouredPosetMorphism, ColouredError> {
        let f = self.f.iter().map(|&y| other.f[y]).collect();
        let tau = self
            .tau
            .iter()
            .zip(&self.f)
            .map(|(t, &y)| other.tau[y].mul(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ColouredPosetMorphism { f, tau })
    }

    /// The induced map on one degree of `S_*` or `C_*`:
    /// `l x_1...x_k -> tau(l) f(x_1)...f(x_k)`, dropping images that are not
    /// basis sequences of `dst_basis` (repeats, when it is strict).
    pub fn chain_map(
        &self,
        src: &ColouredPoset,
        src_basis: &SequenceBasis,
        dst_basis: &SequenceBasis,
    ) -> ExactMatrix {
        let ring = src.ring();
        let top = src.poset().top();
        let mut columns = Vec::with_capacity(src_basis.dim());
        for (seq, _) in src_basis.blocks() {
            let x1 = seq.first().copied().unwrap_or(top);
            let image: Vec<usize> = seq.iter().map(|&x| self.f[x]).collect();
            let target = dst_basis.offset(&image);
            for a in 0..src.dim(x1) {
                columns.push(match target {
                    Some(off) => self.tau[x1].column(a).shifted(off),
                    None => Default::default(),
                });
            }
        }
        ExactMatrix::from_columns(ring, dst_basis.dim(), columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloured::sequence_differential;
    use crate::linalg::CoeffRing;
    use crate::poset::Poset;

    #[test]
    fn identity_is_neutral() {
        let cp = ColouredPoset::constant(Poset::boolean(2), CoeffRing::Rationals, 2);
        let id = ColouredPosetMorphism::identity(&cp);
        id.validate(&cp, &cp).unwrap();
        assert_eq!(id.then(&id).unwrap(), id);
    }

    #[test]
    fn non_top_to_top_is_rejected() {
        let q = CoeffRing::Rationals;
        let b1 = ColouredPoset::constant(Poset::boolean(1), q, 1);
        let m = ColouredPosetMorphism { f: vec![1, 1], tau: vec![ExactMatrix::identity(q, 1); 2] };
        assert!(matches!(m.validate(&b1, &b1), Err(ColouredError::Morphism(_))));
    }

    #[test]
    fn collapse_commutes_with_differentials() {
        // boolean(2) onto boolean(1) sending everything but the top to the bottom
        let q = CoeffRing::Rationals;
        let src = ColouredPoset::constant(Poset::boolean(2), q, 1);
        let dst = ColouredPoset::constant(Poset::boolean(1), q, 1);
        let m = ColouredPosetMorphism { f: vec![0, 0, 0, 1], tau: vec![ExactMatrix::identity(q, 1); 4] };
        m.validate(&src, &dst).unwrap();
        for strict in [false, true] {
            for k in 1..4 {
                let (a1, a0) = (SequenceBasis::new(&src, k, strict), SequenceBasis::new(&src, k - 1, strict));
                let (b1, b0) = (SequenceBasis::new(&dst, k, strict), SequenceBasis::new(&dst, k - 1, strict));
                let lhs = sequence_differential(&dst, &b1, &b0).mul(&m.chain_map(&src, &a1, &b1)).unwrap();
                let rhs = m.chain_map(&src, &a0, &b0).mul(&sequence_differential(&src, &a1, &a0)).unwrap();
                assert_eq!(lhs, rhs, "k={k} strict={strict}");
            }
        }
    }
}
