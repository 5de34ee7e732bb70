//! Column reduction over a field.
//!
//! Vectors are reduced against a table of pivots keyed by their lowest
//! (largest-index) nonzero entry. The order in which vectors are inserted
//! fixes every choice made, so results are reproducible.

use std::collections::HashMap;

use super::{CoeffRing, LinalgError, SparseVec};

pub(crate) struct ColumnReducer {
    ring: CoeffRing,
    track: bool,
    pivot_of_low: HashMap<usize, usize>,
    /// Reduced vectors, normalised so the low entry is one, with their tracking vectors.
    stored: Vec<(SparseVec, SparseVec)>,
}

impl ColumnReducer {
    pub(crate) fn new(ring: CoeffRing, track: bool) -> Self {
        debug_assert!(ring.is_field());
        ColumnReducer { ring, track, pivot_of_low: HashMap::new(), stored: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.stored.len()
    }

    /// Reduces `v` as far as the table allows, applying the same operations to `t`.
    pub(crate) fn reduce(&self, mut v: SparseVec, mut t: SparseVec) -> (SparseVec, SparseVec) {
        while let Some((low, c)) = v.low() {
            let Some(&k) = self.pivot_of_low.get(&low) else { break };
            let c = self.ring.neg(c);
            let (r, tk) = &self.stored[k];
            v.axpy(self.ring, &c, r);
            if self.track {
                t.axpy(self.ring, &c, tk);
            }
        }
        (v, t)
    }

    /// Stores an already reduced, nonzero vector as a new pivot.
    fn store(&mut self, v: SparseVec, t: SparseVec) {
        let (low, c) = v.low().expect("storing a zero vector");
        let c_inv = self.ring.inv(c).expect("field element is invertible");
        let (v, t) = if c_inv.is_one() {
            (v, t)
        } else {
            let t = if self.track { t.scaled(self.ring, &c_inv) } else { t };
            (v.scaled(self.ring, &c_inv), t)
        };
        self.pivot_of_low.insert(low, self.stored.len());
        self.stored.push((v, t));
    }

    /// Inserts `v`; returns whether it was independent of the table.
    pub(crate) fn insert(&mut self, v: SparseVec) -> bool {
        self.insert_tracked(v, SparseVec::new()).is_none()
    }

    /// Inserts `v` with tracking `t`. If `v` reduces to zero, the reduced
    /// tracking vector is returned instead (a kernel element when `t` records
    /// which input columns were combined).
    pub(crate) fn insert_tracked(&mut self, v: SparseVec, t: SparseVec) -> Option<SparseVec> {
        let (v, t) = self.reduce(v, t);
        if v.is_zero() {
            Some(t)
        } else {
            self.store(v, t);
            None
        }
    }
}

/// A basis of the quotient `(span N + span D) / span D`, with coordinates.
///
/// Basis representatives are chosen among the numerator vectors in the
/// order given.
pub struct Subquotient {
    ring: CoeffRing,
    reducer: ColumnReducer,
    reps: Vec<SparseVec>,
}

impl Subquotient {
    pub fn new<D, N>(ring: CoeffRing, denominator: D, numerator: N) -> Result<Self, LinalgError>
    where
        D: IntoIterator<Item = SparseVec>,
        N: IntoIterator<Item = SparseVec>,
    {
        if !ring.is_field() {
            return Err(LinalgError::RequiresField("subquotient"));
        }
        let mut reducer = ColumnReducer::new(ring, true);
        for d in denominator {
            reducer.insert_tracked(d, SparseVec::new());
        }
        let mut reps = Vec::new();
        for n in numerator {
            let k = reps.len();
            let (res, t) = reducer.reduce(n.clone(), SparseVec::unit(k));
            if !res.is_zero() {
                reducer.store(res, t);
                reps.push(n);
            }
        }
        Ok(Subquotient { ring, reducer, reps })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Coordinates of the class of `v` in the representative basis.
    pub fn coordinates(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        let (res, t) = self.reducer.reduce(v.clone(), SparseVec::new());
        if !res.is_zero() {
            return Err(LinalgError::NotInSpan);
        }
        Ok(t.scaled(self.ring, &self.ring.from_i64(-1)))
    }

    /// Whether `v` lies in the span of numerator and denominator.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reducer.reduce(v.clone(), SparseVec::new()).0.is_zero()
    }
}

/// Dimension of the span of the given vectors.
pub fn span_dim<I: IntoIterator<Item = SparseVec>>(ring: CoeffRing, vectors: I) -> usize {
    let mut red = ColumnReducer::new(ring.rank_field(), false);
    for v in vectors {
        red.insert(v);
    }
    red.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Scalar;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(
            CoeffRing::Rationals,
            entries.iter().map(|&(i, x)| (i, Scalar::Int(x))).collect(),
        )
    }

    #[test]
    fn subquotient_of_plane_by_line() {
        let q = CoeffRing::Rationals;
        let sq = Subquotient::new(q, vec![v(&[(0, 1), (1, 1)])], vec![v(&[(0, 1)]), v(&[(1, 1)])]).unwrap();
        assert_eq!(sq.dim(), 1);
        // e1 = (e0 + e1) - e0 so its class is minus the class of e0
        let c = sq.coordinates(&v(&[(1, 1)])).unwrap();
        assert_eq!(c.entries(), &[(0, Scalar::Int(-1))]);
        assert!(sq.coordinates(&v(&[(2, 1)])).is_err());
    }

    #[test]
    fn span_dimension() {
        let q = CoeffRing::Rationals;
        assert_eq!(span_dim(q, vec![v(&[(0, 1)]), v(&[(0, 2)]), v(&[(1, 3)])]), 2);
    }
}
