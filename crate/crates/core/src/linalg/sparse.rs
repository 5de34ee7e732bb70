use super::{CoeffRing, Scalar};

/// A vector stored as its nonzero entries, sorted by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec { entries: vec![(index, Scalar::ONE)] }
    }

    /// Builds a vector from unsorted entries, summing duplicates.
    pub fn from_entries(ring: CoeffRing, mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = ring.add(acc, &v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Scalar {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Scalar::ZERO,
        }
    }

    /// The largest index carrying a nonzero entry.
    pub fn low(&self) -> Option<(usize, &Scalar)> {
        self.entries.last().map(|(i, v)| (*i, v))
    }

    /// Adds `value` into position `index`.
    pub fn add_at(&mut self, ring: CoeffRing, index: usize, value: &Scalar) {
        if value.is_zero() {
            return;
        }
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => {
                let s = ring.add(&self.entries[pos].1, value);
                if s.is_zero() {
                    self.entries.remove(pos);
                } else {
                    self.entries[pos].1 = s;
                }
            }
            Err(pos) => self.entries.insert(pos, (index, value.clone())),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, ring: CoeffRing, c: &Scalar, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = self.entries.drain(..).peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, w) = b.next().unwrap();
                    out.push((*j, ring.mul(c, w)));
                }
                (Some(_), Some(_)) => {
                    let (i, v) = a.next().unwrap();
                    let (_, w) = b.next().unwrap();
                    let s = ring.add(&v, &ring.mul(c, w));
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, w) = b.next().unwrap();
                    out.push((*j, ring.mul(c, w)));
                }
                (None, None) => break,
            }
        }
        drop(a);
        self.entries = out;
    }

    pub fn scaled(&self, ring: CoeffRing, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, ring.mul(c, v))).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Shifts every index by `offset`.
    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }

    /// Keeps only indices in `lo..hi`, re-based to start at zero.
    pub fn window(&self, lo: usize, hi: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= lo && *i < hi)
                .map(|(i, v)| (i - lo, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::ZERO; len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_cancels() {
        let q = CoeffRing::Rationals;
        let mut a = SparseVec::from_entries(q, vec![(0, Scalar::Int(1)), (3, Scalar::Int(2))]);
        let b = SparseVec::from_entries(q, vec![(3, Scalar::Int(1)), (5, Scalar::Int(1))]);
        a.axpy(q, &Scalar::Int(-2), &b);
        assert_eq!(a.entries(), &[(0, Scalar::Int(1)), (5, Scalar::Int(-2))]);
    }

    #[test]
    fn duplicates_are_summed() {
        let f = CoeffRing::Prime(2);
        let v = SparseVec::from_entries(f, vec![(1, Scalar::ONE), (1, Scalar::ONE), (0, Scalar::ONE)]);
        assert_eq!(v.entries(), &[(0, Scalar::ONE)]);
    }
}
