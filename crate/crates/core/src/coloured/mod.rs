//! Coloured posets: a poset with a free module per element and a map per relation.

mod chains;
mod json;
mod morphism;

use std::collections::HashMap;

use crate::linalg::{CoeffRing, ExactMatrix, LinalgError};
use crate::poset::{Poset, PosetError};

pub use chains::{c_complex, homology, s_complex, sequence_differential, SequenceBasis, DEFAULT_S_DEGREE};
pub use json::{matrix_from_json, matrix_to_json, ColouredPosetJson, MatrixJson};
pub use morphism::ColouredPosetMorphism;
pub(crate) use chains::sequences as chains_sequences;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ColouredError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("expected {expected} dimensions, got {got}")]
    DimCount { expected: usize, got: usize },
    #[error("no map given for the cover {0} < {1}")]
    MissingCoverMap(String, String),
    #[error("{0} < {1} is not a cover")]
    NotACover(String, String),
    #[error("map {from} < {to} is {got:?}, expected {expected:?}")]
    MapShape { from: String, to: String, expected: (usize, usize), got: (usize, usize) },
    #[error("maps from {from} to {to} depend on the path")]
    PathDependent { from: String, to: String },
    #[error("map over the wrong ring")]
    RingMismatch,
    #[error("invalid coloured poset JSON: {0}")]
    Json(String),
    #[error("invalid morphism: {0}")]
    Morphism(String),
}

/// A poset `P` with a functor `F` to free modules over `ring`.
///
/// All composites `F(x <= y)` are computed once at construction, which is
/// also where path independence is checked.
#[derive(Clone, Debug)]
pub struct ColouredPoset {
    poset: Poset,
    ring: CoeffRing,
    dims: Vec<usize>,
    maps: HashMap<(usize, usize), ExactMatrix>,
}

impl ColouredPoset {
    /// `cover_maps[(x, y)]` is `F(x < y)` for each cover, of shape `dims[y] x dims[x]`.
    pub fn new(
        poset: Poset,
        ring: CoeffRing,
        dims: Vec<usize>,
        cover_maps: HashMap<(usize, usize), ExactMatrix>,
    ) -> Result<Self, ColouredError> {
        let n = poset.len();
        if dims.len() != n {
            return Err(ColouredError::DimCount { expected: n, got: dims.len() });
        }
        for &(x, y) in cover_maps.keys() {
            if x >= n || y >= n || !poset.up_covers(x).contains(&y) {
                let l = |i: usize| poset.labels().get(i).cloned().unwrap_or_else(|| i.to_string());
                return Err(ColouredError::NotACover(l(x), l(y)));
            }
        }
        for (x, y) in poset.covers() {
            let m = cover_maps
                .get(&(x, y))
                .ok_or_else(|| ColouredError::MissingCoverMap(poset.label(x).into(), poset.label(y).into()))?;
            if m.shape() != (dims[y], dims[x]) {
                return Err(ColouredError::MapShape {
                    from: poset.label(x).into(),
                    to: poset.label(y).into(),
                    expected: (dims[y], dims[x]),
                    got: m.shape(),
                });
            }
            if m.ring() != ring {
                return Err(ColouredError::RingMismatch);
            }
        }
        let maps = compose_along_covers(&poset, ring, &dims, &cover_maps)?;
        Ok(ColouredPoset { poset, ring, dims, maps })
    }

    /// Every element coloured by `R^d`, every map the identity.
    pub fn constant(poset: Poset, ring: CoeffRing, d: usize) -> Self {
        let covers = poset.covers().map(|c| (c, ExactMatrix::identity(ring, d))).collect();
        let dims = vec![d; poset.len()];
        Self::new(poset, ring, dims, covers).expect("constant colourings commute")
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `F(x <= y)`. Panics unless `x <= y`.
    pub fn map(&self, x: usize, y: usize) -> &ExactMatrix {
        self.maps.get(&(x, y)).unwrap_or_else(|| {
            panic!("{} is not below {}", self.poset.label(x), self.poset.label(y))
        })
    }

    /// The maps on covers.
    pub fn cover_maps(&self) -> HashMap<(usize, usize), ExactMatrix> {
        self.poset.covers().map(|c| (c, self.maps[&c].clone())).collect()
    }

    /// Restriction to the subposet on `keep`, which must have a greatest element.
    pub fn restrict(&self, keep: &[usize]) -> Result<ColouredPoset, ColouredError> {
        let poset = self.poset.induced(keep)?;
        let dims = keep.iter().map(|&x| self.dims[x]).collect();
        let covers = poset.covers().map(|(a, b)| ((a, b), self.maps[&(keep[a], keep[b])].clone())).collect();
        ColouredPoset::new(poset, self.ring, dims, covers)
    }

    /// The same colouring with entries reduced into another ring.
    pub fn change_ring(&self, ring: CoeffRing) -> Result<ColouredPoset, ColouredError> {
        let covers = self
            .cover_maps()
            .into_iter()
            .map(|(k, m)| Ok((k, m.change_ring(ring)?)))
            .collect::<Result<HashMap<_, _>, LinalgError>>()?;
        ColouredPoset::new(self.poset.clone(), ring, self.dims.clone(), covers)
    }
}

/// Composites `F(x <= y)` for all pairs, checking that every path agrees.
///
/// For each `x` the elements above it are visited in a linear extension;
/// the composite to `z` is computed through every lower cover of `z` that
/// lies above `x`, and all of these must coincide.
pub(crate) fn compose_along_covers(
    poset: &Poset,
    ring: CoeffRing,
    dims: &[usize],
    cover_maps: &HashMap<(usize, usize), ExactMatrix>,
) -> Result<HashMap<(usize, usize), ExactMatrix>, ColouredError> {
    let order = poset.linear_extension();
    let mut maps = HashMap::new();
    for x in 0..poset.len() {
        maps.insert((x, x), ExactMatrix::identity(ring, dims[x]));
        for &z in order.iter().filter(|&&z| poset.lt(x, z)) {
            let mut found: Option<ExactMatrix> = None;
            for &w in poset.down_covers(z).iter().filter(|&&w| poset.leq(x, w)) {
                let m = cover_maps[&(w, z)].mul(&maps[&(x, w)])?;
                match &found {
                    None => found = Some(m),
                    Some(prev) if *prev == m => {}
                    Some(_) => {
                        return Err(ColouredError::PathDependent {
                            from: poset.label(x).into(),
                            to: poset.label(z).into(),
                        })
                    }
                }
            }
            maps.insert((x, z), found.expect("an element above x has a lower cover above x"));
        }
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoeffRing {
        CoeffRing::Rationals
    }

    #[test]
    fn constant_is_valid() {
        let cp = ColouredPoset::constant(Poset::boolean(3), q(), 2);
        assert_eq!(cp.map(0, 7), &ExactMatrix::identity(q(), 2));
    }

    #[test]
    fn sign_error_is_rejected() {
        let p = Poset::boolean(2);
        let mut covers: HashMap<_, _> = p.covers().map(|c| (c, ExactMatrix::identity(q(), 1))).collect();
        covers.insert((1, 3), ExactMatrix::identity(q(), 1).neg());
        let err = ColouredPoset::new(p, q(), vec![1; 4], covers).unwrap_err();
        assert_eq!(err, ColouredError::PathDependent { from: "{}".into(), to: "{1,2}".into() });
    }

    #[test]
    fn shape_and_cover_errors() {
        let p = Poset::boolean(1);
        let covers = HashMap::from([((0, 1), ExactMatrix::identity(q(), 2))]);
        assert!(matches!(ColouredPoset::new(p.clone(), q(), vec![1, 1], covers), Err(ColouredError::MapShape { .. })));
        assert!(matches!(ColouredPoset::new(p, q(), vec![1, 1], HashMap::new()), Err(ColouredError::MissingCoverMap(..))));
    }
}
