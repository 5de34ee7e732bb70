//! Exact linear algebra over prime fields, the rationals and the integers.

mod complex;
mod matrix;
mod reduce;
mod scalar;
mod snf;
mod sparse;

pub use complex::{
    complex_homology, induced_homology_map, serialize_torsion, ChainMap, DegreeHomology, FreeChainComplex, HomologyBasis,
    HomologySummary,
};
pub use matrix::ExactMatrix;
pub use reduce::{span_dim, Subquotient};
pub use scalar::{CoeffRing, Scalar};
pub use snf::{integer_determinant, smith_normal_form, SmithForm};
pub use sparse::SparseVec;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not an element of the ring")]
    NotInRing(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0} needs a field")]
    RequiresField(&'static str),
    #[error("integer entries required")]
    RequiresIntegers,
    #[error("vector is not in the span")]
    NotInSpan,
    #[error("d[{0}] * d[{1}] is not zero")]
    NotAComplex(usize, usize),
    #[error("not a chain map in degree {0}")]
    NotAChainMap(usize),
    #[error("degree {0} is outside the range where homology is determined")]
    OutsideWindow(usize),
}
