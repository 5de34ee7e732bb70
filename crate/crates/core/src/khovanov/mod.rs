//! Khovanov homology of planar diagrams, its coloured-poset form, and the
//! fixed-crossing refinement with its spectral sequence.

mod cube;
mod diagram;
mod fixed;

pub use cube::{
    colouring_homology, cube_complex, degree_bridge, khovanov_colouring, khovanov_colouring_graded,
    normalised_homology, unnormalised_homology, BigradedCellJson, BigradedHomology, CubeComplex, KhCell,
};
pub use diagram::{parse_pd, ArcDirection, LinkDiagram, Resolution};
pub use fixed::{
    fibre_modules, fixed_crossing_complex, fixed_crossing_homology, fixed_crossing_spectral_sequence,
    fixed_crossing_spectral_sequences, FibreModule, FixedCrossingReport, FixedCrossingReportJson, TriGradedComplex,
};

use crate::bundle::BundleError;
use crate::coloured::ColouredError;
use crate::linalg::LinalgError;
use crate::specseq::SpecSeqError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum KhovanovError {
    #[error("cannot parse PD code: {0}")]
    Parse(String),
    #[error("arc {arc} occurs {count} times, expected 2")]
    ArcCount { arc: i64, count: usize },
    #[error("{0} crossings is more than the supported 62")]
    TooManyCrossings(usize),
    #[error("no crossing with index {0}")]
    UnknownCrossing(usize),
    #[error("cannot orient diagram: {0}")]
    Orientation(String),
    #[error("edge of the cube is neither a merge nor a split")]
    NotPlanar,
    #[error("diagram has no orientation")]
    Unoriented,
    #[error("this computation needs a field")]
    RequiresField,
    #[error("no uniform degree shift relates the two homologies")]
    NoUniformShift,
    #[error("page {0} was not computed")]
    MissingPage(usize),
    #[error(transparent)]
    Coloured(#[from] ColouredError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    SpecSeq(#[from] SpecSeqError),
}
