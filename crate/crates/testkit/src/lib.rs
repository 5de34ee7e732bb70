//! Seeded generators for coloured posets and bundles, keyed by `(seed, path)`,
//! and the property checks run by `selftest` and the acceptance suite.

pub mod gen;
pub mod selftest;
pub mod suite;

pub use gen::{random_bundle, random_coloured_poset, random_colouring_on, random_poset, BaseSelector, GenError, GenParams};
pub use selftest::{selftest, PropertyResult, SelftestConfig, SelftestReport};
