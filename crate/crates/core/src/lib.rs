//! Spectral sets and tilings in elementary abelian groups (Z/pZ)^d, decided
//! with exact integer arithmetic.
//!
//! - [`spectral`]: character orthogonality via counting vectors, spectrum search.
//! - [`tiling`]: tiling verification, exact-cover partner search, subspace partners.
//! - [`counterexample`]: a spectral non-tiling set of size 2p in (Z/pZ)^4 and a
//!   mechanical check of its properties.
//! - [`exhaustive`]: classification of every subset of a small group.

pub mod counterexample;
pub mod error;
pub mod exhaustive;
pub mod group;
pub mod index;
pub mod linalg;
pub mod residue;
pub mod setfile;
pub mod spectral;
pub mod tiling;

pub use error::{Error, Result};
pub use group::{GroupParams, GroupVector, PointSet};
pub use linalg::{apply_map, FpMatrix, Subspace};

/// Feasibility guards and parallelism shared by the search routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest `p^d` a search will tabulate.
    pub max_group_order: u64,
    /// Largest number of subspaces an enumeration may produce.
    pub max_subspaces: u128,
    /// Threads used to split the top-level branches of a search.
    pub workers: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_group_order: 4096,
            max_subspaces: linalg::DEFAULT_SUBSPACE_LIMIT,
            workers: 1,
        }
    }
}
