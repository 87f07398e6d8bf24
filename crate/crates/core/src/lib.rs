//! Perfect partitions of `L(rm, r) = K(rm, rm) - m K(r, r)`.
//!
//! A perfect partition splits the set of all perfect matchings of a regular
//! bipartite graph into 1-factorizations. This crate counts and enumerates
//! the matchings, builds partitions for `K(n,n)`, `L(2n,n)`, `L(6,1)` and
//! `L(8,2)`, searches for them on small instances, and checks any claimed
//! partition through a serializable certificate.

pub mod construct;
pub mod counting;
pub mod golden;
pub mod graph;
pub mod matchings;
pub mod perm;
pub mod search;
pub mod verify;

pub use counting::{
    count_matchings, necessary_condition, ryser_permanent, CountReport, IntPolynomial,
};
pub use graph::{AdjacencyMatrix, Block, BlockMatrix, GraphSpec, LParams};
pub use matchings::{enumerate, MatchingSet};
pub use perm::{CycleForm, CycleType, Permutation};
pub use search::{find_perfect_partition, SearchOptions, SearchOutcome};
pub use verify::{check_partition, PartitionCertificate, PartitionReport};

/// Arbitrary-precision matching count.
pub type Count = num_bigint::BigInt;
/// Rook polynomial with arbitrary-precision coefficients.
pub type RookPolynomial = IntPolynomial<Count>;
