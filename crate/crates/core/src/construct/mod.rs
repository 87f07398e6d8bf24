//! Explicit perfect partitions.
//!
//! Coset partitions for `K(n,n)` and `L(2n,n)`, the zone construction for
//! `L(6,1)`, and the block construction for `L(8,2)`.

pub mod group;
pub mod l61;
pub mod l82;

pub use group::{knn_partition, l2nn_partition, GroupError, GROUP_MAX_N};
pub use l61::{build_l61, L61Construction, L61Error};
pub use l82::{build_l82, L82Construction, L82Error};
