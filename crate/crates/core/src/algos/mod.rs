//! Matroid intersection, weight splitting, partitioning into bases and the
//! maximum-weight-bases restriction.

mod intersection;
mod partition;
mod weighted;

pub use intersection::{common_basis, max_common_independent};
pub(crate) use intersection::same_ground;
pub use partition::{partition_into_bases, partition_into_independent, union_is_basis, Partitioner};
pub use weighted::{
    max_weight_basis, max_weight_common_basis_split, min_overlap_common_basis,
    restrict_to_max_weight_bases, WeightSplit,
};
