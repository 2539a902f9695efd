//! Brute-force reference values from permutations and partitions,
//! independent of the determinant and recurrence code.

mod measures;
mod partitions;
mod permutations;
mod tail;

pub use measures::{plancherel_p_oracle, zmeasure_q_oracle, OracleReport, MAX_PARTITION_SIZE};
pub use partitions::{hook_dim, partitions_of, Partition};
pub use permutations::{lis_histogram, lis_length, p_k_n, p_k_n_rsk, poissonized_p, MAX_PERMUTATION_SIZE};
