//! Exact partition majorization algebra, lcm-product invariants of
//! polynomial divisibility chains, the constructive translation between
//! pencil-completion instances and multi-partition majorization instances,
//! and bounded exhaustive solvers that certify both.
//!
//! Partition arithmetic is generic over the unsigned part type
//! ([`partition::Part`]); the rest of the crate works with [`Partition`],
//! the `u64` instantiation.

pub mod chain;
pub mod cli;
pub mod generator;
pub mod partition;
pub mod solver;
pub mod translation;

pub use chain::{
    interlace_check, pi_degree, sigma_degree_sequence, sigma_identity_rhs, ChainError,
    ExtendedDegree, Factor, PolyChain,
};
pub use partition::{majorized, GenericPartition, Part, PartitionError};
pub use solver::{Outcome, SolveReport};
pub use translation::{
    BetaCertificate, FCertificate, LemmaInstance, TheoremInstance, TranslationError,
};

/// Partitions with 64-bit parts.
pub type Partition = GenericPartition<u64>;
/// Partitions with 32-bit parts.
pub type Partition32 = GenericPartition<u32>;
/// Partitions with 128-bit parts.
pub type Partition128 = GenericPartition<u128>;
