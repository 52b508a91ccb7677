//! Minimum sum-of-squares clustering (MSSC): partition `n` points in `d`
//! dimensions into `k` clusters minimizing the total squared Euclidean
//! distance from each point to its cluster centroid.
//!
//! The crate provides:
//!
//! * [`core`] — domain types ([`Dataset`], [`CenterSet`], [`Assignment`],
//!   [`Solution`]) and the exact objective/assignment/centroid operations.
//! * [`incremental`] — O(d) objective deltas for adding a point to a
//!   cluster, removing one, and merging two clusters.
//! * [`grasp`] — seeded randomized greedy selection rules used by the
//!   starting-solution generators.
//! * [`starters`] — starting-solution generators: agglomerative merging,
//!   two-phase construction, separation (divide and solve), plus random
//!   and k-means++ baselines.
//! * [`improve`] — Lloyd iterations, best-improvement point transfers, and
//!   the hybrid of the two.
//! * [`oracle`] — brute-force and exhaustive ground-truth computations for
//!   verification, including the analytic two-squares family.
//! * [`bench`] — dataset loaders, the best-known-value registry, the
//!   seeded multi-start harness, and report emission.
//!
//! All arithmetic is 64-bit floating point. Every randomized procedure is
//! driven by an explicit [`grasp::RandomSource`] so that runs are
//! reproducible bit-for-bit from a seed.

pub mod bench;
pub mod core;
pub mod grasp;
pub mod improve;
pub mod incremental;
pub mod oracle;
pub mod starters;

pub use crate::core::{Assignment, CenterSet, ClusterStats, Dataset, Solution};

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: dataset has {dataset} dimensions, centers have {centers}")]
    DimensionMismatch { dataset: usize, centers: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset row {row} has {len} values, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("non-finite coordinate at row {row}, column {col}")]
    NonFiniteCoordinate { row: usize, col: usize },

    #[error("cluster {index} is empty")]
    EmptyCluster { index: usize },

    #[error("cannot take the centroid of an empty member set")]
    EmptyMembers,

    #[error("invalid cluster count k={k} for n={n} points")]
    InvalidK { k: usize, n: usize },

    #[error("point {point} has label {label}, outside [0, {k})")]
    LabelOutOfRange {
        point: usize,
        label: usize,
        k: usize,
    },

    #[error("selection requires at least one candidate")]
    EmptyCandidates,

    #[error("alpha must be >= 1, got {alpha}")]
    InvalidAlpha { alpha: f64 },

    #[error("operation undefined on empty cluster statistics")]
    UndefinedClusterStats,

    #[error("removing the last member would make the cluster vanish")]
    SingletonRemoval,

    #[error("moving the last member out of a cluster is forbidden")]
    SingletonMove,

    #[error("transfer descent exceeded the move cap of {cap}")]
    MoveCapExceeded { cap: usize },

    #[error("instance too large: {partitions:.3e} partitions exceeds the limit of {limit:.1e}")]
    InstanceTooLarge { partitions: f64, limit: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("dataset '{name}' has shape ({n}, {d}), expected ({expected_n}, {expected_d})")]
    ManifestMismatch {
        name: String,
        n: usize,
        d: usize,
        expected_n: usize,
        expected_d: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag for the error category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EmptyDataset => "empty_dataset",
            Error::RaggedRow { .. } => "ragged_row",
            Error::NonFiniteCoordinate { .. } => "non_finite_coordinate",
            Error::EmptyCluster { .. } => "empty_cluster",
            Error::EmptyMembers => "empty_members",
            Error::InvalidK { .. } => "invalid_k",
            Error::LabelOutOfRange { .. } => "label_out_of_range",
            Error::EmptyCandidates => "empty_candidates",
            Error::InvalidAlpha { .. } => "invalid_alpha",
            Error::UndefinedClusterStats => "undefined_cluster_stats",
            Error::SingletonRemoval => "singleton_removal",
            Error::SingletonMove => "singleton_move",
            Error::MoveCapExceeded { .. } => "move_cap_exceeded",
            Error::InstanceTooLarge { .. } => "instance_too_large",
            Error::Parse { .. } => "parse",
            Error::ManifestMismatch { .. } => "manifest_mismatch",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
