//! Dilation statistics of weighted graphs embedded in metric spaces, and
//! greedy shortcut augmentation to reduce average dilation.
//!
//! A graph lives over a metric space on the same point set; every edge weighs
//! exactly the metric distance of its endpoints. The dilation of a vertex
//! pair is the ratio of its shortest-path distance to its metric distance.
//! This crate computes per-pair and average dilation, evaluates the benefit
//! of shortcut edge sets, classifies pairs by the shortcut endpoints their
//! canonical shortest path uses, and augments a graph with shortcuts either
//! greedily or by exhaustive enumeration. Empirical checkers compare the
//! greedy result against the exhaustive optimum.

#![forbid(unsafe_code)]

pub mod augment;
pub mod dilation;
pub mod graph;
pub mod metric;
pub mod reference;
pub mod signatures;

pub use augment::{
    check_key_lemma, check_theorem_bounds, greedy_augment, optimal_augment, AugmentError,
    BoundReport, GreedyOptions, GreedyStep, GreedyTrace, LemmaVerdict, OptimalResult,
    DEFAULT_ENUMERATION_CAP,
};
pub use dilation::{
    average_dilation, benefit, dilation_report, dilation_sum, pair_dilation, BenefitLedger,
    DilationError, DilationReport,
};
pub use graph::{
    apsp, augment_distances, connected_components, is_connected, DistanceOracle, Graph, GraphError,
};
pub use metric::{MetricBackend, MetricError, MetricSpace};
pub use signatures::{
    benefit_decomposition, canonical_shortest_path, restricted_benefit, signature, Decomposition,
    ShortcutSet, Signature, SignatureAnalysis, SignatureError,
};

/// Absolute comparison tolerance used by all validations and checkers.
///
/// Inputs are assumed to have magnitude roughly 1 to 1e3, which leaves
/// double precision several orders of headroom at this threshold.
pub const EPS_ABS: f64 = 1e-9;
