//! Per-pair and average dilation, and the benefit of a shortcut set.
//!
//! Dilation of a pair is its shortest-path distance divided by its metric
//! distance. The benefit of a shortcut set F is the total drop in summed
//! pair dilations after adding F; the per-pair drops are kept alongside
//! the total. Benefit uses the unnormalized sum over pairs, while average
//! dilation divides by the pair count.
//!
//! Pair-indexed vectors enumerate unordered pairs (u,v), u < v, in
//! lexicographic order; all pair sums run left to right in that order so
//! results are reproducible to the bit.

use thiserror::Error;

use crate::graph::{apsp, DistanceOracle, Graph};
use crate::metric::MetricSpace;
use crate::signatures::ShortcutSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DilationError {
    #[error("dilation of vertex {0} with itself is undefined")]
    SameVertex(usize),
    #[error("vertex index {index} out of range for {size} points")]
    IndexOutOfRange { index: usize, size: usize },
}

/// Flat index of the unordered pair (u,v), u < v, in lexicographic order.
#[inline]
pub(crate) fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Number of unordered pairs on n vertices.
#[inline]
pub(crate) fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Dilation of every unordered vertex pair, with summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport {
    /// Dilation per pair, indexed lexicographically over (u,v), u < v.
    pub per_pair: Vec<f64>,
    /// Mean of `per_pair`.
    pub average: f64,
    /// Largest entry of `per_pair`.
    pub maximum: f64,
    /// n(n-1)/2.
    pub pair_count: usize,
}

impl DilationReport {
    /// Dilation of one pair; arguments may come in either order.
    pub fn pair(&self, n: usize, u: usize, v: usize) -> f64 {
        self.per_pair[pair_index(n, u.min(v), u.max(v))]
    }
}

/// Per-pair and total benefit of a shortcut set.
#[derive(Debug, Clone, PartialEq)]
pub struct BenefitLedger {
    /// Dilation drop per pair, indexed lexicographically over (u,v), u < v.
    /// Every entry is nonnegative: adding edges never lengthens a path.
    pub per_pair: Vec<f64>,
    /// Sum of `per_pair`.
    pub total: f64,
}

impl BenefitLedger {
    pub fn pair(&self, n: usize, u: usize, v: usize) -> f64 {
        self.per_pair[pair_index(n, u.min(v), u.max(v))]
    }
}

/// Dilation of the pair (u,v): dist(u,v) / d_X(u,v).
pub fn pair_dilation(
    oracle: &DistanceOracle,
    space: &MetricSpace,
    u: usize,
    v: usize,
) -> Result<f64, DilationError> {
    let n = space.len();
    for index in [u, v] {
        if index >= n {
            return Err(DilationError::IndexOutOfRange { index, size: n });
        }
    }
    if u == v {
        return Err(DilationError::SameVertex(u));
    }
    Ok(oracle.dist(u, v) / space.distance(u, v))
}

/// Sum of pair dilations over all unordered pairs, in pair-index order.
pub fn dilation_sum(space: &MetricSpace, oracle: &DistanceOracle) -> f64 {
    let n = space.len();
    let mut sum = 0.0;
    for u in 0..n {
        let row = oracle.dist_row(u);
        for (v, &d) in row.iter().enumerate().skip(u + 1) {
            sum += d / space.distance(u, v);
        }
    }
    sum
}

/// Full per-pair dilation report for an already-computed oracle.
pub fn dilation_report(space: &MetricSpace, oracle: &DistanceOracle) -> DilationReport {
    let n = space.len();
    let mut per_pair = Vec::with_capacity(pair_count(n));
    for u in 0..n {
        let row = oracle.dist_row(u);
        for (v, &d) in row.iter().enumerate().skip(u + 1) {
            per_pair.push(d / space.distance(u, v));
        }
    }
    let mut sum = 0.0;
    let mut maximum = f64::NEG_INFINITY;
    for &value in &per_pair {
        sum += value;
        maximum = maximum.max(value);
    }
    let count = per_pair.len();
    DilationReport {
        per_pair,
        average: sum / count as f64,
        maximum,
        pair_count: count,
    }
}

/// Average dilation of a graph, computing shortest paths from scratch.
pub fn average_dilation(graph: &Graph) -> DilationReport {
    dilation_report(graph.space(), &apsp(graph))
}

/// Benefit of a shortcut set: per-pair dilation drops and their total.
///
/// Both the base and the augmented graph get a fresh shortest-path
/// computation, so pairs whose canonical path ignores F come out at
/// exactly zero.
pub fn benefit(graph: &Graph, shortcuts: &ShortcutSet) -> BenefitLedger {
    let base = apsp(graph);
    let augmented = apsp(&graph.augmented(&shortcuts.pairs()));
    ledger_from_oracles(graph.space(), &base, &augmented)
}

pub(crate) fn ledger_from_oracles(
    space: &MetricSpace,
    base: &DistanceOracle,
    augmented: &DistanceOracle,
) -> BenefitLedger {
    let n = space.len();
    let mut per_pair = Vec::with_capacity(pair_count(n));
    for u in 0..n {
        let base_row = base.dist_row(u);
        let aug_row = augmented.dist_row(u);
        for v in (u + 1)..n {
            let d_x = space.distance(u, v);
            per_pair.push(base_row[v] / d_x - aug_row[v] / d_x);
        }
    }
    let total = per_pair.iter().sum();
    BenefitLedger { per_pair, total }
}

/// Benefit of extending the graph behind `oracle` with the single edge
/// (u,v,w), measured against precomputed base per-pair dilations.
///
/// Streams the single-insertion distance formula per pair without
/// materializing a new oracle; this is the greedy candidate-sweep kernel.
pub(crate) fn shortcut_benefit_sweep(
    space: &MetricSpace,
    base_dilation: &[f64],
    oracle: &DistanceOracle,
    u: usize,
    v: usize,
    w: f64,
) -> f64 {
    let n = space.len();
    let row_u = oracle.dist_row(u);
    let row_v = oracle.dist_row(v);
    let mut sum = 0.0;
    let mut idx = 0;
    for a in 0..n {
        let row_a = oracle.dist_row(a);
        let au = row_a[u];
        let av = row_a[v];
        for b in (a + 1)..n {
            let cur = row_a[b];
            let through = (au + w + row_v[b]).min(av + w + row_u[b]);
            let new_dist = cur.min(through);
            sum += base_dilation[idx] - new_dist / space.distance(a, b);
            idx += 1;
        }
    }
    sum
}
