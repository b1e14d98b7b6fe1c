//! Signatures of vertex pairs under a shortcut set, restricted benefits,
//! and the decomposition of total benefit by signature class.
//!
//! The signature of a pair records which shortcut endpoints its canonical
//! shortest path enters and leaves through: the first visited endpoint of
//! the first shortcut edge on the path and the last visited endpoint of
//! the last one, or None when the path uses no shortcut. Unordered pairs
//! are traversed from the lower to the higher vertex id, so signatures are
//! ordered tuples over the shortcut endpoint set.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dilation::{ledger_from_oracles, pair_index, BenefitLedger};
use crate::graph::{apsp, DistanceOracle, Graph, GraphError};
use crate::metric::MetricSpace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignatureError {
    #[error("signature of vertex {0} with itself is undefined")]
    SameVertex(usize),
    #[error("vertex index {index} out of range for {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("vertex {0} is not a shortcut endpoint")]
    NotAnEndpoint(usize),
}

/// Signature of a pair: None when its canonical path avoids all shortcut
/// edges, otherwise the ordered endpoint tuple described at module level.
pub type Signature = Option<(usize, usize)>;

/// An ordered set of shortcut edges. Insertion order is kept (it records
/// greedy history); each edge weighs the metric distance of its endpoints.
/// Edges may duplicate graph edges, but not each other.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortcutSet {
    edges: Vec<(usize, usize, f64)>, // endpoints canonical u < v
    endpoints: BTreeSet<usize>,
}

impl ShortcutSet {
    pub fn new() -> Self {
        ShortcutSet {
            edges: Vec::new(),
            endpoints: BTreeSet::new(),
        }
    }

    /// Builds a set from endpoint pairs, drawing weights from the space.
    pub fn from_pairs(space: &MetricSpace, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut set = ShortcutSet::new();
        for &(u, v) in pairs {
            set.push(space, u, v)?;
        }
        Ok(set)
    }

    /// Appends one shortcut, canonicalized to u < v.
    pub fn push(&mut self, space: &MetricSpace, u: usize, v: usize) -> Result<(), GraphError> {
        let n = space.len();
        for index in [u, v] {
            if index >= n {
                return Err(GraphError::IndexOutOfRange { index, size: n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let (a, b) = (u.min(v), u.max(v));
        if self.contains(a, b) {
            return Err(GraphError::DuplicateEdge { u: a, v: b });
        }
        self.edges.push((a, b, space.distance(a, b)));
        self.endpoints.insert(a);
        self.endpoints.insert(b);
        Ok(())
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.iter().any(|&(a, b, _)| (a, b) == key)
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Endpoint pairs only, in insertion order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v, _)| (u, v)).collect()
    }

    /// V_F: all endpoints of shortcut edges.
    pub fn endpoints(&self) -> &BTreeSet<usize> {
        &self.endpoints
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl Default for ShortcutSet {
    fn default() -> Self {
        Self::new()
    }
}

/// The canonical shortest path from u to v as a vertex sequence, read off
/// the oracle's predecessor table.
pub fn canonical_shortest_path(
    oracle: &DistanceOracle,
    u: usize,
    v: usize,
) -> Result<Vec<usize>, SignatureError> {
    let n = oracle.n();
    for index in [u, v] {
        if index >= n {
            return Err(SignatureError::IndexOutOfRange { index, size: n });
        }
    }
    if u == v {
        return Err(SignatureError::SameVertex(u));
    }
    let mut path = vec![v];
    let mut cursor = v;
    while cursor != u {
        // Connected graphs always yield a complete predecessor chain.
        cursor = oracle
            .pred(u, cursor)
            .expect("broken predecessor chain in a connected graph");
        path.push(cursor);
    }
    path.reverse();
    Ok(path)
}

/// Shared state for signature queries against one (graph, shortcuts) pair:
/// fresh shortest paths for both the base and the augmented graph, the
/// per-pair benefit ledger, and the shortcut edge set.
///
/// The augmented oracle is recomputed from scratch rather than updated
/// incrementally, so its predecessor table follows the canonical tie-break
/// and pairs that ignore F keep bit-identical distances (their benefit is
/// exactly zero).
pub struct SignatureAnalysis {
    n: usize,
    augmented: DistanceOracle,
    f_pairs: BTreeSet<(usize, usize)>,
    endpoints: BTreeSet<usize>,
    ledger: BenefitLedger,
}

impl SignatureAnalysis {
    pub fn new(graph: &Graph, shortcuts: &ShortcutSet) -> Self {
        let base = apsp(graph);
        let augmented = apsp(&graph.augmented(&shortcuts.pairs()));
        let ledger = ledger_from_oracles(graph.space(), &base, &augmented);
        SignatureAnalysis {
            n: graph.n(),
            augmented,
            f_pairs: shortcuts.pairs().into_iter().collect(),
            endpoints: shortcuts.endpoints().clone(),
            ledger,
        }
    }

    /// Shortest paths of the augmented graph, canonical tie-break.
    pub fn augmented_oracle(&self) -> &DistanceOracle {
        &self.augmented
    }

    pub fn ledger(&self) -> &BenefitLedger {
        &self.ledger
    }

    /// Benefit of one unordered pair.
    pub fn pair_benefit(&self, u: usize, v: usize) -> f64 {
        self.ledger.pair(self.n, u, v)
    }

    /// Signature of the unordered pair {u,v}, traversed from the lower to
    /// the higher vertex id.
    pub fn signature(&self, u: usize, v: usize) -> Result<Signature, SignatureError> {
        let (a, b) = (u.min(v), u.max(v));
        let path = canonical_shortest_path(&self.augmented, a, b)?;
        let mut first = None;
        let mut last = None;
        for step in path.windows(2) {
            let key = (step[0].min(step[1]), step[0].max(step[1]));
            if self.f_pairs.contains(&key) {
                if first.is_none() {
                    first = Some(step[0]);
                }
                last = Some(step[1]);
            }
        }
        Ok(first.map(|f| (f, last.unwrap())))
    }

    /// Sum of pair benefits over exactly the pairs with signature (a,b).
    pub fn restricted_benefit(&self, a: usize, b: usize) -> Result<f64, SignatureError> {
        if a == b {
            return Err(SignatureError::SameVertex(a));
        }
        for index in [a, b] {
            if index >= self.n {
                return Err(SignatureError::IndexOutOfRange {
                    index,
                    size: self.n,
                });
            }
            if !self.endpoints.contains(&index) {
                return Err(SignatureError::NotAnEndpoint(index));
            }
        }
        let mut sum = 0.0;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.signature(u, v)? == Some((a, b)) {
                    sum += self.ledger.per_pair[pair_index(self.n, u, v)];
                }
            }
        }
        Ok(sum)
    }
}

/// Signature of one pair. Convenience wrapper that rebuilds the full
/// analysis; use [`SignatureAnalysis`] directly when querying many pairs.
pub fn signature(
    graph: &Graph,
    shortcuts: &ShortcutSet,
    u: usize,
    v: usize,
) -> Result<Signature, SignatureError> {
    SignatureAnalysis::new(graph, shortcuts).signature(u, v)
}

/// Restricted benefit of the ordered endpoint pair (a,b). Convenience
/// wrapper; see [`SignatureAnalysis::restricted_benefit`].
pub fn restricted_benefit(
    graph: &Graph,
    shortcuts: &ShortcutSet,
    a: usize,
    b: usize,
) -> Result<f64, SignatureError> {
    SignatureAnalysis::new(graph, shortcuts).restricted_benefit(a, b)
}

/// Total benefit split by signature class.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Classes with nonzero benefit only, keyed by ordered signature tuple.
    pub by_signature: BTreeMap<(usize, usize), f64>,
    /// Benefit carried by None-signature pairs. Pairs whose canonical path
    /// avoids F keep their base distances bit for bit, so this is exactly
    /// zero whenever the implementation is sound.
    pub none_class_total: f64,
    pub none_class_pairs: usize,
    /// Distinct non-None signatures observed, zero-benefit classes included.
    pub signature_class_count: usize,
    /// benefit(F).total, the quantity being decomposed.
    pub benefit_total: f64,
    /// benefit_total minus the sum over all classes; reassociation noise
    /// only, bounded by n² times the comparison tolerance.
    pub residual: f64,
}

/// Splits benefit(F).total across signature classes and reports the
/// leftover against the direct total.
pub fn benefit_decomposition(
    graph: &Graph,
    shortcuts: &ShortcutSet,
) -> Result<Decomposition, SignatureError> {
    let analysis = SignatureAnalysis::new(graph, shortcuts);
    let n = analysis.n;
    let mut classes: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut none_class_total = 0.0;
    let mut none_class_pairs = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            let value = analysis.ledger.per_pair[pair_index(n, u, v)];
            match analysis.signature(u, v)? {
                Some(sig) => *classes.entry(sig).or_insert(0.0) += value,
                None => {
                    none_class_total += value;
                    none_class_pairs += 1;
                }
            }
        }
    }
    let signature_class_count = classes.len();
    let class_sum: f64 = classes.values().sum();
    let benefit_total = analysis.ledger.total;
    let residual = benefit_total - (class_sum + none_class_total);
    classes.retain(|_, value| *value != 0.0);
    Ok(Decomposition {
        by_signature: classes,
        none_class_total,
        none_class_pairs,
        signature_class_count,
        benefit_total,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn unit_square() -> Arc<MetricSpace> {
        Arc::new(
            MetricSpace::from_points(vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ])
            .unwrap(),
        )
    }

    fn square_path() -> Graph {
        Graph::new(unit_square(), &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn adjacent_pair_path_is_the_edge() {
        let oracle = apsp(&square_path());
        assert_eq!(canonical_shortest_path(&oracle, 0, 1), Ok(vec![0, 1]));
    }

    #[test]
    fn square_path_long_pair() {
        let oracle = apsp(&square_path());
        assert_eq!(canonical_shortest_path(&oracle, 0, 3), Ok(vec![0, 1, 2, 3]));
    }

    #[test]
    fn tie_resolution_in_the_augmented_square() {
        let graph = square_path().augmented(&[(0, 3)]);
        let oracle = apsp(&graph);
        assert_eq!(canonical_shortest_path(&oracle, 1, 3), Ok(vec![1, 0, 3]));
    }

    #[test]
    fn same_vertex_path_rejected() {
        let oracle = apsp(&square_path());
        assert_eq!(
            canonical_shortest_path(&oracle, 1, 1),
            Err(SignatureError::SameVertex(1))
        );
    }

    #[test]
    fn signatures_on_the_augmented_square() {
        let graph = square_path();
        let shortcuts = ShortcutSet::from_pairs(graph.space(), &[(0, 3)]).unwrap();
        let analysis = SignatureAnalysis::new(&graph, &shortcuts);
        assert_eq!(analysis.signature(1, 2), Ok(None));
        assert_eq!(analysis.signature(0, 3), Ok(Some((0, 3))));
        // (1,3) routes through [1,0,3]: one shortcut edge traversed 0 -> 3.
        assert_eq!(analysis.signature(1, 3), Ok(Some((0, 3))));
        assert_eq!(analysis.signature(0, 2), Ok(None));
    }

    #[test]
    fn restricted_benefit_on_the_square() {
        let graph = square_path();
        let shortcuts = ShortcutSet::from_pairs(graph.space(), &[(0, 3)]).unwrap();
        let analysis = SignatureAnalysis::new(&graph, &shortcuts);
        assert_eq!(analysis.restricted_benefit(0, 3), Ok(2.0));
        assert_eq!(analysis.restricted_benefit(3, 0), Ok(0.0));
        assert_eq!(
            analysis.restricted_benefit(0, 1),
            Err(SignatureError::NotAnEndpoint(1))
        );
    }

    #[test]
    fn decomposition_single_shortcut() {
        let graph = square_path();
        let shortcuts = ShortcutSet::from_pairs(graph.space(), &[(0, 3)]).unwrap();
        let decomposition = benefit_decomposition(&graph, &shortcuts).unwrap();
        assert_eq!(decomposition.by_signature, BTreeMap::from([((0, 3), 2.0)]));
        assert_eq!(decomposition.none_class_total, 0.0);
        assert_eq!(decomposition.none_class_pairs, 4);
        assert_eq!(decomposition.signature_class_count, 1);
        assert_eq!(decomposition.benefit_total, 2.0);
        assert_eq!(decomposition.residual, 0.0);
    }

    #[test]
    fn decomposition_duplicate_edge() {
        let graph = square_path();
        let shortcuts = ShortcutSet::from_pairs(graph.space(), &[(1, 2)]).unwrap();
        let decomposition = benefit_decomposition(&graph, &shortcuts).unwrap();
        assert!(decomposition.by_signature.is_empty());
        assert_eq!(decomposition.benefit_total, 0.0);
        assert_eq!(decomposition.none_class_total, 0.0);
    }

    #[test]
    fn decomposition_diagonal_shortcut() {
        let graph = square_path();
        let shortcuts = ShortcutSet::from_pairs(graph.space(), &[(0, 2)]).unwrap();
        let decomposition = benefit_decomposition(&graph, &shortcuts).unwrap();
        assert_eq!(decomposition.by_signature.len(), 1);
        let class = decomposition.by_signature[&(0, 2)];
        assert!((class - 1.0).abs() < 1e-12);
        assert_eq!(decomposition.none_class_total, 0.0);
        assert!(decomposition.residual.abs() < 1e-12);
    }

    #[test]
    fn duplicate_shortcut_within_set_rejected() {
        let space = unit_square();
        let err = ShortcutSet::from_pairs(&space, &[(0, 3), (3, 0)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge { u: 0, v: 3 });
    }

    #[test]
    fn shortcut_weights_come_from_the_metric() {
        let space = unit_square();
        let set = ShortcutSet::from_pairs(&space, &[(2, 0), (0, 3)]).unwrap();
        assert_eq!(set.edges()[0], (0, 2, 2.0_f64.sqrt()));
        assert_eq!(set.edges()[1], (0, 3, 1.0));
        assert_eq!(
            set.endpoints().iter().copied().collect::<Vec<_>>(),
            vec![0, 2, 3]
        );
    }

    #[test]
    fn convenience_wrappers_match_analysis() {
        let graph = square_path();
        let shortcuts = ShortcutSet::from_pairs(graph.space(), &[(0, 3)]).unwrap();
        assert_eq!(signature(&graph, &shortcuts, 3, 1), Ok(Some((0, 3))));
        assert_eq!(restricted_benefit(&graph, &shortcuts, 0, 3), Ok(2.0));
    }
}
