//! Weighted undirected graphs over a metric space, all-pairs shortest
//! paths, and the single-edge incremental distance update.
//!
//! Edge weights are never stored: an edge {u,v} always weighs exactly
//! the metric distance of its endpoints, so weights are read back from
//! the space on demand.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::metric::MetricSpace;
use crate::EPS_ABS;

/// Sentinel in predecessor tables: no predecessor (source or unreached).
pub(crate) const NO_PRED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex index {index} out of range for {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({u},{v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph is disconnected: components {components:?}")]
    DisconnectedGraph { components: Vec<Vec<usize>> },
    #[error("shortcut ({u},{v}) carries weight {got}, metric distance is {expected}")]
    WeightMismatch {
        u: usize,
        v: usize,
        got: f64,
        expected: f64,
    },
}

/// Connected, simple, undirected graph whose vertices are the points of a
/// metric space and whose edge weights are the metric distances.
#[derive(Debug, Clone)]
pub struct Graph {
    space: Arc<MetricSpace>,
    edges: Vec<(usize, usize)>, // canonical u < v, sorted
    adjacency: Vec<Vec<usize>>, // neighbor lists, each sorted
}

impl Graph {
    /// Validates and builds a graph. Edges may come in any order and either
    /// endpoint orientation; they are canonicalized to u < v and sorted.
    pub fn new(space: Arc<MetricSpace>, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = space.len();
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            for index in [a, b] {
                if index >= n {
                    return Err(GraphError::IndexOutOfRange { index, size: n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        for window in edges.windows(2) {
            if window[0] == window[1] {
                let (u, v) = window[0];
                return Err(GraphError::DuplicateEdge { u, v });
            }
        }

        let components = connected_components(n, &edges);
        if components.len() != 1 {
            return Err(GraphError::DisconnectedGraph { components });
        }

        Ok(Self::assemble(space, edges))
    }

    fn assemble(space: Arc<MetricSpace>, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); space.len()];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            space,
            edges,
            adjacency,
        }
    }

    pub fn n(&self) -> usize {
        self.space.len()
    }

    pub fn space(&self) -> &Arc<MetricSpace> {
        &self.space
    }

    /// Edges in canonical sorted order, each as (u, v) with u < v.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// Weight of an edge or candidate edge: always the metric distance.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.space.distance(u, v)
    }

    /// All unordered vertex pairs absent from the edge set, in lexicographic
    /// order. These are the eligible shortcut candidates.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2 - self.edges.len());
        for u in 0..n {
            for v in (u + 1)..n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The graph with extra edges added. Pairs already present are skipped,
    /// so shortcut sets overlapping E are harmless. Connectivity and
    /// simplicity are preserved by construction; no revalidation runs.
    pub fn augmented(&self, extra: &[(usize, usize)]) -> Graph {
        let mut edges = self.edges.clone();
        for &(a, b) in extra {
            let key = (a.min(b), a.max(b));
            if self.edges.binary_search(&key).is_err() && !edges[self.edges.len()..].contains(&key)
            {
                edges.push(key);
            }
        }
        edges.sort_unstable();
        Self::assemble(Arc::clone(&self.space), edges)
    }
}

/// Partition of `0..n` into connected components under `edges`.
/// Each component is sorted ascending; components are ordered by their
/// smallest member. Endpoints must be in range.
pub fn connected_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut component = vec![start];
        seen[start] = true;
        let mut frontier = vec![start];
        while let Some(u) = frontier.pop() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    component.push(v);
                    frontier.push(v);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

/// Whether `edges` connect all of `0..n`, along with the component
/// partition itself.
pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> (bool, Vec<Vec<usize>>) {
    let components = connected_components(n, edges);
    (components.len() == 1, components)
}

/// Dense all-pairs shortest-path distances plus the canonical predecessor
/// table. `pred[s][v]` is the vertex before `v` on the canonical shortest
/// path from `s`; the canonical path minimizes length, then hop count,
/// then predecessor vertex id at every step.
#[derive(Debug, Clone)]
pub struct DistanceOracle {
    n: usize,
    dist: Vec<f64>,   // row-major n*n
    pred: Vec<usize>, // row-major n*n, NO_PRED where undefined
}

impl DistanceOracle {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    /// Predecessor of `v` on the canonical path from `s`, or None when
    /// `v == s`.
    pub fn pred(&self, s: usize, v: usize) -> Option<usize> {
        let p = self.pred[s * self.n + v];
        (p != NO_PRED).then_some(p)
    }

    #[inline]
    pub(crate) fn dist_row(&self, s: usize) -> &[f64] {
        &self.dist[s * self.n..(s + 1) * self.n]
    }

    /// Distances and predecessors after inserting one edge (u,v) of weight
    /// w, computed out-of-place from this oracle:
    ///
    ///   new(a,b) = min(dist(a,b), dist(a,u)+w+dist(v,b), dist(a,v)+w+dist(u,b))
    ///
    /// Exact for a single insertion. Only strict improvements are taken,
    /// so ties keep the old path; the resulting predecessor table is valid
    /// but does not follow the canonical tie-break. Recompute via [`apsp`]
    /// where canonical paths matter.
    pub fn with_shortcut(&self, u: usize, v: usize, w: f64) -> DistanceOracle {
        let n = self.n;
        let mut dist = self.dist.clone();
        let mut pred = self.pred.clone();
        let row_u = self.dist_row(u);
        let row_v = self.dist_row(v);
        for a in 0..n {
            let au = self.dist[a * n + u];
            let av = self.dist[a * n + v];
            for b in 0..n {
                if a == b {
                    continue;
                }
                let cur = dist[a * n + b];
                let via_uv = au + w + row_v[b];
                let via_vu = av + w + row_u[b];
                if via_uv < cur && via_uv <= via_vu {
                    dist[a * n + b] = via_uv;
                    pred[a * n + b] = if b == v { u } else { self.pred[v * n + b] };
                } else if via_vu < cur {
                    dist[a * n + b] = via_vu;
                    pred[a * n + b] = if b == u { v } else { self.pred[u * n + b] };
                }
            }
        }
        DistanceOracle { n, dist, pred }
    }
}

/// All-pairs shortest paths by per-source Dijkstra, rows in parallel.
///
/// Each source row relaxes on the lexicographic key (distance, hops,
/// predecessor id) with exact float comparisons, which makes dist and pred
/// independent of edge-list order and thread count.
pub fn apsp(graph: &Graph) -> DistanceOracle {
    let n = graph.n();
    let mut dist = vec![f64::INFINITY; n * n];
    let mut pred = vec![NO_PRED; n * n];
    dist.par_chunks_mut(n)
        .zip(pred.par_chunks_mut(n))
        .enumerate()
        .for_each(|(source, (dist_row, pred_row))| {
            dijkstra_row(graph, source, dist_row, pred_row);
        });
    DistanceOracle { n, dist, pred }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Weights are finite and non-negative, so total_cmp agrees with
        // the numeric order.
        self.dist
            .total_cmp(&other.dist)
            .then_with(|| self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra_row(graph: &Graph, source: usize, dist_row: &mut [f64], pred_row: &mut [usize]) {
    let space = graph.space();
    let n = graph.n();
    let mut hops = vec![usize::MAX; n];
    let mut settled = vec![false; n];
    dist_row[source] = 0.0;
    hops[source] = 0;

    let mut heap = BinaryHeap::new();
    heap.push(Reverse(HeapEntry {
        dist: 0.0,
        vertex: source,
    }));
    while let Some(Reverse(HeapEntry { dist: d, vertex: a })) = heap.pop() {
        if settled[a] || d > dist_row[a] {
            continue;
        }
        settled[a] = true;
        for &b in graph.neighbors(a) {
            if settled[b] {
                continue;
            }
            let nd = dist_row[a] + space.distance(a, b);
            let nh = hops[a] + 1;
            let better = nd < dist_row[b]
                || (nd == dist_row[b] && (nh < hops[b] || (nh == hops[b] && a < pred_row[b])));
            if better {
                // Equal-distance refinements reuse the entry already in
                // the heap; only genuine distance drops need a new one.
                if nd < dist_row[b] {
                    heap.push(Reverse(HeapEntry {
                        dist: nd,
                        vertex: b,
                    }));
                }
                dist_row[b] = nd;
                hops[b] = nh;
                pred_row[b] = a;
            }
        }
    }
}

/// Checked single-edge distance update: verifies endpoints and that the
/// weight matches the metric distance, then applies
/// [`DistanceOracle::with_shortcut`].
pub fn augment_distances(
    space: &MetricSpace,
    oracle: &DistanceOracle,
    u: usize,
    v: usize,
    w: f64,
) -> Result<DistanceOracle, GraphError> {
    let n = oracle.n();
    for index in [u, v] {
        if index >= n {
            return Err(GraphError::IndexOutOfRange { index, size: n });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    let expected = space.distance(u, v);
    if (w - expected).abs() > EPS_ABS {
        return Err(GraphError::WeightMismatch {
            u,
            v,
            got: w,
            expected,
        });
    }
    Ok(oracle.with_shortcut(u, v, w))
}
