//! Deterministic random instance generation.
//!
//! All randomness flows through SplitMix64, a 64-bit generator with a
//! fixed, well-known update (Steele, Lea, Flood: "Fast splittable
//! pseudorandom number generators"), implemented here in full so the same
//! (model, n, seed) triple yields byte-identical instances on every
//! platform. Ranged draws use plain modulo reduction; the tiny bias is
//! irrelevant for test-instance supply and keeps the stream layout
//! trivially portable.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::instance::{InstanceFile, SpaceDescriptor};

/// SplitMix64. State advances by the golden-gamma constant; output mixes
/// the state through two xor-shift-multiply rounds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1): the top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in 0..bound by modulo reduction.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }
}

/// Instance families the generator knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenModel {
    /// Random points in the unit square; a uniform spanning tree plus
    /// ceil(n/2) extra random edges.
    UniformSquare,
    /// Random points in the unit square connected in index order.
    Path,
    /// Random points in the unit square; a uniform spanning tree only.
    RandomTree,
}

impl GenModel {
    pub fn name(self) -> &'static str {
        match self {
            GenModel::UniformSquare => "uniform-square",
            GenModel::Path => "path",
            GenModel::RandomTree => "random-tree",
        }
    }
}

/// Points kept at least this far apart, so generated instances always
/// clear the metric-space distinctness check with a wide margin.
const MIN_SEPARATION: f64 = 1e-6;

fn random_points(rng: &mut SplitMix64, n: usize) -> Vec<Vec<f64>> {
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
    while points.len() < n {
        let candidate = vec![rng.next_f64(), rng.next_f64()];
        let crowded = points.iter().any(|p| {
            let dx = p[0] - candidate[0];
            let dy = p[1] - candidate[1];
            (dx * dx + dy * dy).sqrt() < MIN_SEPARATION
        });
        if !crowded {
            points.push(candidate);
        }
    }
    points
}

/// Uniform random labeled tree on 0..n, decoded from a random sequence
/// (always attaching the smallest available leaf). Edges come out
/// canonical (u < v) but unsorted.
fn random_tree_edges(rng: &mut SplitMix64, n: usize) -> Vec<(usize, usize)> {
    let sequence: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.next_below(n as u64) as usize)
        .collect();
    let mut degree = vec![1usize; n];
    for &p in &sequence {
        degree[p] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &p in &sequence {
        let Reverse(leaf) = leaves.pop().expect("tree decoding always has a leaf");
        edges.push((leaf.min(p), leaf.max(p)));
        degree[p] -= 1;
        if degree[p] == 1 {
            leaves.push(Reverse(p));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Generates one instance. Deterministic in (model, n, seed); n must be
/// at least 2.
pub fn generate_instance(model: GenModel, n: usize, seed: u64) -> InstanceFile {
    assert!(n >= 2, "instances need at least 2 points");
    let mut rng = SplitMix64::new(seed);
    let points = random_points(&mut rng, n);
    let mut edges = match model {
        GenModel::Path => (0..n - 1).map(|i| (i, i + 1)).collect(),
        GenModel::RandomTree => random_tree_edges(&mut rng, n),
        GenModel::UniformSquare => {
            let mut edges = random_tree_edges(&mut rng, n);
            edges.sort_unstable();
            let mut pool: Vec<(usize, usize)> = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if edges.binary_search(&(u, v)).is_err() {
                        pool.push((u, v));
                    }
                }
            }
            // Partial Fisher-Yates: the first `extra` slots become a
            // uniform sample without replacement.
            let extra = n.div_ceil(2).min(pool.len());
            for i in 0..extra {
                let j = i + rng.next_below((pool.len() - i) as u64) as usize;
                pool.swap(i, j);
                edges.push(pool[i]);
            }
            edges
        }
    };
    edges.sort_unstable();
    InstanceFile {
        descriptor: SpaceDescriptor::Euclidean { dim: 2, points },
        edges,
    }
}

/// The degenerate straight-line instance: integer points on a line,
/// connected in order. Every shortest path follows the line, so average
/// dilation is exactly 1 and no shortcut has any benefit.
pub fn collinear_path_instance(n: usize) -> InstanceFile {
    assert!(n >= 2, "instances need at least 2 points");
    InstanceFile {
        descriptor: SpaceDescriptor::Euclidean {
            dim: 1,
            points: (0..n).map(|i| vec![i as f64]).collect(),
        },
        edges: (0..n - 1).map(|i| (i, i + 1)).collect(),
    }
}
