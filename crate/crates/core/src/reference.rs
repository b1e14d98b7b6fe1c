//! Independent shortest-path reference used to cross-check [`apsp`]
//! (crate::apsp). Kept deliberately naive: a textbook Floyd–Warshall with
//! no tie-breaking refinements, sharing no code with the Dijkstra path.

use crate::graph::Graph;

/// Dense shortest-path distances by Floyd–Warshall, row-major n×n.
pub fn floyd_warshall(graph: &Graph) -> Vec<f64> {
    let n = graph.n();
    let mut dist = vec![f64::INFINITY; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
    }
    for &(u, v) in graph.edges() {
        let w = graph.weight(u, v);
        dist[u * n + v] = w;
        dist[v * n + u] = w;
    }
    for k in 0..n {
        for i in 0..n {
            let ik = dist[i * n + k];
            if ik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let through = ik + dist[k * n + j];
                if through < dist[i * n + j] {
                    dist[i * n + j] = through;
                }
            }
        }
    }
    dist
}
