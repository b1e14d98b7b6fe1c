//! Metric space over the vertex ground set.
//!
//! Distances come either from Euclidean point coordinates or from an
//! explicit distance matrix. Both backends are validated at construction
//! and cached into a dense matrix, since every downstream computation
//! touches all pairs.

use thiserror::Error;

use crate::EPS_ABS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("a metric space needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point coordinates must have dimension at least 1")]
    ZeroDimension,
    #[error("point {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },
    #[error("matrix row {index} has {got} entries, expected {expected}")]
    RowLengthMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("matrix entry ({i},{j}) is not finite")]
    NonFiniteEntry { i: usize, j: usize },
    #[error("matrix diagonal entry ({index},{index}) is {value}, expected 0")]
    NonzeroDiagonal { index: usize, value: f64 },
    #[error("matrix entry ({i},{j}) is negative: {value}")]
    NegativeDistance { i: usize, j: usize, value: f64 },
    #[error("distance between distinct points {i} and {j} is zero")]
    ZeroDistanceBetweenDistinctPoints { i: usize, j: usize },
    #[error("matrix is asymmetric at ({i},{j}): {forward} vs {backward}")]
    AsymmetricMatrix {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },
    #[error("triangle inequality violated on ({i},{j},{k}): d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("vertex index {index} out of range for {size} points")]
    IndexOutOfRange { index: usize, size: usize },
}

/// Where the distances of a [`MetricSpace`] came from.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricBackend {
    /// Points in d-dimensional Euclidean space; distances are L2 norms.
    Euclidean { dim: usize, points: Vec<Vec<f64>> },
    /// Distances were given directly as a symmetric matrix.
    Matrix,
}

/// A finite metric space on points `0..n`, with all pairwise distances
/// validated and cached at construction.
///
/// Immutable once built; shared freely across worker threads.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    backend: MetricBackend,
    dist: Vec<f64>, // row-major n*n, symmetric, zero diagonal
}

impl MetricSpace {
    /// Builds a Euclidean metric space from point coordinates.
    ///
    /// All points must share one dimension (>= 1) and be pairwise distinct.
    /// The triangle inequality holds automatically for this backend.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = points.len();
        if n < 2 {
            return Err(MetricError::TooFewPoints(n));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(MetricError::ZeroDimension);
        }
        for (index, point) in points.iter().enumerate() {
            if point.len() != dim {
                return Err(MetricError::DimensionMismatch {
                    index,
                    got: point.len(),
                    expected: dim,
                });
            }
            if point.iter().any(|c| !c.is_finite()) {
                return Err(MetricError::NonFiniteCoordinate { index });
            }
        }

        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean_distance(&points[i], &points[j]);
                if d <= EPS_ABS {
                    return Err(MetricError::ZeroDistanceBetweenDistinctPoints { i, j });
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }

        Ok(MetricSpace {
            n,
            backend: MetricBackend::Euclidean { dim, points },
            dist,
        })
    }

    /// Builds a metric space from an explicit distance matrix.
    ///
    /// Checks, within the absolute tolerance [`EPS_ABS`](crate::EPS_ABS):
    /// zero diagonal, symmetry, strict positivity off the diagonal, and the
    /// triangle inequality over all vertex triples. The cached matrix is
    /// symmetrized from the upper triangle so lookups are bit-identical
    /// under argument swap.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if n < 2 {
            return Err(MetricError::TooFewPoints(n));
        }
        for (index, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::RowLengthMismatch {
                    index,
                    got: row.len(),
                    expected: n,
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(MetricError::NonFiniteEntry { i, j });
                }
            }
        }
        for (index, row) in rows.iter().enumerate() {
            if row[index].abs() > EPS_ABS {
                return Err(MetricError::NonzeroDiagonal {
                    index,
                    value: row[index],
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for j in (i + 1)..n {
                let forward = row[j];
                let backward = rows[j][i];
                if (forward - backward).abs() > EPS_ABS {
                    return Err(MetricError::AsymmetricMatrix {
                        i,
                        j,
                        forward,
                        backward,
                    });
                }
                if forward < 0.0 {
                    return Err(MetricError::NegativeDistance {
                        i,
                        j,
                        value: forward,
                    });
                }
                if forward <= EPS_ABS {
                    return Err(MetricError::ZeroDistanceBetweenDistinctPoints { i, j });
                }
            }
        }

        // Canonical cache: upper triangle mirrored, diagonal forced to 0.
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                dist[i * n + j] = rows[i][j];
                dist[j * n + i] = rows[i][j];
            }
        }

        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i * n + k] > dist[i * n + j] + dist[j * n + k] + EPS_ABS {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }

        Ok(MetricSpace {
            n,
            backend: MetricBackend::Matrix,
            dist,
        })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn backend(&self) -> &MetricBackend {
        &self.backend
    }

    /// Metric distance between two points.
    ///
    /// Panics if either index is out of range; use [`try_distance`]
    /// (MetricSpace::try_distance) for checked access.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Checked variant of [`distance`](MetricSpace::distance).
    pub fn try_distance(&self, i: usize, j: usize) -> Result<f64, MetricError> {
        for index in [i, j] {
            if index >= self.n {
                return Err(MetricError::IndexOutOfRange {
                    index,
                    size: self.n,
                });
            }
        }
        Ok(self.distance(i, j))
    }
}

/// L2 distance with fixed left-to-right accumulation of squared coordinate
/// differences, so repeated evaluation is bit-identical.
fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        sum += d * d;
    }
    sum.sqrt()
}
