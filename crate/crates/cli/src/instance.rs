//! Line-oriented instance files.
//!
//! Grammar (UTF-8, tokens split on whitespace, `#` starts a comment line,
//! blank lines ignored):
//!
//! ```text
//! DILATION-INSTANCE 1
//! n <int>
//! metric euclidean <dim>         or  metric matrix
//! point <i> <c1> ... <cdim>      or  row <i> <v1> ... <vn>   (n lines)
//! edges <m>
//! edge <u> <v>                   (m lines)
//! ```
//!
//! Vertex ids are 0-based. Numbers are emitted via the shortest
//! round-tripping decimal form, so parse(emit(x)) = x for every valid
//! instance.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use dilation_core::{Graph, GraphError, MetricError, MetricSpace};

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceDescriptor {
    Euclidean { dim: usize, points: Vec<Vec<f64>> },
    Matrix { rows: Vec<Vec<f64>> },
}

impl SpaceDescriptor {
    pub fn n(&self) -> usize {
        match self {
            SpaceDescriptor::Euclidean { points, .. } => points.len(),
            SpaceDescriptor::Matrix { rows } => rows.len(),
        }
    }

    /// The backend name as it appears in reports.
    pub fn backend_name(&self) -> &'static str {
        match self {
            SpaceDescriptor::Euclidean { .. } => "euclidean",
            SpaceDescriptor::Matrix { .. } => "matrix",
        }
    }
}

/// The textual content of an instance: a space descriptor and an edge
/// list, both exactly as written.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub descriptor: SpaceDescriptor,
    pub edges: Vec<(usize, usize)>,
}

impl InstanceFile {
    pub fn n(&self) -> usize {
        self.descriptor.n()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }
}

/// A parsed and fully validated instance.
#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub file: InstanceFile,
    pub space: Arc<MetricSpace>,
    pub graph: Graph,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Metric { line: usize, source: MetricError },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

impl ParseError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            message: message.into(),
        }
    }
}

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    cursor: usize,
    end_line: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let trimmed = raw.trim();
                (!trimmed.is_empty() && !trimmed.starts_with('#')).then_some((i + 1, trimmed))
            })
            .collect();
        let end_line = text.lines().count() + 1;
        Reader {
            lines,
            cursor: 0,
            end_line,
        }
    }

    fn next(&mut self, expected: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        match self.lines.get(self.cursor) {
            Some(&(line, content)) => {
                self.cursor += 1;
                Ok((line, content.split_whitespace().collect()))
            }
            None => Err(ParseError::syntax(
                self.end_line,
                format!("unexpected end of file, expected {expected}"),
            )),
        }
    }

    fn rest(&self) -> Option<usize> {
        self.lines.get(self.cursor).map(|&(line, _)| line)
    }
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("invalid {what} '{token}'")))
}

fn parse_f64(line: usize, token: &str) -> Result<f64, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("invalid number '{token}'")))
}

/// Parses and validates an instance; all validation failures carry the
/// line they arise from.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut reader = Reader::new(text);

    let (header_line, header) = reader.next("header")?;
    if header.first() != Some(&"DILATION-INSTANCE") {
        return Err(ParseError::syntax(
            header_line,
            "expected header 'DILATION-INSTANCE 1'",
        ));
    }
    if header.len() != 2 {
        return Err(ParseError::syntax(
            header_line,
            "header takes exactly one version token",
        ));
    }
    if header[1] != "1" {
        return Err(ParseError::syntax(
            header_line,
            format!("unsupported format version '{}'", header[1]),
        ));
    }

    let (n_line, tokens) = reader.next("'n <count>'")?;
    if tokens.first() != Some(&"n") || tokens.len() != 2 {
        return Err(ParseError::syntax(n_line, "expected 'n <count>'"));
    }
    let n = parse_usize(n_line, tokens[1], "vertex count")?;

    let (metric_line, tokens) = reader.next("'metric euclidean <dim>' or 'metric matrix'")?;
    if tokens.first() != Some(&"metric") {
        return Err(ParseError::syntax(
            metric_line,
            "expected 'metric euclidean <dim>' or 'metric matrix'",
        ));
    }
    enum Kind {
        Euclidean(usize),
        Matrix,
    }
    let kind = match tokens.get(1) {
        Some(&"euclidean") if tokens.len() == 3 => {
            Kind::Euclidean(parse_usize(metric_line, tokens[2], "dimension")?)
        }
        Some(&"matrix") if tokens.len() == 2 => Kind::Matrix,
        _ => {
            return Err(ParseError::syntax(
                metric_line,
                "expected 'metric euclidean <dim>' or 'metric matrix'",
            ))
        }
    };

    let mut row_lines = Vec::with_capacity(n);
    let descriptor = match kind {
        Kind::Euclidean(dim) => {
            let mut points = Vec::with_capacity(n);
            for i in 0..n {
                let (line, tokens) = reader.next(&format!("'point {i} ...'"))?;
                if tokens.first() != Some(&"point") {
                    return Err(ParseError::syntax(
                        line,
                        format!("expected 'point {i} ...'"),
                    ));
                }
                let index = parse_usize(line, tokens.get(1).copied().unwrap_or(""), "point index")?;
                if index != i {
                    return Err(ParseError::syntax(
                        line,
                        format!("expected point {i}, found point {index}"),
                    ));
                }
                if tokens.len() != dim + 2 {
                    return Err(ParseError::syntax(
                        line,
                        format!("expected {dim} coordinates, found {}", tokens.len() - 2),
                    ));
                }
                let coords = tokens[2..]
                    .iter()
                    .map(|t| parse_f64(line, t))
                    .collect::<Result<Vec<f64>, _>>()?;
                points.push(coords);
                row_lines.push(line);
            }
            SpaceDescriptor::Euclidean { dim, points }
        }
        Kind::Matrix => {
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                let (line, tokens) = reader.next(&format!("'row {i} ...'"))?;
                if tokens.first() != Some(&"row") {
                    return Err(ParseError::syntax(line, format!("expected 'row {i} ...'")));
                }
                let index = parse_usize(line, tokens.get(1).copied().unwrap_or(""), "row index")?;
                if index != i {
                    return Err(ParseError::syntax(
                        line,
                        format!("expected row {i}, found row {index}"),
                    ));
                }
                if tokens.len() != n + 2 {
                    return Err(ParseError::syntax(
                        line,
                        format!("expected {n} values, found {}", tokens.len() - 2),
                    ));
                }
                let values = tokens[2..]
                    .iter()
                    .map(|t| parse_f64(line, t))
                    .collect::<Result<Vec<f64>, _>>()?;
                rows.push(values);
                row_lines.push(line);
            }
            SpaceDescriptor::Matrix { rows }
        }
    };

    let (edges_line, tokens) = reader.next("'edges <count>'")?;
    if tokens.first() != Some(&"edges") || tokens.len() != 2 {
        return Err(ParseError::syntax(edges_line, "expected 'edges <count>'"));
    }
    let m = parse_usize(edges_line, tokens[1], "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..m {
        let (line, tokens) = reader.next("'edge <u> <v>'")?;
        if tokens.first() != Some(&"edge") || tokens.len() != 3 {
            return Err(ParseError::syntax(line, "expected 'edge <u> <v>'"));
        }
        let u = parse_usize(line, tokens[1], "vertex id")?;
        let v = parse_usize(line, tokens[2], "vertex id")?;
        for index in [u, v] {
            if index >= n {
                return Err(ParseError::Graph {
                    line,
                    source: GraphError::IndexOutOfRange { index, size: n },
                });
            }
        }
        if u == v {
            return Err(ParseError::Graph {
                line,
                source: GraphError::SelfLoop(u),
            });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::Graph {
                line,
                source: GraphError::DuplicateEdge {
                    u: u.min(v),
                    v: u.max(v),
                },
            });
        }
        edges.push((u, v));
    }

    if let Some(line) = reader.rest() {
        return Err(ParseError::syntax(line, "unexpected trailing content"));
    }

    let space = match &descriptor {
        SpaceDescriptor::Euclidean { points, .. } => MetricSpace::from_points(points.clone()),
        SpaceDescriptor::Matrix { rows } => MetricSpace::from_matrix(rows.clone()),
    }
    .map_err(|source| ParseError::Metric {
        line: metric_error_line(&source, n_line, metric_line, &row_lines),
        source,
    })?;
    let space = Arc::new(space);

    // Per-edge problems were caught above with their own lines; only
    // connectivity can still fail here.
    let graph = Graph::new(Arc::clone(&space), &edges).map_err(|source| ParseError::Graph {
        line: edges_line,
        source,
    })?;

    Ok(ParsedInstance {
        file: InstanceFile { descriptor, edges },
        space,
        graph,
    })
}

/// Best line to blame for a metric validation failure: the last data row
/// involved, or the structural line that declared the shape.
fn metric_error_line(
    error: &MetricError,
    n_line: usize,
    metric_line: usize,
    row_lines: &[usize],
) -> usize {
    let row = |index: usize| row_lines.get(index).copied().unwrap_or(metric_line);
    match *error {
        MetricError::TooFewPoints(_) => n_line,
        MetricError::ZeroDimension => metric_line,
        MetricError::DimensionMismatch { index, .. }
        | MetricError::NonFiniteCoordinate { index }
        | MetricError::RowLengthMismatch { index, .. }
        | MetricError::NonzeroDiagonal { index, .. } => row(index),
        MetricError::NonFiniteEntry { i, j }
        | MetricError::NegativeDistance { i, j, .. }
        | MetricError::ZeroDistanceBetweenDistinctPoints { i, j }
        | MetricError::AsymmetricMatrix { i, j, .. } => row(i.max(j)),
        MetricError::TriangleViolation { i, j, k } => row(i.max(j).max(k)),
        MetricError::IndexOutOfRange { .. } => metric_line,
    }
}

/// Renders an instance in the file grammar. Inverse of parsing: the
/// emitted text parses back to an equal [`InstanceFile`].
pub fn emit_instance(file: &InstanceFile) -> String {
    let mut out = String::new();
    out.push_str("DILATION-INSTANCE 1\n");
    let _ = writeln!(out, "n {}", file.n());
    match &file.descriptor {
        SpaceDescriptor::Euclidean { dim, points } => {
            let _ = writeln!(out, "metric euclidean {dim}");
            for (i, point) in points.iter().enumerate() {
                let _ = write!(out, "point {i}");
                for c in point {
                    let _ = write!(out, " {c}");
                }
                out.push('\n');
            }
        }
        SpaceDescriptor::Matrix { rows } => {
            out.push_str("metric matrix\n");
            for (i, values) in rows.iter().enumerate() {
                let _ = write!(out, "row {i}");
                for v in values {
                    let _ = write!(out, " {v}");
                }
                out.push('\n');
            }
        }
    }
    let _ = writeln!(out, "edges {}", file.edges.len());
    for &(u, v) in &file.edges {
        let _ = writeln!(out, "edge {u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "DILATION-INSTANCE 1\nn 4\nmetric euclidean 2\npoint 0 0 0\npoint 1 1 0\npoint 2 1 1\npoint 3 0 1\nedges 3\nedge 0 1\nedge 1 2\nedge 2 3\n";

    #[test]
    fn parses_the_unit_square_instance() {
        let parsed = parse_instance(SQUARE).unwrap();
        assert_eq!(parsed.file.n(), 4);
        assert_eq!(parsed.file.m(), 3);
        assert_eq!(parsed.graph.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(parsed.space.distance(0, 2), 2.0_f64.sqrt());
        assert_eq!(parsed.file.descriptor.backend_name(), "euclidean");
    }

    #[test]
    fn round_trips() {
        let parsed = parse_instance(SQUARE).unwrap();
        assert_eq!(emit_instance(&parsed.file), SQUARE);
        let again = parse_instance(&emit_instance(&parsed.file)).unwrap();
        assert_eq!(again.file, parsed.file);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# a comment\n\n{SQUARE}# trailing comment\n");
        assert!(parse_instance(&text).is_ok());
    }

    #[test]
    fn wrong_version_is_rejected_on_line_one() {
        let err = parse_instance(&SQUARE.replace("DILATION-INSTANCE 1", "DILATION-INSTANCE 2"))
            .unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }));
    }

    #[test]
    fn self_loop_carries_its_line() {
        let err = parse_instance(&SQUARE.replace("edge 0 1", "edge 0 0")).unwrap_err();
        assert_eq!(
            err,
            ParseError::Graph {
                line: 9,
                source: GraphError::SelfLoop(0),
            }
        );
    }

    #[test]
    fn duplicate_edge_carries_its_line() {
        let err = parse_instance(&SQUARE.replace("edge 1 2", "edge 1 0")).unwrap_err();
        assert_eq!(
            err,
            ParseError::Graph {
                line: 10,
                source: GraphError::DuplicateEdge { u: 0, v: 1 },
            }
        );
    }

    #[test]
    fn disconnection_points_at_the_edge_section() {
        let text = SQUARE.replace(
            "edges 3\nedge 0 1\nedge 1 2\nedge 2 3\n",
            "edges 1\nedge 0 1\n",
        );
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Graph {
                line: 8,
                source: GraphError::DisconnectedGraph { .. },
            }
        ));
    }

    #[test]
    fn matrix_instances_parse() {
        let text = "DILATION-INSTANCE 1\nn 3\nmetric matrix\nrow 0 0 1 2\nrow 1 1 0 1\nrow 2 2 1 0\nedges 2\nedge 0 1\nedge 1 2\n";
        let parsed = parse_instance(text).unwrap();
        assert_eq!(parsed.space.distance(0, 2), 2.0);
        assert_eq!(emit_instance(&parsed.file), text);
    }

    #[test]
    fn triangle_violation_blames_the_last_row_involved() {
        let text = "DILATION-INSTANCE 1\nn 3\nmetric matrix\nrow 0 0 1 3\nrow 1 1 0 1\nrow 2 3 1 0\nedges 2\nedge 0 1\nedge 1 2\n";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(
            err,
            ParseError::Metric {
                line: 6,
                source: MetricError::TriangleViolation { i: 0, j: 1, k: 2 },
            }
        );
    }

    #[test]
    fn out_of_range_point_index_is_a_syntax_error() {
        let err = parse_instance(&SQUARE.replace("point 2 1 1", "point 7 1 1")).unwrap_err();
        assert_eq!(
            err,
            ParseError::syntax(6, "expected point 2, found point 7")
        );
    }

    #[test]
    fn truncated_file_reports_the_end() {
        let err = parse_instance("DILATION-INSTANCE 1\nn 4\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }));
    }

    #[test]
    fn trailing_content_is_rejected() {
        let err = parse_instance(&format!("{SQUARE}edge 0 3\n")).unwrap_err();
        assert_eq!(err, ParseError::syntax(12, "unexpected trailing content"));
    }

    #[test]
    fn edge_out_of_range_carries_its_line() {
        let err = parse_instance(&SQUARE.replace("edge 2 3", "edge 2 9")).unwrap_err();
        assert_eq!(
            err,
            ParseError::Graph {
                line: 11,
                source: GraphError::IndexOutOfRange { index: 9, size: 4 },
            }
        );
    }
}
