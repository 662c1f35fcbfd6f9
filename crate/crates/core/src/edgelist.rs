//! Plain-text edge lists.
//!
//! One edge per line as two whitespace-separated 0-based ids. Lines starting
//! with `#` and blank lines are skipped. An optional `n <count>` line fixes the
//! vertex count; otherwise it is `max id + 1`. Duplicate and reversed edges
//! collapse to one.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{GraphonError, Result};
use crate::graph::Graph;

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let first = fields.next().unwrap();
        if first == "n" {
            let count = fields
                .next()
                .ok_or_else(|| parse_err(line_no, "missing vertex count after 'n'"))?;
            let count = count
                .parse::<usize>()
                .map_err(|e| parse_err(line_no, &format!("bad vertex count: {e}")))?;
            if declared.replace(count).is_some() {
                return Err(parse_err(line_no, "duplicate 'n' header"));
            }
            continue;
        }
        let second = fields
            .next()
            .ok_or_else(|| parse_err(line_no, "expected two vertex ids"))?;
        if fields.next().is_some() {
            return Err(parse_err(line_no, "expected exactly two vertex ids"));
        }
        let a = parse_id(first, line_no)?;
        let b = parse_id(second, line_no)?;
        if a == b {
            return Err(parse_err(line_no, &format!("self-loop at vertex {a}")));
        }
        max_id = Some(max_id.map_or(a.max(b), |m| m.max(a).max(b)));
        edges.push((a, b));
    }
    let inferred = max_id.map_or(0, |m| m + 1);
    let n = match declared {
        Some(n) if n < inferred => {
            return Err(GraphonError::InvalidParameter(format!(
                "header declares {n} vertices but ids reach {}",
                inferred - 1
            )))
        }
        Some(n) => n,
        None => inferred,
    };
    Graph::new(n, edges)
}

fn parse_id(field: &str, line: usize) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|e| parse_err(line, &format!("bad vertex id {field:?}: {e}")))
}

fn parse_err(line: usize, message: &str) -> GraphonError {
    GraphonError::Parse {
        line,
        message: message.to_string(),
    }
}

/// Serializes with an `n` header so trailing isolated vertices survive.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * g.edge_count() + 16);
    writeln!(out, "n {}", g.n()).unwrap();
    for &(a, b) in g.edges() {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> std::io::Result<Result<Graph>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_edge_list(&text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_duplicates_and_header() {
        let g = parse_edge_list("# triangle\n0 1\n1 0\n2 1\n\n0 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        let h = parse_edge_list("n 6\n0 1\n").unwrap();
        assert_eq!(h.n(), 6);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            parse_edge_list("0 1\n3\n"),
            Err(GraphonError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("1 1\n"),
            Err(GraphonError::Parse { line: 1, .. })
        ));
        assert!(parse_edge_list("n 2\n0 5\n").is_err());
    }

    #[test]
    fn round_trip() {
        let g = Graph::celebrity(50, 0.5).unwrap();
        assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    }
}
