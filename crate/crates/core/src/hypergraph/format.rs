//! Plain-text hypergraph files.
//!
//! ```text
//! # optional comment lines
//! k d n m
//! v v ... v      (m lines of k vertex indices)
//! ```
//!
//! The file must end with a newline. A hypergraph whose vertex degrees
//! differ is written with `d = 0`, which `decode` accepts without a
//! regularity check.

use std::fmt::Write;

use super::{Hypergraph, HypergraphError};

fn parse_err(line: usize, message: impl Into<String>) -> HypergraphError {
    HypergraphError::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line_no: usize, text: &str) -> Result<Vec<usize>, HypergraphError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

impl Hypergraph {
    pub fn encode(&self) -> String {
        let mut out = String::new();
        let d = self.d.unwrap_or(0);
        writeln!(out, "{} {} {} {}", self.k, d, self.n, self.m()).unwrap();
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn decode(text: &str) -> Result<Hypergraph, HypergraphError> {
        if !text.ends_with('\n') {
            let last = text.lines().count().max(1);
            return Err(parse_err(last, "missing trailing newline"));
        }
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim_start().starts_with('#'));

        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let head = numbers(hl, header)?;
        let [k, d, n, m] = head[..] else {
            return Err(parse_err(hl, format!("header needs `k d n m`, found {} fields", head.len())));
        };
        if k == 0 {
            return Err(parse_err(hl, "k must be positive"));
        }

        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            if edges.len() == m {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(parse_err(ln, format!("more than the declared {m} edges")));
            }
            let e = numbers(ln, line)?;
            if e.len() != k {
                return Err(parse_err(ln, format!("edge has {} vertices, expected {k}", e.len())));
            }
            if let Some(v) = e.iter().find(|&&v| v >= n) {
                return Err(parse_err(ln, format!("vertex {v} out of range for n = {n}")));
            }
            edges.push(e);
        }
        if edges.len() != m {
            return Err(HypergraphError::Consistency(format!(
                "header declares {m} edges, found {}",
                edges.len()
            )));
        }
        if d == 0 && m > 0 {
            Hypergraph::from_edges(k, n, edges)
        } else {
            if m * k != n * d {
                return Err(HypergraphError::Consistency(format!(
                    "m*k = {} but n*d = {}",
                    m * k,
                    n * d
                )));
            }
            Hypergraph::new(k, d, n, edges)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::generate_configuration;

    #[test]
    fn encodes_a_single_edge() {
        let h = Hypergraph::new(3, 1, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(h.encode(), "3 1 3 1\n0 1 2\n");
    }

    #[test]
    fn short_edge_line_is_a_parse_error() {
        assert_eq!(
            Hypergraph::decode("3 1 3 1\n0 1\n"),
            Err(parse_err(2, "edge has 2 vertices, expected 3"))
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = |t: &str| match Hypergraph::decode(t) {
            Err(HypergraphError::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("3 1 3 1\n0 1 2"), 2);
        assert_eq!(err("# c\n3 1 3\n"), 2);
        assert_eq!(err("3 1 3 1\n# c\n0 x 2\n"), 3);
        assert_eq!(err("3 1 3 1\n0 1 5\n"), 2);
        assert_eq!(err("3 1 3 1\n0 1 2\n0 1 2\n"), 3);
    }

    #[test]
    fn inconsistent_headers() {
        assert!(matches!(
            Hypergraph::decode("3 2 3 1\n0 1 2\n"),
            Err(HypergraphError::Consistency(_))
        ));
        assert!(matches!(
            Hypergraph::decode("3 1 3 2\n0 1 2\n"),
            Err(HypergraphError::Consistency(_))
        ));
    }

    #[test]
    fn comments_are_skipped() {
        let h = Hypergraph::decode("# fano\n3 3 7 7\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n# mid\n1 4 6\n2 3 6\n2 4 5\n").unwrap();
        assert_eq!(h, Hypergraph::fano_plane());
    }

    #[test]
    fn round_trip() {
        let g = generate_configuration(3, 3, 30, 2).unwrap();
        assert_eq!(Hypergraph::decode(&g.encode()).unwrap(), g);
        let irregular = Hypergraph::from_edges(3, 4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert_eq!(Hypergraph::decode(&irregular.encode()).unwrap(), irregular);
    }
}
