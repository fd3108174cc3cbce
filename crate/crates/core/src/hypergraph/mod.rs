//! Explicit `k`-uniform hypergraphs.
//!
//! Edges are ordered multisets, so the loops and repeated edges that a raw
//! pairing-model draw may contain are representable. Simplicity is a
//! predicate ([`Hypergraph::is_simple`]), not an invariant.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use serde::Serialize;
use thiserror::Error;

use crate::rng;

mod format;
mod incidence;

pub use incidence::{Girth, IncidenceGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no simple hypergraph after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("inconsistent hypergraph: {0}")]
    Consistency(String),
    #[error("operation needs a regular hypergraph")]
    NotRegular,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Hypergraph {
    k: usize,
    /// `None` when vertex degrees differ.
    d: Option<usize>,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// A `k`-uniform `d`-regular hypergraph on `n` vertices.
    pub fn new(k: usize, d: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let h = Self::from_edges(k, n, edges)?;
        if h.d != Some(d) && !(h.edges.is_empty() && d == 0) {
            return Err(HypergraphError::Consistency(format!(
                "declared d = {d} but vertex degrees are {}",
                h.degree_summary()
            )));
        }
        Ok(Hypergraph { d: Some(d), ..h })
    }

    /// A `k`-uniform hypergraph with arbitrary vertex degrees.
    pub fn from_edges(k: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        if k == 0 {
            return Err(HypergraphError::InvalidParameters("k must be positive".into()));
        }
        let mut degree = vec![0usize; n];
        for (i, e) in edges.iter().enumerate() {
            if e.len() != k {
                return Err(HypergraphError::Consistency(format!(
                    "edge {i} has {} vertices, expected {k}",
                    e.len()
                )));
            }
            for &v in e {
                if v >= n {
                    return Err(HypergraphError::Consistency(format!(
                        "edge {i} uses vertex {v} but n = {n}"
                    )));
                }
                degree[v] += 1;
            }
        }
        let d = match degree.first() {
            Some(&d0) if degree.iter().all(|&x| x == d0) => Some(d0),
            Some(_) => None,
            None => Some(0),
        };
        Ok(Hypergraph { k, d, n, edges })
    }

    /// The seven lines of the projective plane of order 2.
    pub fn fano_plane() -> Self {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        Self::new(3, 3, 7, lines.iter().map(|l| l.to_vec()).collect()).expect("Fano plane is 3-regular")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> Option<usize> {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Number of edge slots holding each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut degree = vec![0usize; self.n];
        for &v in self.edges.iter().flatten() {
            degree[v] += 1;
        }
        degree
    }

    fn degree_summary(&self) -> String {
        let deg = self.degrees();
        let lo = deg.iter().min().copied().unwrap_or(0);
        let hi = deg.iter().max().copied().unwrap_or(0);
        format!("between {lo} and {hi}")
    }

    /// No loops (repeated vertex inside an edge) and no two edges equal as
    /// multisets.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges.iter().all(|e| {
            let mut s = e.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1]) && seen.insert(s)
        })
    }

    /// `edges` are pairwise disjoint edges of this hypergraph.
    pub fn is_matching(&self, edges: &[usize]) -> bool {
        let mut used = vec![false; self.n];
        let mut chosen = HashSet::new();
        edges.iter().all(|&e| {
            e < self.m()
                && chosen.insert(e)
                && {
                    let mut vs = self.edges[e].clone();
                    vs.sort_unstable();
                    vs.dedup();
                    vs.iter().all(|&v| !std::mem::replace(&mut used[v], true))
                }
        })
    }

    /// `vertices` are distinct and contain no edge.
    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            if v >= self.n || std::mem::replace(&mut inside[v], true) {
                return false;
            }
        }
        !self.edges.iter().any(|e| e.iter().all(|&v| inside[v]))
    }
}

fn check_parameters(k: usize, d: usize, n: usize) -> Result<(), HypergraphError> {
    if k < 2 || d < 1 || n < 1 {
        return Err(HypergraphError::InvalidParameters(format!(
            "need k >= 2, d >= 1, n >= 1 (got k = {k}, d = {d}, n = {n})"
        )));
    }
    if (d * n) % k != 0 {
        return Err(HypergraphError::InvalidParameters(format!(
            "k = {k} does not divide d*n = {}",
            d * n
        )));
    }
    Ok(())
}

/// The hypergraph induced by a uniform random pairing of `n*d` vertex-points
/// with `n*d` edge-points. Vertices inside each edge are listed in ascending
/// order.
pub fn generate_configuration(k: usize, d: usize, n: usize, seed: u64) -> Result<Hypergraph, HypergraphError> {
    check_parameters(k, d, n)?;
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    points.shuffle(&mut rng::seeded(seed));
    let edges = points
        .chunks_exact(k)
        .map(|c| {
            let mut e = c.to_vec();
            e.sort_unstable();
            e
        })
        .collect();
    let h = Hypergraph { k, d: Some(d), n, edges };
    debug_assert!(h.degrees().iter().all(|&x| x == d) && h.m() * k == n * d);
    Ok(h)
}

/// Rejection-samples [`generate_configuration`] with derived seeds until the
/// draw is simple.
pub fn generate_simple(
    k: usize,
    d: usize,
    n: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Hypergraph, HypergraphError> {
    check_parameters(k, d, n)?;
    if max_attempts == 0 {
        return Err(HypergraphError::InvalidParameters("max_attempts must be at least 1".into()));
    }
    for attempt in 0..max_attempts {
        let h = generate_configuration(k, d, n, rng::derive_seed(seed, attempt as u64))?;
        if h.is_simple() {
            return Ok(h);
        }
    }
    Err(HypergraphError::AttemptsExhausted { attempts: max_attempts })
}
