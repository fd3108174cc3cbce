use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Hypergraph, HypergraphError};

/// Bipartite vertex/edge incidence multigraph: one link per edge slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub vertex_nodes: usize,
    pub edge_nodes: usize,
    /// `(vertex, edge)` pairs, sorted; a vertex repeated inside an edge gives
    /// parallel links.
    pub links: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_nodes];
        for &(v, _) in &self.links {
            deg[v] += 1;
        }
        deg
    }

    pub fn edge_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.edge_nodes];
        for &(_, e) in &self.links {
            deg[e] += 1;
        }
        deg
    }

    /// Exchanges the two parts.
    pub fn transpose(&self) -> IncidenceGraph {
        let mut links: Vec<_> = self.links.iter().map(|&(v, e)| (e, v)).collect();
        links.sort_unstable();
        IncidenceGraph {
            vertex_nodes: self.edge_nodes,
            edge_nodes: self.vertex_nodes,
            links,
        }
    }
}

/// Length of the shortest Berge cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(l) => write!(f, "{l}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Cycle(l) => s.serialize_u64(*l as u64),
            Girth::Acyclic => s.serialize_str("acyclic"),
        }
    }
}

impl Hypergraph {
    pub fn incidence_graph(&self) -> IncidenceGraph {
        let mut links: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(e, vs)| vs.iter().map(move |&v| (v, e)))
            .collect();
        links.sort_unstable();
        IncidenceGraph {
            vertex_nodes: self.n,
            edge_nodes: self.m(),
            links,
        }
    }

    /// Vertices and edges swap roles: edge `j` becomes vertex `j`, and vertex
    /// `v` becomes edge `v` listing the edges through `v` (with multiplicity).
    pub fn dual(&self) -> Result<Hypergraph, HypergraphError> {
        let d = self.d.ok_or(HypergraphError::NotRegular)?;
        let mut edges = vec![Vec::with_capacity(d); self.n];
        for (e, vs) in self.edges.iter().enumerate() {
            for &v in vs {
                edges[v].push(e);
            }
        }
        Hypergraph::new(d, self.k, self.m(), edges)
    }

    /// Shortest Berge cycle, read off as half the shortest cycle of the
    /// incidence multigraph. A loop counts as a 1-cycle and two edges sharing
    /// two vertex slots as a 2-cycle.
    pub fn girth(&self) -> Girth {
        let n = self.n;
        let nodes = n + self.m();
        // adjacency entries are (neighbour, link id); parallel links stay distinct
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
        let mut link = 0;
        for (e, vs) in self.edges.iter().enumerate() {
            for &v in vs {
                adj[v].push((n + e, link));
                adj[n + e].push((v, link));
                link += 1;
            }
        }

        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; nodes];
        let mut via = vec![usize::MAX; nodes];
        let mut queue = VecDeque::new();
        for root in 0..n {
            let mut touched = vec![root];
            dist[root] = 0;
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                // any cycle found past this depth is no shorter than `best`
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &(w, id) in &adj[u] {
                    if id == via[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = id;
                        touched.push(w);
                        queue.push_back(w);
                    } else {
                        best = best.min(dist[u] + dist[w] + 1);
                        if best == 2 {
                            break 'bfs;
                        }
                    }
                }
            }
            for t in touched {
                dist[t] = usize::MAX;
                via[t] = usize::MAX;
            }
            queue.clear();
        }
        if best == usize::MAX {
            Girth::Acyclic
        } else {
            // bipartite, so every cycle is even
            Girth::Cycle(best / 2)
        }
    }
}
