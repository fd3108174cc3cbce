use rand::Rng;
use serde::Serialize;

use super::buckets::DegreeBuckets;
use super::run::SimResult;
use crate::hypergraph::Hypergraph;
use crate::rng::{self, SimRng};
use crate::ProcessKind;

/// Outcome of a greedy run on an explicit hypergraph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceRun {
    pub result: SimResult,
    /// Matched edge indices or independent vertices, in selection order.
    pub output: Vec<usize>,
}

/// Vertex degrees are counted in edge slots of surviving edges, so a vertex
/// repeated inside an edge contributes once per slot.
struct Explicit<'a> {
    h: &'a Hypergraph,
    /// Distinct edges through each vertex.
    incident: Vec<Vec<usize>>,
    alive: Vec<bool>,
    degree: Vec<usize>,
    buckets: DegreeBuckets,
    rng: SimRng,
}

impl<'a> Explicit<'a> {
    fn new(h: &'a Hypergraph, seed: u64) -> Self {
        let degree = h.degrees();
        let top = degree.iter().copied().max().unwrap_or(0);
        let mut buckets = DegreeBuckets::full(h.n(), top);
        for (v, &dv) in degree.iter().enumerate() {
            for _ in dv..top {
                buckets.lower(v);
            }
        }
        let mut incident = vec![Vec::new(); h.n()];
        for (e, vs) in h.edges().iter().enumerate() {
            for &v in vs {
                if incident[v].last() != Some(&e) {
                    incident[v].push(e);
                }
            }
        }
        Explicit {
            h,
            incident,
            alive: vec![true; h.m()],
            degree,
            buckets,
            rng: rng::seeded(seed),
        }
    }

    fn kill_edge(&mut self, e: usize) {
        if !std::mem::replace(&mut self.alive[e], false) {
            return;
        }
        for &w in &self.h.edges()[e] {
            self.degree[w] -= 1;
            if self.buckets.contains(w) {
                self.buckets.lower(w);
            }
        }
    }

    fn remove_vertex(&mut self, v: usize) {
        if self.buckets.contains(v) {
            self.buckets.remove(v);
        }
    }

    fn edge_vertices(&self, e: usize) -> Vec<usize> {
        let mut vs = self.h.edges()[e].clone();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Uniform vertex of minimum degree, skipping degree 0 if `positive`.
    fn select(&mut self, positive: bool) -> Option<usize> {
        // degree-0 vertices never matter to the matching process
        if positive {
            while self.buckets.min_level() == Some(0) {
                let v = self.buckets.pick(0, &mut self.rng);
                self.buckets.remove(v);
            }
        }
        let r = self.buckets.min_level()?;
        Some(self.buckets.pick(r, &mut self.rng))
    }

    fn matching(mut self) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some(v) = self.select(true) {
            let live: Vec<usize> = self.incident[v].iter().copied().filter(|&e| self.alive[e]).collect();
            let e = live[self.rng.gen_range(0..live.len() as u64) as usize];
            out.push(e);
            for w in self.edge_vertices(e) {
                self.remove_vertex(w);
                for f in self.incident[w].clone() {
                    self.kill_edge(f);
                }
            }
        }
        out
    }

    fn independent(mut self) -> Vec<usize> {
        let n = self.h.n();
        let mut inside = vec![false; n];
        let mut out = Vec::new();
        while let Some(v) = self.select(false) {
            self.remove_vertex(v);
            inside[v] = true;
            out.push(v);
            // vertices that would complete a surviving edge
            let mut closing = Vec::new();
            for &e in &self.incident[v] {
                if !self.alive[e] {
                    continue;
                }
                let mut outside = self.h.edges()[e].iter().filter(|&&w| !inside[w]);
                if let Some(&w) = outside.next() {
                    if outside.all(|&x| x == w) && !closing.contains(&w) {
                        closing.push(w);
                    }
                }
            }
            for w in closing {
                self.remove_vertex(w);
                for f in self.incident[w].clone() {
                    self.kill_edge(f);
                }
            }
        }
        out
    }
}

/// Runs the degree-greedy process directly on `h`: removing a vertex
/// deletes every edge containing it.
///
/// Matching: repeatedly pick a uniform vertex of minimum positive degree and
/// match a uniform surviving edge through it. Independent: repeatedly add a
/// uniform vertex of minimum degree and delete every vertex that would
/// complete an edge with the set.
pub fn run_reference(h: &Hypergraph, kind: ProcessKind, seed: u64) -> ReferenceRun {
    let ex = Explicit::new(h, seed);
    let output = match kind {
        ProcessKind::Matching => ex.matching(),
        ProcessKind::Independent => ex.independent(),
    };
    debug_assert!(match kind {
        ProcessKind::Matching => h.is_matching(&output),
        ProcessKind::Independent => h.is_independent(&output),
    });
    let n = h.n();
    let unmatched = (kind == ProcessKind::Matching).then(|| {
        let mut covered = vec![false; n];
        for &e in &output {
            for &v in &h.edges()[e] {
                covered[v] = true;
            }
        }
        covered.iter().filter(|&&c| !c).count()
    });
    ReferenceRun {
        result: SimResult {
            process: kind,
            k: h.k(),
            d: h.d().unwrap_or(0),
            n,
            seed,
            steps: output.len(),
            output_size: output.len(),
            fraction: if n == 0 { 0.0 } else { output.len() as f64 / n as f64 },
            unmatched,
            trajectory: Vec::new(),
        },
        output,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::generate_simple;

    fn single_edge() -> Hypergraph {
        Hypergraph::new(3, 1, 3, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn single_edge_outputs() {
        assert_eq!(run_reference(&single_edge(), ProcessKind::Matching, 1).output, vec![0]);
        let r = run_reference(&single_edge(), ProcessKind::Independent, 1);
        assert_eq!(r.output.len(), 2);
        assert_eq!(r.result.unmatched, None);
    }

    #[test]
    fn fano_matching_is_one_edge() {
        let f = Hypergraph::fano_plane();
        for seed in 0..50 {
            let r = run_reference(&f, ProcessKind::Matching, seed);
            assert_eq!(r.output.len(), 1);
            assert_eq!(r.result.unmatched, Some(4));
        }
    }

    #[test]
    fn outputs_are_valid() {
        for seed in 0..50 {
            let h = generate_simple(3, 3, 30, seed, 10_000).unwrap();
            let m = run_reference(&h, ProcessKind::Matching, seed);
            assert!(h.is_matching(&m.output));
            let i = run_reference(&h, ProcessKind::Independent, seed);
            assert!(h.is_independent(&i.output));
            // maximal: every outside vertex would complete an edge
            for v in (0..h.n()).filter(|v| !i.output.contains(v)) {
                let mut with = i.output.clone();
                with.push(v);
                assert!(!h.is_independent(&with));
            }
        }
    }

    #[test]
    fn isolated_vertices_join_the_independent_set() {
        let h = Hypergraph::from_edges(3, 5, vec![vec![0, 1, 2]]).unwrap();
        let r = run_reference(&h, ProcessKind::Independent, 3);
        assert_eq!(r.output.len(), 4);
        // the two isolated vertices have degree 0 and go first
        let mut first: Vec<_> = r.output[..2].to_vec();
        first.sort_unstable();
        assert_eq!(first, vec![3, 4]);
    }
}
