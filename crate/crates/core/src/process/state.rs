use rand::Rng;
use serde::Serialize;

use super::buckets::DegreeBuckets;
use super::pool::PointPool;
use super::ProcessError;
use crate::rng::{self, SimRng};
use crate::ProcessKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexStatus {
    Open,
    /// In the matching (covered by a matched edge) or in the independent set.
    Selected,
    /// Excluded from the independent set.
    Closed,
    /// Ran out of points without being matched.
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeStatus {
    Alive,
    Matched,
    Dead,
}

/// What one step did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    /// 1-based index of the step.
    pub step: usize,
    pub vertex: usize,
    /// Unpaired points of `vertex` when it was selected.
    pub degree: usize,
    pub pairings: usize,
    /// Closed vertices (independent) or exhausted vertices (matching).
    pub removed_vertices: usize,
    /// Edges that stopped being alive, including the matched one.
    pub removed_edges: usize,
}

/// Partially revealed pairing of `n*d` vertex-points with `n*d` edge-points.
///
/// Vertex `v` owns points `v*d..(v+1)*d`, edge `e` owns `e*k..(e+1)*k`; a
/// pairing reveals one point of each side.
#[derive(Clone, Debug)]
pub struct PairingState {
    k: usize,
    d: usize,
    n: usize,
    seed: u64,
    vpoints: PointPool,
    epoints: PointPool,
    vstatus: Vec<VertexStatus>,
    estatus: Vec<EdgeStatus>,
    buckets: DegreeBuckets,
    /// Alive edges by unpaired count.
    alive_by_count: Vec<usize>,
    steps: usize,
    output: usize,
    /// Edges all of whose points went to selected vertices (needs a loop).
    swallowed: usize,
    /// Per-step dedup marks holding `steps` of the last visit.
    vmark: Vec<u32>,
    emark: Vec<u32>,
    rng: SimRng,
    kind: Option<ProcessKind>,
}

fn check(k: usize, d: usize, n: usize) -> Result<(), ProcessError> {
    if k < 2 || d < 1 || n < 1 || (d * n) % k != 0 {
        return Err(ProcessError::InvalidParameters(format!(
            "need k >= 2, d >= 1, n >= 1 and k | d*n (got k = {k}, d = {d}, n = {n})"
        )));
    }
    if k > u8::MAX as usize - 1 || d > u8::MAX as usize - 1 || n * d > u32::MAX as usize {
        return Err(ProcessError::InvalidParameters("instance too large".into()));
    }
    Ok(())
}

impl PairingState {
    pub fn new(k: usize, d: usize, n: usize, seed: u64) -> Result<Self, ProcessError> {
        check(k, d, n)?;
        let m = n * d / k;
        let mut alive_by_count = vec![0; k + 1];
        alive_by_count[k] = m;
        Ok(PairingState {
            k,
            d,
            n,
            seed,
            vpoints: PointPool::new(n, d),
            epoints: PointPool::new(m, k),
            vstatus: vec![VertexStatus::Open; n],
            estatus: vec![EdgeStatus::Alive; m],
            buckets: DegreeBuckets::full(n, d),
            alive_by_count,
            steps: 0,
            output: 0,
            swallowed: 0,
            vmark: vec![0; n],
            emark: vec![0; m],
            rng: rng::seeded(seed),
            kind: None,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.estatus.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Matched edges or independent vertices so far.
    pub fn output_size(&self) -> usize {
        self.output
    }

    /// Edges lying wholly inside the independent set. Only an edge holding
    /// a repeated vertex can end up there, so this is `O(1)` in expectation.
    pub fn swallowed_edges(&self) -> usize {
        self.swallowed
    }

    pub fn unpaired_vertex_points(&self) -> usize {
        self.vpoints.total()
    }

    pub fn unpaired_edge_points(&self) -> usize {
        self.epoints.total()
    }

    pub fn vertex_status(&self, v: usize) -> VertexStatus {
        self.vstatus[v]
    }

    pub fn edge_status(&self, e: usize) -> EdgeStatus {
        self.estatus[e]
    }

    /// Open vertices with `j` unpaired points, `j` in `0..=d`.
    pub fn open_with(&self, j: usize) -> usize {
        self.buckets.len(j)
    }

    /// Alive edges with `j` unpaired points, `j` in `0..=k`.
    pub fn alive_with(&self, j: usize) -> usize {
        self.alive_by_count[j]
    }

    pub fn count_status(&self, s: VertexStatus) -> usize {
        self.vstatus.iter().filter(|&&x| x == s).count()
    }

    fn bind(&mut self, kind: ProcessKind) {
        match self.kind {
            None => self.kind = Some(kind),
            Some(k) => assert_eq!(k, kind, "a pairing state runs a single process"),
        }
    }

    fn begin_step(&mut self) -> u32 {
        self.steps += 1;
        self.steps as u32
    }

    /// Bookkeeping after one point of `v` was paired with one point of `e`.
    fn paired(&mut self, v: usize, e: usize) {
        if self.buckets.contains(v) {
            self.buckets.lower(v);
        }
        if self.estatus[e] == EdgeStatus::Alive {
            let c = self.epoints.remaining(e);
            self.alive_by_count[c + 1] -= 1;
            self.alive_by_count[c] += 1;
        }
        debug_assert_eq!(self.vpoints.total(), self.epoints.total());
    }

    /// Pairs a point of `v` with a uniform unpaired edge-point.
    fn pair_vertex(&mut self, v: usize) -> usize {
        self.vpoints.take(v);
        let e = self.epoints.draw(&mut self.rng);
        self.paired(v, e);
        e
    }

    /// Pairs a point of `e` with a uniform unpaired vertex-point.
    fn pair_edge(&mut self, e: usize) -> usize {
        self.epoints.take(e);
        let v = self.vpoints.draw(&mut self.rng);
        self.paired(v, e);
        v
    }

    fn retire_edge(&mut self, e: usize, status: EdgeStatus) {
        debug_assert_eq!(self.estatus[e], EdgeStatus::Alive);
        self.alive_by_count[self.epoints.remaining(e)] -= 1;
        self.estatus[e] = status;
    }

    fn set_vertex(&mut self, v: usize, status: VertexStatus) {
        if self.buckets.contains(v) {
            self.buckets.remove(v);
        }
        self.vstatus[v] = status;
    }

    /// One pass of the degree-greedy matching step.
    ///
    /// Picks a uniform vertex of minimum positive unpaired count, reveals all
    /// its points, matches a uniform edge among those hit, and reveals
    /// everything touching the matched edge's vertices.
    pub fn step_matching(&mut self) -> Result<StepReport, ProcessError> {
        self.bind(ProcessKind::Matching);
        let Some(r) = self.buckets.min_level() else {
            return Err(ProcessError::Terminated);
        };
        debug_assert!(r >= 1, "matching keeps exhausted vertices out of the buckets");
        let v = self.buckets.pick(r, &mut self.rng);
        let stamp = self.begin_step();
        let points_before = self.vpoints.total();
        self.set_vertex(v, VertexStatus::Selected);

        // edges hit from v, in order of discovery
        let mut hit = Vec::with_capacity(r);
        for _ in 0..r {
            let e = self.pair_vertex(v);
            if self.emark[e] != stamp {
                self.emark[e] = stamp;
                hit.push(e);
            }
        }
        let chosen = hit[self.rng.gen_range(0..hit.len() as u64) as usize];
        self.retire_edge(chosen, EdgeStatus::Matched);
        self.output += 1;

        // the rest of the matched edge
        let mut covered = Vec::with_capacity(self.k);
        while self.epoints.remaining(chosen) > 0 {
            let w = self.pair_edge(chosen);
            if self.vmark[w] != stamp {
                self.vmark[w] = stamp;
                covered.push(w);
            }
        }
        let mut to_kill: Vec<usize> = hit.into_iter().filter(|&e| e != chosen).collect();
        for w in covered {
            self.set_vertex(w, VertexStatus::Selected);
            while self.vpoints.remaining(w) > 0 {
                let e = self.pair_vertex(w);
                if self.emark[e] != stamp {
                    self.emark[e] = stamp;
                    to_kill.push(e);
                }
            }
        }

        let mut exhausted = 0;
        for &e in &to_kill {
            self.retire_edge(e, EdgeStatus::Dead);
            while self.epoints.remaining(e) > 0 {
                let u = self.pair_edge(e);
                if self.vpoints.remaining(u) == 0 && self.vstatus[u] == VertexStatus::Open {
                    self.set_vertex(u, VertexStatus::Exhausted);
                    exhausted += 1;
                }
            }
        }

        debug_assert!(self.step_invariant(ProcessKind::Matching).is_ok());
        Ok(StepReport {
            step: self.steps,
            vertex: v,
            degree: r,
            pairings: points_before - self.vpoints.total(),
            removed_vertices: exhausted,
            removed_edges: 1 + to_kill.len(),
        })
    }

    /// One pass of the degree-greedy independent step.
    ///
    /// Picks a uniform open vertex of minimum unpaired count (zero allowed)
    /// and adds it to the set. Every edge left with one unpaired point closes
    /// the vertex owning that point, and every edge touched by a closed
    /// vertex dies.
    pub fn step_independent(&mut self) -> Result<StepReport, ProcessError> {
        self.bind(ProcessKind::Independent);
        let Some(r) = self.buckets.min_level() else {
            return Err(ProcessError::Terminated);
        };
        let v = self.buckets.pick(r, &mut self.rng);
        let stamp = self.begin_step();
        let points_before = self.vpoints.total();
        self.set_vertex(v, VertexStatus::Selected);
        self.output += 1;

        let mut hit = Vec::with_capacity(r);
        for _ in 0..r {
            let e = self.pair_vertex(v);
            if self.emark[e] != stamp {
                self.emark[e] = stamp;
                hit.push(e);
            }
        }

        let mut removed_edges = 0;
        let mut closing = Vec::new();
        for e in hit {
            if self.estatus[e] != EdgeStatus::Alive {
                continue;
            }
            match self.epoints.remaining(e) {
                1 => {
                    self.retire_edge(e, EdgeStatus::Dead);
                    removed_edges += 1;
                    let w = self.pair_edge(e);
                    if self.vmark[w] != stamp {
                        self.vmark[w] = stamp;
                        closing.push(w);
                    }
                }
                // every point went to the set; only a repeated vertex allows this
                0 => {
                    self.retire_edge(e, EdgeStatus::Dead);
                    self.swallowed += 1;
                    removed_edges += 1;
                }
                _ => {}
            }
        }

        let mut dying = Vec::new();
        for &w in &closing {
            self.set_vertex(w, VertexStatus::Closed);
            while self.vpoints.remaining(w) > 0 {
                let e = self.pair_vertex(w);
                if self.estatus[e] == EdgeStatus::Alive {
                    self.retire_edge(e, EdgeStatus::Dead);
                    dying.push(e);
                }
            }
        }
        removed_edges += dying.len();
        for &e in &dying {
            while self.epoints.remaining(e) > 0 {
                self.pair_edge(e);
            }
        }

        debug_assert!(self.step_invariant(ProcessKind::Independent).is_ok());
        Ok(StepReport {
            step: self.steps,
            vertex: v,
            degree: r,
            pairings: points_before - self.vpoints.total(),
            removed_vertices: closing.len(),
            removed_edges,
        })
    }

    pub fn step(&mut self, kind: ProcessKind) -> Result<StepReport, ProcessError> {
        match kind {
            ProcessKind::Matching => self.step_matching(),
            ProcessKind::Independent => self.step_independent(),
        }
    }

    /// Constant-time checks that must hold between steps.
    pub fn step_invariant(&self, kind: ProcessKind) -> Result<(), String> {
        if self.vpoints.total() != self.epoints.total() {
            return Err(format!(
                "{} unpaired vertex-points but {} unpaired edge-points",
                self.vpoints.total(),
                self.epoints.total()
            ));
        }
        match kind {
            ProcessKind::Matching => {
                if let Some(j) = (0..self.k).find(|&j| self.alive_by_count[j] > 0) {
                    return Err(format!("{} alive edges with {j} unpaired points", self.alive_by_count[j]));
                }
                if self.buckets.len(0) > 0 {
                    return Err("open vertex without unpaired points".into());
                }
            }
            ProcessKind::Independent => {
                if self.alive_by_count[1] > 0 || self.alive_by_count[0] > 0 {
                    return Err(format!(
                        "alive edges with one or zero unpaired points: {} / {}",
                        self.alive_by_count[1], self.alive_by_count[0]
                    ));
                }
            }
        }
        Ok(())
    }

    /// Full recount of every counter against the pools and status arrays.
    pub fn consistency_check(&self) -> Result<(), String> {
        let vcount = self.vpoints.recount();
        let ecount = self.epoints.recount();
        for v in 0..self.n {
            if vcount[v] != self.vpoints.remaining(v) {
                return Err(format!("vertex {v}: pool holds {} points, counter says {}", vcount[v], self.vpoints.remaining(v)));
            }
            let open = self.vstatus[v] == VertexStatus::Open;
            if open != self.buckets.contains(v) {
                return Err(format!("vertex {v}: status {:?} disagrees with buckets", self.vstatus[v]));
            }
            if !open && vcount[v] != 0 {
                return Err(format!("vertex {v} is {:?} but has {} unpaired points", self.vstatus[v], vcount[v]));
            }
        }
        let mut by_level = vec![0; self.d + 1];
        for v in (0..self.n).filter(|&v| self.vstatus[v] == VertexStatus::Open) {
            by_level[vcount[v]] += 1;
        }
        if (0..=self.d).any(|j| by_level[j] != self.buckets.len(j)) {
            return Err("bucket sizes disagree with point counts".into());
        }
        let mut alive = vec![0; self.k + 1];
        for e in 0..self.m() {
            if ecount[e] != self.epoints.remaining(e) {
                return Err(format!("edge {e}: pool/counter mismatch"));
            }
            match self.estatus[e] {
                EdgeStatus::Alive => alive[ecount[e]] += 1,
                _ if ecount[e] != 0 => return Err(format!("retired edge {e} has unpaired points")),
                _ => {}
            }
        }
        if alive != self.alive_by_count {
            return Err(format!("alive-edge histogram {alive:?} != tracked {:?}", self.alive_by_count));
        }
        Ok(())
    }
}
