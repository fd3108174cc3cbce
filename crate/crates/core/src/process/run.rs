use rayon::prelude::*;
use serde::Serialize;

use super::state::{PairingState, VertexStatus};
use super::ProcessError;
use crate::ProcessKind;

/// Scaled counts after `x * n` steps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimSample {
    pub x: f64,
    /// `d` minus the degree selected at the latest step (0 before the first).
    pub phase_hint: usize,
    /// Open vertices with `j` unpaired points over `n`, `j` in `1..=d`.
    pub y: Vec<f64>,
    /// Alive edges with `j` unpaired points over `n`, `j` in `1..=k`.
    pub z: Vec<f64>,
    /// Output size over `n`.
    pub frac: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub process: ProcessKind,
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub steps: usize,
    /// `|M|` or `|I|`.
    pub output_size: usize,
    pub fraction: f64,
    /// Vertices left uncovered by the matching.
    pub unmatched: Option<usize>,
    pub trajectory: Vec<SimSample>,
}

impl SimResult {
    /// `x,phase_hint,y1,...,yd,z1,...,zk,frac`.
    pub fn trajectory_csv(&self) -> String {
        let mut header = vec!["x".to_string(), "phase_hint".to_string()];
        header.extend((1..=self.d).map(|j| format!("y{j}")));
        header.extend((1..=self.k).map(|j| format!("z{j}")));
        header.push("frac".into());
        let mut out = header.join(",") + "\n";
        for s in &self.trajectory {
            let mut cells = vec![s.x.to_string(), s.phase_hint.to_string()];
            cells.extend(s.y.iter().chain(&s.z).map(|v| v.to_string()));
            cells.push(s.frac.to_string());
            out += &cells.join(",");
            out.push('\n');
        }
        out
    }
}

fn sample(state: &PairingState, last_degree: Option<usize>) -> SimSample {
    let n = state.n() as f64;
    SimSample {
        x: state.steps() as f64 / n,
        phase_hint: last_degree.map_or(0, |r| state.d() - r.min(state.d())),
        y: (1..=state.d()).map(|j| state.open_with(j) as f64 / n).collect(),
        z: (1..=state.k()).map(|j| state.alive_with(j) as f64 / n).collect(),
        frac: state.output_size() as f64 / n,
    }
}

/// Runs `kind` on a fresh state until it terminates, sampling every
/// `sample_stride` steps (plus the start and the end) when a stride is given.
pub fn run_process(
    mut state: PairingState,
    kind: ProcessKind,
    sample_stride: Option<usize>,
) -> Result<SimResult, ProcessError> {
    if state.steps() != 0 {
        return Err(ProcessError::InvalidParameters("run_process needs a fresh state".into()));
    }
    if sample_stride == Some(0) {
        return Err(ProcessError::InvalidParameters("sample stride must be positive".into()));
    }
    let mut trajectory = Vec::new();
    if sample_stride.is_some() {
        trajectory.push(sample(&state, None));
    }
    let mut last = None;
    while let Ok(rep) = state.step(kind) {
        last = Some(rep.degree);
        if let Some(stride) = sample_stride {
            if rep.step % stride == 0 {
                trajectory.push(sample(&state, last));
            }
        }
    }
    if let Some(stride) = sample_stride {
        if state.steps() % stride != 0 {
            trajectory.push(sample(&state, last));
        }
    }
    let unmatched = (kind == ProcessKind::Matching).then(|| state.count_status(VertexStatus::Exhausted));
    Ok(SimResult {
        process: kind,
        k: state.k(),
        d: state.d(),
        n: state.n(),
        seed: state.seed(),
        steps: state.steps(),
        output_size: state.output_size(),
        fraction: state.output_size() as f64 / state.n() as f64,
        unmatched,
        trajectory,
    })
}

/// Default trajectory stride: about a thousand samples per run.
pub fn default_stride(n: usize) -> usize {
    (n / 1000).max(1)
}

/// Smallest `n' >= n` with `k | d*n'`.
pub fn valid_vertex_count(k: usize, d: usize, n: usize) -> usize {
    (n..).find(|&m| (d * m) % k == 0).expect("k consecutive values always contain one")
}

/// Runs a single pairing-model simulation without a trajectory.
pub fn simulate(k: usize, d: usize, n: usize, kind: ProcessKind, seed: u64) -> Result<SimResult, ProcessError> {
    run_process(PairingState::new(k, d, n, seed)?, kind, None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub process: ProcessKind,
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub reps: usize,
    pub mean: f64,
    /// Sample standard deviation (zero for a single rep).
    pub std: f64,
    pub seeds: Vec<u64>,
    pub values: Vec<f64>,
}

impl Summary {
    /// Summarises per-run output sizes on `n` vertices.
    pub fn from_sizes(process: ProcessKind, k: usize, d: usize, n: usize, seeds: Vec<u64>, sizes: &[usize]) -> Self {
        let reps = sizes.len();
        let values: Vec<f64> = sizes.iter().map(|&s| s as f64 / n as f64).collect();
        // exact integer total keeps forced outcomes exact
        let mean = sizes.iter().sum::<usize>() as f64 / (reps * n) as f64;
        let std = if reps > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt()
        } else {
            0.0
        };
        Summary {
            process,
            k,
            d,
            n,
            reps,
            mean,
            std,
            seeds,
            values,
        }
    }

    pub fn std_error(&self) -> f64 {
        self.std / (self.reps as f64).sqrt()
    }
}

/// `reps` independent runs with seeds `base_seed + 1 ..= base_seed + reps`,
/// executed in parallel and reported in seed order.
pub fn replicate(
    k: usize,
    d: usize,
    n: usize,
    kind: ProcessKind,
    reps: usize,
    base_seed: u64,
) -> Result<Summary, ProcessError> {
    if reps == 0 {
        return Err(ProcessError::InvalidParameters("reps must be at least 1".into()));
    }
    let seeds: Vec<u64> = (1..=reps as u64).map(|i| base_seed.wrapping_add(i)).collect();
    let sizes = seeds
        .par_iter()
        .map(|&s| simulate(k, d, n, kind, s).map(|r| r.output_size))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Summary::from_sizes(kind, k, d, n, seeds, &sizes))
}
