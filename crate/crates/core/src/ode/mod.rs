//! Phase-blended differential equations for the two degree-greedy processes.
//!
//! The state tracks the scaled number of open vertices with `j` unpaired
//! points (`y_j`) and, for the independent process, alive edges with `j`
//! unpaired points (`z_j`). Time `x` counts steps per vertex, so the value of
//! `x` when the vertex points run out is the scaled size of the output.

use serde::Serialize;
use thiserror::Error;

use crate::ProcessKind;

mod integrate;
mod rates;
mod solve;

pub use integrate::{integrate_phase, rk4_step, ExitCause, PhaseOutcome, TrajectoryRow};
pub use rates::{
    blended_derivative, moments, phase_coefficients, rate_independent, rate_matching, Blend,
    IndependentRate, Moments,
};
pub use solve::{solve, SolveResult};

/// Edge-rate variant for the independent process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMode {
    /// Edge rates exactly as written in the analysis.
    Literal,
    /// Also removes the edge that triggers a closure from class 1, so that
    /// unpaired vertex points and edge points stay equal.
    ConservationCorrected,
}

impl RateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RateMode::Literal => "literal",
            RateMode::ConservationCorrected => "conservation-corrected",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate state: {0} is not positive")]
    DegenerateState(&'static str),
    #[error("degenerate blend in phase {phase}: alpha + tau = {sum:e}")]
    DegenerateBlend { phase: usize, sum: f64 },
    #[error("integration failed in phase {phase} at x = {x}: {reason}")]
    StepFailure {
        phase: usize,
        x: f64,
        reason: String,
    },
}

/// Parameters of one ODE solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateConfig {
    pub k: usize,
    pub d: usize,
    pub process: ProcessKind,
    /// Only consulted for the independent process.
    pub mode: RateMode,
    /// Fixed RK4 step in scaled time.
    pub step: f64,
    /// The solve terminates once `l1` drops below this.
    pub eps_end: f64,
    /// Event localisation tolerance and clamping slack.
    pub eps_evt: f64,
    /// Record every `sample_every` accepted steps (phase ends are always recorded).
    pub sample_every: usize,
}

impl RateConfig {
    pub const DEFAULT_STEP: f64 = 1e-5;
    pub const DEFAULT_EPS_END: f64 = 1e-6;
    pub const DEFAULT_EPS_EVT: f64 = 1e-10;

    pub fn new(process: ProcessKind, k: usize, d: usize) -> Self {
        RateConfig {
            k,
            d,
            process,
            mode: RateMode::ConservationCorrected,
            step: Self::DEFAULT_STEP,
            eps_end: Self::DEFAULT_EPS_END,
            eps_evt: Self::DEFAULT_EPS_EVT,
            sample_every: 100,
        }
    }

    pub fn matching(k: usize, d: usize) -> Self {
        Self::new(ProcessKind::Matching, k, d)
    }

    pub fn independent(k: usize, d: usize, mode: RateMode) -> Self {
        RateConfig {
            mode,
            ..Self::new(ProcessKind::Independent, k, d)
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_eps_end(mut self, eps_end: f64) -> Self {
        self.eps_end = eps_end;
        self
    }

    pub fn with_sample_every(mut self, every: usize) -> Self {
        self.sample_every = every;
        self
    }

    pub fn validate(&self) -> Result<(), OdeError> {
        let min_k = match self.process {
            ProcessKind::Matching => 2,
            ProcessKind::Independent => 3,
        };
        if self.k < min_k {
            return Err(OdeError::InvalidConfig(format!(
                "{} process needs k >= {min_k}, got {}",
                self.process, self.k
            )));
        }
        if self.d < 2 {
            return Err(OdeError::InvalidConfig(format!("need d >= 2, got {}", self.d)));
        }
        for (name, v) in [
            ("step", self.step),
            ("eps_end", self.eps_end),
            ("eps_evt", self.eps_evt),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(OdeError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.sample_every == 0 {
            return Err(OdeError::InvalidConfig("sample_every must be at least 1".into()));
        }
        Ok(())
    }

    /// Phase indices visited by [`solve`], in order.
    pub fn phases(&self) -> std::ops::Range<usize> {
        match self.process {
            ProcessKind::Matching => 1..self.d,
            ProcessKind::Independent => 0..self.d,
        }
    }

    pub fn is_final_phase(&self, p: usize) -> bool {
        p + 1 == self.d
    }

    /// `y_d = 1`, and `z_k = d/k` for the independent process.
    pub fn initial_state(&self) -> StateVec {
        let mut s = StateVec::zeros(self.process, self.k, self.d);
        s.y[self.d] = 1.0;
        if self.process == ProcessKind::Independent {
            s.z[self.k] = self.d as f64 / self.k as f64;
        }
        s
    }
}

/// Scaled state: `y[j]` for `j in 0..=d`, `z[j]` for `j in 1..=k`.
///
/// For the matching process `y[0]` stays zero and `z` is empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateVec {
    pub x: f64,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl StateVec {
    pub fn zeros(process: ProcessKind, k: usize, d: usize) -> Self {
        let z = match process {
            ProcessKind::Matching => Vec::new(),
            ProcessKind::Independent => vec![0.0; k + 1],
        };
        StateVec {
            x: 0.0,
            y: vec![0.0; d + 1],
            z,
        }
    }

    pub fn d(&self) -> usize {
        self.y.len() - 1
    }

    /// Uniformity, or 0 when edge classes are not tracked.
    pub fn k(&self) -> usize {
        self.z.len().saturating_sub(1)
    }

    /// `self + h * dir`, advancing `x` by `h`.
    pub fn offset(&self, dir: &StateVec, h: f64) -> StateVec {
        StateVec {
            x: self.x + h,
            y: self.y.iter().zip(&dir.y).map(|(a, b)| a + h * b).collect(),
            z: self.z.iter().zip(&dir.z).map(|(a, b)| a + h * b).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.iter().chain(&self.z).all(|v| v.is_finite())
    }

    pub fn min_component(&self) -> f64 {
        self.y
            .iter()
            .chain(self.z.iter().skip(1))
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Sets components in `[-slack, 0)` to zero and reports how far below
    /// zero the worst component was.
    pub fn clamp_nonnegative(&mut self) -> f64 {
        let mut worst = 0.0f64;
        for v in self.y.iter_mut().chain(self.z.iter_mut()) {
            if *v < 0.0 {
                worst = worst.min(*v);
                *v = 0.0;
            }
        }
        worst
    }
}
