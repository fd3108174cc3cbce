//! The two degree-greedy processes, run on the lazily revealed pairing model
//! or on an explicit hypergraph.
//!
//! In the pairing model a vertex's unpaired points are its edge slots that
//! have not been revealed yet, so its unpaired count plays the role of its
//! degree in the surviving hypergraph. Pairings are revealed only as the
//! process needs them, which lets a run on `n = 10^6` vertices take
//! `O(n d)` time and memory without ever building the hypergraph.

use thiserror::Error;

mod buckets;
mod pool;
mod reference;
mod run;
mod state;

pub use reference::{run_reference, ReferenceRun};
pub use run::{default_stride, replicate, run_process, simulate, valid_vertex_count, SimResult, SimSample, Summary};
pub use state::{EdgeStatus, PairingState, StepReport, VertexStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProcessError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// No vertex is eligible for selection; the process has ended.
    #[error("process has terminated")]
    Terminated,
}
