//! Degree-greedy matching and independent-set processes on random
//! `d`-regular `k`-uniform hypergraphs.
//!
//! Two independent routes estimate the scaled output size of each process:
//!
//! * [`process`] runs the process itself on a lazily revealed pairing
//!   (configuration) model, or on an explicit [`Hypergraph`];
//! * [`ode`] integrates the phase-blended differential equations that
//!   describe the expected trajectory of the degree counts.
//!
//! [`hypergraph`] holds the explicit representation with its structural
//! utilities (incidence graph, dual, Berge girth, text format) and
//! [`oracle`] computes exact optima on tiny instances.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub mod cli;
pub mod hypergraph;
pub mod ode;
pub mod oracle;
pub mod process;
pub mod rng;

pub use hypergraph::{Girth, Hypergraph, HypergraphError, IncidenceGraph};
pub use ode::{RateConfig, RateMode, SolveResult};
pub use process::{PairingState, SimResult, Summary};

/// Which greedy process to run or model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Matching,
    Independent,
}

impl ProcessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProcessKind::Matching => "matching",
            ProcessKind::Independent => "independent",
        }
    }
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProcessKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matching" | "m" => Ok(ProcessKind::Matching),
            "independent" | "i" => Ok(ProcessKind::Independent),
            other => Err(format!("unknown process `{other}` (expected matching|independent)")),
        }
    }
}
