use serde::Serialize;

use super::integrate::{integrate_phase, ExitCause, PhaseOutcome, TrajectoryRow};
use super::{OdeError, RateConfig};
use crate::ProcessKind;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    pub config: RateConfig,
    /// `nu_{k,d}` for matching, `alpha_{k,d}` for the independent process.
    pub value: f64,
    pub phases: Vec<PhaseOutcome>,
}

impl SolveResult {
    /// Every sampled row, in order of increasing `x`.
    pub fn trajectory(&self) -> impl Iterator<Item = &TrajectoryRow> {
        self.phases.iter().flat_map(|p| p.trajectory.iter())
    }

    /// Renders the result as the documented JSON object.
    pub fn to_json(&self) -> serde_json::Value {
        let mode = match self.config.process {
            ProcessKind::Matching => serde_json::Value::Null,
            ProcessKind::Independent => self.config.mode.as_str().into(),
        };
        serde_json::json!({
            "process": self.config.process.as_str(),
            "k": self.config.k,
            "d": self.config.d,
            "mode": mode,
            "value": self.value,
            "phases": self.phases.iter().map(|p| serde_json::json!({
                "p": p.phase,
                "x_start": p.x_start(),
                "x_end": p.x_end(),
                "cause": p.cause.as_str(),
            })).collect::<Vec<_>>(),
            "solver": {
                "h": self.config.step,
                "eps_end": self.config.eps_end,
                "eps_evt": self.config.eps_evt,
            },
        })
    }

    /// Trajectory CSV: `x,phase,y0,...,yd,z1,...,zk,alpha,tau`.
    ///
    /// `y0` and the `z` columns are left empty for the matching process.
    pub fn trajectory_csv(&self) -> String {
        let (k, d) = (self.config.k, self.config.d);
        let independent = self.config.process == ProcessKind::Independent;
        let mut header = vec!["x".to_string(), "phase".to_string()];
        header.extend((0..=d).map(|j| format!("y{j}")));
        header.extend((1..=k).map(|j| format!("z{j}")));
        header.push("alpha".into());
        header.push("tau".into());
        let mut out = header.join(",");
        out.push('\n');
        for row in self.trajectory() {
            let s = &row.state;
            let mut cells = vec![format!("{}", s.x), row.phase.to_string()];
            for j in 0..=d {
                cells.push(if j == 0 && !independent {
                    String::new()
                } else {
                    format!("{}", s.y[j])
                });
            }
            for j in 1..=k {
                cells.push(if independent {
                    format!("{}", s.z[j])
                } else {
                    String::new()
                });
            }
            cells.push(format!("{}", row.alpha));
            cells.push(format!("{}", row.tau));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Chains the phases of `cfg` from the initial state until the vertex points
/// run out. The final `x` is the answer because every step adds exactly one
/// element to the output.
pub fn solve(cfg: &RateConfig) -> Result<SolveResult, OdeError> {
    cfg.validate()?;
    let mut state = cfg.initial_state();
    let mut phases = Vec::with_capacity(cfg.d);
    for p in cfg.phases() {
        let outcome = integrate_phase(p, &state, cfg)?;
        state = outcome.exit.clone();
        let done = matches!(outcome.cause, ExitCause::L1Exhausted | ExitCause::ClassDepleted);
        phases.push(outcome);
        if done {
            return Ok(SolveResult {
                config: cfg.clone(),
                value: state.x,
                phases,
            });
        }
    }
    Err(OdeError::StepFailure {
        phase: cfg.d - 1,
        x: state.x,
        reason: "final phase ended before the vertex points ran out".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::RateMode;

    #[test]
    fn rejects_small_uniformity_for_independent() {
        let cfg = RateConfig::independent(2, 3, RateMode::ConservationCorrected);
        assert!(matches!(solve(&cfg), Err(OdeError::InvalidConfig(_))));
    }

    #[test]
    fn json_shape() {
        let r = solve(&RateConfig::matching(3, 2).with_step(1e-4)).unwrap();
        let j = r.to_json();
        assert_eq!(j["process"], "matching");
        assert!(j["mode"].is_null());
        let cause = j["phases"][0]["cause"].as_str().unwrap();
        assert!(cause == "l1-exhausted" || cause == "class-depleted", "{cause}");
        assert_eq!(j["solver"]["h"], 1e-4);
    }

    #[test]
    fn csv_columns_match_header() {
        let cfg = RateConfig::independent(3, 2, RateMode::ConservationCorrected).with_step(1e-4);
        let csv = solve(&cfg).unwrap().trajectory_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(header, "x,phase,y0,y1,y2,z1,z2,z3,alpha,tau");
        for l in lines {
            assert_eq!(l.split(',').count(), 10);
        }
    }
}
