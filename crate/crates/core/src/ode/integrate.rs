use serde::Serialize;

use super::rates::{blended_derivative, moments, phase_coefficients, Blend};
use super::{OdeError, RateConfig, StateVec};

/// Why a phase stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitCause {
    /// `tau_p` reached zero: the low class can no longer be held down.
    TauZero,
    /// `l1` fell below `eps_end`: no vertex points remain.
    L1Exhausted,
    /// `tau_p` was not positive on entry; the phase took no time.
    DegenerateSkip,
    ClassDepleted,
}

impl ExitCause {
    pub fn as_str(self) -> &'static str {
        match self {
            ExitCause::TauZero => "tau-zero",
            ExitCause::L1Exhausted => "l1-exhausted",
            ExitCause::DegenerateSkip => "degenerate-skip",
            ExitCause::ClassDepleted => "class-depleted",
        }
    }
}

/// One sampled point of a solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub phase: usize,
    pub state: StateVec,
    pub alpha: f64,
    pub tau: f64,
}

impl TrajectoryRow {
    /// Blend weights `(high, low)`.
    pub fn weights(&self) -> Option<(f64, f64)> {
        Blend {
            alpha: self.alpha,
            tau: self.tau,
        }
        .weights()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseOutcome {
    pub phase: usize,
    pub entry: StateVec,
    pub exit: StateVec,
    pub cause: ExitCause,
    /// Most negative component removed by clamping during the phase.
    pub worst_clamp: f64,
    pub trajectory: Vec<TrajectoryRow>,
}

impl PhaseOutcome {
    pub fn x_start(&self) -> f64 {
        self.entry.x
    }

    pub fn x_end(&self) -> f64 {
        self.exit.x
    }
}

/// One classical fourth-order Runge-Kutta step of length `h`.
pub fn rk4_step(p: usize, s: &StateVec, h: f64, cfg: &RateConfig) -> Result<StateVec, OdeError> {
    let (k1, _) = blended_derivative(p, s, cfg)?;
    let (k2, _) = blended_derivative(p, &s.offset(&k1, h / 2.0), cfg)?;
    let (k3, _) = blended_derivative(p, &s.offset(&k2, h / 2.0), cfg)?;
    let (k4, _) = blended_derivative(p, &s.offset(&k3, h), cfg)?;
    let mut out = s.clone();
    out.x += h;
    let combine = |o: &mut [f64], i: usize, a: &[f64], b: &[f64], c: &[f64], d: &[f64]| {
        o[i] += h / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
    };
    for i in 0..out.y.len() {
        combine(&mut out.y, i, &k1.y, &k2.y, &k3.y, &k4.y);
    }
    for i in 0..out.z.len() {
        combine(&mut out.z, i, &k1.z, &k2.z, &k3.z, &k4.z);
    }
    Ok(out)
}

fn failure(p: usize, x: f64, reason: impl Into<String>) -> OdeError {
    OdeError::StepFailure {
        phase: p,
        x,
        reason: reason.into(),
    }
}

/// Event check on a candidate state; `None` means keep integrating.
fn classify(p: usize, s: &StateVec, cfg: &RateConfig) -> Result<Option<ExitCause>, OdeError> {
    if !s.is_finite() {
        return Err(failure(p, s.x, "non-finite state"));
    }
    if moments(s).l1 < cfg.eps_end {
        return Ok(Some(ExitCause::L1Exhausted));
    }
    if s.min_component() < -cfg.eps_evt {
        return Ok(Some(ExitCause::ClassDepleted));
    }
    if cfg.is_final_phase(p) {
        return Ok(None);
    }
    match phase_coefficients(p, s, cfg) {
        Ok(b) if b.tau < 0.0 => Ok(Some(ExitCause::TauZero)),
        Ok(_) => Ok(None),
        Err(OdeError::DegenerateState(_)) => Ok(Some(ExitCause::L1Exhausted)),
        Err(e) => Err(e),
    }
}

/// Outcome of attempting a step of length `h` from `s`.
fn attempt(
    p: usize,
    s: &StateVec,
    h: f64,
    cfg: &RateConfig,
) -> Result<(StateVec, Option<ExitCause>), OdeError> {
    match rk4_step(p, s, h, cfg) {
        Ok(t) => {
            let cause = classify(p, &t, cfg)?;
            Ok((t, cause))
        }
        // a stage left the region where the rates are defined: the step
        // crossed one of the phase-ending boundaries
        Err(OdeError::DegenerateState(_)) => Ok((s.clone(), Some(ExitCause::L1Exhausted))),
        Err(OdeError::DegenerateBlend { .. }) => Ok((s.clone(), Some(ExitCause::TauZero))),
        Err(e) => Err(e),
    }
}

fn row(p: usize, s: &StateVec, cfg: &RateConfig) -> TrajectoryRow {
    let b = phase_coefficients(p, s, cfg).unwrap_or(Blend {
        alpha: f64::NAN,
        tau: f64::NAN,
    });
    TrajectoryRow {
        phase: p,
        state: s.clone(),
        alpha: b.alpha,
        tau: b.tau,
    }
}

/// Integrates phase `p` from `entry` until `tau_p` hits zero or the vertex
/// points run out, localising the event by bisection on the last step.
pub fn integrate_phase(
    p: usize,
    entry: &StateVec,
    cfg: &RateConfig,
) -> Result<PhaseOutcome, OdeError> {
    cfg.validate()?;
    let finish = |exit: StateVec, cause, worst_clamp, trajectory| PhaseOutcome {
        phase: p,
        entry: entry.clone(),
        exit,
        cause,
        worst_clamp,
        trajectory,
    };

    if moments(entry).l1 < cfg.eps_end {
        return Ok(finish(entry.clone(), ExitCause::L1Exhausted, 0.0, vec![]));
    }
    if !cfg.is_final_phase(p) {
        let b = phase_coefficients(p, entry, cfg)?;
        if b.tau <= cfg.eps_evt {
            return Ok(finish(entry.clone(), ExitCause::DegenerateSkip, 0.0, vec![]));
        }
    }

    let h = cfg.step;
    // every step selects one of at most n vertices
    let max_steps = (2.0 / h).ceil() as usize + 10;
    let mut s = entry.clone();
    let mut trajectory = vec![row(p, &s, cfg)];
    let mut worst_clamp = 0.0f64;

    for steps in 1..=max_steps {
        let (mut next, cause) = attempt(p, &s, h, cfg)?;
        if let Some(mut cause) = cause {
            let (mut lo, mut hi) = (0.0, h);
            let mut at_lo = s.clone();
            while hi - lo > cfg.eps_evt {
                let mid = 0.5 * (lo + hi);
                let (t, c) = attempt(p, &s, mid, cfg)?;
                match c {
                    None => {
                        lo = mid;
                        at_lo = t;
                    }
                    Some(c) => {
                        hi = mid;
                        cause = c;
                    }
                }
            }
            worst_clamp = worst_clamp.min(at_lo.clamp_nonnegative());
            trajectory.push(row(p, &at_lo, cfg));
            return Ok(finish(at_lo, cause, worst_clamp, trajectory));
        }
        let before = moments(&s).l1;
        let after = moments(&next).l1;
        if after > before + cfg.eps_evt {
            return Err(failure(
                p,
                next.x,
                format!("l1 increased from {before} to {after}"),
            ));
        }
        worst_clamp = worst_clamp.min(next.clamp_nonnegative());
        s = next;
        if steps % cfg.sample_every == 0 {
            trajectory.push(row(p, &s, cfg));
        }
    }
    Err(failure(p, s.x, "phase did not terminate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::RateMode;

    #[test]
    fn rk4_integrates_pure_decay_exactly_enough() {
        // in the final matching phase with only degree-1 vertices, dl1/dx = -k
        let cfg = RateConfig::matching(3, 2);
        let mut s = StateVec::zeros(crate::ProcessKind::Matching, 3, 2);
        s.y[1] = 0.3;
        let t = rk4_step(1, &s, 0.01, &cfg).unwrap();
        assert!((t.y[1] - (0.3 - 0.01 * 3.0)).abs() < 1e-14);
    }

    #[test]
    fn final_matching_phase_exhausts_points() {
        let cfg = RateConfig::matching(3, 2);
        let mut s = StateVec::zeros(crate::ProcessKind::Matching, 3, 2);
        s.y[1] = 0.3;
        let out = integrate_phase(1, &s, &cfg).unwrap();
        assert_eq!(out.cause, ExitCause::L1Exhausted);
        // y_1 decays at rate k = 3 until it hits eps_end
        assert!((out.x_end() - (0.3 - cfg.eps_end) / 3.0).abs() < 1e-9);
    }

    #[test]
    fn non_positive_tau_skips() {
        let cfg = RateConfig::independent(3, 3, RateMode::ConservationCorrected);
        let mut s = cfg.initial_state();
        // many class-2 edges: a degree-2 step creates more degree-2 vertices than it uses
        s.y[3] = 0.6;
        s.z[3] = 0.2;
        s.z[2] = 0.5;
        let b = phase_coefficients(0, &s, &cfg).unwrap();
        assert!(b.tau <= 0.0, "{b:?}");
        let out = integrate_phase(0, &s, &cfg).unwrap();
        assert_eq!(out.cause, ExitCause::DegenerateSkip);
        assert_eq!(out.x_start(), out.x_end());
    }

    #[test]
    fn first_matching_phase_ends_on_tau() {
        let cfg = RateConfig::matching(3, 3);
        let out = integrate_phase(1, &cfg.initial_state(), &cfg).unwrap();
        assert_eq!(out.cause, ExitCause::TauZero);
        assert!(out.x_end() > 0.0 && out.x_end() < 1.0 / 3.0);
        let tau = phase_coefficients(1, &out.exit, &cfg).unwrap().tau;
        assert!(tau.abs() < 1e-6, "tau at exit {tau}");
    }
}
