use super::{OdeError, RateConfig, RateMode, StateVec};
use crate::ProcessKind;

/// First and second factorial moments of the vertex and edge classes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub l1: f64,
    pub l2: f64,
    pub m1: f64,
    pub m2: f64,
}

pub fn moments(s: &StateVec) -> Moments {
    let fact = |v: &[f64]| {
        v.iter().enumerate().skip(1).fold((0.0, 0.0), |(a, b), (j, &c)| {
            let j = j as f64;
            (a + j * c, b + j * (j - 1.0) * c)
        })
    };
    let (l1, l2) = fact(&s.y);
    let (m1, m2) = fact(&s.z);
    Moments { l1, l2, m1, m2 }
}

fn class(v: &[f64], j: usize) -> f64 {
    v.get(j).copied().unwrap_or(0.0)
}

fn indicator(j: usize, r: usize) -> f64 {
    if j == r {
        1.0
    } else {
        0.0
    }
}

fn matching_rate_with(k: usize, j: usize, r: usize, s: &StateVec, mom: &Moments) -> f64 {
    let km1 = (k - 1) as f64;
    let jf = j as f64;
    let yj = class(&s.y, j);
    let flow = (jf + 1.0) * class(&s.y, j + 1) - jf * yj;
    let hits = (r as f64 - 1.0) + km1 * mom.l2 / mom.l1;
    -indicator(j, r) - km1 * jf * yj / mom.l1 + hits * km1 * flow / mom.l1
}

/// Expected change of vertex class `j` per matching step that selects a
/// vertex with `r` unpaired points.
pub fn rate_matching(k: usize, j: usize, r: usize, s: &StateVec) -> Result<f64, OdeError> {
    let mom = moments(s);
    if !(mom.l1 > 0.0) {
        return Err(OdeError::DegenerateState("l1"));
    }
    Ok(matching_rate_with(k, j, r, s, &mom))
}

fn independent_vertex_rate_with(j: usize, r: usize, s: &StateVec, mom: &Moments) -> f64 {
    if r == 0 {
        return -indicator(j, 0);
    }
    let jf = j as f64;
    let yj = class(&s.y, j);
    let closures = r as f64 * 2.0 * class(&s.z, 2);
    let flow = (jf + 1.0) * class(&s.y, j + 1) - jf * yj;
    let m1sq = mom.m1 * mom.m1;
    -indicator(j, r) - closures * jf * yj / m1sq + closures * flow * mom.m2 * mom.l2 / (m1sq * m1sq)
}

fn independent_edge_rate_with(
    j: usize,
    r: usize,
    s: &StateVec,
    mom: &Moments,
    mode: RateMode,
) -> f64 {
    if r == 0 || j == 0 {
        return 0.0;
    }
    let rf = r as f64;
    let jf = j as f64;
    let zj = class(&s.z, j);
    let z2 = class(&s.z, 2);
    let mut g = rf * ((jf + 1.0) * class(&s.z, j + 1) - jf * zj) / mom.m1
        - rf * 2.0 * z2 * jf * zj * mom.l2 / (mom.m1 * mom.m1 * mom.m1);
    if mode == RateMode::ConservationCorrected && j == 1 {
        // the triggering edge has its last point paired in the same step
        g -= rf * 2.0 * z2 / mom.m1;
    }
    g
}

/// Vertex rate `f_{j,r}` and edge rate `g_{j,r}` of the independent process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndependentRate {
    /// Zero when `j > d`.
    pub vertex: f64,
    /// Zero when `j == 0` or `j > k`.
    pub edge: f64,
}

pub fn rate_independent(
    j: usize,
    r: usize,
    s: &StateVec,
    mode: RateMode,
) -> Result<IndependentRate, OdeError> {
    let mom = moments(s);
    if !(mom.m1 > 0.0) {
        return Err(OdeError::DegenerateState("m1"));
    }
    let vertex = if j <= s.d() {
        independent_vertex_rate_with(j, r, s, &mom)
    } else {
        0.0
    };
    Ok(IndependentRate {
        vertex,
        edge: independent_edge_rate_with(j, r, s, &mom, mode),
    })
}

/// Blend coefficients of a phase: `alpha` drives steps on the low class,
/// `tau` steps on the high class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blend {
    pub alpha: f64,
    pub tau: f64,
}

impl Blend {
    /// Weights `(high, low)` after clamping negative coefficients to zero.
    pub fn weights(&self) -> Option<(f64, f64)> {
        let a = self.alpha.max(0.0);
        let t = self.tau.max(0.0);
        let sum = a + t;
        (sum > 0.0).then(|| (t / sum, a / sum))
    }
}

/// Rates of every class for a pure step on degree `r`, written into `out`.
fn pure_rates(cfg: &RateConfig, r: usize, s: &StateVec, mom: &Moments, out: &mut StateVec) {
    match cfg.process {
        ProcessKind::Matching => {
            out.y[0] = 0.0;
            for j in 1..=cfg.d {
                out.y[j] = matching_rate_with(cfg.k, j, r, s, mom);
            }
        }
        ProcessKind::Independent => {
            for j in 0..=cfg.d {
                out.y[j] = independent_vertex_rate_with(j, r, s, mom);
            }
            out.z[0] = 0.0;
            for j in 1..=cfg.k {
                out.z[j] = independent_edge_rate_with(j, r, s, mom, cfg.mode);
            }
        }
    }
}

fn checked_moments(cfg: &RateConfig, s: &StateVec) -> Result<Moments, OdeError> {
    let mom = moments(s);
    match cfg.process {
        ProcessKind::Matching if !(mom.l1 > 0.0) => Err(OdeError::DegenerateState("l1")),
        ProcessKind::Independent if !(mom.m1 > 0.0) => Err(OdeError::DegenerateState("m1")),
        _ => Ok(mom),
    }
}

fn vertex_rate(cfg: &RateConfig, j: usize, r: usize, s: &StateVec, mom: &Moments) -> f64 {
    match cfg.process {
        ProcessKind::Matching => matching_rate_with(cfg.k, j, r, s, mom),
        ProcessKind::Independent => independent_vertex_rate_with(j, r, s, mom),
    }
}

fn coefficients_with(cfg: &RateConfig, p: usize, s: &StateVec, mom: &Moments) -> Blend {
    if cfg.process == ProcessKind::Matching && cfg.is_final_phase(p) {
        // only degree-1 vertices are processed; degree 0 is never selected
        return Blend { alpha: 0.0, tau: 1.0 };
    }
    let hi = cfg.d - p;
    let lo = hi - 1;
    Blend {
        alpha: vertex_rate(cfg, lo, hi, s, mom),
        tau: -vertex_rate(cfg, lo, lo, s, mom),
    }
}

fn check_phase(cfg: &RateConfig, p: usize) -> Result<(), OdeError> {
    if cfg.phases().contains(&p) {
        Ok(())
    } else {
        Err(OdeError::InvalidConfig(format!(
            "phase {p} out of range {:?} for {} with d = {}",
            cfg.phases(),
            cfg.process,
            cfg.d
        )))
    }
}

/// `alpha_p` and `tau_p` at state `s`.
pub fn phase_coefficients(p: usize, s: &StateVec, cfg: &RateConfig) -> Result<Blend, OdeError> {
    check_phase(cfg, p)?;
    let mom = checked_moments(cfg, s)?;
    Ok(coefficients_with(cfg, p, s, &mom))
}

/// Derivative of the blended system of phase `p`, together with the blend
/// coefficients it used.
pub fn blended_derivative(
    p: usize,
    s: &StateVec,
    cfg: &RateConfig,
) -> Result<(StateVec, Blend), OdeError> {
    check_phase(cfg, p)?;
    let mom = checked_moments(cfg, s)?;
    let blend = coefficients_with(cfg, p, s, &mom);
    let (w_hi, w_lo) = match blend.weights() {
        Some(w) if blend.alpha.max(0.0) + blend.tau.max(0.0) > cfg.eps_evt => w,
        _ => {
            return Err(OdeError::DegenerateBlend {
                phase: p,
                sum: blend.alpha.max(0.0) + blend.tau.max(0.0),
            })
        }
    };
    let hi = cfg.d - p;
    let mut out = StateVec::zeros(cfg.process, cfg.k, cfg.d);
    pure_rates(cfg, hi, s, &mom, &mut out);
    if w_lo > 0.0 {
        let mut low = StateVec::zeros(cfg.process, cfg.k, cfg.d);
        pure_rates(cfg, hi - 1, s, &mom, &mut low);
        for (a, b) in out.y.iter_mut().zip(&low.y) {
            *a = w_hi * *a + w_lo * b;
        }
        for (a, b) in out.z.iter_mut().zip(&low.z) {
            *a = w_hi * *a + w_lo * b;
        }
    }
    Ok((out, blend))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_mass(k: usize, d: usize) -> StateVec {
        RateConfig::matching(k, d).initial_state()
    }

    #[test]
    fn moments_of_unit_mass() {
        let m = moments(&unit_mass(3, 3));
        assert_eq!((m.l1, m.l2, m.m1, m.m2), (3.0, 6.0, 0.0, 0.0));
        let zero = StateVec::zeros(ProcessKind::Independent, 3, 3);
        assert_eq!(moments(&zero), Moments::default());
    }

    #[test]
    fn moments_of_independent_start() {
        let s = RateConfig::independent(3, 3, RateMode::ConservationCorrected).initial_state();
        let m = moments(&s);
        assert_eq!((m.l1, m.l2, m.m1, m.m2), (3.0, 6.0, 3.0, 6.0));
    }

    #[test]
    fn matching_rates_at_start() {
        let s = unit_mass(3, 3);
        assert_abs_diff_eq!(rate_matching(3, 3, 3, &s).unwrap(), -15.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rate_matching(3, 1, 1, &s).unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rate_matching(3, 2, 3, &s).unwrap(), 12.0, epsilon = 1e-12);
    }

    #[test]
    fn matching_rate_needs_points() {
        let s = StateVec::zeros(ProcessKind::Matching, 3, 3);
        assert_eq!(
            rate_matching(3, 1, 1, &s),
            Err(OdeError::DegenerateState("l1"))
        );
    }

    #[test]
    fn independent_rates_at_start() {
        let s = RateConfig::independent(3, 3, RateMode::Literal).initial_state();
        let lit = |j, r| rate_independent(j, r, &s, RateMode::Literal).unwrap();
        assert_abs_diff_eq!(lit(2, 3).vertex, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lit(2, 3).edge, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lit(3, 3).edge, -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lit(3, 3).vertex, -1.0, epsilon = 1e-12);
        // r = 0 is a free selection
        assert_eq!(lit(0, 0).vertex, -1.0);
        assert_eq!(lit(2, 0).edge, 0.0);
    }

    #[test]
    fn correction_only_touches_class_one() {
        let mut s = RateConfig::independent(4, 3, RateMode::Literal).initial_state();
        s.z[2] = 0.2;
        s.z[3] = 0.1;
        s.y[2] = 0.3;
        for j in 1..=4 {
            let a = rate_independent(j, 2, &s, RateMode::Literal).unwrap();
            let b = rate_independent(j, 2, &s, RateMode::ConservationCorrected).unwrap();
            assert_eq!(a.vertex, b.vertex);
            if j == 1 {
                let m1 = moments(&s).m1;
                assert_abs_diff_eq!(a.edge - b.edge, 2.0 * 2.0 * 0.2 / m1, epsilon = 1e-12);
            } else {
                assert_eq!(a.edge, b.edge);
            }
        }
    }

    #[test]
    fn phase_coefficients_at_start() {
        let m = RateConfig::matching(3, 3);
        let b = phase_coefficients(1, &m.initial_state(), &m).unwrap();
        assert_abs_diff_eq!(b.alpha, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.tau, 1.0, epsilon = 1e-12);

        let i = RateConfig::independent(3, 3, RateMode::ConservationCorrected);
        let b = phase_coefficients(0, &i.initial_state(), &i).unwrap();
        assert_abs_diff_eq!(b.alpha, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.tau, 1.0, epsilon = 1e-12);

        let mut s = i.initial_state();
        s.y[1] = 0.4;
        s.z[2] = 0.3;
        let b = phase_coefficients(2, &s, &i).unwrap();
        assert_eq!(b.tau, 1.0);
    }

    #[test]
    fn phase_out_of_range() {
        let m = RateConfig::matching(3, 3);
        assert!(phase_coefficients(0, &m.initial_state(), &m).is_err());
        assert!(phase_coefficients(3, &m.initial_state(), &m).is_err());
    }

    #[test]
    fn blend_at_matching_start_is_pure_high_class() {
        let m = RateConfig::matching(3, 3);
        let s = m.initial_state();
        let (dy, _) = blended_derivative(1, &s, &m).unwrap();
        for j in 1..=3 {
            assert_abs_diff_eq!(dy.y[j], rate_matching(3, j, 2, &s).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn blend_without_closures_is_indicator_only() {
        let cfg = RateConfig::independent(4, 4, RateMode::ConservationCorrected);
        let mut s = cfg.initial_state();
        s.y[3] = 0.2;
        s.y[2] = 0.1;
        s.z[3] = 0.3;
        for p in cfg.phases() {
            let (dy, blend) = blended_derivative(p, &s, &cfg).unwrap();
            let (wh, wl) = blend.weights().unwrap();
            assert_abs_diff_eq!(wh + wl, 1.0, epsilon = 1e-15);
            for j in 0..=4 {
                let expect = if j == 4 - p {
                    -wh
                } else if j + 1 == 4 - p {
                    -wl
                } else {
                    0.0
                };
                assert_abs_diff_eq!(dy.y[j], expect, epsilon = 1e-12);
            }
        }
    }
}
