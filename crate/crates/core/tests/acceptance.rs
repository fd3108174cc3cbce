//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.
//!
//! Two checks cannot pass as stated and print FAIL. Their tests assert the
//! exact, understood discrepancy instead of the criterion:
//! * the reference independent-process value for k = 3, d = 4 (0.600) is off
//!   the ODE and simulation value 0.5926;
//! * for k >= 3 a simple hypergraph can have Berge girth 2 (two distinct
//!   edges sharing two vertices), so "simple iff girth >= 3" only holds one
//!   way.

use std::time::Instant;

use hypergreedy::hypergraph::{generate_configuration, generate_simple, Girth, Hypergraph};
use hypergreedy::ode::{moments, solve, RateConfig, RateMode};
use hypergreedy::oracle::{exact_max_independent, exact_max_matching, greedy_mean};
use hypergreedy::process::{replicate, run_reference, valid_vertex_count, PairingState};
use hypergreedy::ProcessKind;

const KS: [usize; 3] = [3, 4, 5];
const DS: [usize; 4] = [2, 3, 4, 5];

/// Reference values of the matching constant, rows k = 3..5, columns d = 2..5.
const MATCHING_TABLE: [[f64; 4]; 3] = [
    [0.274, 0.284, 0.291, 0.296],
    [0.179, 0.181, 0.186, 0.190],
    [0.128, 0.127, 0.130, 0.132],
];

/// Reference values of the independent-set constant.
const INDEPENDENT_TABLE: [[f64; 4]; 3] = [
    [0.666, 0.626, 0.600, 0.564],
    [0.749, 0.720, 0.694, 0.672],
    [0.799, 0.777, 0.755, 0.737],
];

fn report(id: u32, pass: bool, detail: &str) {
    println!("criterion {id}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
}

fn cells() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    KS.iter()
        .enumerate()
        .flat_map(|(i, &k)| DS.iter().enumerate().map(move |(j, &d)| (i, j, k, d)))
}

fn ode_value(kind: ProcessKind, k: usize, d: usize, mode: RateMode, step: f64) -> f64 {
    let cfg = RateConfig { mode, ..RateConfig::new(kind, k, d) }.with_step(step);
    solve(&cfg).unwrap_or_else(|e| panic!("{kind} ({k},{d}) {mode:?}: {e}")).value
}

#[test]
fn criterion_1_matching_table() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    for (i, j, k, d) in cells() {
        let v = ode_value(ProcessKind::Matching, k, d, RateMode::ConservationCorrected, RateConfig::DEFAULT_STEP);
        let dev = (v - MATCHING_TABLE[i][j]).abs();
        worst = worst.max(dev);
        if dev > 0.0015 {
            misses.push(format!("({k},{d}) {v:.5}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = misses.is_empty() && secs < 60.0;
    report(1, pass, &format!("max |ODE - table| = {worst:.5} (tol 0.0015), {secs:.1} s, misses {misses:?}"));
    assert!(pass);
}

#[test]
fn criterion_2_independent_table() {
    let mut per_mode = Vec::new();
    for mode in [RateMode::ConservationCorrected, RateMode::Literal] {
        let values: Vec<(usize, usize, f64, f64)> = cells()
            .map(|(i, j, k, d)| {
                let v = ode_value(ProcessKind::Independent, k, d, mode, RateConfig::DEFAULT_STEP);
                (k, d, v, v - INDEPENDENT_TABLE[i][j])
            })
            .collect();
        per_mode.push((mode, values));
    }
    for (mode, values) in &per_mode {
        let deltas: Vec<String> = values.iter().map(|(k, d, _, dv)| format!("({k},{d}) {dv:+.4}")).collect();
        println!("  {:<22} deltas: {}", mode.as_str(), deltas.join(" "));
    }
    let within = |m: usize| per_mode[m].1.iter().filter(|c| c.3.abs() <= 0.002).count();
    let (corrected, literal) = (within(0), within(1));
    let any_mode_per_cell = (0..12).filter(|&c| per_mode.iter().any(|(_, v)| v[c].3.abs() <= 0.002)).count();
    let pass = any_mode_per_cell == 12 && (corrected == 12 || literal == 12);
    report(
        2,
        pass,
        &format!(
            "cells within 0.002: conservation-corrected {corrected}/12, literal {literal}/12, either {any_mode_per_cell}/12; adjudicated mode conservation-corrected"
        ),
    );

    // the one miss is k = 3, d = 4 under both modes
    let misses: Vec<(usize, usize)> = per_mode[0].1.iter().filter(|c| c.3.abs() > 0.002).map(|c| (c.0, c.1)).collect();
    assert_eq!(misses, vec![(3, 4)]);
    assert!(per_mode[1].1[2].3.abs() > 0.002);
    // ... where the ODE sits on the simulated value 0.5926, not on the reference 0.600
    let v34 = per_mode[0].1[2].2;
    assert!((v34 - 0.5926).abs() < 0.001, "{v34}");
    assert!(literal < corrected);
}

#[test]
fn criterion_3_simulation_matches_ode() {
    let n0 = 1_000_000;
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    let mut misses = Vec::new();
    for kind in [ProcessKind::Matching, ProcessKind::Independent] {
        for (_, _, k, d) in cells() {
            let ode = ode_value(kind, k, d, RateMode::ConservationCorrected, RateConfig::DEFAULT_STEP);
            let n = valid_vertex_count(k, d, n0);
            let start = Instant::now();
            let s = replicate(k, d, n, kind, 5, 1000 * k as u64 + d as u64).unwrap();
            let per_run = start.elapsed().as_secs_f64() / 5.0;
            slowest = slowest.max(per_run);
            let dev = (s.mean - ode).abs();
            worst = worst.max(dev);
            println!("  {kind:<11} ({k},{d}) n={n} sim {:.5} ode {ode:.5} |dev| {dev:.5} {per_run:.2} s/run", s.mean);
            if dev > 0.003 {
                misses.push(format!("{kind} ({k},{d})"));
            }
        }
    }
    let pass = misses.is_empty() && slowest <= 60.0;
    report(3, pass, &format!("max |sim - ODE| = {worst:.5} (tol 0.003), slowest run {slowest:.2} s, misses {misses:?}"));
    assert!(pass);
}

#[test]
fn criterion_4_two_regular_independent_column() {
    let mut worst = 0.0f64;
    for k in KS {
        let v = ode_value(ProcessKind::Independent, k, 2, RateMode::ConservationCorrected, RateConfig::DEFAULT_STEP);
        worst = worst.max((v - (1.0 - 1.0 / k as f64)).abs());
    }
    let pass = worst <= 0.002;
    report(4, pass, &format!("max |alpha(k,2) - (1 - 1/k)| = {worst:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_5_step_invariants() {
    let mut steps = 0usize;
    let mut failures = Vec::new();
    for kind in [ProcessKind::Matching, ProcessKind::Independent] {
        for (_, _, k, d) in cells() {
            for seed in 1..=3 {
                let n = valid_vertex_count(k, d, 10_000);
                let mut st = PairingState::new(k, d, n, seed).unwrap();
                // the pairing primitive itself debug-asserts equal totals after every pairing
                while st.step(kind).is_ok() {
                    steps += 1;
                    if let Err(e) = st.step_invariant(kind) {
                        failures.push(format!("{kind} ({k},{d}) seed {seed} step {}: {e}", st.steps()));
                        break;
                    }
                    if st.steps() % 512 == 0 {
                        if let Err(e) = st.consistency_check() {
                            failures.push(format!("{kind} ({k},{d}) seed {seed}: {e}"));
                            break;
                        }
                    }
                }
                if let Err(e) = st.consistency_check() {
                    failures.push(format!("{kind} ({k},{d}) seed {seed} at end: {e}"));
                }
            }
        }
    }
    let pass = failures.is_empty() && cfg!(debug_assertions);
    report(
        5,
        pass,
        &format!("{steps} steps over 72 runs, debug assertions {}, failures {failures:?}", cfg!(debug_assertions)),
    );
    assert!(pass);
}

#[test]
fn criterion_6_outputs_against_exact_optima() {
    let mut checked = 0;
    let mut problems = Vec::new();
    let mut seed = 0u64;
    while checked < 200 {
        let n = [6, 9, 12][checked % 3];
        seed += 1;
        let h = generate_simple(3, 2, n, seed, 100_000).unwrap();
        let nu = exact_max_matching(&h, 1 << 24).unwrap().value;
        let alpha = exact_max_independent(&h, 1 << 24).unwrap().value;
        let m = run_reference(&h, ProcessKind::Matching, seed).output;
        let i = run_reference(&h, ProcessKind::Independent, seed).output;
        if !h.is_matching(&m) || m.len() > nu {
            problems.push(format!("matching on seed {seed}"));
        }
        if !h.is_independent(&i) || i.len() > alpha {
            problems.push(format!("independent set on seed {seed}"));
        }
        checked += 1;
    }
    let fano = Hypergraph::fano_plane();
    let nu = exact_max_matching(&fano, 1 << 20).unwrap().value;
    let alpha = exact_max_independent(&fano, 1 << 20).unwrap().value;
    let greedy = greedy_mean(&fano, ProcessKind::Matching, 200, 7).unwrap();
    let always_one = greedy.sizes.iter().all(|&s| s == 1);
    let pass = problems.is_empty() && nu == 1 && alpha == 4 && always_one;
    report(
        6,
        pass,
        &format!("{checked} simple (3,2,n<=12) instances, problems {problems:?}; Fano nu = {nu}, alpha = {alpha}, greedy matching always 1: {always_one}"),
    );
    assert!(pass);
}

#[test]
fn criterion_7_ode_quality() {
    let mut worst_halving = 0.0f64;
    let mut halving_at = String::new();
    for kind in [ProcessKind::Matching, ProcessKind::Independent] {
        for (_, _, k, d) in cells() {
            let a = ode_value(kind, k, d, RateMode::ConservationCorrected, 1e-5);
            let b = ode_value(kind, k, d, RateMode::ConservationCorrected, 5e-6);
            if (a - b).abs() > worst_halving {
                worst_halving = (a - b).abs();
                halving_at = format!("{kind} ({k},{d})");
            }
        }
    }

    let mut worst_cons = 0.0f64;
    let mut worst_z1 = 0.0f64;
    let mut weights_ok = true;
    for kind in [ProcessKind::Matching, ProcessKind::Independent] {
        for (_, _, k, d) in cells() {
            let cfg = RateConfig::new(kind, k, d).with_sample_every(1);
            let r = solve(&cfg).unwrap();
            for row in r.trajectory() {
                // the final matching phase is unblended
                if !(kind == ProcessKind::Matching && row.phase + 1 == d) {
                    match row.weights() {
                        Some((hi, lo)) => {
                            weights_ok &= (0.0..=1.0).contains(&hi) && (0.0..=1.0).contains(&lo) && (hi + lo - 1.0).abs() < 1e-12
                        }
                        None => weights_ok = false,
                    }
                }
                if kind == ProcessKind::Independent {
                    let m = moments(&row.state);
                    worst_cons = worst_cons.max((m.l1 - m.m1).abs());
                    worst_z1 = worst_z1.max(row.state.z[1].abs());
                }
            }
        }
    }
    let pass = worst_halving <= 1e-5 && worst_cons <= 1e-6 && worst_z1 <= 1e-8 && weights_ok;
    report(
        7,
        pass,
        &format!(
            "step halving max change {worst_halving:.2e} at {halving_at}; max |l1 - m1| {worst_cons:.2e}; max |z1| {worst_z1:.2e}; blend weights in [0,1]: {weights_ok}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_structural_properties() {
    let mut instances = Vec::new();
    for seed in 0..100u64 {
        let (k, d, n) = [(3, 2, 9), (3, 3, 12), (2, 3, 10), (4, 2, 8)][seed as usize % 4];
        instances.push(generate_configuration(k, d, n, seed).unwrap());
    }
    let mut dual_girth = 0;
    let mut involution = 0;
    let mut round_trip = 0;
    let mut equivalence = 0;
    let mut simple_with_shared_pair = 0;
    let mut one_way = 0;
    for h in &instances {
        let dual = h.dual().unwrap();
        dual_girth += (h.girth() == dual.girth()) as usize;
        involution += (dual.dual().unwrap().incidence_graph() == h.incidence_graph()) as usize;
        round_trip += (Hypergraph::decode(&h.encode()).as_ref() == Ok(h)) as usize;
        let long = h.girth() >= Girth::Cycle(3);
        equivalence += (h.is_simple() == long) as usize;
        one_way += (!long || h.is_simple()) as usize;
        if h.is_simple() && !long {
            assert_eq!(h.girth(), Girth::Cycle(2));
            let shares_two = h.edges().iter().enumerate().any(|(a, e)| {
                h.edges()[a + 1..].iter().any(|f| e.iter().filter(|v| f.contains(v)).count() >= 2)
            });
            simple_with_shared_pair += shares_two as usize;
        }
    }
    let pass = dual_girth == 100 && involution == 100 && round_trip == 100 && equivalence == 100;
    report(
        8,
        pass,
        &format!(
            "girth = dual girth {dual_girth}/100, involution {involution}/100, round trip {round_trip}/100, simple <=> girth>=3 {equivalence}/100 (girth>=3 => simple {one_way}/100; {simple_with_shared_pair} simple instances have two edges sharing two vertices)"
        ),
    );
    assert_eq!((dual_girth, involution, round_trip, one_way), (100, 100, 100, 100));
    // every counterexample is a simple instance with a 2-cycle through two edges
    assert_eq!(100 - equivalence, simple_with_shared_pair);
    // graphs (k = 2) have no such pairs, so the equivalence is exact there
    for h in instances.iter().filter(|h| h.k() == 2) {
        assert_eq!(h.is_simple(), h.girth() >= Girth::Cycle(3));
    }
}

#[test]
fn criterion_9_asymptotic_claims() {
    println!("criterion 9: N/A | asymptotic (w.h.p. / high-girth) claims are not directly testable; covered by criteria 3, 5 and 8");
}
