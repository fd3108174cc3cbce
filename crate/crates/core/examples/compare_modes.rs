//! Compares the two independent-process rate modes against simulation.

use hypergreedy::ode::{solve, RateConfig, RateMode};
use hypergreedy::process::{replicate, valid_vertex_count};
use hypergreedy::ProcessKind;

fn main() {
    for (k, d) in [(3, 2), (3, 4), (4, 3)] {
        let n = valid_vertex_count(k, d, 300_000);
        let sim = replicate(k, d, n, ProcessKind::Independent, 3, 5).expect("valid parameters").mean;
        print!("k={k} d={d}  simulation {sim:.5}");
        for mode in [RateMode::ConservationCorrected, RateMode::Literal] {
            let v = solve(&RateConfig::independent(k, d, mode)).expect("solve").value;
            print!("  {} {v:.5} ({:+.5})", mode.as_str(), v - sim);
        }
        println!();
    }
}
