//! Solves the phase-blended ODE systems for k = 3..5, d = 2..5 and prints
//! both tables of asymptotic constants.

use hypergreedy::ode::{solve, RateConfig, RateMode};

fn main() {
    let tables = [
        ("matching, nu(k, d)", RateConfig::matching as fn(usize, usize) -> RateConfig),
        ("independent set, alpha(k, d)", |k, d| RateConfig::independent(k, d, RateMode::ConservationCorrected)),
    ];
    for (title, config) in tables {
        println!("{title}");
        println!("k \\ d      2        3        4        5");
        for k in 3..=5 {
            let row: Vec<String> = (2..=5)
                .map(|d| format!("{:.5}", solve(&config(k, d)).expect("solve").value))
                .collect();
            println!("{k}       {}", row.join("  "));
        }
        println!();
    }
}
