//! Writes the ODE trajectory and a simulated trajectory of the matching
//! process to CSV files in the temp directory.

use hypergreedy::ode::{solve, RateConfig};
use hypergreedy::process::{default_stride, run_process, PairingState};
use hypergreedy::ProcessKind;

fn main() -> std::io::Result<()> {
    let (k, d, n) = (3, 4, 300_000);
    let ode = solve(&RateConfig::matching(k, d).with_sample_every(100)).expect("solve");
    for p in &ode.phases {
        println!("phase {}: x in [{:.4}, {:.4}], exit {}", p.phase, p.x_start(), p.x_end(), p.cause.as_str());
    }
    let sim = run_process(PairingState::new(k, d, n, 3).expect("k | d*n"), ProcessKind::Matching, Some(default_stride(n)))
        .expect("fresh state");
    println!("ODE nu = {:.5}, simulated |M|/n = {:.5}", ode.value, sim.fraction);

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("ode_trajectory.csv"), ode.trajectory_csv())?;
    std::fs::write(dir.join("sim_trajectory.csv"), sim.trajectory_csv())?;
    println!("wrote ode_trajectory.csv and sim_trajectory.csv to {}", dir.display());
    Ok(())
}
