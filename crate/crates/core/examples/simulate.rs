//! Runs both greedy processes on the lazily revealed pairing model and
//! prints the mean output fraction over a few seeds.

use hypergreedy::process::{replicate, valid_vertex_count};
use hypergreedy::ProcessKind;

fn main() {
    let (k, d) = (3, 3);
    let n = valid_vertex_count(k, d, 200_000);
    for kind in [ProcessKind::Matching, ProcessKind::Independent] {
        let s = replicate(k, d, n, kind, 4, 11).expect("valid parameters");
        println!(
            "{kind:<11} k={k} d={d} n={n}: mean {:.5} +- {:.5} over seeds {:?}",
            s.mean,
            s.std_error(),
            s.seeds
        );
    }
}
