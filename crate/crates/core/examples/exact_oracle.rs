//! Compares greedy output against exact optima on small instances.

use hypergreedy::hypergraph::{generate_simple, Hypergraph};
use hypergreedy::oracle::{exact_max_independent, exact_max_matching, greedy_mean};
use hypergreedy::ProcessKind;

fn report(name: &str, h: &Hypergraph) {
    let nu = exact_max_matching(h, 1 << 24).expect("small instance");
    let alpha = exact_max_independent(h, 1 << 24).expect("small instance");
    let gm = greedy_mean(h, ProcessKind::Matching, 200, 1).expect("reps");
    let gi = greedy_mean(h, ProcessKind::Independent, 200, 1).expect("reps");
    println!("{name}: nu = {} (greedy mean {:.3}), alpha = {} (greedy mean {:.3})", nu.value, gm.mean, alpha.value, gi.mean);
    println!("  maximum matching {:?}, maximum independent set {:?}", nu.witness, alpha.witness);
}

fn main() {
    report("Fano plane", &Hypergraph::fano_plane());
    report("random (3,3,15)", &generate_simple(3, 3, 15, 2, 100_000).expect("a simple draw"));
}
