//! Generates a simple random regular hypergraph, then reports its Berge
//! girth, its dual and the text encoding.

use hypergreedy::hypergraph::{generate_simple, Hypergraph};

fn main() {
    let h = generate_simple(3, 2, 12, 7, 10_000).expect("a simple draw");
    let dual = h.dual().expect("dual");
    println!("{}", h.encode());
    println!("simple: {}, girth: {}", h.is_simple(), h.girth());
    println!("dual: k={} d={:?} n={} girth {}", dual.k(), dual.d(), dual.n(), dual.girth());
    assert_eq!(Hypergraph::decode(&h.encode()).expect("round trip"), h);

    let fano = Hypergraph::fano_plane();
    println!("Fano plane girth {}, self-dual shape: {}", fano.girth(), fano.dual().unwrap().d() == Some(3));
}
