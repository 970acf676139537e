use capdeg::budget::Budget;
use capdeg::group::{capset_hypergraph, corner_hypergraph, GroupSpec};
use std::time::Instant;

fn main() {
    for (name, phi) in [
        ("cap^3", capset_hypergraph().power(3).unwrap().adjacency_support()),
        ("cor^3", corner_hypergraph(&GroupSpec::cyclic(2).unwrap()).power(3).unwrap().adjacency_support()),
    ] {
        let t = Instant::now();
        let out = capdeg::matching::induced_matching_number(&phi, Budget::nodes(3_000_000));
        println!("{name}: value {} status {:?} nodes {} time {:?}", out.value, out.status, out.nodes_explored, t.elapsed());
    }
}
