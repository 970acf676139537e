use capdeg::budget::Budget;
use capdeg::group::{corner_hypergraph, GroupSpec};
use std::time::Instant;

fn main() {
    let h = corner_hypergraph(&GroupSpec::cyclic(2).unwrap()).power(3).unwrap();
    println!("vertices {} edges {}", h.vertex_count(), h.edge_count());
    let t = Instant::now();
    let out = capdeg::alpha::independence_number(&h, Budget::nodes(200_000_000));
    println!("alpha = {} status {:?} nodes {} time {:?}", out.value, out.status, out.nodes_explored, t.elapsed());
}
