use capdeg::budget::Budget;
use capdeg::group::{capset_hypergraph, corner_hypergraph, GroupSpec};
use std::time::Instant;

fn main() {
    let c3 = capset_hypergraph().power(3).unwrap();
    let t = Instant::now();
    let out = capdeg::alpha::independence_number(&c3, Budget::default());
    println!("alpha(cap^3) = {} status {:?} nodes {} time {:?}", out.value, out.status, out.nodes_explored, t.elapsed());

    let phi = capset_hypergraph().power(3).unwrap().adjacency_support();
    let t = Instant::now();
    let out = capdeg::matching::induced_matching_number(&phi, Budget::default());
    println!("im(cap^3) = {} status {:?} nodes {} time {:?}", out.value, out.status, out.nodes_explored, t.elapsed());

    let phi = corner_hypergraph(&GroupSpec::cyclic(2).unwrap()).power(3).unwrap().adjacency_support();
    println!("support size {}", phi.len());
    let t = Instant::now();
    let out = capdeg::matching::induced_matching_number(&phi, Budget::default());
    println!("im(cor^3) = {} status {:?} nodes {} time {:?}", out.value, out.status, out.nodes_explored, t.elapsed());
}
