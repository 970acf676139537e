use capdeg::group::{capset_hypergraph, corner_hypergraph, GroupSpec};
use capdeg::hypergraph::SupportSet;
use std::time::Instant;

// Recompute root conflict graph and greedy cover sizes with different orders.
fn analyze(name: &str, phi: &SupportSet) {
    let k = phi.arity();
    let elems = phi.elements();
    let n = elems.len();
    // masks empty: pair conflict = share coordinate or pair closure violation
    let mut conflicts = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    let contains = |e: &[u32]| phi.contains(e);
    let t = Instant::now();
    for a in 0..n {
        for b in a + 1..n {
            let share = (0..k).any(|i| elems[a][i] == elems[b][i]);
            let mixed = if share { false } else {
                // any element of the 2^k mixed block besides a,b in phi?
                let mut found = false;
                for mask in 1..(1u32 << k) - 1 {
                    let x: Vec<u32> = (0..k).map(|i| if mask & (1 << i) != 0 { elems[b][i] } else { elems[a][i] }).collect();
                    if contains(&x) { found = true; break; }
                }
                found
            };
            if share || mixed {
                conflicts[a][b] = true;
                conflicts[b][a] = true;
                deg[a] += 1;
                deg[b] += 1;
            }
        }
    }
    let avg: f64 = deg.iter().sum::<usize>() as f64 / n as f64;
    // greedy cover in lex order
    let cover = |order: &[usize]| -> usize {
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        for &c in order {
            let mut placed = false;
            for cl in cliques.iter_mut() {
                if cl.iter().all(|&m| conflicts[m][c]) {
                    cl.push(c);
                    placed = true;
                    break;
                }
            }
            if !placed { cliques.push(vec![c]); }
        }
        cliques.len()
    };
    let lex: Vec<usize> = (0..n).collect();
    let mut bydeg = lex.clone();
    bydeg.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    println!("{name}: n {} avg_deg {:.1} cover_lex {} cover_deg {} ({:?})", n, avg, cover(&lex), cover(&bydeg), t.elapsed());
}

fn main() {
    analyze("cap^2", &capset_hypergraph().power(2).unwrap().adjacency_support());
    analyze("cap^3", &capset_hypergraph().power(3).unwrap().adjacency_support());
    analyze("cor^2", &corner_hypergraph(&GroupSpec::cyclic(2).unwrap()).power(2).unwrap().adjacency_support());
    analyze("cor^3", &corner_hypergraph(&GroupSpec::cyclic(2).unwrap()).power(3).unwrap().adjacency_support());
}
