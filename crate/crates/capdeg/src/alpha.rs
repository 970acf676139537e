//! Exact independence number of directed k-uniform hypergraphs by
//! branch and bound with unit propagation and a disjoint-edge packing bound.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::budget::{Budget, BudgetClock, SolveOutcome, SolveStatus};
use crate::hypergraph::Hypergraph;

/// Exhaustive check that no edge has all its coordinates inside `s`.
pub fn verify_independent(h: &Hypergraph, s: &[u32]) -> bool {
    let mut inside = vec![false; h.vertex_count()];
    for &v in s {
        if (v as usize) < inside.len() {
            inside[v as usize] = true;
        } else {
            return false;
        }
    }
    h.edges()
        .iter()
        .all(|e| e.iter().any(|&v| !inside[v as usize]))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VState {
    Cand,
    Chosen,
    Excluded,
}

struct Searcher<'a> {
    h: &'a Hypergraph,
    k: usize,
    /// edge id -> coordinate vertices
    edges: Vec<Box<[u32]>>,
    /// vertex -> (edge id, coordinate) occurrences
    occurrences: Vec<Vec<u32>>,
    state: Vec<VState>,
    chosen_in: Vec<u8>,
    excluded_in: Vec<u8>,
    num_chosen: usize,
    num_cand: usize,
    best: usize,
    best_set: Vec<u32>,
    clock: BudgetClock,
    // scratch
    used: Vec<bool>,
    alive_deg: Vec<u32>,
}

enum Change {
    Chose(u32),
    Excluded(u32),
}

impl<'a> Searcher<'a> {
    fn new(h: &'a Hypergraph, budget: Budget) -> Self {
        let n = h.vertex_count();
        let edges: Vec<Box<[u32]>> = h.edges().to_vec();
        let mut occurrences = vec![Vec::new(); n];
        for (ei, e) in edges.iter().enumerate() {
            for &v in e.iter() {
                occurrences[v as usize].push(ei as u32);
            }
        }
        Searcher {
            h,
            k: h.arity(),
            occurrences,
            state: vec![VState::Cand; n],
            chosen_in: vec![0; edges.len()],
            excluded_in: vec![0; edges.len()],
            edges,
            num_chosen: 0,
            num_cand: n,
            best: 0,
            best_set: Vec::new(),
            clock: BudgetClock::start(budget),
            used: vec![false; n],
            alive_deg: vec![0; n],
        }
    }

    /// Applies choose/exclude with unit propagation. Returns the trail to
    /// undo, or None on conflict (trail already undone).
    fn assign(&mut self, v: u32, choose: bool) -> Option<Vec<Change>> {
        let mut trail = Vec::new();
        let mut queue: Vec<(u32, bool)> = vec![(v, choose)];
        let mut qi = 0;
        while qi < queue.len() {
            let (v, choose) = queue[qi];
            qi += 1;
            match self.state[v as usize] {
                VState::Chosen => {
                    if choose {
                        continue;
                    }
                    self.undo(&trail);
                    return None;
                }
                VState::Excluded => {
                    if !choose {
                        continue;
                    }
                    self.undo(&trail);
                    return None;
                }
                VState::Cand => {}
            }
            if choose {
                self.state[v as usize] = VState::Chosen;
                self.num_chosen += 1;
                self.num_cand -= 1;
                trail.push(Change::Chose(v));
                let occ = std::mem::take(&mut self.occurrences[v as usize]);
                let mut conflict = false;
                for &ei in &occ {
                    let ei = ei as usize;
                    self.chosen_in[ei] += 1;
                    if self.excluded_in[ei] > 0 {
                        continue;
                    }
                    let ch = self.chosen_in[ei] as usize;
                    if ch == self.k {
                        conflict = true;
                        break;
                    }
                    if ch == self.k - 1 {
                        // The single non-chosen coordinate must be excluded.
                        if let Some(&u) = self.edges[ei]
                            .iter()
                            .find(|&&u| self.state[u as usize] != VState::Chosen)
                        {
                            queue.push((u, false));
                        }
                    }
                }
                self.occurrences[v as usize] = occ;
                if conflict {
                    self.undo(&trail);
                    return None;
                }
            } else {
                self.state[v as usize] = VState::Excluded;
                self.num_cand -= 1;
                trail.push(Change::Excluded(v));
                let occ = std::mem::take(&mut self.occurrences[v as usize]);
                for &ei in &occ {
                    self.excluded_in[ei as usize] += 1;
                }
                self.occurrences[v as usize] = occ;
            }
        }
        Some(trail)
    }

    fn undo(&mut self, trail: &[Change]) {
        for change in trail.iter().rev() {
            match *change {
                Change::Chose(v) => {
                    self.state[v as usize] = VState::Cand;
                    self.num_chosen -= 1;
                    self.num_cand += 1;
                    let occ = std::mem::take(&mut self.occurrences[v as usize]);
                    for &ei in &occ {
                        self.chosen_in[ei as usize] -= 1;
                    }
                    self.occurrences[v as usize] = occ;
                }
                Change::Excluded(v) => {
                    self.state[v as usize] = VState::Cand;
                    self.num_cand += 1;
                    let occ = std::mem::take(&mut self.occurrences[v as usize]);
                    for &ei in &occ {
                        self.excluded_in[ei as usize] -= 1;
                    }
                    self.occurrences[v as usize] = occ;
                }
            }
        }
    }

    /// Greedy packing of alive edges with pairwise-disjoint candidate
    /// vertices; each forces one exclusion. Also tallies the alive degree of
    /// every candidate for the branching choice.
    fn packing_and_degrees(&mut self) -> usize {
        self.used.iter_mut().for_each(|u| *u = false);
        self.alive_deg.iter_mut().for_each(|d| *d = 0);
        let mut packing = 0;
        for (ei, e) in self.edges.iter().enumerate() {
            if self.excluded_in[ei] > 0 || (self.chosen_in[ei] as usize) == self.k {
                continue;
            }
            let mut free = true;
            for &v in e.iter() {
                if self.state[v as usize] == VState::Cand {
                    self.alive_deg[v as usize] += 1;
                    if self.used[v as usize] {
                        free = false;
                    }
                }
            }
            if free {
                packing += 1;
                for &v in e.iter() {
                    if self.state[v as usize] == VState::Cand {
                        self.used[v as usize] = true;
                    }
                }
            }
        }
        packing
    }

    fn record_if_better(&mut self) {
        if self.num_chosen > self.best {
            self.best = self.num_chosen;
            self.best_set = (0..self.h.vertex_count() as u32)
                .filter(|&v| self.state[v as usize] == VState::Chosen)
                .collect();
        }
    }

    fn search(&mut self) {
        if !self.clock.tick() {
            return;
        }
        self.record_if_better();
        if self.num_cand == 0 {
            return;
        }
        let packing = self.packing_and_degrees();
        if self.num_chosen + self.num_cand - packing <= self.best {
            return;
        }
        // Branch on the candidate in the most alive edges, lowest index first
        // among ties. A candidate in no alive edge is free: choosing it is
        // always safe, so do that without branching.
        let mut pick: Option<(u32, u32)> = None;
        let mut free_vertex = None;
        for v in 0..self.h.vertex_count() as u32 {
            if self.state[v as usize] != VState::Cand {
                continue;
            }
            let d = self.alive_deg[v as usize];
            if d == 0 {
                free_vertex = Some(v);
                break;
            }
            match pick {
                Some((bd, _)) if bd >= d => {}
                _ => pick = Some((d, v)),
            }
        }
        if let Some(v) = free_vertex {
            if let Some(trail) = self.assign(v, true) {
                self.search();
                self.undo(&trail);
            }
            return;
        }
        let (_, v) = pick.expect("candidates exist");
        if let Some(trail) = self.assign(v, true) {
            self.search();
            self.undo(&trail);
        }
        if self.clock.exhausted() {
            return;
        }
        if let Some(trail) = self.assign(v, false) {
            self.search();
            self.undo(&trail);
        }
    }
}

fn greedy_incumbent(h: &Hypergraph, restarts: u64) -> Vec<u32> {
    let n = h.vertex_count();
    let k = h.arity();
    let mut best: Vec<u32> = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    for r in 0..restarts {
        let mut rng = ChaCha12Rng::seed_from_u64(r);
        if r > 0 {
            order.shuffle(&mut rng);
        }
        let mut inside = vec![false; n];
        let mut chosen_in = vec![0u8; h.edge_count()];
        let mut occurrences = vec![Vec::new(); n];
        for (ei, e) in h.edges().iter().enumerate() {
            for &v in e.iter() {
                occurrences[v as usize].push(ei);
            }
        }
        let mut set = Vec::new();
        for &v in &order {
            let violates = occurrences[v as usize]
                .iter()
                .any(|&ei| (chosen_in[ei] as usize) == k - occurrences_of(&h.edges()[ei], v));
            if !violates {
                inside[v as usize] = true;
                for &ei in &occurrences[v as usize] {
                    chosen_in[ei] += 1;
                }
                set.push(v);
            }
        }
        if set.len() > best.len() {
            set.sort_unstable();
            best = set;
        }
    }
    best
}

fn occurrences_of(e: &[u32], v: u32) -> usize {
    e.iter().filter(|&&x| x == v).count()
}

/// Exact maximum independent set, with budget. The witness always verifies;
/// on budget exhaustion the best verified set found so far is returned with
/// `LowerBoundOnly` status.
pub fn independence_number(h: &Hypergraph, budget: Budget) -> SolveOutcome<Vec<u32>> {
    let mut searcher = Searcher::new(h, budget);
    let incumbent = greedy_incumbent(h, 48);
    searcher.best = incumbent.len().saturating_sub(1);
    searcher.best_set = incumbent.clone();
    searcher.search();
    if searcher.best_set.len() < incumbent.len() {
        searcher.best_set = incumbent;
    }
    searcher.best_set.sort_unstable();
    let value = searcher.best_set.len();
    let status = if searcher.clock.exhausted() {
        SolveStatus::LowerBoundOnly
    } else {
        SolveStatus::Exact
    };
    assert!(verify_independent(h, &searcher.best_set), "witness failed re-verification");
    if status == SolveStatus::Exact {
        assert!(
            value >= h.vertex_count().saturating_sub(h.edge_count()),
            "alpha below |V| - |E|"
        );
    }
    SolveOutcome {
        value,
        witness: searcher.best_set,
        status,
        nodes_explored: searcher.clock.nodes(),
        wall_time: searcher.clock.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{capset_hypergraph, corner_hypergraph, GroupSpec};

    /// Independent reference: exhaustive subset enumeration.
    pub fn alpha_brute(h: &Hypergraph) -> usize {
        let n = h.vertex_count();
        assert!(n <= 20);
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            if (mask.count_ones() as usize) <= best {
                continue;
            }
            let ok = h.edges().iter().all(|e| e.iter().any(|&v| mask & (1 << v) == 0));
            if ok {
                best = mask.count_ones() as usize;
            }
        }
        best
    }

    #[test]
    fn edgeless_alpha_is_vertex_count() {
        let h = Hypergraph::edgeless(3, (0..7).map(|i| vec![i]).collect()).unwrap();
        let out = independence_number(&h, Budget::default());
        assert_eq!(out.value, 7);
        assert!(out.is_exact());
    }

    #[test]
    fn capset_small_powers() {
        let c = capset_hypergraph();
        assert_eq!(independence_number(&c, Budget::default()).value, 2);
        let c2 = c.power(2).unwrap();
        let out = independence_number(&c2, Budget::default());
        assert_eq!(out.value, 4);
        assert_eq!(out.value, alpha_brute(&c2));
    }

    #[test]
    fn corner_f2_small_powers() {
        let h = corner_hypergraph(&GroupSpec::cyclic(2).unwrap());
        assert_eq!(independence_number(&h, Budget::default()).value, 2);
        let h2 = h.power(2).unwrap();
        let out = independence_number(&h2, Budget::default());
        assert_eq!(out.value, 8);
        assert_eq!(out.value, alpha_brute(&h2));
    }

    #[test]
    fn verify_rejects_full_corner_vertex_set() {
        let h = corner_hypergraph(&GroupSpec::cyclic(2).unwrap());
        assert!(!verify_independent(&h, &[0, 1, 2, 3]));
        assert!(verify_independent(&h, &[]));
        assert!(verify_independent(&h, &[0, 1]));
    }

    #[test]
    fn value_is_invariant_under_vertex_relabeling() {
        use rand::prelude::*;
        let h = corner_hypergraph(&GroupSpec::cyclic(2).unwrap()).power(2).unwrap();
        let base = independence_number(&h, Budget::default()).value;
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..3 {
            let n = h.vertex_count();
            let mut perm: Vec<u32> = (0..n as u32).collect();
            perm.shuffle(&mut rng);
            // Relabel so sorting by label applies the permutation.
            let mut labels = vec![Vec::new(); n];
            for (v, &p) in perm.iter().enumerate() {
                labels[v] = vec![p as i64];
            }
            let edges: Vec<Vec<u32>> = h.edges().iter().map(|e| e.to_vec()).collect();
            let g = Hypergraph::new(h.arity(), labels, edges).unwrap();
            assert_eq!(independence_number(&g, Budget::default()).value, base);
        }
    }

    #[test]
    fn budget_exhaustion_reports_lower_bound() {
        let h = corner_hypergraph(&GroupSpec::cyclic(3).unwrap());
        let out = independence_number(&h, Budget::nodes(2));
        assert_eq!(out.status, SolveStatus::LowerBoundOnly);
        assert!(verify_independent(&h, &out.witness));
    }

    #[test]
    fn repeated_coordinate_edges_are_handled() {
        // Edge (0,0,1): choosing both 0 and 1 violates it.
        let h = Hypergraph::new(
            3,
            (0..3).map(|i| vec![i]).collect(),
            vec![vec![0, 0, 1]],
        )
        .unwrap();
        let out = independence_number(&h, Budget::default());
        assert_eq!(out.value, 2);
        assert!(verify_independent(&h, &out.witness));
        assert!(!verify_independent(&h, &[0, 1]));
    }
}
