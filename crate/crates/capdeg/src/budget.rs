//! Search budgets and solve outcomes shared by the exact solvers.

use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The search space was exhausted; the reported value is optimal.
    Exact,
    /// The budget ran out; the reported value is a verified lower bound only.
    LowerBoundOnly,
}

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 100_000_000, max_time: Duration::from_secs(30 * 60) }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_nodes: u64::MAX, max_time: Duration::MAX }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes, ..Default::default() }
    }
}

/// Tracks node and time consumption during a search.
pub struct BudgetClock {
    budget: Budget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
}

impl BudgetClock {
    pub fn start(budget: Budget) -> Self {
        BudgetClock { budget, start: Instant::now(), nodes: 0, exhausted: false }
    }

    /// Counts one search node; returns false once the budget is exhausted.
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            self.exhausted = true;
        } else if self.nodes % 1024 == 0 && self.start.elapsed() > self.budget.max_time {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome<W> {
    pub value: usize,
    pub witness: W,
    pub status: SolveStatus,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

impl<W> SolveOutcome<W> {
    pub fn is_exact(&self) -> bool {
        self.status == SolveStatus::Exact
    }
}
