//! Backtracking search for prime labelings of arbitrary graphs, a brute-force
//! counter used as its oracle, and a scan over all small unicyclic graphs.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{enumerate_unicyclic_capped, Graph, GraphError, DEFAULT_ENUMERATION_CAP};
use crate::labelings::Labeling;
use crate::numth::gcd_unchecked;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const DEFAULT_COUNT_GUARD: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("count_labelings is limited to n <= {guard}, got n = {n}")]
    TooLarge { n: usize, guard: usize },
    #[error("scan is capped at n = {cap}, got max_n = {max_n}")]
    ScanAboveCap { max_n: usize, cap: usize },
    #[error("could not build worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Search limits. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: Some(DEFAULT_NODE_BUDGET),
            max_time: None,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            max_nodes: None,
            max_time: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(Labeling),
    ExhaustedNoSolution,
    BudgetExceeded,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "found",
            Outcome::ExhaustedNoSolution => "no_solution",
            Outcome::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Consistent assignments made.
    pub nodes_expanded: u64,
    /// Vertices whose candidate labels ran out.
    pub backtracks: u64,
    pub elapsed: Duration,
    pub outcome: Outcome,
}

struct Search<'g> {
    g: &'g Graph,
    labels: Vec<u64>,
    used: Vec<bool>,
    labeled_neighbors: Vec<usize>,
    unused: usize,
    nodes: u64,
    backtracks: u64,
    budget: Budget,
    started: Instant,
    out_of_budget: bool,
}

impl Search<'_> {
    /// Unlabeled vertex with the fewest labels still usable, then the most
    /// labeled neighbors, then highest degree, then lowest id.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, Reverse<usize>, Reverse<usize>, usize)> = None;
        for v in (0..self.g.n()).filter(|&v| self.labels[v] == 0) {
            let options = if self.labeled_neighbors[v] == 0 {
                self.unused
            } else {
                (1..=self.g.n() as u64)
                    .filter(|&x| !self.used[x as usize] && self.consistent(v, x))
                    .count()
            };
            let key = (options, Reverse(self.labeled_neighbors[v]), Reverse(self.g.degree(v)), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
                if options == 0 {
                    break;
                }
            }
        }
        best.map(|(.., v)| v)
    }

    fn consistent(&self, v: usize, x: u64) -> bool {
        self.g
            .neighbors(v)
            .iter()
            .all(|&w| self.labels[w] == 0 || gcd_unchecked(self.labels[w], x) == 1)
    }

    fn charge(&mut self) -> bool {
        if self.budget.max_nodes.is_some_and(|cap| self.nodes >= cap) {
            self.out_of_budget = true;
            return false;
        }
        self.nodes += 1;
        if let Some(limit) = self.budget.max_time {
            if self.nodes.is_multiple_of(1024) && self.started.elapsed() > limit {
                self.out_of_budget = true;
            }
        }
        !self.out_of_budget
    }

    fn set(&mut self, v: usize, x: u64) {
        self.labels[v] = x;
        self.used[x as usize] = true;
        self.unused -= 1;
        for &w in self.g.neighbors(v) {
            self.labeled_neighbors[w] += 1;
        }
    }

    fn unset(&mut self, v: usize) {
        self.used[self.labels[v] as usize] = false;
        self.unused += 1;
        self.labels[v] = 0;
        for &w in self.g.neighbors(v) {
            self.labeled_neighbors[w] -= 1;
        }
    }

    fn run(&mut self) -> bool {
        let Some(v) = self.pick() else {
            return true;
        };
        for x in 1..=self.g.n() as u64 {
            if self.used[x as usize] || !self.consistent(v, x) {
                continue;
            }
            if !self.charge() {
                return false;
            }
            self.set(v, x);
            if self.run() {
                return true;
            }
            self.unset(v);
            if self.out_of_budget {
                return false;
            }
        }
        self.backtracks += 1;
        false
    }
}

/// Depth-first search over label assignments, most-constrained vertex first
/// and labels in ascending order. A new label is only checked against the
/// already-labeled neighbors. Deterministic for a node budget.
pub fn solve(g: &Graph, budget: Budget) -> SearchStats {
    let n = g.n();
    let mut search = Search {
        g,
        labels: vec![0; n],
        used: vec![false; n + 1],
        labeled_neighbors: vec![0; n],
        unused: n,
        nodes: 0,
        backtracks: 0,
        budget,
        started: Instant::now(),
        out_of_budget: false,
    };
    let found = search.run();
    let outcome = if found {
        Outcome::Found(Labeling::new(std::mem::take(&mut search.labels)))
    } else if search.out_of_budget {
        Outcome::BudgetExceeded
    } else {
        Outcome::ExhaustedNoSolution
    };
    SearchStats {
        nodes_expanded: search.nodes,
        backtracks: search.backtracks,
        elapsed: search.started.elapsed(),
        outcome,
    }
}

/// Number of prime labelings of `g`, by checking every permutation of
/// `1..=n`. Refuses graphs above `guard` vertices.
pub fn count_labelings(g: &Graph, guard: usize) -> Result<u64, SolverError> {
    let n = g.n();
    if n > guard {
        return Err(SolverError::TooLarge { n, guard });
    }
    let edges = g.edges();
    let count = (1..=n as u64)
        .permutations(n)
        .filter(|p| edges.iter().all(|&(u, v)| gcd_unchecked(p[u], p[v]) == 1))
        .count();
    Ok(count as u64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ScanTally {
    pub scanned: u64,
    pub found: u64,
    pub budget_exceeded: u64,
    pub no_solution: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    /// Keyed by vertex count.
    pub per_n: BTreeMap<usize, ScanTally>,
    pub counterexamples: Vec<Graph>,
}

impl ScanReport {
    pub fn tally(&self, n: usize) -> Option<&ScanTally> {
        self.per_n.get(&n)
    }

    pub fn totals(&self) -> ScanTally {
        self.per_n.values().fold(ScanTally::default(), |acc, t| ScanTally {
            scanned: acc.scanned + t.scanned,
            found: acc.found + t.found,
            budget_exceeded: acc.budget_exceeded + t.budget_exceeded,
            no_solution: acc.no_solution + t.no_solution,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    pub max_n: usize,
    pub budget: Budget,
    pub jobs: usize,
    pub cap: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            max_n: 9,
            budget: Budget::default(),
            jobs: 1,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Runs the solver on every enumerated unicyclic graph with `3..=max_n`
/// vertices. Graphs the solver proves unlabelable are returned as
/// counterexamples, in enumeration order regardless of `jobs`.
pub fn scan_conjecture(config: &ScanConfig) -> Result<ScanReport, SolverError> {
    if config.max_n > config.cap {
        return Err(SolverError::ScanAboveCap {
            max_n: config.max_n,
            cap: config.cap,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| SolverError::Pool(e.to_string()))?;

    let mut report = ScanReport {
        per_n: BTreeMap::new(),
        counterexamples: Vec::new(),
    };
    for n in 3..=config.max_n {
        let graphs: Vec<Graph> = enumerate_unicyclic_capped(n, config.cap)?.collect();
        let outcomes: Vec<Outcome> = pool.install(|| {
            graphs
                .par_iter()
                .map(|g| solve(g, config.budget).outcome)
                .collect()
        });
        let mut tally = ScanTally::default();
        for (g, outcome) in graphs.into_iter().zip(outcomes) {
            tally.scanned += 1;
            match outcome {
                Outcome::Found(_) => tally.found += 1,
                Outcome::BudgetExceeded => tally.budget_exceeded += 1,
                Outcome::ExhaustedNoSolution => {
                    tally.no_solution += 1;
                    report.counterexamples.push(g);
                }
            }
        }
        report.per_n.insert(n, tally);
    }
    Ok(report)
}
