//! Solver outputs shared by the standard and IDAQ solvers.

use std::time::Duration;

use crate::dijkstra::ShortestPathTree;
use crate::model::{EdgeId, NodeId};
use crate::path::{PathArena, PathId};

/// Optimal costs for one coefficient vector: `costs[v]` is `None` exactly
/// when `v` is unreachable from the source.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    /// 1-based position of the coefficient vector in the lambda set.
    pub lambda_index: usize,
    pub costs: Vec<Option<f64>>,
}

impl SolutionSet {
    pub fn reachable(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.costs
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (v, c)))
    }
}

#[derive(Debug, Clone)]
enum Routes {
    Trees(Vec<ShortestPathTree>),
    Arena {
        arena: PathArena,
        chosen: Vec<Vec<Option<PathId>>>,
    },
}

/// `K` solution sets plus the routes realizing them.
#[derive(Debug, Clone)]
pub struct MowspSolution {
    source: NodeId,
    sets: Vec<SolutionSet>,
    routes: Routes,
}

impl MowspSolution {
    pub(crate) fn from_trees(source: NodeId, trees: Vec<ShortestPathTree>, n: usize) -> Self {
        let sets = trees
            .iter()
            .enumerate()
            .map(|(i, t)| SolutionSet {
                lambda_index: i + 1,
                costs: (0..n).map(|v| t.cost(v)).collect(),
            })
            .collect();
        MowspSolution {
            source,
            sets,
            routes: Routes::Trees(trees),
        }
    }

    pub(crate) fn from_arena(
        source: NodeId,
        sets: Vec<SolutionSet>,
        arena: PathArena,
        chosen: Vec<Vec<Option<PathId>>>,
    ) -> Self {
        MowspSolution {
            source,
            sets,
            routes: Routes::Arena { arena, chosen },
        }
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    /// `K`.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[SolutionSet] {
        &self.sets
    }

    /// Cost for zero-based lambda index `i` at node `v`.
    pub fn cost(&self, i: usize, v: NodeId) -> Option<f64> {
        self.sets[i].costs[v]
    }

    /// Node sequence of the chosen route (zero-based lambda index).
    pub fn path(&self, i: usize, v: NodeId) -> Option<Vec<NodeId>> {
        match &self.routes {
            Routes::Trees(trees) => trees[i].path_to(v),
            Routes::Arena { arena, chosen } => chosen[i][v].map(|p| arena.nodes(p)),
        }
    }

    pub fn path_edges(&self, i: usize, v: NodeId) -> Option<Vec<EdgeId>> {
        match &self.routes {
            Routes::Trees(trees) => trees[i].edges_to(v),
            Routes::Arena { arena, chosen } => chosen[i][v].map(|p| arena.edges(p)),
        }
    }

    /// The per-(i, v) cost table.
    pub fn cost_table(&self) -> Vec<Vec<Option<f64>>> {
        self.sets.iter().map(|s| s.costs.clone()).collect()
    }
}

/// Operation counters and timing for one solver run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverStats {
    /// Paths popped from the priority structure.
    pub developed_paths: u64,
    /// One-edge extensions of developed paths.
    pub scanned_paths: u64,
    pub cost_evaluations: u64,
    pub heap_ops: u64,
    pub wall_time: Duration,
    pub developed_per_iteration: Vec<u64>,
    pub scanned_per_iteration: Vec<u64>,
    pub relevance: RelevanceCounters,
}

/// How scanned paths were classified (IDAQ only; zero for the standard solver).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelevanceCounters {
    /// Rejected by the pareto-sample dominance filter.
    pub sample_filtered: u64,
    pub dominance_checks: u64,
    pub optimality_checks: u64,
    pub accepted: u64,
    pub rejected: u64,
    /// Queue paths discarded by relevance checks.
    pub removed: u64,
    pub best_initializations: u64,
}
