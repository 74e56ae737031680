//! The standard algorithm: one independent Dijkstra run per coefficient
//! vector.

use std::time::Instant;

use crate::dijkstra::{DijkstraCounters, DijkstraWorkspace, ShortestPathTree};
use crate::error::Result;
use crate::model::{LambdaSet, Mog, NodeId};
use crate::solution::{MowspSolution, SolverStats};

fn check(g: &Mog, source: NodeId, lambdas: &LambdaSet) -> Result<()> {
    g.check_node(source)?;
    lambdas.check_graph(g)
}

fn stats_from(counters: &[DijkstraCounters]) -> SolverStats {
    let mut stats = SolverStats::default();
    for c in counters {
        stats.developed_paths += c.developed;
        stats.scanned_paths += c.scanned;
        stats.cost_evaluations += c.cost_evaluations;
        stats.heap_ops += c.heap_ops;
        stats.developed_per_iteration.push(c.developed);
        stats.scanned_per_iteration.push(c.scanned);
    }
    stats
}

/// Runs the `K` searches sequentially on one thread.
pub fn solve_standard(
    g: &Mog,
    source: NodeId,
    lambdas: &LambdaSet,
) -> Result<(MowspSolution, SolverStats)> {
    check(g, source, lambdas)?;
    let start = Instant::now();
    let mut ws = DijkstraWorkspace::default();
    let mut counters = Vec::with_capacity(lambdas.len());
    let mut trees = Vec::with_capacity(lambdas.len());
    for i in 0..lambdas.len() {
        let mut c = DijkstraCounters::default();
        trees.push(ws.run(g, source, lambdas.get(i), &mut c));
        counters.push(c);
    }
    let wall_time = start.elapsed();
    let mut stats = stats_from(&counters);
    stats.wall_time = wall_time;
    Ok((
        MowspSolution::from_trees(source, trees, g.node_count()),
        stats,
    ))
}

/// Same result as [`solve_standard`], with the iterations spread over
/// `workers` threads. Not used for timing comparisons.
pub fn solve_standard_parallel(
    g: &Mog,
    source: NodeId,
    lambdas: &LambdaSet,
    workers: usize,
) -> Result<(MowspSolution, SolverStats)> {
    check(g, source, lambdas)?;
    let workers = workers.clamp(1, lambdas.len());
    let start = Instant::now();
    let k = lambdas.len();
    let mut slots: Vec<Option<(ShortestPathTree, DijkstraCounters)>> = vec![None; k];
    std::thread::scope(|scope| {
        for (w, chunk) in slots.chunks_mut(k.div_ceil(workers)).enumerate() {
            let base = w * k.div_ceil(workers);
            scope.spawn(move || {
                let mut ws = DijkstraWorkspace::default();
                for (j, slot) in chunk.iter_mut().enumerate() {
                    let mut c = DijkstraCounters::default();
                    let tree = ws.run(g, source, lambdas.get(base + j), &mut c);
                    *slot = Some((tree, c));
                }
            });
        }
    });
    let wall_time = start.elapsed();
    let (trees, counters): (Vec<_>, Vec<_>) = slots
        .into_iter()
        .map(|s| s.expect("every iteration ran"))
        .unzip();
    let mut stats = stats_from(&counters);
    stats.wall_time = wall_time;
    Ok((
        MowspSolution::from_trees(source, trees, g.node_count()),
        stats,
    ))
}
