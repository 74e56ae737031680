//! IDAQ: iterative Dijkstra over an adaptive queue.
//!
//! One search serves all `K` coefficient vectors. Every scanned path that may
//! still be optimal for some vector (it is Pareto non-dominated by the known
//! paths at its node, or it beats the best known path for some vector) stays
//! in the queue across iterations, so later iterations resume from what
//! earlier ones discovered instead of starting over.

mod queue;

use std::collections::HashSet;
use std::time::Instant;

pub use queue::AdaptiveQueue;

use crate::dijkstra::{DijkstraCounters, DijkstraWorkspace};
use crate::error::Result;
use crate::model::{dominates_unchecked, weakly_dominates_unchecked, EdgeId, LambdaSet, Mog, NodeId};
use crate::path::PathId;
use crate::solution::{MowspSolution, SolutionSet, SolverStats};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdaqOptions {
    /// Re-verify the queue and relevance invariants after every mutation.
    /// Slow; violations are collected in the trace.
    pub check_invariants: bool,
    /// Record every pop.
    pub record_trace: bool,
}

impl IdaqOptions {
    pub fn checked() -> Self {
        IdaqOptions {
            check_invariants: true,
            record_trace: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopEvent {
    /// 1-based iteration in which the path was popped.
    pub iteration: usize,
    pub node: NodeId,
    pub path: PathId,
    /// Cost under the iteration's coefficient vector.
    pub cost: f64,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IdaqTrace {
    pub pops: Vec<PopEvent>,
    /// Accumulated objectives of the pareto-sample path per node.
    pub pareto_sample: Vec<Option<Vec<f64>>>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct IdaqRun {
    pub solution: MowspSolution,
    pub stats: SolverStats,
    pub trace: Option<IdaqTrace>,
}

/// Per-vector minimum cost and the path attaining it, for one node.
#[derive(Debug, Clone)]
struct BestSlots {
    cost: Box<[f64]>,
    path: Box<[PathId]>,
}

impl BestSlots {
    /// Lowers every slot `p` strictly beats; reports whether any did.
    #[inline]
    fn absorb(&mut self, p: PathId, costs: &[f64]) -> bool {
        let mut improved = false;
        for (b, &c) in self.cost.iter().zip(costs) {
            improved |= c < *b;
        }
        if improved {
            for ((b, slot), &c) in self.cost.iter_mut().zip(self.path.iter_mut()).zip(costs) {
                if c < *b {
                    *b = c;
                    *slot = p;
                }
            }
        }
        improved
    }
}

/// State of one IDAQ run: the queue, the developed paths, the pareto sample
/// and the per-node best-path cache used by the optimality relevance test.
pub struct IdaqSearch<'a> {
    g: &'a Mog,
    lambdas: &'a LambdaSet,
    queue: AdaptiveQueue<'a>,
    sample: Vec<f64>,
    sample_reached: Vec<bool>,
    optimal_paths: Vec<PathId>,
    best: Vec<Option<BestSlots>>,
    /// Path whose costs `scratch_costs` currently holds.
    scratch_owner: Option<PathId>,
    iteration: usize,
    stats: SolverStats,
    options: IdaqOptions,
    trace: Option<IdaqTrace>,
    last_pop_iteration: Vec<usize>,
    seen_paths: HashSet<Vec<EdgeId>>,
    scratch_acc: Vec<f64>,
    scratch_costs: Vec<f64>,
}

impl<'a> IdaqSearch<'a> {
    /// Computes the pareto sample (a shortest-path tree under the first
    /// coefficient vector) and seeds the queue with the trivial path.
    pub fn new(
        g: &'a Mog,
        source: NodeId,
        lambdas: &'a LambdaSet,
        options: IdaqOptions,
    ) -> Result<Self> {
        g.check_node(source)?;
        lambdas.check_graph(g)?;
        let n = g.node_count();
        let w = g.objective_count();

        let mut counters = DijkstraCounters::default();
        let tree = DijkstraWorkspace::default().run(g, source, lambdas.get(0), &mut counters);
        let mut sample = vec![0.0; n * w];
        let mut sample_reached = vec![false; n];
        let mut children: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); n];
        for v in 0..n {
            if let Some((p, e)) = tree.entry(v).and_then(|t| t.parent) {
                children[p].push((v, e));
            }
        }
        let mut stack = vec![source];
        sample_reached[source] = true;
        while let Some(u) = stack.pop() {
            for &(v, e) in &children[u] {
                for j in 0..w {
                    sample[v * w + j] = sample[u * w + j] + g.objectives(e)[j];
                }
                sample_reached[v] = true;
                stack.push(v);
            }
        }

        let stats = SolverStats {
            cost_evaluations: counters.cost_evaluations,
            heap_ops: counters.heap_ops,
            developed_per_iteration: vec![0; lambdas.len()],
            scanned_per_iteration: vec![0; lambdas.len()],
            ..SolverStats::default()
        };
        let trace = options.record_trace.then(|| IdaqTrace {
            pareto_sample: (0..n)
                .map(|v| sample_reached[v].then(|| sample[v * w..(v + 1) * w].to_vec()))
                .collect(),
            ..IdaqTrace::default()
        });

        let mut queue = AdaptiveQueue::new(n, lambdas);
        queue.push_seed(source);

        let mut search = IdaqSearch {
            g,
            lambdas,
            queue,
            sample,
            sample_reached,
            optimal_paths: Vec::new(),
            best: vec![None; n],
            scratch_owner: None,
            iteration: 0,
            stats,
            options,
            trace,
            last_pop_iteration: vec![usize::MAX; n],
            seen_paths: HashSet::new(),
            scratch_acc: vec![0.0; w],
            scratch_costs: vec![0.0; lambdas.len()],
        };
        search.check_node(source);
        Ok(search)
    }

    pub fn queue(&self) -> &AdaptiveQueue<'a> {
        &self.queue
    }

    /// Direct queue access for building hand-made states.
    pub fn queue_mut(&mut self) -> &mut AdaptiveQueue<'a> {
        &mut self.queue
    }

    /// 1-based current iteration.
    pub fn iteration(&self) -> usize {
        self.iteration + 1
    }

    pub fn optimal_paths(&self) -> &[PathId] {
        &self.optimal_paths
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    /// Accumulated objectives of the pareto-sample path ending at `v`.
    pub fn pareto_sample(&self, v: NodeId) -> Option<&[f64]> {
        let w = self.g.objective_count();
        self.sample_reached[v].then(|| &self.sample[v * w..(v + 1) * w])
    }

    /// Current best-per-vector paths at `v`, if that cache was initialized.
    pub fn best_paths(&self, v: NodeId) -> Option<Vec<PathId>> {
        self.best[v].as_ref().map(|slots| slots.path.to_vec())
    }

    fn violation(&mut self, message: String) {
        if let Some(t) = self.trace.as_mut() {
            t.violations.push(message);
        } else {
            panic!("IDAQ invariant violated: {message}");
        }
    }

    fn check_node(&mut self, v: NodeId) {
        if self.options.check_invariants {
            if let Err(e) = self.queue.check_representative(v) {
                self.violation(e);
            }
        }
    }

    /// Decides whether `p` (allocated in the queue's arena but not queued)
    /// could still be optimal for some coefficient vector given the
    /// discovered paths at its end node. On acceptance, discovered queue
    /// paths made redundant by `p` are dropped.
    pub fn is_relevant(&mut self, p: PathId) -> bool {
        let v = self.queue.arena().end_node(p);
        let k = self.lambdas.len();
        let w = self.g.objective_count();
        let accepted = if (self.queue.discovered_count(v) as f64) < k as f64 / w as f64 {
            self.relevant_by_dominance(v, p)
        } else {
            self.relevant_by_optimality(v, p)
        };
        if accepted {
            self.stats.relevance.accepted += 1;
        } else {
            self.stats.relevance.rejected += 1;
        }
        accepted
    }

    fn relevant_by_dominance(&mut self, v: NodeId, p: PathId) -> bool {
        self.stats.relevance.dominance_checks += 1;
        let arena = self.queue.arena();
        let acc = arena.acc(p);
        let covered = self
            .queue
            .popped_paths(v)
            .iter()
            .copied()
            .chain(self.queue.queue_paths(v))
            .any(|b| weakly_dominates_unchecked(arena.acc(b), acc));
        if covered {
            return false;
        }
        if self.best[v].is_some() {
            self.fill_costs(p);
            let slots = self.best[v].as_mut().expect("checked above");
            slots.absorb(p, &self.scratch_costs);
        }
        if self.options.check_invariants {
            let arena = self.queue.arena();
            let acc = arena.acc(p);
            let hit = self
                .queue
                .popped_paths(v)
                .iter()
                .any(|&b| dominates_unchecked(acc, arena.acc(b)));
            if hit {
                self.violation(format!("node {v}: relevant path dominates a popped path"));
            }
        }
        let removed = self
            .queue
            .remove_queued(v, |arena, b| dominates_unchecked(arena.acc(p), arena.acc(b)));
        self.stats.relevance.removed += removed as u64;
        if removed > 0 {
            self.check_node(v);
        }
        true
    }

    fn relevant_by_optimality(&mut self, v: NodeId, p: PathId) -> bool {
        self.stats.relevance.optimality_checks += 1;
        if self.best[v].is_none() {
            self.init_best(v);
        }
        self.fill_costs(p);
        let slots = self.best[v].as_mut().expect("initialized above");
        if !slots.absorb(p, &self.scratch_costs) {
            return false;
        }
        let slots = self.best[v].as_ref().expect("initialized above");
        let removed = self
            .queue
            .remove_queued(v, |_, b| !slots.path.contains(&b));
        self.stats.relevance.removed += removed as u64;
        if removed > 0 {
            self.check_node(v);
        }
        true
    }

    /// All `K` costs of `p` into `scratch_costs`.
    fn fill_costs(&mut self, p: PathId) {
        self.queue.compute_costs(p, &mut self.scratch_costs);
        self.stats.cost_evaluations += self.lambdas.len() as u64;
        self.scratch_owner = Some(p);
    }

    fn init_best(&mut self, v: NodeId) {
        self.stats.relevance.best_initializations += 1;
        let arena = self.queue.arena();
        let mut members: Vec<PathId> = self
            .queue
            .popped_paths(v)
            .iter()
            .copied()
            .chain(self.queue.queue_paths(v))
            .collect();
        members.sort_by_key(|&b| arena.push_seq(b));
        let k = self.lambdas.len();
        let mut slots = BestSlots {
            cost: vec![f64::INFINITY; k].into_boxed_slice(),
            path: vec![members[0]; k].into_boxed_slice(),
        };
        for &b in &members {
            slots.absorb(b, self.queue.path_costs(b));
        }
        self.best[v] = Some(slots);
    }

    /// Pops the next path, switching coefficient vectors when the queue runs
    /// dry. Returns `None` once the last iteration is exhausted.
    fn next_path(&mut self) -> Result<Option<PathId>> {
        while self.queue.is_empty() {
            if self.iteration + 1 == self.lambdas.len() {
                return Ok(None);
            }
            self.iteration += 1;
            self.queue.adapt(self.iteration + 1)?;
            if self.options.check_invariants {
                for v in 0..self.g.node_count() {
                    self.check_node(v);
                }
            }
        }
        let p = self.queue.pop()?;
        let v = self.queue.arena().end_node(p);
        self.check_node(v);
        Ok(Some(p))
    }

    fn record_pop(&mut self, p: PathId) {
        let v = self.queue.arena().end_node(p);
        if self.options.check_invariants {
            if self.last_pop_iteration[v] == self.iteration {
                self.violation(format!(
                    "node {v} developed twice in iteration {}",
                    self.iteration + 1
                ));
            }
            let edges = self.queue.arena().edges(p);
            if !self.seen_paths.insert(edges) {
                self.violation(format!("path to node {v} developed twice"));
            }
        }
        self.last_pop_iteration[v] = self.iteration;
        if let Some(trace) = self.trace.as_mut() {
            let arena = self.queue.arena();
            trace.pops.push(PopEvent {
                iteration: self.iteration + 1,
                node: v,
                path: p,
                cost: arena.cost_flat(p, self.lambdas.get(self.iteration)),
                edges: arena.edges(p),
            });
        }
    }

    fn develop(&mut self, p: PathId) {
        let g = self.g;
        let w = g.objective_count();
        let x = self.queue.arena().end_node(p);
        let mut acc = std::mem::take(&mut self.scratch_acc);
        for &e in g.out_edges(x) {
            self.stats.scanned_paths += 1;
            self.stats.scanned_per_iteration[self.iteration] += 1;
            let u = g.edge(e).to;
            for ((a, base), we) in acc
                .iter_mut()
                .zip(self.queue.arena().acc(p))
                .zip(g.objectives(e))
            {
                *a = base + we;
            }
            if self.options.check_invariants {
                let arena = self.queue.arena();
                if self
                    .queue
                    .popped_paths(u)
                    .iter()
                    .any(|&b| dominates_unchecked(&acc, arena.acc(b)))
                {
                    self.violation(format!("scanned path dominates a popped path at node {u}"));
                }
            }
            if self.sample_reached[u]
                && dominates_unchecked(&self.sample[u * w..(u + 1) * w], &acc)
            {
                self.stats.relevance.sample_filtered += 1;
                continue;
            }
            let staged = self.queue.stage_extension(p, u, e, &acc);
            self.scratch_owner = None;
            if self.is_relevant(staged) {
                if self.scratch_owner != Some(staged) {
                    self.fill_costs(staged);
                }
                self.queue.push_with_costs(staged, &self.scratch_costs);
                self.check_node(u);
            } else {
                self.queue.discard_last(staged);
            }
        }
        self.scratch_acc = acc;
    }

    /// For every coefficient vector and node, the cheapest developed path,
    /// ties going to the earliest-popped one.
    pub fn build_sets(&self) -> (Vec<SolutionSet>, Vec<Vec<Option<PathId>>>) {
        let n = self.g.node_count();
        let mut sets = Vec::with_capacity(self.lambdas.len());
        let mut chosen = Vec::with_capacity(self.lambdas.len());
        for i in 0..self.lambdas.len() {
            let mut costs = vec![None; n];
            let mut paths = vec![None; n];
            for v in 0..n {
                let mut best: Option<(f64, PathId)> = None;
                for &p in self.queue.popped_paths(v) {
                    let c = self.queue.path_costs(p)[i];
                    if best.is_none_or(|(bc, _)| c < bc) {
                        best = Some((c, p));
                    }
                }
                if let Some((c, p)) = best {
                    costs[v] = Some(c);
                    paths[v] = Some(p);
                }
            }
            sets.push(SolutionSet {
                lambda_index: i + 1,
                costs,
            });
            chosen.push(paths);
        }
        (sets, chosen)
    }

    /// Runs the main loop to completion.
    pub fn run(mut self) -> Result<IdaqRun> {
        let start = Instant::now();
        while let Some(p) = self.next_path()? {
            self.optimal_paths.push(p);
            self.stats.developed_paths += 1;
            self.stats.developed_per_iteration[self.iteration] += 1;
            self.record_pop(p);
            self.develop(p);
        }
        let (sets, chosen) = self.build_sets();
        self.stats.cost_evaluations += self.queue.cost_evaluations;
        self.stats.heap_ops += self.queue.heap_ops;
        self.stats.wall_time += start.elapsed();
        let source = self.queue.arena().end_node(self.optimal_paths[0]);
        let IdaqSearch {
            queue, stats, trace, ..
        } = self;
        let arena = queue.into_arena();
        Ok(IdaqRun {
            solution: MowspSolution::from_arena(source, sets, arena, chosen),
            stats,
            trace,
        })
    }
}

/// Solves all `K` problems with one IDAQ search.
pub fn solve_idaq(
    g: &Mog,
    source: NodeId,
    lambdas: &LambdaSet,
) -> Result<(MowspSolution, SolverStats)> {
    let run = solve_idaq_with(g, source, lambdas, IdaqOptions::default())?;
    Ok((run.solution, run.stats))
}

pub fn solve_idaq_with(
    g: &Mog,
    source: NodeId,
    lambdas: &LambdaSet,
    options: IdaqOptions,
) -> Result<IdaqRun> {
    let start = Instant::now();
    let search = IdaqSearch::new(g, source, lambdas, options)?;
    let setup = start.elapsed();
    let mut run = search.run()?;
    run.stats.wall_time += setup;
    Ok(run)
}
