//! The adaptive queue: per-node registries of queued and popped paths plus a
//! priority heap that holds at most one representative per node.
//!
//! A queued path `p` ending at `v` has a non-null priority under the current
//! coefficient vector iff no other path at `v` is strictly cheaper, no
//! earlier-pushed queued path at `v` costs the same, and no popped path at
//! `v` costs the same. The representative is recomputed per node from that
//! rule whenever the node's registry changes.

use crate::error::{MowspError, Result};
use crate::heap::{HeapHandle, PairingHeap};
use crate::model::{EdgeId, LambdaSet, Mog, NodeId};
use crate::path::{PathArena, PathId};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Queued {
    pub(crate) path: PathId,
    pub(crate) seq: u64,
    /// Cost under the current coefficient vector.
    pub(crate) cost: f64,
}

#[derive(Debug, Clone, Copy)]
struct Representative {
    path: PathId,
    handle: HeapHandle,
    cost: f64,
}

#[derive(Debug, Clone)]
pub struct AdaptiveQueue<'l> {
    lambdas: &'l LambdaSet,
    lambda_index: usize,
    arena: PathArena,
    queued: Vec<Vec<Queued>>,
    popped: Vec<Vec<PathId>>,
    popped_min: Vec<f64>,
    reps: Vec<Option<Representative>>,
    heap: PairingHeap<u32>,
    next_seq: u64,
    /// Coefficients transposed to `W x K`.
    lam_t: Vec<f64>,
    /// All `K` costs of every queued or popped path, row per path id.
    costs: Vec<f64>,
    pub(crate) heap_ops: u64,
    pub(crate) cost_evaluations: u64,
}

impl<'l> AdaptiveQueue<'l> {
    pub fn new(node_count: usize, lambdas: &'l LambdaSet) -> Self {
        AdaptiveQueue {
            lambdas,
            lambda_index: 0,
            arena: PathArena::new(lambdas.dimension()),
            queued: vec![Vec::new(); node_count],
            popped: vec![Vec::new(); node_count],
            popped_min: vec![f64::INFINITY; node_count],
            reps: vec![None; node_count],
            heap: PairingHeap::with_capacity(node_count),
            next_seq: 0,
            lam_t: (0..lambdas.dimension())
                .flat_map(|j| (0..lambdas.len()).map(move |i| lambdas.get(i)[j]))
                .collect(),
            costs: Vec::new(),
            heap_ops: 0,
            cost_evaluations: 0,
        }
    }

    /// 1-based index of the coefficient vector priorities are computed under.
    pub fn lambda_index(&self) -> usize {
        self.lambda_index + 1
    }

    pub fn arena(&self) -> &PathArena {
        &self.arena
    }

    pub(crate) fn into_arena(self) -> PathArena {
        self.arena
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Paths at `v` still waiting in the queue, with null priority or not.
    pub fn queue_paths(&self, v: NodeId) -> impl Iterator<Item = PathId> + '_ {
        self.queued[v].iter().map(|q| q.path)
    }

    /// Paths at `v` already popped, in pop order.
    pub fn popped_paths(&self, v: NodeId) -> &[PathId] {
        &self.popped[v]
    }

    /// `|Q_v|`: queued plus popped paths at `v`.
    pub fn discovered_count(&self, v: NodeId) -> usize {
        self.queued[v].len() + self.popped[v].len()
    }

    /// The path currently holding `v`'s heap slot, if any.
    pub fn heap_entry(&self, v: NodeId) -> Option<PathId> {
        self.reps[v].map(|r| r.path)
    }

    pub fn heap_len(&self) -> usize {
        self.heap.len()
    }

    /// Writes all `K` costs of `p` into `out`, from its accumulated
    /// objectives.
    pub(crate) fn compute_costs(&self, p: PathId, out: &mut [f64]) {
        self.costs_of(self.arena.acc(p), out);
    }

    /// `out[i] = lambda_i . x` for every vector. Sums run over objectives in
    /// order, so each entry equals the scalar dot product bit for bit.
    pub(crate) fn costs_of(&self, x: &[f64], out: &mut [f64]) {
        const BLOCK: usize = 8;
        let k = self.lambdas.len();
        let end = k;
        let mut i = 0;
        // Blocks of vectors accumulate in registers across objectives.
        while i + BLOCK <= end {
            let mut block = [0.0f64; BLOCK];
            for (j, &a) in x.iter().enumerate() {
                let row = &self.lam_t[j * k + i..j * k + i + BLOCK];
                for t in 0..BLOCK {
                    block[t] += a * row[t];
                }
            }
            out[i..i + BLOCK].copy_from_slice(&block);
            i += BLOCK;
        }
        for (i, o) in out[..end].iter_mut().enumerate().skip(i) {
            *o = 0.0;
            for (j, &a) in x.iter().enumerate() {
                *o += a * self.lam_t[j * k + i];
            }
        }
    }

    /// Cached costs of a queued or popped path under every vector.
    pub fn path_costs(&self, p: PathId) -> &[f64] {
        let k = self.lambdas.len();
        &self.costs[p.index() * k..(p.index() + 1) * k]
    }

    #[inline]
    fn current_cost(&self, p: PathId) -> f64 {
        self.costs[p.index() * self.lambdas.len() + self.lambda_index]
    }

    fn take_seq(&mut self) -> u64 {
        let s = self.next_seq;
        self.next_seq += 1;
        s
    }

    /// Pushes the trivial path `{source}`.
    pub fn push_seed(&mut self, source: NodeId) -> PathId {
        let seq = self.take_seq();
        let p = self.arena.seed(source, seq);
        self.push_existing(p);
        p
    }

    /// Builds `parent + edge` and pushes it. The caller vouches for relevance.
    pub fn extend_and_push(&mut self, g: &Mog, parent: PathId, edge: EdgeId) -> Result<PathId> {
        let seq = self.take_seq();
        let p = self.arena.extend(parent, g, edge, seq)?;
        self.push_existing(p);
        Ok(p)
    }

    /// Allocates an extension record without queueing it; see [`Self::push_existing`]
    /// and [`Self::discard_last`].
    pub(crate) fn stage_extension(
        &mut self,
        parent: PathId,
        end: NodeId,
        edge: EdgeId,
        acc: &[f64],
    ) -> PathId {
        let seq = self.next_seq;
        self.arena.push_extension(parent, end, edge, acc, seq)
    }

    /// Drops a staged record that was judged irrelevant.
    pub(crate) fn discard_last(&mut self, p: PathId) {
        debug_assert_eq!(p.index() + 1, self.arena.len());
        self.arena.truncate(p.index());
    }

    /// Queues a staged path, assigning priority per the representative rule.
    pub(crate) fn push_existing(&mut self, p: PathId) {
        let k = self.lambdas.len();
        self.reserve_costs(p);
        let mut row = std::mem::take(&mut self.costs);
        self.compute_costs(p, &mut row[p.index() * k..]);
        self.costs = row;
        self.cost_evaluations += k as u64;
        self.enqueue(p);
    }

    /// As [`Self::push_existing`], with the caller supplying all `K` costs.
    pub(crate) fn push_with_costs(&mut self, p: PathId, costs: &[f64]) {
        let k = self.lambdas.len();
        self.reserve_costs(p);
        self.costs[p.index() * k..(p.index() + 1) * k].copy_from_slice(&costs[..k]);
        self.enqueue(p);
    }

    fn reserve_costs(&mut self, p: PathId) {
        let need = (p.index() + 1) * self.lambdas.len();
        if self.costs.len() < need {
            self.costs.resize(need, 0.0);
        }
    }

    fn enqueue(&mut self, p: PathId) {
        let seq = self.arena.push_seq(p);
        debug_assert!(seq >= self.next_seq.saturating_sub(1));
        self.next_seq = self.next_seq.max(seq + 1);
        let v = self.arena.end_node(p);
        let cost = self.current_cost(p);
        self.queued[v].push(Queued { path: p, seq, cost });
        let threshold = match self.reps[v] {
            Some(r) => r.cost,
            None => self.popped_min[v],
        };
        if cost < threshold {
            if let Some(old) = self.reps[v].take() {
                self.heap.delete(old.handle).expect("representative handle is live");
                self.heap_ops += 1;
            }
            let handle = self.heap.insert(cost, v as u32).expect("finite path cost");
            self.heap_ops += 1;
            self.reps[v] = Some(Representative {
                path: p,
                handle,
                cost,
            });
        }
    }

    /// Removes the minimum-priority path and records it as popped.
    pub fn pop(&mut self) -> Result<PathId> {
        let (cost, v) = self
            .heap
            .pop_min()
            .map_err(|_| MowspError::State("pop from an empty adaptive queue".into()))?;
        self.heap_ops += 1;
        let v = v as usize;
        let rep = self.reps[v].take().expect("heap entry has a representative");
        let pos = self.queued[v]
            .iter()
            .position(|q| q.path == rep.path)
            .expect("representative is queued");
        self.queued[v].swap_remove(pos);
        self.popped[v].push(rep.path);
        if cost < self.popped_min[v] {
            self.popped_min[v] = cost;
        }
        Ok(rep.path)
    }

    /// Switches to the 1-based coefficient vector `i` and rebuilds the heap.
    pub fn adapt(&mut self, i: usize) -> Result<()> {
        if i < 2 || i > self.lambdas.len() {
            return Err(MowspError::logic(format!(
                "adapt index {i} outside 2..={}",
                self.lambdas.len()
            )));
        }
        if !self.heap.is_empty() {
            return Err(MowspError::State(
                "adapt called while paths still have priority".into(),
            ));
        }
        self.heap.clear();
        self.lambda_index = i - 1;
        let (k, li) = (self.lambdas.len(), self.lambda_index);
        for v in 0..self.queued.len() {
            self.reps[v] = None;
            let mut min = f64::INFINITY;
            for &p in &self.popped[v] {
                min = min.min(self.costs[p.index() * k + li]);
            }
            self.popped_min[v] = min;
            if self.queued[v].is_empty() {
                continue;
            }
            for q in &mut self.queued[v] {
                q.cost = self.costs[q.path.index() * k + li];
            }
            self.refresh(v);
        }
        Ok(())
    }

    /// Removes queued paths at `v` matching `pred`, then recomputes `v`'s
    /// representative. Popped paths are never touched.
    pub(crate) fn remove_queued<F>(&mut self, v: NodeId, mut pred: F) -> usize
    where
        F: FnMut(&PathArena, PathId) -> bool,
    {
        let before = self.queued[v].len();
        let arena = &self.arena;
        self.queued[v].retain(|q| !pred(arena, q.path));
        let removed = before - self.queued[v].len();
        if removed > 0 {
            self.refresh(v);
        }
        removed
    }

    /// The representative `v` should have right now, from scratch.
    fn desired(&self, v: NodeId) -> Option<Queued> {
        let best = self.queued[v].iter().copied().min_by(|a, b| {
            a.cost
                .total_cmp(&b.cost)
                .then(a.seq.cmp(&b.seq))
        })?;
        (best.cost < self.popped_min[v]).then_some(best)
    }

    fn refresh(&mut self, v: NodeId) {
        let want = self.desired(v);
        match (self.reps[v], want) {
            (Some(r), Some(w)) if r.path == w.path => {}
            (current, want) => {
                if let Some(r) = current {
                    self.heap.delete(r.handle).expect("representative handle is live");
                    self.heap_ops += 1;
                    self.reps[v] = None;
                }
                if let Some(w) = want {
                    let handle = self.heap.insert(w.cost, v as u32).expect("finite path cost");
                    self.heap_ops += 1;
                    self.reps[v] = Some(Representative {
                        path: w.path,
                        handle,
                        cost: w.cost,
                    });
                }
            }
        }
    }

    /// Recomputes the representative rule for `v` directly from the
    /// registries and compares it with the heap. Slow; used by invariant checks.
    pub fn check_representative(&self, v: NodeId) -> std::result::Result<(), String> {
        let lam = self.lambdas.get(self.lambda_index);
        for &p in self.popped[v].iter().chain(self.queued[v].iter().map(|q| &q.path)) {
            let exact = self.arena.cost_flat(p, lam);
            let cached = self.current_cost(p);
            if (exact - cached).abs() > 1e-9 * exact.abs().max(1.0) {
                return Err(format!(
                    "node {v}: cached cost {cached} drifted from {exact}"
                ));
            }
        }
        let popped_min = self.popped[v]
            .iter()
            .map(|&p| self.current_cost(p))
            .fold(f64::INFINITY, f64::min);
        if popped_min != self.popped_min[v] {
            return Err(format!("node {v}: stale popped minimum"));
        }
        let mut expected: Option<(f64, u64, PathId)> = None;
        for q in &self.queued[v] {
            let c = self.current_cost(q.path);
            if c != q.cost {
                return Err(format!("node {v}: stale cached cost for queued path"));
            }
            if expected.is_none_or(|(bc, bs, _)| c < bc || (c == bc && q.seq < bs)) {
                expected = Some((c, q.seq, q.path));
            }
        }
        let expected = expected.filter(|(c, ..)| *c < popped_min).map(|(.., p)| p);
        let actual = self.reps[v].map(|r| r.path);
        if expected != actual {
            return Err(format!(
                "node {v}: heap representative {actual:?}, expected {expected:?}"
            ));
        }
        if let Some(r) = self.reps[v] {
            if self.heap.key(r.handle) != Some(self.current_cost(r.path)) {
                return Err(format!("node {v}: heap key out of date"));
            }
        }
        Ok(())
    }
}
