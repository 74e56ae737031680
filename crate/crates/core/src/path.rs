//! Persistent paths from a single source.
//!
//! Paths live in a [`PathArena`] and are addressed by [`PathId`]. Each record
//! stores its parent handle and the accumulated objective vector, so
//! extension is O(W) and node lists are materialized only on demand.

use crate::error::{MowspError, Result};
use crate::model::{dot, CoefficientVector, EdgeId, Mog, NodeId};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathId(u32);

impl PathId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Append-only store of path records sharing prefixes through parent handles.
#[derive(Debug, Clone)]
pub struct PathArena {
    w: usize,
    parent: Vec<u32>,
    end: Vec<u32>,
    via: Vec<u32>,
    hops: Vec<u32>,
    seq: Vec<u64>,
    acc: Vec<f64>,
}

/// Read-only view of one record in a [`PathArena`].
#[derive(Debug, Clone, Copy)]
pub struct PathRecord<'a> {
    arena: &'a PathArena,
    id: PathId,
}

impl PathArena {
    pub fn new(objective_count: usize) -> Self {
        PathArena {
            w: objective_count,
            parent: Vec::new(),
            end: Vec::new(),
            via: Vec::new(),
            hops: Vec::new(),
            seq: Vec::new(),
            acc: Vec::new(),
        }
    }

    pub fn objective_count(&self) -> usize {
        self.w
    }

    pub fn len(&self) -> usize {
        self.end.len()
    }

    pub fn is_empty(&self) -> bool {
        self.end.is_empty()
    }

    /// The trivial path `{node}` with zero accumulated objectives.
    pub fn seed(&mut self, node: NodeId, seq: u64) -> PathId {
        let id = self.alloc(NONE, node as u32, NONE, 0, seq);
        self.acc.extend(std::iter::repeat_n(0.0, self.w));
        id
    }

    /// `p` followed by `edge`. The edge must leave `p`'s end node.
    pub fn extend(&mut self, p: PathId, g: &Mog, edge: EdgeId, seq: u64) -> Result<PathId> {
        let e = g.edge(edge);
        if e.from != self.end_node(p) {
            return Err(MowspError::logic(format!(
                "edge {edge} leaves node {} but path ends at {}",
                e.from,
                self.end_node(p)
            )));
        }
        let start = self.acc.len();
        let (pa, pb) = (p.index() * self.w, (p.index() + 1) * self.w);
        self.acc.extend_from_within(pa..pb);
        for (a, w) in self.acc[start..].iter_mut().zip(g.objectives(edge)) {
            *a += w;
        }
        let hops = self.hops[p.index()] + 1;
        Ok(self.alloc(p.0, e.to as u32, edge as u32, hops, seq))
    }

    /// Appends a record whose accumulated vector was computed by the caller.
    pub(crate) fn push_extension(
        &mut self,
        parent: PathId,
        end: NodeId,
        edge: EdgeId,
        acc: &[f64],
        seq: u64,
    ) -> PathId {
        debug_assert_eq!(acc.len(), self.w);
        let hops = self.hops[parent.index()] + 1;
        let id = self.alloc(parent.0, end as u32, edge as u32, hops, seq);
        self.acc.extend_from_slice(acc);
        id
    }

    /// Drops every record from `len` onwards. Only valid for records nothing
    /// else refers to.
    pub(crate) fn truncate(&mut self, len: usize) {
        self.parent.truncate(len);
        self.end.truncate(len);
        self.via.truncate(len);
        self.hops.truncate(len);
        self.seq.truncate(len);
        self.acc.truncate(len * self.w);
    }

    fn alloc(&mut self, parent: u32, end: u32, via: u32, hops: u32, seq: u64) -> PathId {
        let id = u32::try_from(self.end.len())
            .ok()
            .filter(|&i| i != NONE)
            .expect("path arena exhausted");
        self.parent.push(parent);
        self.end.push(end);
        self.via.push(via);
        self.hops.push(hops);
        self.seq.push(seq);
        PathId(id)
    }

    pub fn get(&self, id: PathId) -> PathRecord<'_> {
        PathRecord { arena: self, id }
    }

    #[inline]
    pub fn end_node(&self, id: PathId) -> NodeId {
        self.end[id.index()] as usize
    }

    #[inline]
    pub fn acc(&self, id: PathId) -> &[f64] {
        &self.acc[id.index() * self.w..(id.index() + 1) * self.w]
    }

    pub fn parent(&self, id: PathId) -> Option<PathId> {
        let p = self.parent[id.index()];
        (p != NONE).then_some(PathId(p))
    }

    pub fn via_edge(&self, id: PathId) -> Option<EdgeId> {
        let e = self.via[id.index()];
        (e != NONE).then_some(e as usize)
    }

    pub fn push_seq(&self, id: PathId) -> u64 {
        self.seq[id.index()]
    }

    #[inline]
    pub(crate) fn cost_flat(&self, id: PathId, lam: &[f64]) -> f64 {
        dot(self.acc(id), lam)
    }

    /// `lam . acc_objectives`, i.e. the sum of edge costs along the path.
    pub fn path_cost(&self, id: PathId, lam: &CoefficientVector) -> Result<f64> {
        if lam.len() != self.w {
            return Err(MowspError::input(format!(
                "dimension mismatch: {} vs {}",
                lam.len(),
                self.w
            )));
        }
        Ok(self.cost_flat(id, lam.as_slice()))
    }

    /// Edge ids from the source outwards.
    pub fn edges(&self, id: PathId) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(self.hops[id.index()] as usize);
        let mut cur = Some(id);
        while let Some(p) = cur {
            if let Some(e) = self.via_edge(p) {
                out.push(e);
            }
            cur = self.parent(p);
        }
        out.reverse();
        out
    }

    /// Node sequence from the source to the end node.
    pub fn nodes(&self, id: PathId) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.hops[id.index()] as usize + 1);
        let mut cur = Some(id);
        while let Some(p) = cur {
            out.push(self.end_node(p));
            cur = self.parent(p);
        }
        out.reverse();
        out
    }
}

impl<'a> PathRecord<'a> {
    pub fn id(&self) -> PathId {
        self.id
    }

    pub fn parent(&self) -> Option<PathRecord<'a>> {
        self.arena.parent(self.id).map(|id| self.arena.get(id))
    }

    pub fn end_node(&self) -> NodeId {
        self.arena.end_node(self.id)
    }

    pub fn via_edge(&self) -> Option<EdgeId> {
        self.arena.via_edge(self.id)
    }

    pub fn acc_objectives(&self) -> &'a [f64] {
        self.arena.acc(self.id)
    }

    /// Hop count.
    pub fn length(&self) -> usize {
        self.arena.hops[self.id.index()] as usize
    }

    pub fn push_seq(&self) -> u64 {
        self.arena.push_seq(self.id)
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.arena.nodes(self.id)
    }
}
