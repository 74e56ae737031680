//! Single-criterion shortest-path trees over a [`Mog`] scalarized by one
//! coefficient vector. Edge costs are evaluated during relaxation; no reduced
//! graph is materialized.

use crate::error::Result;
use crate::heap::PairingHeap;
use crate::model::{dot, CoefficientVector, EdgeId, Mog, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEntry {
    pub cost: f64,
    /// Predecessor node and the edge used to reach this node; `None` at the source.
    pub parent: Option<(NodeId, EdgeId)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathTree {
    source: NodeId,
    entries: Vec<Option<TreeEntry>>,
}

impl ShortestPathTree {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn entry(&self, v: NodeId) -> Option<&TreeEntry> {
        self.entries.get(v).and_then(Option::as_ref)
    }

    pub fn cost(&self, v: NodeId) -> Option<f64> {
        self.entry(v).map(|e| e.cost)
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.entry(v).is_some()
    }

    pub fn reachable_count(&self) -> usize {
        self.entries.iter().flatten().count()
    }

    pub fn edges_to(&self, v: NodeId) -> Option<Vec<EdgeId>> {
        let mut cur = self.entry(v)?;
        let mut out = Vec::new();
        while let Some((p, e)) = cur.parent {
            out.push(e);
            cur = self.entry(p).expect("tree parent is reachable");
        }
        out.reverse();
        Some(out)
    }

    pub fn path_to(&self, v: NodeId) -> Option<Vec<NodeId>> {
        let mut cur = v;
        let mut out = vec![v];
        while let Some((p, _)) = self.entry(cur)?.parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        Some(out)
    }
}

/// Operation counts of one or more Dijkstra runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DijkstraCounters {
    pub developed: u64,
    pub scanned: u64,
    pub cost_evaluations: u64,
    pub heap_ops: u64,
}

/// Reusable buffers so repeated runs on one graph do not reallocate.
#[derive(Debug, Default)]
pub(crate) struct DijkstraWorkspace {
    heap: PairingHeap<u32>,
    cost: Vec<f64>,
    parent: Vec<(u32, u32)>,
    settled: Vec<bool>,
}

const NO_PARENT: (u32, u32) = (u32::MAX, u32::MAX);

impl DijkstraWorkspace {
    pub(crate) fn run(
        &mut self,
        g: &Mog,
        source: NodeId,
        lam: &[f64],
        counters: &mut DijkstraCounters,
    ) -> ShortestPathTree {
        let n = g.node_count();
        self.heap.clear();
        self.cost.clear();
        self.cost.resize(n, f64::INFINITY);
        self.parent.clear();
        self.parent.resize(n, NO_PARENT);
        self.settled.clear();
        self.settled.resize(n, false);

        self.cost[source] = 0.0;
        self.heap
            .insert(0.0, source as u32)
            .expect("zero key is finite");
        counters.heap_ops += 1;

        while let Ok((key, u)) = self.heap.pop_min() {
            counters.heap_ops += 1;
            let u = u as usize;
            if self.settled[u] || key > self.cost[u] {
                continue;
            }
            self.settled[u] = true;
            counters.developed += 1;
            for &e in g.out_edges(u) {
                counters.scanned += 1;
                let v = g.edge(e).to;
                if self.settled[v] {
                    continue;
                }
                counters.cost_evaluations += 1;
                let next = key + dot(g.objectives(e), lam);
                if next < self.cost[v] {
                    self.cost[v] = next;
                    self.parent[v] = (u as u32, e as u32);
                    self.heap
                        .insert(next, v as u32)
                        .expect("path costs stay finite");
                    counters.heap_ops += 1;
                } else if next == self.cost[v] && (u as u32) < self.parent[v].0 {
                    self.parent[v] = (u as u32, e as u32);
                }
            }
        }

        let entries = (0..n)
            .map(|v| {
                self.settled[v].then(|| TreeEntry {
                    cost: self.cost[v],
                    parent: (self.parent[v] != NO_PARENT)
                        .then(|| (self.parent[v].0 as usize, self.parent[v].1 as usize)),
                })
            })
            .collect();
        ShortestPathTree { source, entries }
    }
}

/// Shortest-path tree from `source` under edge costs `lam . w_e`.
pub fn shortest_path_tree(
    g: &Mog,
    source: NodeId,
    lam: &CoefficientVector,
) -> Result<ShortestPathTree> {
    let (tree, _) = shortest_path_tree_counted(g, source, lam)?;
    Ok(tree)
}

pub fn shortest_path_tree_counted(
    g: &Mog,
    source: NodeId,
    lam: &CoefficientVector,
) -> Result<(ShortestPathTree, DijkstraCounters)> {
    g.check_node(source)?;
    if lam.len() != g.objective_count() {
        return Err(crate::MowspError::Input(format!(
            "coefficient vector has dimension {}, graph has {} objectives",
            lam.len(),
            g.objective_count()
        )));
    }
    let mut counters = DijkstraCounters::default();
    let tree = DijkstraWorkspace::default().run(g, source, lam.as_slice(), &mut counters);
    Ok((tree, counters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::{edge_cost, EdgeRecord};
    use proptest::prelude::*;

    fn costs(t: &ShortestPathTree, n: usize) -> Vec<Option<f64>> {
        (0..n).map(|v| t.cost(v)).collect()
    }

    #[test]
    fn g1_examples() {
        let g = g1();
        let t = shortest_path_tree(&g, 0, &lam(&[1.0, 1.0])).unwrap();
        assert_eq!(costs(&t, 3), vec![Some(0.0), Some(5.0), Some(5.0)]);
        assert_eq!(t.path_to(1).unwrap(), vec![0, 1]);
        assert_eq!(t.path_to(2).unwrap(), vec![0, 2]);

        let t = shortest_path_tree(&g, 0, &lam(&[3.0, 1.0])).unwrap();
        assert_eq!(costs(&t, 3), vec![Some(0.0), Some(7.0), Some(11.0)]);
        assert_eq!(t.path_to(2).unwrap(), vec![0, 1, 2]);

        let t = shortest_path_tree(&g, 0, &lam(&[1.0, 3.0])).unwrap();
        assert_eq!(costs(&t, 3), vec![Some(0.0), Some(11.0), Some(7.0)]);
        assert_eq!(t.path_to(1).unwrap(), vec![0, 2, 1]);
    }

    #[test]
    fn invalid_source_and_dimension() {
        let g = g1();
        assert!(shortest_path_tree(&g, 3, &lam(&[1.0, 1.0])).is_err());
        assert!(shortest_path_tree(&g, 0, &lam(&[1.0])).is_err());
    }

    #[test]
    fn unreachable_nodes_have_no_entry() {
        let g = Mog::new(3, 1, vec![EdgeRecord::new(0, 1, vec![2.0])]).unwrap();
        let t = shortest_path_tree(&g, 0, &lam(&[1.0])).unwrap();
        assert!(!t.is_reachable(2));
        assert!(t.path_to(2).is_none());
        assert_eq!(t.reachable_count(), 2);
    }

    #[test]
    fn ties_prefer_lower_parent_id() {
        // 0 -> {1, 2} -> 3 with equal costs: parent of 3 is node 1
        let g = Mog::new(
            4,
            1,
            vec![
                EdgeRecord::new(0, 2, vec![1.0]),
                EdgeRecord::new(0, 1, vec![1.0]),
                EdgeRecord::new(2, 3, vec![1.0]),
                EdgeRecord::new(1, 3, vec![1.0]),
            ],
        )
        .unwrap();
        let t = shortest_path_tree(&g, 0, &lam(&[1.0])).unwrap();
        assert_eq!(t.path_to(3).unwrap(), vec![0, 1, 3]);
    }

    fn bellman_ford(g: &Mog, s: NodeId, lam: &CoefficientVector) -> Vec<Option<f64>> {
        let mut d = vec![f64::INFINITY; g.node_count()];
        d[s] = 0.0;
        for _ in 0..g.node_count() {
            for e in g.edges() {
                let c = d[e.from] + edge_cost(e, lam).unwrap();
                if c < d[e.to] {
                    d[e.to] = c;
                }
            }
        }
        d.into_iter().map(|x| x.is_finite().then_some(x)).collect()
    }

    proptest! {
        #[test]
        fn agrees_with_bellman_ford(
            n in 1usize..12,
            raw in prop::collection::vec((0usize..12, 0usize..12, 0u32..20, 0u32..20), 0..40),
            l in (1u32..6, 1u32..6),
        ) {
            let edges = raw
                .into_iter()
                .filter(|(a, b, ..)| *a < n && *b < n)
                .map(|(a, b, x, y)| EdgeRecord::new(a, b, vec![f64::from(x), f64::from(y)]))
                .collect();
            let g = Mog::new(n, 2, edges).unwrap();
            let lam = lam(&[f64::from(l.0), f64::from(l.1)]);
            let (t, counters) = shortest_path_tree_counted(&g, 0, &lam).unwrap();
            prop_assert_eq!(costs(&t, n), bellman_ford(&g, 0, &lam));
            prop_assert_eq!(counters.developed as usize, t.reachable_count());
            for v in 0..n {
                if let Some(c) = t.cost(v) {
                    let recost: f64 = t
                        .edges_to(v)
                        .unwrap()
                        .iter()
                        .map(|&e| edge_cost(g.edge(e), &lam).unwrap())
                        .sum();
                    prop_assert_eq!(recost, c);
                }
            }
        }
    }
}
