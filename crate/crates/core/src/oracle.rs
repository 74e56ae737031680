//! Ground truth for small instances.
//!
//! [`pareto_fronts`] is a multicriteria label-setting search: labels are
//! settled in lexicographic order of their objective vectors, so a settled
//! label can never be dominated by one settled later. Labels weakly dominated
//! by a settled label at the same node are dropped, which collapses equal
//! vectors and keeps zero-cost cycles finite.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use crate::error::{MowspError, Result};
use crate::model::{dominates_unchecked, dot, weakly_dominates_unchecked, LambdaSet, Mog, NodeId};
use crate::model::EdgeId;
use crate::path::{PathArena, PathId};

pub const DEFAULT_LABEL_CAP: usize = 1_000_000;

/// Per-node Pareto sets, each vector with one witness path.
#[derive(Debug, Clone)]
pub struct ParetoFront {
    source: NodeId,
    arena: PathArena,
    fronts: Vec<Vec<PathId>>,
    labels_created: usize,
}

impl ParetoFront {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn node_count(&self) -> usize {
        self.fronts.len()
    }

    /// Number of Pareto vectors at `v`; zero when unreachable.
    pub fn len(&self, v: NodeId) -> usize {
        self.fronts[v].len()
    }

    pub fn vectors(&self, v: NodeId) -> impl Iterator<Item = &[f64]> + '_ {
        self.fronts[v].iter().map(|&p| self.arena.acc(p))
    }

    pub fn witness_nodes(&self, v: NodeId, j: usize) -> Vec<NodeId> {
        self.arena.nodes(self.fronts[v][j])
    }

    pub fn witness_edges(&self, v: NodeId, j: usize) -> Vec<EdgeId> {
        self.arena.edges(self.fronts[v][j])
    }

    pub fn contains(&self, v: NodeId, objectives: &[f64]) -> bool {
        self.vectors(v).any(|x| x == objectives)
    }

    /// Labels generated during the search, including pruned ones.
    pub fn labels_created(&self) -> usize {
        self.labels_created
    }

    /// `min` over the front at `v` of `lam . x`.
    pub fn min_cost(&self, v: NodeId, lam: &[f64]) -> Option<f64> {
        self.vectors(v).map(|x| dot(x, lam)).min_by(f64::total_cmp)
    }
}

struct Label {
    acc: Vec<f64>,
    id: PathId,
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Label {}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.acc.iter().zip(&other.acc) {
            match a.total_cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.id.cmp(&other.id)
    }
}

/// Complete Pareto fronts from `source`. `label_cap` bounds the number of
/// labels created; exceeding it is a resource error, never a truncation.
pub fn pareto_fronts(g: &Mog, source: NodeId, label_cap: Option<usize>) -> Result<ParetoFront> {
    g.check_node(source)?;
    let cap = label_cap.unwrap_or(DEFAULT_LABEL_CAP);
    let w = g.objective_count();
    let mut arena = PathArena::new(w);
    let mut fronts: Vec<Vec<PathId>> = vec![Vec::new(); g.node_count()];
    let mut heap = BinaryHeap::new();
    let seed = arena.seed(source, 0);
    heap.push(Reverse(Label {
        acc: vec![0.0; w],
        id: seed,
    }));
    let mut created = 1usize;
    let settled_covers = |arena: &PathArena, front: &[PathId], acc: &[f64]| {
        front
            .iter()
            .any(|&q| weakly_dominates_unchecked(arena.acc(q), acc))
    };

    while let Some(Reverse(label)) = heap.pop() {
        let v = arena.end_node(label.id);
        if settled_covers(&arena, &fronts[v], &label.acc) {
            continue;
        }
        fronts[v].push(label.id);
        for &e in g.out_edges(v) {
            let to = g.edge(e).to;
            let acc: Vec<f64> = label
                .acc
                .iter()
                .zip(g.objectives(e))
                .map(|(a, b)| a + b)
                .collect();
            if settled_covers(&arena, &fronts[to], &acc) {
                continue;
            }
            created += 1;
            if created > cap {
                return Err(MowspError::Resource(format!(
                    "more than {cap} labels; Pareto fronts too large for the oracle"
                )));
            }
            let id = arena.push_extension(label.id, to, e, &acc, created as u64);
            heap.push(Reverse(Label { acc, id }));
        }
    }
    Ok(ParetoFront {
        source,
        arena,
        fronts,
        labels_created: created,
    })
}

/// Optimal cost per `(i, v)`, taken as the minimum over the Pareto front.
pub fn oracle_optimal_costs(
    g: &Mog,
    source: NodeId,
    lambdas: &LambdaSet,
) -> Result<Vec<Vec<Option<f64>>>> {
    lambdas.check_graph(g)?;
    let front = pareto_fronts(g, source, None)?;
    Ok(optimal_costs_from_front(&front, lambdas))
}

pub fn optimal_costs_from_front(front: &ParetoFront, lambdas: &LambdaSet) -> Vec<Vec<Option<f64>>> {
    (0..lambdas.len())
        .map(|i| {
            (0..front.node_count())
                .map(|v| front.min_cost(v, lambdas.get(i)))
                .collect()
        })
        .collect()
}

/// Structural statistics of an instance, derived from its Pareto fronts.
#[derive(Debug, Clone, Serialize)]
pub struct StructureDiagnostics {
    pub node_count: usize,
    pub edge_count: usize,
    pub pareto_count: Vec<usize>,
    /// `alpha[l]`: share of nodes with at most `l` Pareto vectors.
    pub alpha: Vec<f64>,
    /// `gamma[l]`: share of edges leaving such nodes.
    pub gamma: Vec<f64>,
    /// Smallest `l` with `alpha[l] >= 1 - ln|V| / |V|`.
    pub l: usize,
    pub d: f64,
    pub d_l: f64,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
    pub n_l: Option<usize>,
}

impl StructureDiagnostics {
    pub fn alpha_at(&self, l: usize) -> f64 {
        *self.alpha.get(l).unwrap_or(&1.0)
    }

    pub fn gamma_at(&self, l: usize) -> f64 {
        *self.gamma.get(l).unwrap_or(&1.0)
    }

    /// The threshold `alpha(L)` has to reach.
    pub fn alpha_threshold(&self) -> f64 {
        alpha_threshold(self.node_count)
    }
}

fn alpha_threshold(n: usize) -> f64 {
    let n = n as f64;
    1.0 - n.ln() / n
}

/// Computes the diagnostics. With `n_l_path_cap = Some(c)` the expensive
/// `N_L` statistic is also computed by enumerating simple paths, giving up
/// (leaving it `None`) after `c` of them.
pub fn structure_diagnostics(
    g: &Mog,
    front: &ParetoFront,
    n_l_path_cap: Option<usize>,
) -> Result<StructureDiagnostics> {
    let n = g.node_count();
    if front.node_count() != n {
        return Err(MowspError::input("front was computed on another graph"));
    }
    let pareto_count: Vec<usize> = (0..n).map(|v| front.len(v)).collect();
    let max_count = pareto_count.iter().copied().max().unwrap_or(0);
    let mut in_deg = vec![0usize; n];
    for e in g.edges() {
        in_deg[e.to] += 1;
    }

    let mut alpha = Vec::with_capacity(max_count + 1);
    let mut gamma = Vec::with_capacity(max_count + 1);
    for l in 0..=max_count {
        let nodes = pareto_count.iter().filter(|&&c| c <= l).count();
        let edges: usize = (0..n)
            .filter(|&v| pareto_count[v] <= l)
            .map(|v| g.out_degree(v))
            .sum();
        alpha.push(nodes as f64 / n as f64);
        gamma.push(if g.edge_count() == 0 {
            1.0
        } else {
            edges as f64 / g.edge_count() as f64
        });
    }
    let threshold = alpha_threshold(n);
    let l = alpha
        .iter()
        .position(|&a| a >= threshold)
        .unwrap_or(max_count);

    let l_nodes: Vec<NodeId> = (0..n).filter(|&v| pareto_count[v] <= l).collect();
    let l_edges: usize = l_nodes.iter().map(|&v| g.out_degree(v)).sum();
    let d_l = if l_nodes.is_empty() {
        0.0
    } else {
        l_edges as f64 / l_nodes.len() as f64
    };
    let n_l = match n_l_path_cap {
        Some(cap) => non_dominated_count(g, front, &l_nodes, cap),
        None => None,
    };

    Ok(StructureDiagnostics {
        node_count: n,
        edge_count: g.edge_count(),
        pareto_count,
        alpha,
        gamma,
        l,
        d: g.edge_count() as f64 / n as f64,
        d_l,
        max_in_degree: in_deg.iter().copied().max().unwrap_or(0),
        max_out_degree: (0..n).map(|v| g.out_degree(v)).max().unwrap_or(0),
        n_l,
    })
}

/// Max over `targets` and their Pareto vectors `P` of the number of distinct
/// simple-path vectors to that node not dominated by `P`.
fn non_dominated_count(
    g: &Mog,
    front: &ParetoFront,
    targets: &[NodeId],
    cap: usize,
) -> Option<usize> {
    let w = g.objective_count();
    let mut seen: Vec<HashSet<Vec<u64>>> = vec![HashSet::new(); g.node_count()];
    let mut on_path = vec![false; g.node_count()];
    let mut budget = cap;
    // explicit stack of (node, next out-edge index, acc)
    let s = front.source();
    let mut stack: Vec<(NodeId, usize, Vec<f64>)> = vec![(s, 0, vec![0.0; w])];
    on_path[s] = true;
    seen[s].insert(bits(&stack[0].2));
    while let Some(top) = stack.last_mut() {
        let (v, ix) = (top.0, top.1);
        let out = g.out_edges(v);
        if ix == out.len() {
            on_path[v] = false;
            stack.pop();
            continue;
        }
        top.1 += 1;
        let e = out[ix];
        let to = g.edge(e).to;
        if on_path[to] {
            continue;
        }
        budget = budget.checked_sub(1)?;
        let acc: Vec<f64> = top
            .2
            .iter()
            .zip(g.objectives(e))
            .map(|(a, b)| a + b)
            .collect();
        seen[to].insert(bits(&acc));
        on_path[to] = true;
        stack.push((to, 0, acc));
    }

    let mut best = 0;
    for &v in targets {
        let vectors: Vec<Vec<f64>> = seen[v]
            .iter()
            .map(|b| b.iter().map(|&x| f64::from_bits(x)).collect())
            .collect();
        for p in front.vectors(v) {
            let count = vectors.iter().filter(|q| !dominates_unchecked(p, q)).count();
            best = best.max(count);
        }
    }
    Some(best)
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::EdgeRecord;
    use proptest::prelude::*;

    fn sorted(front: &ParetoFront, v: NodeId) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = front.vectors(v).map(|x| x.to_vec()).collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    #[test]
    fn g1_fronts() {
        let f = pareto_fronts(&g1(), 0, None).unwrap();
        assert_eq!(sorted(&f, 2), vec![vec![2.0, 5.0], vec![4.0, 1.0]]);
        assert_eq!(sorted(&f, 1), vec![vec![1.0, 4.0], vec![5.0, 2.0]]);
        assert_eq!(sorted(&f, 0), vec![vec![0.0, 0.0]]);
        for v in 0..3 {
            for j in 0..f.len(v) {
                let mut acc = vec![0.0; 2];
                for e in f.witness_edges(v, j) {
                    acc[0] += g1().objectives(e)[0];
                    acc[1] += g1().objectives(e)[1];
                }
                assert_eq!(acc.as_slice(), f.vectors(v).nth(j).unwrap());
                assert_eq!(*f.witness_nodes(v, j).last().unwrap(), v);
            }
        }
    }

    #[test]
    fn single_edge_front() {
        let g = Mog::new(2, 2, vec![EdgeRecord::new(0, 1, vec![3.0, 3.0])]).unwrap();
        let f = pareto_fronts(&g, 0, None).unwrap();
        assert_eq!(sorted(&f, 1), vec![vec![3.0, 3.0]]);
    }

    #[test]
    fn label_cap_is_a_resource_error() {
        let g = g1();
        assert!(matches!(
            pareto_fronts(&g, 0, Some(2)),
            Err(MowspError::Resource(_))
        ));
    }

    #[test]
    fn zero_cycles_terminate() {
        let g = Mog::new(
            2,
            1,
            vec![
                EdgeRecord::new(0, 1, vec![0.0]),
                EdgeRecord::new(1, 0, vec![0.0]),
                EdgeRecord::new(1, 1, vec![0.0]),
            ],
        )
        .unwrap();
        let f = pareto_fronts(&g, 0, None).unwrap();
        assert_eq!(f.len(0), 1);
        assert_eq!(f.len(1), 1);
    }

    #[test]
    fn optimal_cost_examples() {
        let g = Mog::new(
            4,
            2,
            vec![
                EdgeRecord::new(0, 1, vec![1.0, 4.0]),
                EdgeRecord::new(0, 2, vec![4.0, 1.0]),
                EdgeRecord::new(1, 2, vec![1.0, 1.0]),
                EdgeRecord::new(2, 1, vec![1.0, 1.0]),
            ],
        )
        .unwrap();
        let c = oracle_optimal_costs(&g, 0, &lambdas(&[&[1.0, 1.0], &[3.0, 1.0]])).unwrap();
        assert_eq!(c[0][2], Some(5.0));
        assert_eq!(c[1][2], Some(11.0));
        assert_eq!(c[0][3], None);
    }

    #[test]
    fn g1_diagnostics() {
        let g = g1();
        let f = pareto_fronts(&g, 0, None).unwrap();
        let d = structure_diagnostics(&g, &f, Some(1000)).unwrap();
        assert_eq!(d.pareto_count, vec![1, 2, 2]);
        assert_eq!(d.l, 2);
        assert_eq!(d.alpha_at(2), 1.0);
        assert_eq!(d.d, 4.0 / 3.0);
        assert_eq!(d.max_in_degree, 2);
        assert_eq!(d.max_out_degree, 2);
        // node 2: simple-path vectors (4,1), (2,5); neither dominates the other
        assert_eq!(d.n_l, Some(2));
    }

    #[test]
    fn path_graph_diagnostics() {
        let g = Mog::new(
            3,
            1,
            vec![EdgeRecord::new(0, 1, vec![1.0]), EdgeRecord::new(1, 2, vec![1.0])],
        )
        .unwrap();
        let f = pareto_fronts(&g, 0, None).unwrap();
        let d = structure_diagnostics(&g, &f, None).unwrap();
        assert_eq!(d.pareto_count, vec![1, 1, 1]);
        assert_eq!(d.l, 1);
        assert_eq!(d.n_l, None);
    }

    #[test]
    fn n_l_gives_up_past_the_cap() {
        let g = g1();
        let f = pareto_fronts(&g, 0, None).unwrap();
        assert_eq!(structure_diagnostics(&g, &f, Some(1)).unwrap().n_l, None);
    }

    fn small_graph() -> impl Strategy<Value = Mog> {
        (2usize..7, 1usize..4).prop_flat_map(|(n, w)| {
            let edge = (0..n, 0..n, prop::collection::vec(0u32..6, w));
            prop::collection::vec(edge, 0..12).prop_map(move |edges| {
                let edges = edges
                    .into_iter()
                    .map(|(a, b, o)| EdgeRecord::new(a, b, o.into_iter().map(f64::from).collect()))
                    .collect();
                Mog::new(n, w, edges).unwrap()
            })
        })
    }

    /// All walks of at most |V| - 1 edges, then a dominance filter.
    fn naive_front(g: &Mog, s: NodeId) -> Vec<Vec<Vec<f64>>> {
        let n = g.node_count();
        let mut all: Vec<Vec<Vec<f64>>> = vec![Vec::new(); n];
        let mut layer = vec![(s, vec![0.0; g.objective_count()])];
        for _ in 0..n {
            let mut next = Vec::new();
            for (v, acc) in layer {
                for &e in g.out_edges(v) {
                    let a: Vec<f64> = acc.iter().zip(g.objectives(e)).map(|(x, y)| x + y).collect();
                    next.push((g.edge(e).to, a));
                }
                all[v].push(acc);
            }
            layer = next;
        }
        all.into_iter()
            .map(|vs| {
                let mut keep: Vec<Vec<f64>> = vs
                    .iter()
                    .filter(|x| !vs.iter().any(|y| dominates_unchecked(y, x)))
                    .cloned()
                    .collect();
                keep.sort_by(|a, b| a.partial_cmp(b).unwrap());
                keep.dedup();
                keep
            })
            .collect()
    }

    fn bellman_ford(g: &Mog, s: NodeId, lam: &[f64]) -> Vec<Option<f64>> {
        let mut d = vec![None; g.node_count()];
        d[s] = Some(0.0);
        for _ in 0..g.node_count() {
            for (id, e) in g.edges().iter().enumerate() {
                if let Some(du) = d[e.from] {
                    let c = du + dot(g.objectives(id), lam);
                    if d[e.to].is_none_or(|dv| c < dv) {
                        d[e.to] = Some(c);
                    }
                }
            }
        }
        d
    }

    proptest! {
        #[test]
        fn matches_naive_enumeration(g in small_graph()) {
            let f = pareto_fronts(&g, 0, None).unwrap();
            let naive = naive_front(&g, 0);
            for v in 0..g.node_count() {
                prop_assert_eq!(sorted(&f, v), naive[v].clone());
            }
        }

        #[test]
        fn costs_match_bellman_ford(g in small_graph(), k in 1usize..5, seed in 1u32..1000) {
            let w = g.objective_count();
            let rows: Vec<Vec<f64>> = (0..k)
                .map(|i| (0..w).map(|j| f64::from((seed + 7 * i as u32 + 3 * j as u32) % 10 + 1)).collect())
                .collect();
            let l = LambdaSet::from_rows(rows).unwrap();
            let costs = oracle_optimal_costs(&g, 0, &l).unwrap();
            let f = pareto_fronts(&g, 0, None).unwrap();
            for i in 0..k {
                prop_assert_eq!(&costs[i], &bellman_ford(&g, 0, l.get(i)));
                // the lambda-optimal vector sits in the front
                for v in 0..g.node_count() {
                    if let Some(c) = costs[i][v] {
                        prop_assert!(f.vectors(v).any(|x| dot(x, l.get(i)) == c));
                    }
                }
            }
        }

        #[test]
        fn alpha_is_monotone(g in small_graph()) {
            let f = pareto_fronts(&g, 0, None).unwrap();
            let d = structure_diagnostics(&g, &f, None).unwrap();
            prop_assert!(d.alpha.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(d.alpha_at(d.l) >= d.alpha_threshold());
            prop_assert_eq!(d.d, g.edge_count() as f64 / g.node_count() as f64);
        }
    }
}
