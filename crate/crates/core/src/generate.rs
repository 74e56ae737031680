//! Benchmark instance generators. Every generator is a pure function of its
//! seed; the RNG is ChaCha8, whose stream is fixed across platforms.

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{MowspError, Result};
use crate::model::{EdgeRecord, EdgeTags, LambdaSet, Mog};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Waxman random geometric digraph parameters.
///
/// Nodes are a Poisson point process of rate `intensity` over the rectangle;
/// each ordered pair gets an edge with probability
/// `beta * exp(-d / (alpha * d_max))`, `d_max` being the rectangle diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaxmanParams {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub intensity: f64,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub keep_largest_scc: bool,
}

impl WaxmanParams {
    /// Reference parameter set: unit-by-0.1 domain, intensity 5000,
    /// alpha 4, beta 0.03. Yields about 500 nodes at density near 0.027.
    pub fn reference(seed: u64) -> Self {
        WaxmanParams {
            x_range: (0.0, 1.0),
            y_range: (0.0, 0.1),
            intensity: 5000.0,
            alpha: 4.0,
            beta: 0.03,
            seed,
            keep_largest_scc: true,
        }
    }

    /// Same domain and alpha, with intensity and beta chosen so instances
    /// land at the target sizes (about 240 nodes) and density (about
    /// 0.17).
    pub fn tuned(seed: u64) -> Self {
        WaxmanParams {
            intensity: TUNED_INTENSITY,
            beta: TUNED_BETA,
            ..Self::reference(seed)
        }
    }

    pub fn area(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) * (self.y_range.1 - self.y_range.0)
    }

    pub fn diagonal(&self) -> f64 {
        (self.x_range.1 - self.x_range.0).hypot(self.y_range.1 - self.y_range.0)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.x_range.1 > self.x_range.0
            && self.y_range.1 > self.y_range.0
            && [self.x_range.0, self.x_range.1, self.y_range.0, self.y_range.1]
                .iter()
                .all(|v| v.is_finite())
            && self.intensity > 0.0
            && self.intensity.is_finite()
            && self.alpha > 0.0
            && (0.0..=1.0).contains(&self.beta);
        if ok {
            Ok(())
        } else {
            Err(MowspError::input(format!("invalid Waxman parameters: {self:?}")))
        }
    }
}

pub const TUNED_INTENSITY: f64 = 2400.0;
pub const TUNED_BETA: f64 = 0.185;

/// Edge probability at distance `d`.
pub fn waxman_edge_probability(p: &WaxmanParams, d: f64) -> f64 {
    p.beta * (-d / (p.alpha * p.diagonal())).exp()
}

fn waxman_edges(
    points: &[(f64, f64)],
    p: &WaxmanParams,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (u, &(ux, uy)) in points.iter().enumerate() {
        for (v, &(vx, vy)) in points.iter().enumerate() {
            if u == v {
                continue;
            }
            let d = (ux - vx).hypot(uy - vy);
            if rng.random::<f64>() < waxman_edge_probability(p, d) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Generates a Waxman digraph with coordinates. The single objective of each
/// edge is its Euclidean length; use [`assign_random_objectives`] or
/// [`synth_geo_objectives`] for real objective vectors.
pub fn gen_waxman(p: &WaxmanParams) -> Result<Mog> {
    p.validate()?;
    let mut rng = rng(p.seed);
    let mean = p.intensity * p.area();
    let n = Poisson::new(mean)
        .map_err(|e| MowspError::input(format!("Poisson mean {mean}: {e}")))?
        .sample(&mut rng) as usize;
    let points: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            (
                rng.random_range(p.x_range.0..p.x_range.1),
                rng.random_range(p.y_range.0..p.y_range.1),
            )
        })
        .collect();
    let mut edges = waxman_edges(&points, p, &mut rng);

    let (points, edges) = if p.keep_largest_scc {
        largest_scc(points, &mut edges)
    } else {
        (points, edges)
    };
    if points.is_empty() || edges.is_empty() {
        return Err(MowspError::Generation(format!(
            "seed {} produced no edges after filtering",
            p.seed
        )));
    }
    let records = edges
        .iter()
        .map(|&(u, v)| {
            let d = (points[u].0 - points[v].0).hypot(points[u].1 - points[v].1);
            EdgeRecord::new(u, v, vec![d])
        })
        .collect();
    Mog::with_coords(points.len(), 1, records, points)
}

/// Restricts to the largest strongly connected component (ties: the one
/// holding the lowest node id), keeping relative node and edge order.
fn largest_scc(
    points: Vec<(f64, f64)>,
    edges: &mut [(usize, usize)],
) -> (Vec<(f64, f64)>, Vec<(usize, usize)>) {
    let mut dg = DiGraph::<(), ()>::with_capacity(points.len(), edges.len());
    for _ in &points {
        dg.add_node(());
    }
    for &(u, v) in edges.iter() {
        dg.add_edge((u as u32).into(), (v as u32).into(), ());
    }
    let best = kosaraju_scc(&dg)
        .into_iter()
        .map(|c| {
            let min = c.iter().map(|n| n.index()).min().unwrap_or(usize::MAX);
            (c, min)
        })
        .max_by(|(a, amin), (b, bmin)| a.len().cmp(&b.len()).then(bmin.cmp(amin)))
        .map(|(c, _)| c)
        .unwrap_or_default();
    if best.len() < 2 {
        return (Vec::new(), Vec::new());
    }
    let mut remap = vec![usize::MAX; points.len()];
    let mut keep: Vec<usize> = best.iter().map(|n| n.index()).collect();
    keep.sort_unstable();
    for (new, &old) in keep.iter().enumerate() {
        remap[old] = new;
    }
    let kept_points = keep.iter().map(|&i| points[i]).collect();
    let kept_edges = edges
        .iter()
        .filter(|&&(u, v)| remap[u] != usize::MAX && remap[v] != usize::MAX)
        .map(|&(u, v)| (remap[u], remap[v]))
        .collect();
    (kept_points, kept_edges)
}

/// Replaces every edge's objectives with `w` independent Uniform[0, 1]
/// draws.
pub fn assign_random_objectives(g: &Mog, w: usize, seed: u64) -> Result<Mog> {
    if w == 0 {
        return Err(MowspError::input("W must be >= 1"));
    }
    let mut rng = rng(seed);
    let objectives = (0..g.edge_count())
        .map(|_| (0..w).map(|_| rng.random::<f64>()).collect())
        .collect();
    g.with_objectives(w, objectives)
}

/// Gives every edge three independent fair-coin road tags.
pub fn assign_random_tags(g: &Mog, seed: u64) -> Result<Mog> {
    let mut rng = rng(seed);
    let edges: Vec<EdgeRecord> = g
        .edges()
        .iter()
        .map(|e| {
            e.clone().with_tags(EdgeTags {
                bicycle_road: rng.random(),
                near_highway: rng.random(),
                near_buildings: rng.random(),
            })
        })
        .collect();
    match g.coords() {
        Some(c) => Mog::with_coords(g.node_count(), g.objective_count(), edges, c.to_vec()),
        None => Mog::new(g.node_count(), g.objective_count(), edges),
    }
}

/// Coefficient sampling regime: `k` vectors with coefficients drawn from
/// Uniform[low, high).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffRegime {
    pub low: f64,
    pub high: f64,
    pub k: usize,
    pub seed: u64,
}

impl CoeffRegime {
    /// Coefficients in [0.1, 1.1).
    pub fn uncorrelated(k: usize, seed: u64) -> Self {
        CoeffRegime {
            low: 0.1,
            high: 1.1,
            k,
            seed,
        }
    }

    /// Coefficients in [0.5, 1.1): more similar vectors.
    pub fn correlated(k: usize, seed: u64) -> Self {
        CoeffRegime {
            low: 0.5,
            high: 1.1,
            k,
            seed,
        }
    }
}

pub fn gen_lambdas(r: &CoeffRegime, w: usize) -> Result<LambdaSet> {
    if !(r.low > 0.0 && r.low < r.high && r.high.is_finite()) {
        return Err(MowspError::input(format!(
            "need 0 < low < high, got [{}, {})",
            r.low, r.high
        )));
    }
    if r.k == 0 || w == 0 {
        return Err(MowspError::input("K and W must be >= 1"));
    }
    let mut rng = rng(r.seed);
    let rows = (0..r.k)
        .map(|_| (0..w).map(|_| rng.random_range(r.low..r.high)).collect())
        .collect();
    LambdaSet::from_rows(rows)
}

/// Small exact-arithmetic instance: every ordered pair `u != v` is joined
/// with probability `density`, objectives are integers in `[0, max_objective]`.
pub fn gen_integer_graph(
    n: usize,
    density: f64,
    w: usize,
    max_objective: u32,
    seed: u64,
) -> Result<Mog> {
    if !(0.0..=1.0).contains(&density) {
        return Err(MowspError::input(format!("density {density} outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(density) {
                let objectives = (0..w)
                    .map(|_| f64::from(rng.random_range(0..=max_objective)))
                    .collect();
                edges.push(EdgeRecord::new(u, v, objectives));
            }
        }
    }
    Mog::new(n, w, edges)
}

/// `k` vectors of integer coefficients in `[1, max_coefficient]`.
pub fn gen_integer_lambdas(k: usize, w: usize, max_coefficient: u32, seed: u64) -> Result<LambdaSet> {
    if max_coefficient == 0 {
        return Err(MowspError::input("coefficients need an upper bound >= 1"));
    }
    let mut rng = rng(seed);
    let rows = (0..k)
        .map(|_| {
            (0..w)
                .map(|_| f64::from(rng.random_range(1..=max_coefficient)))
                .collect()
        })
        .collect();
    LambdaSet::from_rows(rows)
}

/// Four geographic objectives from edge length and road tags: length, then
/// length halved when the edge is a bicycle road, is away from highways, and
/// is away from buildings respectively.
pub fn synth_geo_objectives(g: &Mog) -> Result<Mog> {
    let coords = g
        .coords()
        .ok_or_else(|| MowspError::input("graph has no coordinates"))?;
    let mut objectives = Vec::with_capacity(g.edge_count());
    for (id, e) in g.edges().iter().enumerate() {
        let tags = e
            .tags
            .ok_or_else(|| MowspError::input(format!("edge {id} has no tags")))?;
        let (a, b) = (coords[e.from], coords[e.to]);
        let c1 = (a.0 - b.0).hypot(a.1 - b.1);
        let half_if = |cond: bool| if cond { c1 / 2.0 } else { c1 };
        objectives.push(vec![
            c1,
            half_if(tags.bicycle_road),
            half_if(!tags.near_highway),
            half_if(!tags.near_buildings),
        ]);
    }
    g.with_objectives(4, objectives)
}
