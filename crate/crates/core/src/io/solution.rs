//! JSON solution files and their cross-verification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{MowspError, Result};
use crate::io::text::{format_graph, format_lambdas};
use crate::model::{dot, EdgeId, LambdaSet, Mog, NodeId};
use crate::oracle::ParetoFront;
use crate::solution::MowspSolution;

pub const SOLUTION_FORMAT: &str = "mowsp-solution 1";

/// Tolerance for re-costing a listed route against its stated cost.
const RECOST_TOLERANCE: f64 = 1e-9;

/// SHA-256 over the canonical graph and coefficient text.
pub fn instance_digest(g: &Mog, lambdas: &LambdaSet) -> String {
    let mut h = Sha256::new();
    h.update(format_graph(g).as_bytes());
    h.update(format_lambdas(lambdas).as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionEntry {
    pub node: NodeId,
    pub cost: f64,
    /// Node sequence from the source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<NodeId>>,
    /// Edge ids along `path`; disambiguates parallel edges.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeId>>,
    /// Objective vector accumulated along the route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objectives: Option<Vec<f64>>,
}

/// Entries for one coefficient vector; unreachable nodes are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionLambda {
    /// 1-based.
    pub lambda_index: usize,
    pub entries: Vec<SolutionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format: String,
    pub digest: String,
    pub algorithm: String,
    pub source: NodeId,
    pub k: usize,
    pub lambdas: Vec<Vec<f64>>,
    pub sets: Vec<SolutionLambda>,
}

fn route_objectives(g: &Mog, edges: &[EdgeId]) -> Vec<f64> {
    let mut acc = vec![0.0; g.objective_count()];
    for &e in edges {
        for (a, w) in acc.iter_mut().zip(g.objectives(e)) {
            *a += w;
        }
    }
    acc
}

impl SolutionFile {
    fn empty(g: &Mog, lambdas: &LambdaSet, source: NodeId, algorithm: &str) -> Self {
        SolutionFile {
            format: SOLUTION_FORMAT.into(),
            digest: instance_digest(g, lambdas),
            algorithm: algorithm.into(),
            source,
            k: lambdas.len(),
            lambdas: (0..lambdas.len()).map(|i| lambdas.get(i).to_vec()).collect(),
            sets: Vec::with_capacity(lambdas.len()),
        }
    }

    /// Serializes a solver result. With `with_paths` every entry also lists
    /// its route, edge ids and accumulated objectives.
    pub fn from_solution(
        g: &Mog,
        lambdas: &LambdaSet,
        sol: &MowspSolution,
        algorithm: &str,
        with_paths: bool,
    ) -> Result<Self> {
        lambdas.check_graph(g)?;
        if sol.len() != lambdas.len() {
            return Err(MowspError::input(format!(
                "solution has {} sets for {} coefficient vectors",
                sol.len(),
                lambdas.len()
            )));
        }
        let mut file = Self::empty(g, lambdas, sol.source(), algorithm);
        for (i, set) in sol.sets().iter().enumerate() {
            let entries = set
                .reachable()
                .map(|(v, cost)| {
                    let mut entry = SolutionEntry {
                        node: v,
                        cost,
                        path: None,
                        edges: None,
                        objectives: None,
                    };
                    if with_paths {
                        let edges = sol.path_edges(i, v).unwrap_or_default();
                        entry.objectives = Some(route_objectives(g, &edges));
                        entry.path = sol.path(i, v);
                        entry.edges = Some(edges);
                    }
                    entry
                })
                .collect();
            file.sets.push(SolutionLambda {
                lambda_index: i + 1,
                entries,
            });
        }
        Ok(file)
    }

    /// Per-vector optima read off exact Pareto fronts, with witness routes.
    pub fn from_front(g: &Mog, lambdas: &LambdaSet, front: &ParetoFront) -> Result<Self> {
        lambdas.check_graph(g)?;
        if front.node_count() != g.node_count() {
            return Err(MowspError::input("front was computed on another graph"));
        }
        let mut file = Self::empty(g, lambdas, front.source(), "oracle");
        for i in 0..lambdas.len() {
            let lam = lambdas.get(i);
            let mut entries = Vec::new();
            for v in 0..g.node_count() {
                let best = front
                    .vectors(v)
                    .enumerate()
                    .map(|(j, x)| (j, dot(x, lam), x))
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                if let Some((j, cost, x)) = best {
                    entries.push(SolutionEntry {
                        node: v,
                        cost,
                        path: Some(front.witness_nodes(v, j)),
                        edges: Some(front.witness_edges(v, j)),
                        objectives: Some(x.to_vec()),
                    });
                }
            }
            file.sets.push(SolutionLambda {
                lambda_index: i + 1,
                entries,
            });
        }
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SolutionFile = serde_json::from_str(text)?;
        if file.format != SOLUTION_FORMAT {
            return Err(MowspError::Format(format!(
                "unsupported solution format {:?}",
                file.format
            )));
        }
        if file.sets.len() != file.k || file.lambdas.len() != file.k {
            return Err(MowspError::Format(format!(
                "declares K = {} but has {} sets and {} vectors",
                file.k,
                file.sets.len(),
                file.lambdas.len()
            )));
        }
        Ok(file)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Cost at 1-based `lambda_index` and node `v`.
    pub fn cost(&self, lambda_index: usize, v: NodeId) -> Option<f64> {
        self.sets
            .get(lambda_index.checked_sub(1)?)?
            .entries
            .iter()
            .find(|e| e.node == v)
            .map(|e| e.cost)
    }

    /// First entry whose route does not re-cost to its stated cost.
    fn integrity(&self, g: Option<&Mog>) -> Option<(usize, NodeId, String)> {
        for (set, lam) in self.sets.iter().zip(&self.lambdas) {
            let i = set.lambda_index;
            for e in &set.entries {
                if let Some(x) = &e.objectives {
                    if x.len() != lam.len() {
                        return Some((i, e.node, "objective vector has the wrong dimension".into()));
                    }
                    let c = dot(x, lam);
                    if !close(c, e.cost, RECOST_TOLERANCE) {
                        return Some((i, e.node, format!("objectives re-cost to {c}, stated {}", e.cost)));
                    }
                }
                let (Some(g), Some(edges)) = (g, &e.edges) else {
                    continue;
                };
                if let Err(why) = check_route(g, self.source, e, edges) {
                    return Some((i, e.node, why));
                }
                let c: f64 = edges.iter().map(|&id| dot(g.objectives(id), lam)).sum();
                if !close(c, e.cost, RECOST_TOLERANCE) {
                    return Some((i, e.node, format!("route re-costs to {c}, stated {}", e.cost)));
                }
                if let Some(x) = &e.objectives {
                    let y = route_objectives(g, edges);
                    if x.iter().zip(&y).any(|(a, b)| !close(*a, *b, RECOST_TOLERANCE)) {
                        return Some((i, e.node, "route objectives differ from the stated ones".into()));
                    }
                }
            }
        }
        None
    }
}

fn check_route(g: &Mog, source: NodeId, e: &SolutionEntry, edges: &[EdgeId]) -> std::result::Result<(), String> {
    let mut at = source;
    let mut nodes = vec![source];
    for &id in edges {
        if id >= g.edge_count() {
            return Err(format!("edge {id} does not exist"));
        }
        let rec = g.edge(id);
        if rec.from != at {
            return Err(format!("edge {id} does not continue the route at node {at}"));
        }
        at = rec.to;
        nodes.push(at);
    }
    if at != e.node {
        return Err(format!("route ends at {at}, not {}", e.node));
    }
    if e.path.as_ref().is_some_and(|p| *p != nodes) {
        return Err("node sequence disagrees with the edge ids".into());
    }
    Ok(())
}

/// Relative closeness; exact for zeros.
fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Where two solution files part ways.
#[derive(Debug, Clone, PartialEq)]
pub enum Divergence {
    Cost {
        lambda_index: usize,
        node: NodeId,
        a: Option<f64>,
        b: Option<f64>,
    },
    Integrity {
        file: char,
        lambda_index: usize,
        node: NodeId,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub compared: usize,
    pub divergence: Option<Divergence>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: Option<f64>| c.map_or("unreachable".to_string(), |c| c.to_string());
        match &self.divergence {
            None => write!(f, "PASS: {} (lambda, node) costs agree", self.compared),
            Some(Divergence::Cost {
                lambda_index,
                node,
                a,
                b,
            }) => write!(
                f,
                "FAIL: cost differs at (i = {lambda_index}, v = {node}): {} vs {}",
                show(*a),
                show(*b)
            ),
            Some(Divergence::Integrity {
                file,
                lambda_index,
                node,
                reason,
            }) => write!(
                f,
                "FAIL: integrity of file {file} at (i = {lambda_index}, v = {node}): {reason}"
            ),
        }
    }
}

/// Compares two solutions of one instance. Costs must agree within the
/// relative tolerance `tol`; then every listed route must re-cost to its
/// stated cost. Passing `g` also checks routes edge by edge and
/// authenticates both files against the graph.
pub fn verify_solutions(
    a: &SolutionFile,
    b: &SolutionFile,
    tol: f64,
    g: Option<&Mog>,
) -> Result<Verdict> {
    if !(tol >= 0.0) {
        return Err(MowspError::input("tolerance must be non-negative"));
    }
    if a.digest != b.digest {
        return Err(MowspError::input("solutions belong to different instances"));
    }
    if a.k != b.k || a.source != b.source {
        return Err(MowspError::input("solutions disagree on K or the source"));
    }
    if let Some(g) = g {
        for file in [a, b] {
            let l = LambdaSet::from_rows(file.lambdas.clone())?;
            if instance_digest(g, &l) != file.digest {
                return Err(MowspError::input("solution digest does not match the graph"));
            }
        }
    }

    let mut compared = 0;
    for (sa, sb) in a.sets.iter().zip(&b.sets) {
        let i = sa.lambda_index;
        let ea: BTreeMap<NodeId, f64> = sa.entries.iter().map(|e| (e.node, e.cost)).collect();
        let eb: BTreeMap<NodeId, f64> = sb.entries.iter().map(|e| (e.node, e.cost)).collect();
        let nodes: BTreeSet<NodeId> = ea.keys().chain(eb.keys()).copied().collect();
        for node in nodes {
            let (ca, cb) = (ea.get(&node).copied(), eb.get(&node).copied());
            let agree = match (ca, cb) {
                (Some(p), Some(q)) => close(p, q, tol),
                _ => false,
            };
            if !agree {
                return Ok(Verdict {
                    compared,
                    divergence: Some(Divergence::Cost {
                        lambda_index: i,
                        node,
                        a: ca,
                        b: cb,
                    }),
                });
            }
            compared += 1;
        }
    }

    for (name, file) in [('a', a), ('b', b)] {
        if let Some((lambda_index, node, reason)) = file.integrity(g) {
            return Ok(Verdict {
                compared,
                divergence: Some(Divergence::Integrity {
                    file: name,
                    lambda_index,
                    node,
                    reason,
                }),
            });
        }
    }
    Ok(Verdict {
        compared,
        divergence: None,
    })
}
