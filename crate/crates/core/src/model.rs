//! Multi-objective graph vocabulary: graphs, coefficient vectors, costs and
//! Pareto dominance.

use serde::{Deserialize, Serialize};

use crate::error::{MowspError, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

/// Boolean road attributes consumed by the geo-objective synthesizer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeTags {
    pub bicycle_road: bool,
    pub near_highway: bool,
    pub near_buildings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: NodeId,
    pub to: NodeId,
    pub objectives: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<EdgeTags>,
}

impl EdgeRecord {
    pub fn new(from: NodeId, to: NodeId, objectives: Vec<f64>) -> Self {
        EdgeRecord {
            from,
            to,
            objectives,
            tags: None,
        }
    }

    pub fn with_tags(mut self, tags: EdgeTags) -> Self {
        self.tags = Some(tags);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub edge: Option<EdgeId>,
    pub message: String,
}

/// Outcome of [`validate_mog`]. Warnings do not make a graph unusable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
    }

    fn push(&mut self, severity: Severity, edge: Option<EdgeId>, message: String) {
        self.findings.push(Finding {
            severity,
            edge,
            message,
        });
    }
}

/// Checks raw graph parts without building a [`Mog`].
///
/// Out-of-range endpoints, dimension mismatches and negative or non-finite
/// objectives are errors. All-zero objective vectors are warnings: they
/// permit zero-cost cycles.
pub fn validate_mog(
    node_count: usize,
    objective_count: usize,
    edges: &[EdgeRecord],
    coords: Option<&[(f64, f64)]>,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    if node_count == 0 {
        report.push(Severity::Error, None, "graph has no nodes".into());
    }
    if objective_count == 0 {
        report.push(Severity::Error, None, "objective count W must be >= 1".into());
    }
    if let Some(c) = coords {
        if c.len() != node_count {
            report.push(
                Severity::Error,
                None,
                format!("{} coordinates for {} nodes", c.len(), node_count),
            );
        }
        if c.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            report.push(Severity::Error, None, "non-finite coordinate".into());
        }
    }
    for (id, e) in edges.iter().enumerate() {
        if e.from >= node_count || e.to >= node_count {
            report.push(
                Severity::Error,
                Some(id),
                format!(
                    "endpoint out of range: {} -> {} with {} nodes",
                    e.from, e.to, node_count
                ),
            );
        }
        if e.objectives.len() != objective_count {
            report.push(
                Severity::Error,
                Some(id),
                format!(
                    "edge has {} objectives, expected {}",
                    e.objectives.len(),
                    objective_count
                ),
            );
        }
        if let Some(bad) = e.objectives.iter().find(|w| !w.is_finite() || **w < 0.0) {
            report.push(
                Severity::Error,
                Some(id),
                format!("objective {bad} is negative or non-finite"),
            );
        } else if e.objectives.iter().all(|w| *w == 0.0) {
            let what = if e.from == e.to { "self-loop" } else { "edge" };
            report.push(
                Severity::Warning,
                Some(id),
                format!("{what} {} -> {} has an all-zero objective vector", e.from, e.to),
            );
        }
    }
    report
}

/// Directed multi-objective graph with `W` non-negative additive objectives
/// per edge. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Mog {
    node_count: usize,
    objective_count: usize,
    edges: Vec<EdgeRecord>,
    coords: Option<Vec<(f64, f64)>>,
    // Flat copies for the hot loops.
    flat_objectives: Vec<f64>,
    out_offsets: Vec<usize>,
    out_edges: Vec<EdgeId>,
}

impl Mog {
    pub fn new(node_count: usize, objective_count: usize, edges: Vec<EdgeRecord>) -> Result<Self> {
        Self::build(node_count, objective_count, edges, None)
    }

    pub fn with_coords(
        node_count: usize,
        objective_count: usize,
        edges: Vec<EdgeRecord>,
        coords: Vec<(f64, f64)>,
    ) -> Result<Self> {
        Self::build(node_count, objective_count, edges, Some(coords))
    }

    fn build(
        node_count: usize,
        objective_count: usize,
        edges: Vec<EdgeRecord>,
        coords: Option<Vec<(f64, f64)>>,
    ) -> Result<Self> {
        let report = validate_mog(node_count, objective_count, &edges, coords.as_deref());
        if let Some(first) = report.errors().next() {
            return Err(MowspError::input(first.message.clone()));
        }

        let mut out_offsets = vec![0usize; node_count + 1];
        for e in &edges {
            out_offsets[e.from + 1] += 1;
        }
        for i in 0..node_count {
            out_offsets[i + 1] += out_offsets[i];
        }
        let mut cursor = out_offsets.clone();
        let mut out_edges = vec![0; edges.len()];
        for (id, e) in edges.iter().enumerate() {
            out_edges[cursor[e.from]] = id;
            cursor[e.from] += 1;
        }
        let flat_objectives = edges
            .iter()
            .flat_map(|e| e.objectives.iter().copied())
            .collect();

        Ok(Mog {
            node_count,
            objective_count,
            edges,
            coords,
            flat_objectives,
            out_offsets,
            out_edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `W`, the number of objectives per edge.
    pub fn objective_count(&self) -> usize {
        self.objective_count
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &EdgeRecord {
        &self.edges[id]
    }

    #[inline]
    pub fn objectives(&self, id: EdgeId) -> &[f64] {
        let w = self.objective_count;
        &self.flat_objectives[id * w..(id + 1) * w]
    }

    /// Ids of the edges leaving `node`, in input order.
    #[inline]
    pub fn out_edges(&self, node: NodeId) -> &[EdgeId] {
        &self.out_edges[self.out_offsets[node]..self.out_offsets[node + 1]]
    }

    pub fn out_degree(&self, node: NodeId) -> usize {
        self.out_offsets[node + 1] - self.out_offsets[node]
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    pub fn has_tags(&self) -> bool {
        !self.edges.is_empty() && self.edges.iter().all(|e| e.tags.is_some())
    }

    /// Warnings (never errors) for an already-constructed graph.
    pub fn validate(&self) -> ValidationReport {
        validate_mog(
            self.node_count,
            self.objective_count,
            &self.edges,
            self.coords.as_deref(),
        )
    }

    /// Same topology and coordinates, new objective vectors of dimension `w`.
    pub fn with_objectives(&self, w: usize, objectives: Vec<Vec<f64>>) -> Result<Mog> {
        if objectives.len() != self.edges.len() {
            return Err(MowspError::input(format!(
                "{} objective vectors for {} edges",
                objectives.len(),
                self.edges.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(objectives)
            .map(|(e, objectives)| EdgeRecord {
                objectives,
                ..e.clone()
            })
            .collect();
        Self::build(self.node_count, w, edges, self.coords.clone())
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(MowspError::input(format!(
                "node {node} out of range (graph has {} nodes)",
                self.node_count
            )))
        }
    }
}

/// Strictly positive weights turning an objective vector into a scalar cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(MowspError::input("coefficient vector is empty"));
        }
        if let Some(bad) = coefficients.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(MowspError::input(format!(
                "coefficient {bad} is not strictly positive and finite"
            )));
        }
        Ok(CoefficientVector(coefficients))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for CoefficientVector {
    type Error = MowspError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        CoefficientVector::new(v)
    }
}

impl From<CoefficientVector> for Vec<f64> {
    fn from(c: CoefficientVector) -> Self {
        c.0
    }
}

/// Ordered list of `K >= 1` coefficient vectors sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSet {
    vectors: Vec<CoefficientVector>,
    flat: Vec<f64>,
}

impl LambdaSet {
    pub fn new(vectors: Vec<CoefficientVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(MowspError::input("lambda set needs at least one vector"));
        };
        let w = first.len();
        if let Some(i) = vectors.iter().position(|v| v.len() != w) {
            return Err(MowspError::input(format!(
                "coefficient vector {} has dimension {}, expected {w}",
                i + 1,
                vectors[i].len()
            )));
        }
        let flat = vectors
            .iter()
            .flat_map(|v| v.as_slice().iter().copied())
            .collect();
        Ok(LambdaSet { vectors, flat })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let vectors = rows
            .into_iter()
            .map(CoefficientVector::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    /// `K`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `W`.
    pub fn dimension(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[CoefficientVector] {
        &self.vectors
    }

    /// Zero-based access.
    #[inline]
    pub fn get(&self, index: usize) -> &[f64] {
        let w = self.dimension();
        &self.flat[index * w..(index + 1) * w]
    }

    pub fn check_graph(&self, g: &Mog) -> Result<()> {
        if self.dimension() == g.objective_count() {
            Ok(())
        } else {
            Err(MowspError::input(format!(
                "lambda dimension {} does not match graph objective count {}",
                self.dimension(),
                g.objective_count()
            )))
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(MowspError::input(format!("dimension mismatch: {a} vs {b}")))
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scalar cost of one edge under `lam`.
pub fn edge_cost(e: &EdgeRecord, lam: &CoefficientVector) -> Result<f64> {
    check_dims(e.objectives.len(), lam.len())?;
    Ok(dot(&e.objectives, lam.as_slice()))
}

/// Scalar cost of an accumulated objective vector under `lam`.
pub fn objective_cost(acc: &[f64], lam: &CoefficientVector) -> Result<f64> {
    check_dims(acc.len(), lam.len())?;
    Ok(dot(acc, lam.as_slice()))
}

#[inline]
pub(crate) fn dominates_unchecked(x: &[f64], y: &[f64]) -> bool {
    let mut strict = false;
    for (a, b) in x.iter().zip(y) {
        if a > b {
            return false;
        }
        if a < b {
            strict = true;
        }
    }
    strict
}

#[inline]
pub(crate) fn weakly_dominates_unchecked(x: &[f64], y: &[f64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

/// Pareto dominance: `x <= y` component-wise with at least one strict `<`.
pub fn dominates(x: &[f64], y: &[f64]) -> Result<bool> {
    check_dims(x.len(), y.len())?;
    Ok(dominates_unchecked(x, y))
}

/// Component-wise `x <= y`, equality allowed everywhere.
pub fn weakly_dominates(x: &[f64], y: &[f64]) -> Result<bool> {
    check_dims(x.len(), y.len())?;
    Ok(weakly_dominates_unchecked(x, y))
}
