//! Route export as a GeoJSON feature collection.

use serde_json::{json, Value};

use crate::error::{MowspError, Result};
use crate::io::solution::SolutionFile;
use crate::model::{Mog, NodeId};

#[derive(Debug, Clone, PartialEq)]
pub struct GeoJsonExport {
    pub document: Value,
    /// Targets skipped, one message each.
    pub warnings: Vec<String>,
}

/// One `LineString` per (coefficient vector, target) with properties
/// `lambda_index`, `target` and `cost`. Unreachable targets, targets without
/// a stored route and single-node routes are skipped with a warning.
pub fn export_geojson(g: &Mog, sol: &SolutionFile, targets: &[NodeId]) -> Result<GeoJsonExport> {
    let coords = g
        .coords()
        .ok_or_else(|| MowspError::input("graph has no node coordinates"))?;
    for &t in targets {
        g.check_node(t)?;
    }
    let mut features = Vec::new();
    let mut warnings = Vec::new();
    for set in &sol.sets {
        let i = set.lambda_index;
        for &t in targets {
            let Some(entry) = set.entries.iter().find(|e| e.node == t) else {
                warnings.push(format!("lambda {i}: target {t} unreachable, omitted"));
                continue;
            };
            let Some(path) = &entry.path else {
                warnings.push(format!("lambda {i}: no route stored for target {t}, omitted"));
                continue;
            };
            if path.len() < 2 {
                warnings.push(format!("lambda {i}: target {t} is the source, omitted"));
                continue;
            }
            if let Some(&bad) = path.iter().find(|&&v| v >= coords.len()) {
                return Err(MowspError::input(format!("route visits unknown node {bad}")));
            }
            let line: Vec<[f64; 2]> = path.iter().map(|&v| [coords[v].0, coords[v].1]).collect();
            features.push(json!({
                "type": "Feature",
                "geometry": { "type": "LineString", "coordinates": line },
                "properties": { "lambda_index": i, "target": t, "cost": entry.cost },
            }));
        }
    }
    Ok(GeoJsonExport {
        document: json!({ "type": "FeatureCollection", "features": features }),
        warnings,
    })
}
