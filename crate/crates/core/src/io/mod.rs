//! File formats and solution verification.
//!
//! Graphs and coefficient vectors use line-oriented decimal text, solutions
//! use JSON. Floats are written in Rust's shortest round-trip notation, so
//! reading back a written file reproduces every value bit for bit.

mod geojson;
mod solution;
mod text;

pub use geojson::{export_geojson, GeoJsonExport};
pub use solution::{
    instance_digest, verify_solutions, Divergence, SolutionEntry, SolutionFile, SolutionLambda,
    Verdict, SOLUTION_FORMAT,
};
pub use text::{
    format_graph, format_lambdas, parse_graph, parse_lambdas, read_graph, read_lambdas,
    write_graph, write_lambdas,
};
