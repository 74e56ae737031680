//! Multi-objective weighted shortest paths.
//!
//! Given a graph whose edges carry `W` non-negative objectives and `K`
//! positive coefficient vectors, find for every vector an optimal path from a
//! source to every node. Two solvers produce identical costs:
//!
//! * [`solve_standard`] runs one Dijkstra search per coefficient vector;
//! * [`solve_idaq`] runs a single search whose queue carries potentially
//!   optimal paths from one coefficient vector to the next.
//!
//! [`oracle`] holds an exhaustive Pareto-front engine for checking both on
//! small instances, [`generate`] builds benchmark instances, and [`io`] and
//! [`harness`] cover file formats and the benchmark driver.

pub mod dijkstra;
pub mod error;
pub mod generate;
pub mod harness;
pub mod heap;
pub mod idaq;
pub mod io;
pub mod model;
pub mod oracle;
pub mod path;
pub mod solution;
pub mod standard;

pub use dijkstra::{shortest_path_tree, ShortestPathTree};
pub use error::{MowspError, Result};
pub use idaq::{solve_idaq, solve_idaq_with, IdaqOptions, IdaqRun};
pub use model::{
    dominates, edge_cost, validate_mog, weakly_dominates, CoefficientVector, EdgeId, EdgeRecord,
    EdgeTags, LambdaSet, Mog, NodeId,
};
pub use path::{PathArena, PathId, PathRecord};
pub use solution::{MowspSolution, SolutionSet, SolverStats};
pub use standard::{solve_standard, solve_standard_parallel};
