//! Benchmark driver: both solvers on identical instances and coefficient
//! sets, with timings, counters and a cost cross-check on every run.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{MowspError, Result};
use crate::generate::{assign_random_objectives, gen_lambdas, gen_waxman, CoeffRegime, WaxmanParams};
use crate::idaq::solve_idaq;
use crate::model::{LambdaSet, Mog, NodeId};
use crate::solution::{MowspSolution, SolverStats};
use crate::standard::solve_standard;

/// Coefficient distribution of a benchmark cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Coefficients uniform in `[0.1, 1.1)`.
    Uncorrelated,
    /// Coefficients uniform in `[0.5, 1.1)`.
    Correlated,
}

impl Regime {
    pub fn coefficients(self, k: usize, seed: u64) -> CoeffRegime {
        match self {
            Regime::Uncorrelated => CoeffRegime::uncorrelated(k, seed),
            Regime::Correlated => CoeffRegime::correlated(k, seed),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Uncorrelated => "uncorrelated",
            Regime::Correlated => "correlated",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = MowspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uncorrelated" => Ok(Regime::Uncorrelated),
            "correlated" => Ok(Regime::Correlated),
            _ => Err(MowspError::input(format!("unknown regime {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Standard,
    Idaq,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Standard => "standard",
            Algorithm::Idaq => "idaq",
        }
    }

    pub fn solve(
        self,
        g: &Mog,
        source: NodeId,
        lambdas: &LambdaSet,
    ) -> Result<(MowspSolution, SolverStats)> {
        match self {
            Algorithm::Standard => solve_standard(g, source, lambdas),
            Algorithm::Idaq => solve_idaq(g, source, lambdas),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = MowspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Algorithm::Standard),
            "idaq" => Ok(Algorithm::Idaq),
            _ => Err(MowspError::input(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub id: String,
    pub graph: Mog,
    pub source: NodeId,
}

/// `count` Waxman instances with `w` random objectives. Instance `j` starts
/// from seed `base.seed + j` and moves on by `count` per failed attempt.
pub fn waxman_instances(base: &WaxmanParams, count: usize, w: usize) -> Result<Vec<BenchInstance>> {
    const ATTEMPTS: u64 = 64;
    let mut out = Vec::with_capacity(count);
    for j in 0..count as u64 {
        let mut last = None;
        for attempt in 0..ATTEMPTS {
            let seed = base.seed.wrapping_add(j + attempt * count as u64);
            match gen_waxman(&WaxmanParams { seed, ..*base }) {
                Ok(g) => {
                    let graph = assign_random_objectives(&g, w, seed ^ 0x9e37_79b9_7f4a_7c15)?;
                    out.push(BenchInstance {
                        id: format!("waxman-{seed}"),
                        graph,
                        source: 0,
                    });
                    last = None;
                    break;
                }
                Err(e @ MowspError::Generation(_)) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        if let Some(e) = last {
            return Err(e);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub instances: Vec<BenchInstance>,
    pub ks: Vec<usize>,
    pub regimes: Vec<Regime>,
    pub repetitions: usize,
    pub algorithms: Vec<Algorithm>,
    /// Seeds the coefficient vectors of every cell.
    pub lambda_seed: u64,
    /// Relative tolerance of the cost cross-check.
    pub tolerance: f64,
}

/// One timed solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub nodes: usize,
    pub edges: usize,
    pub w: usize,
    pub k: usize,
    pub regime: Regime,
    pub algorithm: Algorithm,
    pub rep: usize,
    pub wall_ms: f64,
    pub developed: u64,
    pub scanned: u64,
    pub cost_evals: u64,
    pub reachable: usize,
}

/// Standard-over-IDAQ ratios for one (regime, K), aggregated over instances.
/// Per instance, wall times are medians over repetitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub regime: Regime,
    pub k: usize,
    pub instances: usize,
    pub median_speedup: f64,
    pub mean_speedup: f64,
    /// IDAQ developed paths over `K * reachable`, averaged.
    pub mean_developed_ratio: f64,
    pub max_developed_ratio: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<SummaryRow>,
}

impl BenchReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| MowspError::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| MowspError::logic(e.to_string()))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<BenchRecord>> {
        let mut r = csv::Reader::from_path(path)?;
        Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
    }

    pub fn summary_table(&self) -> String {
        let mut out = String::from("regime        K  speedup(median)  speedup(mean)  developed/(K*reach)\n");
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{:<12} {:>3}  {:>15.3}  {:>13.3}  {:>19.4}",
                s.regime.name(),
                s.k,
                s.median_speedup,
                s.mean_speedup,
                s.mean_developed_ratio
            );
        }
        out
    }

    pub fn row(&self, regime: Regime, k: usize) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.regime == regime && s.k == k)
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => values[n / 2],
        _ => (values[n / 2 - 1] + values[n / 2]) / 2.0,
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn check_config(c: &BenchConfig) -> Result<()> {
    if c.repetitions == 0 {
        return Err(MowspError::input("repetitions must be at least 1"));
    }
    if c.instances.is_empty() || c.ks.is_empty() || c.regimes.is_empty() || c.algorithms.is_empty() {
        return Err(MowspError::input("empty instance, K, regime or algorithm list"));
    }
    if c.ks.contains(&0) {
        return Err(MowspError::input("K must be at least 1"));
    }
    if !(c.tolerance >= 0.0) {
        return Err(MowspError::input("tolerance must be non-negative"));
    }
    let w = c.instances[0].graph.objective_count();
    if c.instances.iter().any(|i| i.graph.objective_count() != w) {
        return Err(MowspError::input("instances differ in objective count"));
    }
    Ok(())
}

/// Seed of the coefficient set for instance `j` at size `k`.
fn cell_seed(base: u64, j: usize, k: usize) -> u64 {
    base.wrapping_mul(0x100_0000_01b3) ^ ((j as u64) << 32) ^ k as u64
}

/// Runs every (regime, K, instance) cell. Algorithms alternate their order
/// between repetitions. A cost mismatch between algorithms aborts the run.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    check_config(config)?;
    let w = config.instances[0].graph.objective_count();
    let mut report = BenchReport::default();
    for &regime in &config.regimes {
        for &k in &config.ks {
            for (j, inst) in config.instances.iter().enumerate() {
                let lambdas = gen_lambdas(&regime.coefficients(k, cell_seed(config.lambda_seed, j, k)), w)?;
                run_cell(config, inst, regime, &lambdas, &mut report.records)?;
            }
        }
    }
    report.summary = summarize(&report.records);
    Ok(report)
}

fn run_cell(
    config: &BenchConfig,
    inst: &BenchInstance,
    regime: Regime,
    lambdas: &LambdaSet,
    records: &mut Vec<BenchRecord>,
) -> Result<()> {
    let g = &inst.graph;
    let mut order = config.algorithms.clone();
    let mut reference: Option<(Algorithm, Vec<Vec<Option<f64>>>)> = None;
    for rep in 0..config.repetitions {
        for &algo in &order {
            let start = Instant::now();
            let (sol, stats) = algo.solve(g, inst.source, lambdas)?;
            let wall = start.elapsed();
            let table = sol.cost_table();
            match &reference {
                None => reference = Some((algo, table)),
                Some((first, expected)) => {
                    if let Some((i, v)) = first_mismatch(expected, &table, config.tolerance) {
                        return Err(MowspError::logic(format!(
                            "{} and {algo} disagree on instance {} (K = {}, {regime}) at (i = {}, v = {v})",
                            first,
                            inst.id,
                            lambdas.len(),
                            i + 1
                        )));
                    }
                }
            }
            records.push(BenchRecord {
                instance: inst.id.clone(),
                nodes: g.node_count(),
                edges: g.edge_count(),
                w: g.objective_count(),
                k: lambdas.len(),
                regime,
                algorithm: algo,
                rep,
                wall_ms: wall.as_secs_f64() * 1e3,
                developed: stats.developed_paths,
                scanned: stats.scanned_paths,
                cost_evals: stats.cost_evaluations,
                reachable: sol.sets()[0].reachable().count(),
            });
        }
        order.reverse();
    }
    Ok(())
}

fn first_mismatch(a: &[Vec<Option<f64>>], b: &[Vec<Option<f64>>], tol: f64) -> Option<(usize, NodeId)> {
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (v, (x, y)) in ra.iter().zip(rb).enumerate() {
            let same = match (x, y) {
                (Some(x), Some(y)) => close(*x, *y, tol),
                (None, None) => true,
                _ => false,
            };
            if !same {
                return Some((i, v));
            }
        }
    }
    None
}

fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut cells: Vec<(Regime, usize)> = Vec::new();
    for r in records {
        if !cells.contains(&(r.regime, r.k)) {
            cells.push((r.regime, r.k));
        }
    }
    let mut out = Vec::new();
    for (regime, k) in cells {
        let mut ids: Vec<&str> = Vec::new();
        for r in records.iter().filter(|r| r.regime == regime && r.k == k) {
            if !ids.contains(&r.instance.as_str()) {
                ids.push(&r.instance);
            }
        }
        let mut speedups = Vec::new();
        let mut dev_ratios = Vec::new();
        for id in ids {
            let cell = |a: Algorithm| {
                records
                    .iter()
                    .filter(move |r| r.regime == regime && r.k == k && r.instance == id && r.algorithm == a)
            };
            // Runs of one repetition are adjacent in time, so their ratio
            // cancels slow drift in machine load.
            let mut paired: Vec<f64> = cell(Algorithm::Standard)
                .filter_map(|s| {
                    cell(Algorithm::Idaq)
                        .find(|i| i.rep == s.rep)
                        .map(|i| s.wall_ms / i.wall_ms)
                })
                .collect();
            if paired.is_empty() {
                continue;
            }
            speedups.push(median(&mut paired));
            if let Some(r) = cell(Algorithm::Idaq).next() {
                dev_ratios.push(r.developed as f64 / (k * r.reachable) as f64);
            }
        }
        if speedups.is_empty() {
            continue;
        }
        let n = speedups.len();
        out.push(SummaryRow {
            regime,
            k,
            instances: n,
            mean_speedup: speedups.iter().sum::<f64>() / n as f64,
            median_speedup: median(&mut speedups),
            mean_developed_ratio: dev_ratios.iter().sum::<f64>() / dev_ratios.len() as f64,
            max_developed_ratio: dev_ratios.iter().copied().fold(0.0, f64::max),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EdgeRecord;

    fn tiny() -> BenchInstance {
        let g = Mog::new(
            3,
            2,
            vec![
                EdgeRecord::new(0, 1, vec![1.0, 4.0]),
                EdgeRecord::new(0, 2, vec![4.0, 1.0]),
                EdgeRecord::new(1, 2, vec![1.0, 1.0]),
            ],
        )
        .unwrap();
        BenchInstance {
            id: "tiny".into(),
            graph: g,
            source: 0,
        }
    }

    fn config(reps: usize) -> BenchConfig {
        BenchConfig {
            instances: vec![tiny()],
            ks: vec![1],
            regimes: vec![Regime::Correlated],
            repetitions: reps,
            algorithms: vec![Algorithm::Standard, Algorithm::Idaq],
            lambda_seed: 7,
            tolerance: 1e-9,
        }
    }

    #[test]
    fn single_cell_gives_two_rows() {
        let report = run_bench(&config(1)).unwrap();
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.records[0].algorithm, Algorithm::Standard);
        assert_eq!(report.records[1].algorithm, Algorithm::Idaq);
        assert_eq!(report.records[0].reachable, 3);
        assert_eq!(report.summary.len(), 1);
        assert!(report.summary[0].median_speedup > 0.0);
    }

    #[test]
    fn zero_repetitions_rejected() {
        assert!(matches!(run_bench(&config(0)), Err(MowspError::Input(_))));
    }

    #[test]
    fn order_alternates_between_repetitions() {
        let report = run_bench(&config(2)).unwrap();
        let algos: Vec<_> = report.records.iter().map(|r| r.algorithm).collect();
        use Algorithm::*;
        assert_eq!(algos, vec![Standard, Idaq, Idaq, Standard]);
    }

    #[test]
    fn csv_round_trip() {
        let report = run_bench(&config(1)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bench.csv");
        report.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("instance,nodes,edges,w,k,regime,algorithm,rep,wall_ms"));
        assert_eq!(BenchReport::read_csv(&path).unwrap(), report.records);
    }

    #[test]
    fn mismatch_detection() {
        let a = vec![vec![Some(1.0), None]];
        assert_eq!(first_mismatch(&a, &a, 0.0), None);
        assert_eq!(first_mismatch(&a, &[vec![Some(1.0), Some(2.0)]], 1e-9), Some((0, 1)));
        assert_eq!(first_mismatch(&a, &[vec![Some(1.0 + 1e-12), None]], 1e-9), None);
    }

    #[test]
    fn median_examples() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn names_parse_back() {
        for r in [Regime::Correlated, Regime::Uncorrelated] {
            assert_eq!(r.name().parse::<Regime>().unwrap(), r);
        }
        for a in [Algorithm::Standard, Algorithm::Idaq] {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("oracle".parse::<Algorithm>().is_err());
    }
}
