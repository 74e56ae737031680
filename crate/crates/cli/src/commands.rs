use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use mowsp_core::generate::{
    assign_random_objectives, assign_random_tags, gen_lambdas, gen_waxman, synth_geo_objectives,
    CoeffRegime, WaxmanParams,
};
use mowsp_core::harness::{run_bench, waxman_instances, Algorithm, BenchConfig, Regime};
use mowsp_core::io::{
    export_geojson, format_graph, format_lambdas, read_graph, read_lambdas, verify_solutions,
    SolutionFile,
};
use mowsp_core::oracle::{pareto_fronts, structure_diagnostics};
use mowsp_core::{solve_idaq, solve_standard, Result};

use crate::args::*;

pub const VERIFY_FAILURE: u8 = 1;
pub const RUNTIME_FAILURE: u8 = 3;

pub enum Outcome {
    Success,
    VerificationFailed,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::VerificationFailed => ExitCode::from(VERIFY_FAILURE),
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::GenWaxman(a) => gen_waxman_cmd(a),
        Command::GenLambdas(a) => gen_lambdas_cmd(a),
        Command::SynthGeo(a) => {
            let g = synth_geo_objectives(&read_graph(&a.graph)?)?;
            emit(a.output.as_deref(), &format_graph(&g))
        }
        Command::Solve(a) => solve_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::ExportGeojson(a) => {
            let g = read_graph(&a.graph)?;
            let sol = SolutionFile::read(&a.solution)?;
            let out = export_geojson(&g, &sol, &a.targets)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            emit(a.output.as_deref(), &serde_json::to_string_pretty(&out.document)?)
        }
        Command::Diagnostics(a) => {
            let g = read_graph(&a.graph)?;
            let front = pareto_fronts(&g, a.source, a.label_cap)?;
            let d = structure_diagnostics(&g, &front, a.path_cap)?;
            emit(None, &serde_json::to_string_pretty(&d)?)
        }
    }
}

/// Writes `text` to `path`, or stdout when absent.
fn emit(path: Option<&Path>, text: &str) -> Result<Outcome> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            let written = out.write_all(text.as_bytes()).and_then(|_| {
                if text.ends_with('\n') {
                    Ok(())
                } else {
                    out.write_all(b"\n")
                }
            });
            // A closed pipe (`mowsp ... | head`) is not a failure.
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(Outcome::Success)
}

fn preset(p: Preset, seed: u64) -> WaxmanParams {
    match p {
        Preset::Tuned => WaxmanParams::tuned(seed),
        Preset::Reference => WaxmanParams::reference(seed),
    }
}

fn gen_waxman_cmd(a: GenWaxman) -> Result<Outcome> {
    let mut p = preset(a.preset, a.seed);
    p.intensity = a.intensity.unwrap_or(p.intensity);
    p.alpha = a.alpha.unwrap_or(p.alpha);
    p.beta = a.beta.unwrap_or(p.beta);
    p.keep_largest_scc = !a.no_scc;
    let mut g = gen_waxman(&p)?;
    if let Some(w) = a.objectives {
        g = assign_random_objectives(&g, w, a.seed)?;
    }
    if a.tags {
        g = assign_random_tags(&g, a.seed)?;
    }
    eprintln!("{} nodes, {} edges", g.node_count(), g.edge_count());
    emit(a.output.as_deref(), &format_graph(&g))
}

fn gen_lambdas_cmd(a: GenLambdas) -> Result<Outcome> {
    let mut r = match a.regime {
        RegimeArg::Uncorrelated => CoeffRegime::uncorrelated(a.k, a.seed),
        RegimeArg::Correlated => CoeffRegime::correlated(a.k, a.seed),
    };
    if let (Some(low), Some(high)) = (a.low, a.high) {
        r.low = low;
        r.high = high;
    }
    emit(a.output.as_deref(), &format_lambdas(&gen_lambdas(&r, a.w)?))
}

fn solve_cmd(a: Solve) -> Result<Outcome> {
    let g = read_graph(&a.graph)?;
    let l = read_lambdas(&a.lambdas)?;
    l.check_graph(&g)?;
    let file = match a.algo {
        SolveAlgo::Oracle => {
            let front = pareto_fronts(&g, a.source, a.label_cap)?;
            if a.stats {
                eprintln!("labels created: {}", front.labels_created());
            }
            SolutionFile::from_front(&g, &l, &front)?
        }
        SolveAlgo::Standard | SolveAlgo::Idaq => {
            let (name, (sol, stats)) = match a.algo {
                SolveAlgo::Standard => ("standard", solve_standard(&g, a.source, &l)?),
                _ => ("idaq", solve_idaq(&g, a.source, &l)?),
            };
            if a.stats {
                eprintln!(
                    "developed {} scanned {} cost evaluations {} wall {:.3} ms",
                    stats.developed_paths,
                    stats.scanned_paths,
                    stats.cost_evaluations,
                    stats.wall_time.as_secs_f64() * 1e3
                );
            }
            SolutionFile::from_solution(&g, &l, &sol, name, !a.no_paths)?
        }
    };
    emit(a.output.as_deref(), &file.to_json()?)
}

fn verify_cmd(a: Verify) -> Result<Outcome> {
    let fa = SolutionFile::read(&a.a)?;
    let fb = SolutionFile::read(&a.b)?;
    let g = a.graph.as_deref().map(read_graph).transpose()?;
    let verdict = verify_solutions(&fa, &fb, a.tol, g.as_ref())?;
    println!("{verdict}");
    Ok(if verdict.passed() {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}

fn bench_cmd(a: Bench) -> Result<Outcome> {
    let instances = waxman_instances(&preset(a.preset, a.seed), a.instances, a.w)?;
    let config = BenchConfig {
        instances,
        ks: a.k,
        regimes: a
            .regimes
            .iter()
            .map(|r| match r {
                RegimeArg::Uncorrelated => Regime::Uncorrelated,
                RegimeArg::Correlated => Regime::Correlated,
            })
            .collect(),
        repetitions: a.reps,
        algorithms: vec![Algorithm::Standard, Algorithm::Idaq],
        lambda_seed: a.seed,
        tolerance: a.tol,
    };
    let report = run_bench(&config)?;
    if let Some(path) = &a.csv {
        report.write_csv(path)?;
    }
    print!("{}", report.summary_table());
    Ok(Outcome::Success)
}
