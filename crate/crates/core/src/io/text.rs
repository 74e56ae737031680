//! Graph and coefficient text formats.
//!
//! ```text
//! mowsp-graph 1 <V> <E> <W> [coords] [tags]
//! n <id> <x> <y>                     one per node, with `coords`
//! e <from> <to> <w1> .. <wW> [bits]  bits = three 0/1 flags, with `tags`
//!
//! mowsp-lambda 1 <K> <W>
//! <c1> .. <cW>                       K lines
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Tag bits are
//! bicycle road, near highway and near buildings, in that order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{MowspError, Result};
use crate::model::{validate_mog, EdgeRecord, EdgeTags, LambdaSet, Mog};

const GRAPH_MAGIC: &str = "mowsp-graph";
const LAMBDA_MAGIC: &str = "mowsp-lambda";
const VERSION: &str = "1";

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn field<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| MowspError::parse(line, format!("bad {what} {token:?}")))
}

fn expect_magic(line: usize, tokens: &[&str], magic: &str) -> Result<()> {
    if tokens.first() != Some(&magic) {
        return Err(MowspError::parse(line, format!("expected {magic:?} header")));
    }
    if tokens.get(1) != Some(&VERSION) {
        return Err(MowspError::parse(line, "unsupported format version"));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<Mog> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return Err(MowspError::Format("empty graph file".into()));
    };
    expect_magic(hl, &header, GRAPH_MAGIC)?;
    if header.len() < 5 {
        return Err(MowspError::parse(hl, "header needs <V> <E> <W>"));
    }
    let n: usize = field(hl, header[2], "node count")?;
    let m: usize = field(hl, header[3], "edge count")?;
    let w: usize = field(hl, header[4], "objective count")?;
    let (mut has_coords, mut has_tags) = (false, false);
    for flag in &header[5..] {
        match *flag {
            "coords" if !has_coords => has_coords = true,
            "tags" if !has_tags => has_tags = true,
            other => return Err(MowspError::parse(hl, format!("unknown header flag {other:?}"))),
        }
    }

    let mut coords: Vec<Option<(f64, f64)>> = vec![None; if has_coords { n } else { 0 }];
    let mut edges = Vec::with_capacity(m);
    for (ln, tokens) in lines {
        match tokens[0] {
            "n" if has_coords => {
                if tokens.len() != 4 {
                    return Err(MowspError::parse(ln, "node line needs <id> <x> <y>"));
                }
                let id: usize = field(ln, tokens[1], "node id")?;
                let x: f64 = field(ln, tokens[2], "coordinate")?;
                let y: f64 = field(ln, tokens[3], "coordinate")?;
                let slot = coords.get_mut(id).ok_or_else(|| {
                    MowspError::Format(format!("line {ln}: node id {id} out of range"))
                })?;
                if slot.replace((x, y)).is_some() {
                    return Err(MowspError::Format(format!("line {ln}: node {id} listed twice")));
                }
            }
            "e" => {
                let want = 3 + w + usize::from(has_tags);
                if tokens.len() != want {
                    return Err(MowspError::parse(
                        ln,
                        format!("edge line has {} fields, expected {want}", tokens.len()),
                    ));
                }
                let from = field(ln, tokens[1], "node id")?;
                let to = field(ln, tokens[2], "node id")?;
                let objectives = tokens[3..3 + w]
                    .iter()
                    .map(|t| field(ln, t, "objective"))
                    .collect::<Result<Vec<f64>>>()?;
                let mut edge = EdgeRecord::new(from, to, objectives);
                if has_tags {
                    edge = edge.with_tags(parse_tags(ln, tokens[3 + w])?);
                }
                edges.push(edge);
            }
            other => return Err(MowspError::parse(ln, format!("unexpected record {other:?}"))),
        }
    }

    if edges.len() != m {
        return Err(MowspError::Format(format!(
            "header declares {m} edges, body has {}",
            edges.len()
        )));
    }
    let coords = if has_coords {
        let listed = coords.iter().flatten().count();
        if listed != n {
            return Err(MowspError::Format(format!(
                "header declares {n} nodes, body lists {listed} coordinates"
            )));
        }
        Some(coords.into_iter().flatten().collect::<Vec<_>>())
    } else {
        None
    };
    let report = validate_mog(n, w, &edges, coords.as_deref());
    if let Some(f) = report.errors().next() {
        let at = f.edge.map(|e| format!("edge {e}: ")).unwrap_or_default();
        return Err(MowspError::Format(format!("{at}{}", f.message)));
    }
    match coords {
        Some(c) => Mog::with_coords(n, w, edges, c),
        None => Mog::new(n, w, edges),
    }
}

fn parse_tags(line: usize, token: &str) -> Result<EdgeTags> {
    let bits: Vec<bool> = token
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(MowspError::parse(line, format!("bad tag bits {token:?}"))),
        })
        .collect::<Result<_>>()?;
    match bits[..] {
        [bicycle_road, near_highway, near_buildings] => Ok(EdgeTags {
            bicycle_road,
            near_highway,
            near_buildings,
        }),
        _ => Err(MowspError::parse(line, format!("tag bits {token:?} need three flags"))),
    }
}

/// Canonical text for `g`; also the input of the instance digest.
pub fn format_graph(g: &Mog) -> String {
    let tagged = g.has_tags();
    let mut out = format!(
        "{GRAPH_MAGIC} {VERSION} {} {} {}",
        g.node_count(),
        g.edge_count(),
        g.objective_count()
    );
    if g.coords().is_some() {
        out.push_str(" coords");
    }
    if tagged {
        out.push_str(" tags");
    }
    out.push('\n');
    for (id, (x, y)) in g.coords().unwrap_or(&[]).iter().enumerate() {
        let _ = writeln!(out, "n {id} {x} {y}");
    }
    for e in g.edges() {
        let _ = write!(out, "e {} {}", e.from, e.to);
        for w in &e.objectives {
            let _ = write!(out, " {w}");
        }
        if let (true, Some(t)) = (tagged, e.tags) {
            let bit = |b: bool| if b { '1' } else { '0' };
            let _ = write!(
                out,
                " {}{}{}",
                bit(t.bicycle_road),
                bit(t.near_highway),
                bit(t.near_buildings)
            );
        }
        out.push('\n');
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Mog> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(g: &Mog, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_graph(g))?;
    Ok(())
}

pub fn parse_lambdas(text: &str) -> Result<LambdaSet> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return Err(MowspError::Format("empty lambda file".into()));
    };
    expect_magic(hl, &header, LAMBDA_MAGIC)?;
    if header.len() != 4 {
        return Err(MowspError::parse(hl, "header needs <K> <W>"));
    }
    let k: usize = field(hl, header[2], "vector count")?;
    let w: usize = field(hl, header[3], "dimension")?;
    if k == 0 || w == 0 {
        return Err(MowspError::Format("K and W must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(k);
    for (ln, tokens) in lines {
        if tokens.len() != w {
            return Err(MowspError::Format(format!(
                "line {ln}: {} coefficients, expected {w}",
                tokens.len()
            )));
        }
        let row = tokens
            .iter()
            .map(|t| field(ln, t, "coefficient"))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(bad) = row.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(MowspError::Format(format!(
                "line {ln}: coefficient {bad} is not strictly positive"
            )));
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(MowspError::Format(format!(
            "header declares {k} vectors, body has {}",
            rows.len()
        )));
    }
    LambdaSet::from_rows(rows)
}

pub fn format_lambdas(l: &LambdaSet) -> String {
    let mut out = format!("{LAMBDA_MAGIC} {VERSION} {} {}\n", l.len(), l.dimension());
    for i in 0..l.len() {
        let row: Vec<String> = l.get(i).iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_lambdas(path: impl AsRef<Path>) -> Result<LambdaSet> {
    parse_lambdas(&fs::read_to_string(path)?)
}

pub fn write_lambdas(l: &LambdaSet, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_lambdas(l))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn g1_round_trips() {
        let g = g1();
        let text = format_graph(&g);
        assert!(text.starts_with("mowsp-graph 1 3 4 2\n"));
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn coords_and_tags_round_trip() {
        let tags = EdgeTags {
            bicycle_road: true,
            near_highway: false,
            near_buildings: true,
        };
        let g = Mog::with_coords(
            2,
            1,
            vec![EdgeRecord::new(0, 1, vec![0.1]).with_tags(tags)],
            vec![(0.0, -1.5), (1e-300, 0.3)],
        )
        .unwrap();
        let text = format_graph(&g);
        assert!(text.contains(" 101\n"));
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn edge_count_mismatch_is_a_format_error() {
        let text = "mowsp-graph 1 2 3 1\ne 0 1 1\ne 1 0 1\n";
        assert!(matches!(parse_graph(text), Err(MowspError::Format(_))));
    }

    #[test]
    fn negative_objective_is_a_format_error() {
        let text = "mowsp-graph 1 2 1 1\ne 0 1 -1\n";
        assert!(matches!(parse_graph(text), Err(MowspError::Format(_))));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let text = "mowsp-graph 1 2 2 1\n# comment\ne 0 1 1\ne 0 x 1\n";
        match parse_graph(text) {
            Err(MowspError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_graph("mowsp-graph 2 1 0 1\n"),
            Err(MowspError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("mowsp-graph 1 2 1 1 tags\ne 0 1 1 12\n"),
            Err(MowspError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn missing_coordinates_rejected() {
        let text = "mowsp-graph 1 2 0 1 coords\nn 0 0 0\n";
        assert!(matches!(parse_graph(text), Err(MowspError::Format(_))));
    }

    #[test]
    fn lambda_file_examples() {
        let l = parse_lambdas("mowsp-lambda 1 3 2\n1 1\n3 1\n1 3\n").unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.get(1), &[3.0, 1.0]);
        assert!(matches!(
            parse_lambdas("mowsp-lambda 1 1 2\n1 0\n"),
            Err(MowspError::Format(_))
        ));
        assert!(matches!(
            parse_lambdas("mowsp-lambda 1 2 2\n1 1\n"),
            Err(MowspError::Format(_))
        ));
        // dimension mismatch surfaces at solve time
        let g = g1();
        let l = parse_lambdas("mowsp-lambda 1 1 3\n1 1 1\n").unwrap();
        assert!(matches!(l.check_graph(&g), Err(MowspError::Input(_))));
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = g1();
        let l = lambdas(&[&[0.1, 0.7], &[1.0 / 3.0, 2.0]]);
        write_graph(&g, dir.path().join("g.txt")).unwrap();
        write_lambdas(&l, dir.path().join("l.txt")).unwrap();
        assert_eq!(read_graph(dir.path().join("g.txt")).unwrap(), g);
        assert_eq!(read_lambdas(dir.path().join("l.txt")).unwrap(), l);
    }

    proptest! {
        #[test]
        fn arbitrary_floats_round_trip(
            objectives in prop::collection::vec(0.0f64..1e6, 1..20),
            coefficients in prop::collection::vec(1e-9f64..1e6, 1..6),
        ) {
            let edges = objectives.iter().map(|&w| EdgeRecord::new(0, 1, vec![w])).collect();
            let g = Mog::new(2, 1, edges).unwrap();
            let back = parse_graph(&format_graph(&g)).unwrap();
            for (a, b) in g.edges().iter().zip(back.edges()) {
                prop_assert_eq!(a.objectives[0].to_bits(), b.objectives[0].to_bits());
            }
            let l = LambdaSet::from_rows(vec![coefficients]).unwrap();
            prop_assert_eq!(parse_lambdas(&format_lambdas(&l)).unwrap(), l);
        }
    }
}
