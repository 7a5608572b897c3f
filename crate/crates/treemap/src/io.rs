//! Text formats: graphs, rotation systems, tree distributions, solver
//! reports and bisections.
//!
//! All formats are line-oriented with whitespace-separated fields. Blank
//! lines and lines starting with `#` are ignored on input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use treemap_core::planar::RotationSystem;
use treemap_core::{Edge, Graph, ProbabilisticMapping, SpanningTree};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Incomplete(String),
    #[error(transparent)]
    Core(#[from] treemap_core::Error),
}

pub type Result<T> = std::result::Result<T, IoError>;

fn parse_error(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

/// Non-comment lines with their 1-based numbers, split into fields.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn field<T: std::str::FromStr>(line: usize, fields: &[&str], k: usize, what: &str) -> Result<T> {
    let raw = fields.get(k).ok_or_else(|| parse_error(line, format!("missing {what}")))?;
    raw.parse().map_err(|_| parse_error(line, format!("bad {what} '{raw}'")))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_owned(), source })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| IoError::File { path: path.to_owned(), source })
}

/// `graph <n>` followed by `edge <u> <v> <length> <capacity>` lines; edge ids
/// follow the order of appearance.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = records(text);
    let (line, header) = lines.next().ok_or_else(|| parse_error(1, "empty graph file"))?;
    if header[0] != "graph" || header.len() != 2 {
        return Err(parse_error(line, "expected 'graph <n_vertices>'"));
    }
    let n: usize = field(line, &header, 1, "vertex count")?;
    let mut edges = Vec::new();
    for (line, fields) in lines {
        if fields[0] != "edge" || fields.len() != 5 {
            return Err(parse_error(line, "expected 'edge <u> <v> <length> <capacity>'"));
        }
        let u = field(line, &fields, 1, "endpoint")?;
        let v = field(line, &fields, 2, "endpoint")?;
        let length = field(line, &fields, 3, "length")?;
        let capacity = field(line, &fields, 4, "capacity")?;
        edges.push(Edge::new(u, v, length, capacity));
    }
    Ok(Graph::new(n, edges)?)
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_file(path)?)
}

/// Shortest decimal forms, so reading the text back gives the same bits.
pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.n_vertices());
    for e in g.edges() {
        writeln!(out, "edge {} {} {} {}", e.u, e.v, e.length, e.capacity).unwrap();
    }
    out
}

pub fn save_graph(path: &Path, g: &Graph) -> Result<()> {
    write_file(path, &format_graph(g))
}

/// One `rot <v> <edge>:<end> ...` line per vertex, in any order.
pub fn parse_rotation(text: &str, g: &Graph) -> Result<RotationSystem> {
    let mut lists: Vec<Option<Vec<(usize, u8)>>> = vec![None; g.n_vertices()];
    for (line, fields) in records(text) {
        if fields[0] != "rot" || fields.len() < 2 {
            return Err(parse_error(line, "expected 'rot <v> <edge>:<end> ...'"));
        }
        let v: usize = field(line, &fields, 1, "vertex")?;
        if v >= lists.len() {
            return Err(parse_error(line, format!("vertex {v} out of range")));
        }
        if lists[v].is_some() {
            return Err(parse_error(line, format!("second rotation for vertex {v}")));
        }
        let mut ends = Vec::with_capacity(fields.len() - 2);
        for raw in &fields[2..] {
            let (e, s) = raw.split_once(':').ok_or_else(|| parse_error(line, format!("bad edge-end '{raw}'")))?;
            let e = e.parse().map_err(|_| parse_error(line, format!("bad edge id in '{raw}'")))?;
            let s = match s {
                "0" => 0,
                "1" => 1,
                _ => return Err(parse_error(line, format!("edge end must be 0 or 1 in '{raw}'"))),
            };
            ends.push((e, s));
        }
        lists[v] = Some(ends);
    }
    let rot = lists
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| IoError::Incomplete(format!("no rotation for vertex {v}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RotationSystem::new(g, rot)?)
}

pub fn format_rotation(rot: &RotationSystem) -> String {
    let mut out = String::new();
    for (v, ends) in rot.lists().iter().enumerate() {
        write!(out, "rot {v}").unwrap();
        for (e, s) in ends {
            write!(out, " {e}:{s}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `tree <weight> <edge_id> ...` lines closed by `endmapping`.
pub fn parse_distribution(text: &str, g: &Graph) -> Result<ProbabilisticMapping> {
    let mut support = Vec::new();
    let mut closed = false;
    for (line, fields) in records(text) {
        if closed {
            return Err(parse_error(line, "text after 'endmapping'"));
        }
        match fields[0] {
            "endmapping" if fields.len() == 1 => closed = true,
            "tree" => {
                let w: f64 = field(line, &fields, 1, "weight")?;
                let ids =
                    (2..fields.len()).map(|k| field(line, &fields, k, "edge id")).collect::<Result<Vec<usize>>>()?;
                let t = SpanningTree::new(g, ids).map_err(|e| parse_error(line, e.to_string()))?;
                support.push((t, w));
            }
            _ => return Err(parse_error(line, "expected 'tree <weight> <edge_id> ...' or 'endmapping'")),
        }
    }
    if !closed {
        return Err(IoError::Incomplete("distribution is missing 'endmapping'".into()));
    }
    Ok(ProbabilisticMapping::new(support)?)
}

/// Weights in shortest round-trip form so the distribution reads back intact.
pub fn format_distribution(pm: &ProbabilisticMapping) -> String {
    let mut out = String::new();
    for (t, w) in pm.support() {
        write!(out, "tree {w}").unwrap();
        for id in t.edges() {
            write!(out, " {id}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("endmapping\n");
    out
}

/// Report numbers carry ten digits after the point.
pub fn num(x: f64) -> String {
    format!("{x:.10}")
}

/// `round <t> <δ_t>` lines, `value`, `regret_bound`, then the distribution.
pub fn format_solver_report(deltas: &[f64], value: f64, regret_bound: f64, pm: &ProbabilisticMapping) -> String {
    let mut out = String::new();
    for (t, d) in deltas.iter().enumerate() {
        writeln!(out, "round {} {}", t + 1, num(*d)).unwrap();
    }
    writeln!(out, "value {}", num(value)).unwrap();
    writeln!(out, "regret_bound {}", num(regret_bound)).unwrap();
    out.push_str(&format_distribution(pm));
    out
}

/// `bisection <width>`, a `# certificate` comment, and `side <v> <0|1>` lines.
pub fn format_bisection(width: f64, certificate: f64, side_of: &[u8]) -> String {
    let mut out = format!("bisection {}\n# certificate {}\n", num(width), num(certificate));
    for (v, s) in side_of.iter().enumerate() {
        writeln!(out, "side {v} {s}").unwrap();
    }
    out
}

/// Reads a bisection file back as its width and side labels.
pub fn parse_bisection(text: &str) -> Result<(f64, Vec<u8>)> {
    let mut lines = records(text);
    let (line, header) = lines.next().ok_or_else(|| parse_error(1, "empty bisection file"))?;
    if header[0] != "bisection" || header.len() != 2 {
        return Err(parse_error(line, "expected 'bisection <width>'"));
    }
    let width = field(line, &header, 1, "width")?;
    let mut side_of = Vec::new();
    for (line, fields) in lines {
        if fields[0] != "side" || fields.len() != 3 {
            return Err(parse_error(line, "expected 'side <vertex> <0|1>'"));
        }
        let v: usize = field(line, &fields, 1, "vertex")?;
        let s: u8 = field(line, &fields, 2, "side")?;
        if v != side_of.len() || s > 1 {
            return Err(parse_error(line, format!("expected side of vertex {} as 0 or 1", side_of.len())));
        }
        side_of.push(s);
    }
    Ok((width, side_of))
}
