//! Line-oriented instance format.
//!
//! ```text
//! # comment
//! V 3
//! L 0 a
//! A 0 1 5
//! A 1 2 0
//! T 0 1 2        (SCSS)   or   D 0 2   (DSN, one line per demand)
//! ```

use super::{ArcId, DsnInstance, EdgeSolution, GraphError, ScssInstance, VertexId, WeightedDigraph, MAX_WEIGHT};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Scss(ScssInstance),
    Dsn(DsnInstance),
}

impl Instance {
    pub fn graph(&self) -> &WeightedDigraph {
        match self {
            Instance::Scss(i) => &i.graph,
            Instance::Dsn(i) => &i.graph,
        }
    }

    /// SCSS instances become their root-pair demand set.
    pub fn to_dsn(&self) -> DsnInstance {
        match self {
            Instance::Scss(i) => i.as_dsn(),
            Instance::Dsn(i) => i.clone(),
        }
    }

    /// Terminals, or every demand endpoint, without repeats.
    pub fn required_vertices(&self) -> Vec<VertexId> {
        let mut v: Vec<VertexId> = match self {
            Instance::Scss(i) => i.terminals.clone(),
            Instance::Dsn(i) => i.demands.iter().flat_map(|&(s, t)| [s, t]).collect(),
        };
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let t = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    t.parse().map_err(|_| err(line, format!("bad {what} `{t}`")))
}

pub fn parse_instance(text: &str) -> Result<Instance, GraphError> {
    let mut graph: Option<WeightedDigraph> = None;
    let mut terminals: Option<Vec<VertexId>> = None;
    let mut demands: Vec<(VertexId, VertexId)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let tag = toks.next().unwrap();
        if tag != "V" && graph.is_none() {
            return Err(err(line, "`V <count>` must come first"));
        }
        let vertex = |tok: Option<&str>, g: &WeightedDigraph, what: &str| -> Result<VertexId, GraphError> {
            let v: VertexId = num(tok, line, what)?;
            if v >= g.vertex_count() {
                return Err(err(line, format!("dangling vertex reference {v}")));
            }
            Ok(v)
        };
        match tag {
            "V" => {
                if graph.is_some() {
                    return Err(err(line, "duplicate `V` line"));
                }
                let n: usize = num(toks.next(), line, "vertex count")?;
                graph = Some(WeightedDigraph::with_vertices(n));
            }
            "L" => {
                let g = graph.as_mut().unwrap();
                let v = vertex(toks.next(), g, "vertex id")?;
                let rest = content[1..].trim_start();
                let label = rest[rest.find(char::is_whitespace).ok_or_else(|| err(line, "missing label"))?..].trim();
                g.set_label(v, label)?;
                toks.by_ref().for_each(drop);
            }
            "A" => {
                let g = graph.as_mut().unwrap();
                let t = vertex(toks.next(), g, "tail")?;
                let h = vertex(toks.next(), g, "head")?;
                let wtok = toks.next().ok_or_else(|| err(line, "missing weight"))?;
                if wtok.starts_with('-') {
                    return Err(err(line, format!("negative weight {wtok}")));
                }
                let w: u64 = wtok.parse().map_err(|_| err(line, format!("bad weight `{wtok}`")))?;
                if w > MAX_WEIGHT {
                    return Err(err(line, format!("weight {w} exceeds 2^63-1")));
                }
                g.add_arc(t, h, w)?;
            }
            "T" => {
                let g = graph.as_ref().unwrap();
                let list = terminals.get_or_insert_with(Vec::new);
                for tok in toks.by_ref() {
                    list.push(vertex(Some(tok), g, "terminal")?);
                }
            }
            "D" => {
                let g = graph.as_ref().unwrap();
                let s = vertex(toks.next(), g, "demand source")?;
                let t = vertex(toks.next(), g, "demand target")?;
                demands.push((s, t));
            }
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(err(line, "trailing tokens"));
        }
    }

    let graph = graph.ok_or_else(|| err(0, "missing `V` line"))?;
    match (terminals, demands.is_empty()) {
        (Some(_), false) => Err(err(0, "both `T` and `D` records present")),
        (Some(t), true) => Ok(Instance::Scss(ScssInstance::new(graph, t)?)),
        (None, false) => Ok(Instance::Dsn(DsnInstance::new(graph, demands)?)),
        (None, true) => Err(err(0, "no `T` or `D` records")),
    }
}

fn write_graph(out: &mut String, g: &WeightedDigraph) {
    writeln!(out, "V {}", g.vertex_count()).unwrap();
    for v in g.vertices() {
        if let Some(l) = g.label(v) {
            writeln!(out, "L {v} {l}").unwrap();
        }
    }
    for a in g.arcs() {
        writeln!(out, "A {} {} {}", a.tail, a.head, a.weight).unwrap();
    }
}

/// Canonical text: no comments, labels in id order, arcs in id order.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    write_graph(&mut out, instance.graph());
    match instance {
        Instance::Scss(i) => {
            let ts: Vec<String> = i.terminals.iter().map(|t| t.to_string()).collect();
            writeln!(out, "T {}", ts.join(" ")).unwrap();
        }
        Instance::Dsn(i) => {
            for (s, t) in &i.demands {
                writeln!(out, "D {s} {t}").unwrap();
            }
        }
    }
    out
}

/// Solution files hold one line `S <arc ids...>`; everything else is ignored,
/// so the structured output of `solve` is itself a valid solution file.
pub fn parse_solution(graph: &WeightedDigraph, text: &str) -> Result<EdgeSolution, GraphError> {
    let mut found = None;
    for (idx, raw) in text.lines().enumerate() {
        let mut toks = raw.split_whitespace();
        if toks.next() != Some("S") {
            continue;
        }
        if found.is_some() {
            return Err(err(idx + 1, "second S line"));
        }
        let arcs = toks.map(|t| num::<ArcId>(Some(t), idx + 1, "arc id")).collect::<Result<Vec<_>, _>>()?;
        found = Some(EdgeSolution::new(graph, arcs)?);
    }
    found.ok_or_else(|| err(0, "no S line"))
}

pub fn serialize_solution(sol: &EdgeSolution) -> String {
    let ids: Vec<String> = sol.arcs().iter().map(|a| a.to_string()).collect();
    format!("S {}\n", ids.join(" "))
}
