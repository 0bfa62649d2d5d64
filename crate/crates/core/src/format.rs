//! The JSON graph file, text and JSON renderings of charts, traces and
//! strata, and DOT emission.
//!
//! A graph file looks like
//!
//! ```json
//! {
//!   "generators": ["x", "y"],
//!   "nc": true,
//!   "vertices": ["v1", "v2"],
//!   "edges": [
//!     { "id": "e1", "ends": ["v1", "v2"], "label": { "x": 1 } },
//!     { "id": "e2", "ends": ["v2", "v1"], "label": { "y": 1 } }
//!   ]
//! }
//! ```
//!
//! Labels map generators to positive exponents; `{}` is the unit. `nc`
//! defaults to false. Serialisation is canonical: vertices sorted, edges
//! sorted by id, endpoints in the order written.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::atlas::{Atlas, ChartPresentation};
use crate::graph::{Edge, EdgeId, GraphError, LabelledGraph, VertexId};
use crate::labels::{GeneratorSet, LabelError, Monomial};
use crate::resolution::ResolutionTrace;
use crate::strata::{StratifiedFamily, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub nc: bool,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
    pub label: Monomial,
}

impl From<&LabelledGraph> for GraphFile {
    fn from(g: &LabelledGraph) -> Self {
        GraphFile {
            generators: g.generators().names().to_vec(),
            nc: g.generators().is_nc(),
            vertices: g.vertices().iter().cloned().collect(),
            edges: g
                .edges()
                .map(|e| EdgeRecord { id: e.id.clone(), ends: e.ends.clone(), label: e.label.clone() })
                .collect(),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<LabelledGraph, FormatError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let invalid = |line: usize, message: String| FormatError::Invalid { line, message };
    let generators = GeneratorSet::new(file.generators.iter().cloned(), file.nc).map_err(|e| {
        let name = match &e {
            LabelError::DuplicateGenerator(n) | LabelError::InvalidGeneratorName(n) => n.as_str(),
            _ => "",
        };
        invalid(line_of_string(text, name, e == LabelError::DuplicateGenerator(name.into())), e.to_string())
    })?;
    let edges = file.edges.into_iter().map(|r| Edge { id: r.id, ends: r.ends, label: r.label });
    LabelledGraph::new(generators, file.vertices, edges).map_err(|e| {
        let line = match &e {
            GraphError::DuplicateVertex(v) => line_of_string(text, v.as_str(), true),
            GraphError::DuplicateEdge(id) => line_of_edge(text, id.as_str(), true),
            GraphError::UnknownEndpoint { edge, .. } | GraphError::UnknownGenerator { edge, .. } => {
                line_of_edge(text, edge.as_str(), false)
            }
            _ => 1,
        };
        invalid(line, e.to_string())
    })
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_owned(),
        None => message.to_owned(),
    }
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset].matches('\n').count() + 1
}

/// Line of the first (or second, for duplicates) occurrence of `"s"`.
fn line_of_string(text: &str, s: &str, second: bool) -> usize {
    let quoted = serde_json::to_string(s).expect("string serialises");
    let mut hits = text.match_indices(&quoted).map(|(i, _)| i);
    let hit = if second { hits.nth(1) } else { hits.next() };
    hit.map_or(1, |i| line_at(text, i))
}

/// Line of the edge record whose `"id"` is `id`.
fn line_of_edge(text: &str, id: &str, second: bool) -> usize {
    let quoted = serde_json::to_string(id).expect("string serialises");
    let mut hits = text.match_indices("\"id\"").filter_map(|(i, key)| {
        let rest = text[i + key.len()..].trim_start().strip_prefix(':')?.trim_start();
        rest.starts_with(&quoted).then_some(i)
    });
    let hit = if second { hits.nth(1) } else { hits.next() };
    hit.map_or(1, |i| line_at(text, i))
}

pub fn graph_to_json(g: &LabelledGraph) -> String {
    let mut out = serde_json::to_string_pretty(&GraphFile::from(g)).expect("graph file serialises");
    out.push('\n');
    out
}

pub fn graph_to_value(g: &LabelledGraph) -> Value {
    serde_json::to_value(GraphFile::from(g)).expect("graph file serialises")
}

fn dot_id(s: &str) -> String {
    serde_json::to_string(s).expect("string serialises")
}

/// Undirected DOT rendering; edges carry `id: label`.
pub fn graph_to_dot(g: &LabelledGraph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", dot_id(name));
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", dot_id(v.as_str()));
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            dot_id(e.ends[0].as_str()),
            dot_id(e.ends[1].as_str()),
            dot_id(&format!("{}: {}", e.id, e.label))
        );
    }
    out.push_str("}\n");
    out
}

pub fn chart_to_json(c: &ChartPresentation) -> String {
    let value = json!({
        "thickness": c.thickness,
        "generators": c.base.names(),
        "nc": c.base.is_nc(),
        "aligning_variables": c.aligning_variables(),
        "invertible_variables": c.unit_variables(),
        "inverted_labels": c.inverted,
        "classes": c.classes,
        "relations": c.relations,
        "rendered": c.rendered_relations(),
    });
    let mut out = serde_json::to_string_pretty(&value).expect("chart serialises");
    out.push('\n');
    out
}

pub fn chart_to_text(c: &ChartPresentation) -> String {
    let mut out = String::new();
    let mut line = |key: &str, items: Vec<String>| {
        out.push_str(key);
        for item in items {
            out.push(' ');
            out.push_str(&item);
        }
        out.push('\n');
    };
    line("thickness", vec![c.thickness.to_string()]);
    line("generators", c.base.names().to_vec());
    line("aligning", c.aligning_variables().into_iter().map(str::to_owned).collect());
    line("invertible", c.unit_variables());
    line("inverted", c.inverted.iter().map(|i| format!("{}({})", i.label, i.edge)).collect());
    out.push_str("relations\n");
    for r in c.rendered_relations() {
        let _ = writeln!(out, "  {r}");
    }
    if c.may_exceed_image() {
        out.push_str("note: base not normal-crossings; this presentation may be larger than the chart's image\n");
    }
    out
}

pub fn chart_file_name(index: usize) -> String {
    format!("chart_{index:04}")
}

pub fn atlas_index(a: &Atlas) -> String {
    let charts: Vec<Value> = a
        .charts
        .iter()
        .enumerate()
        .map(|(i, c)| json!({ "index": i, "thickness": c.thickness, "file": format!("{}.json", chart_file_name(i)) }))
        .collect();
    let value = json!({
        "graph": graph_to_value(&a.graph),
        "bound": a.bound,
        "charts": charts,
        "overlaps": a.overlaps,
    });
    let mut out = serde_json::to_string_pretty(&value).expect("atlas index serialises");
    out.push('\n');
    out
}

pub fn trace_to_json(t: &ResolutionTrace) -> String {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| json!({ "step": i, "delta": s.delta, "graph": graph_to_value(&s.graph), "rewrites": s.rewrites }))
        .collect();
    let mut out =
        serde_json::to_string_pretty(&json!({ "valuation": t.valuation, "steps": steps })).expect("trace serialises");
    out.push('\n');
    out
}

pub fn trace_to_dot(t: &ResolutionTrace) -> String {
    t.steps.iter().enumerate().map(|(i, s)| graph_to_dot(&s.graph, &format!("step {i}"))).collect()
}

pub fn subset_name(j: &Subset) -> String {
    format!("{{{}}}", j.iter().cloned().collect::<Vec<_>>().join(","))
}

pub fn strata_to_json(f: &StratifiedFamily) -> String {
    let strata: Vec<Value> =
        f.strata.iter().map(|(j, s)| json!({ "vanishing": j, "graph": graph_to_value(&s.graph) })).collect();
    let covers: Vec<Value> = f
        .covers
        .iter()
        .map(|c| {
            let contracted: BTreeSet<&EdgeId> = c.morphism.contracted_edges();
            json!({ "from": c.from, "to": c.to, "contracted": contracted })
        })
        .collect();
    let mut out =
        serde_json::to_string_pretty(&json!({ "generators": f.generators, "strata": strata, "covers": covers }))
            .expect("strata serialise");
    out.push('\n');
    out
}

/// The specialisation poset, arrows pointing to the more generic stratum.
pub fn strata_to_dot(f: &StratifiedFamily) -> String {
    let mut out = String::from("digraph strata {\n");
    for (j, s) in &f.strata {
        let _ = writeln!(
            out,
            "  {} [label={}];",
            dot_id(&subset_name(j)),
            dot_id(&format!("{} ({} edges)", subset_name(j), s.graph.edge_count()))
        );
    }
    for c in &f.covers {
        let _ = writeln!(out, "  {} -> {};", dot_id(&subset_name(&c.from)), dot_id(&subset_name(&c.to)));
    }
    out.push_str("}\n");
    out
}
