//! Blowup rewriting of aligned graphs: each edge labelled `p^n` for a class
//! primitive `p` becomes a chain, until every label has valuation at most 1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::is_aligned;
use crate::graph::{Edge, EdgeId, GraphError, LabelledGraph, VertexId};
use crate::labels::{LabelError, Monomial, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("graph is not aligned")]
    NotAligned,
    #[error("primitive `{primitive}` of the class of `{edge}` has valuation {value}, expected 1")]
    PrimitiveValuation { edge: EdgeId, primitive: Monomial, value: u64 },
    #[error("delta did not decrease at step {step}: {before} -> {after}")]
    NoProgress { step: usize, before: u64, after: u64 },
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `Σ (v(ℓ(e)) − 1)` over edges whose label has positive valuation.
pub fn delta(g: &LabelledGraph, v: &Valuation) -> Result<u64, LabelError> {
    g.edges().try_fold(0, |acc, e| Ok(acc + v.apply(&e.label)?.saturating_sub(1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rewrite {
    Kept,
    /// Unit label: the edge is removed.
    Deleted,
    /// `p^2` becomes `p, p`; `p^n` becomes `p, p^{n−2}, p`.
    Subdivided {
        edges: Vec<EdgeId>,
        vertices: Vec<VertexId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteRecord {
    pub edge: EdgeId,
    #[serde(flatten)]
    pub rewrite: Rewrite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionStep {
    pub graph: LabelledGraph,
    pub delta: u64,
    /// Empty for the input snapshot.
    pub rewrites: Vec<RewriteRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTrace {
    pub valuation: Valuation,
    /// `steps[0]` is the input.
    pub steps: Vec<ResolutionStep>,
}

impl ResolutionTrace {
    pub fn result(&self) -> &LabelledGraph {
        &self.steps.last().expect("trace holds the input").graph
    }

    pub fn step_count(&self) -> usize {
        self.steps.len() - 1
    }
}

/// One simultaneous rewrite of every edge. New edges and vertices are named
/// `<edge>.s<step>.<k>` and `<edge>.s<step>.v<k>`.
pub fn blowup_step(g: &LabelledGraph, step: usize) -> Result<(LabelledGraph, Vec<RewriteRecord>), ResolutionError> {
    let report = is_aligned(g);
    if !report.aligned {
        return Err(ResolutionError::NotAligned);
    }
    let mut vertices: Vec<VertexId> = g.vertices().iter().cloned().collect();
    let mut edges = Vec::new();
    let mut records = Vec::new();
    for edge in g.edges() {
        let rewrite = match report.root_of(&edge.id) {
            None => Rewrite::Deleted,
            Some((_, 1)) => {
                edges.push(edge.clone());
                Rewrite::Kept
            }
            Some((p, n)) => {
                let labels = if n == 2 { vec![p.clone(), p.clone()] } else { vec![p.clone(), p.pow(n - 2), p.clone()] };
                let fresh: Vec<VertexId> =
                    (1..labels.len()).map(|k| VertexId::from(format!("{}.s{step}.v{k}", edge.id))).collect();
                let chain: Vec<&VertexId> =
                    std::iter::once(&edge.ends[0]).chain(&fresh).chain(std::iter::once(&edge.ends[1])).collect();
                let ids: Vec<EdgeId> =
                    (1..=labels.len()).map(|k| EdgeId::from(format!("{}.s{step}.{k}", edge.id))).collect();
                for (k, label) in labels.into_iter().enumerate() {
                    edges.push(Edge { id: ids[k].clone(), ends: [chain[k].clone(), chain[k + 1].clone()], label });
                }
                vertices.extend(fresh.iter().cloned());
                Rewrite::Subdivided { edges: ids, vertices: fresh }
            }
        };
        records.push(RewriteRecord { edge: edge.id.clone(), rewrite });
    }
    Ok((LabelledGraph::new(g.generators().clone(), vertices, edges)?, records))
}

/// Repeats [`blowup_step`] until `delta` reaches zero. The valuation must
/// give every class primitive the value 1, so that label valuations are the
/// multiplicities the rewrite consumes.
pub fn resolve(g: &LabelledGraph, v: &Valuation) -> Result<ResolutionTrace, ResolutionError> {
    let report = is_aligned(g);
    if !report.aligned {
        return Err(ResolutionError::NotAligned);
    }
    for class in &report.classes {
        if let Some(root) = &class.root {
            let value = v.apply(&root.primitive)?;
            if value != 1 {
                let edge = class.edges.first().expect("non-empty class").clone();
                return Err(ResolutionError::PrimitiveValuation { edge, primitive: root.primitive.clone(), value });
            }
        }
    }
    let mut steps = vec![ResolutionStep { graph: g.clone(), delta: delta(g, v)?, rewrites: Vec::new() }];
    loop {
        let last = steps.last().expect("non-empty");
        if last.delta == 0 {
            break;
        }
        let step = steps.len();
        let (graph, rewrites) = blowup_step(&last.graph, step)?;
        let after = delta(&graph, v)?;
        if after >= last.delta {
            return Err(ResolutionError::NoProgress { step, before: last.delta, after });
        }
        steps.push(ResolutionStep { graph, delta: after, rewrites });
    }
    Ok(ResolutionTrace { valuation: v.clone(), steps })
}
