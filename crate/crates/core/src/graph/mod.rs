//! Monomial-labelled multigraphs (loops and parallel edges allowed).

mod morphism;
pub mod oracle;
mod partition;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labels::{GeneratorSet, Monomial};

pub use morphism::{compose, contract, specialise, EdgeImage, GraphMorphism, LabelTransform};
pub use oracle::{enumerate_2vc_subgraphs, maximal_circuit_connected_sets};
pub use partition::{circuit_partition, circuit_witness, is_circuit, EdgePartition};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

macro_rules! id_conversions {
    ($t:ident) => {
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_owned())
            }
        }

        impl From<String> for $t {
            fn from(s: String) -> Self {
                $t(s)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl $t {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
    };
}

id_conversions!(VertexId);
id_conversions!(EdgeId);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("edge `{edge}` has unknown endpoint `{vertex}`")]
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("edge `{edge}` is labelled by unknown generator `{generator}`")]
    UnknownGenerator { edge: EdgeId, generator: String },
    #[error("generator `{0}` is not in the generator context")]
    UnknownContextGenerator(String),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(EdgeId),
    #[error("no circuit through `{0}` and `{1}`: the edges lie in different circuit-connected classes")]
    WitnessNotFound(EdgeId, EdgeId),
    #[error("brute-force oracle is capped at {cap} edges, graph has {actual}")]
    SizeCapExceeded { cap: usize, actual: usize },
    #[error("morphisms do not compose: {0}")]
    CompositionMismatch(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
    pub label: Monomial,
}

impl Edge {
    pub fn new(id: impl Into<EdgeId>, v: impl Into<VertexId>, w: impl Into<VertexId>, label: Monomial) -> Self {
        Self { id: id.into(), ends: [v.into(), w.into()], label }
    }

    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite `v`, or `None` when `v` is not an endpoint.
    pub fn other_end(&self, v: &VertexId) -> Option<&VertexId> {
        if self.ends[0] == *v {
            Some(&self.ends[1])
        } else if self.ends[1] == *v {
            Some(&self.ends[0])
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    generators: GeneratorSet,
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl LabelledGraph {
    pub fn new<V, E>(generators: GeneratorSet, vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = Edge>,
    {
        let mut vs = BTreeSet::new();
        for v in vertices {
            if vs.contains(&v) {
                return Err(GraphError::DuplicateVertex(v));
            }
            vs.insert(v);
        }
        let mut es = BTreeMap::new();
        for e in edges {
            for end in &e.ends {
                if !vs.contains(end) {
                    return Err(GraphError::UnknownEndpoint { edge: e.id.clone(), vertex: end.clone() });
                }
            }
            if let Some(g) = e.label.support().into_iter().find(|g| !generators.contains(g)) {
                return Err(GraphError::UnknownGenerator { edge: e.id.clone(), generator: g.to_owned() });
            }
            if es.contains_key(&e.id) {
                return Err(GraphError::DuplicateEdge(e.id));
            }
            es.insert(e.id.clone(), e);
        }
        Ok(Self { generators, vertices: vs, edges: es })
    }

    /// Graph whose vertex set is exactly the edge endpoints.
    pub fn from_edges<E>(generators: GeneratorSet, edges: E) -> Result<Self, GraphError>
    where
        E: IntoIterator<Item = Edge>,
    {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let vertices: BTreeSet<VertexId> = edges.iter().flat_map(|e| e.ends.iter().cloned()).collect();
        Self::new(generators, vertices, edges)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    /// Edges in edge-id order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.keys()
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn label(&self, id: &EdgeId) -> Option<&Monomial> {
        self.edges.get(id).map(|e| &e.label)
    }

    /// Same graph with one label replaced.
    pub fn with_label(&self, id: &EdgeId, label: Monomial) -> Result<Self, GraphError> {
        let mut out = self.clone();
        out.set_label(id, label)?;
        Ok(out)
    }

    pub fn set_label(&mut self, id: &EdgeId, label: Monomial) -> Result<(), GraphError> {
        if let Some(g) = label.support().into_iter().find(|g| !self.generators.contains(g)) {
            return Err(GraphError::UnknownGenerator { edge: id.clone(), generator: g.to_owned() });
        }
        let edge = self.edges.get_mut(id).ok_or_else(|| GraphError::UnknownEdge(id.clone()))?;
        edge.label = label;
        Ok(())
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut dsu = Dsu::new(self.vertices.iter().cloned());
        for e in self.edges.values() {
            dsu.union(&e.ends[0], &e.ends[1]);
        }
        dsu.class_count()
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti_number(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count()
    }
}

/// Union-find over vertex ids that always keeps the least id as class
/// representative.
pub(crate) struct Dsu {
    parent: BTreeMap<VertexId, VertexId>,
}

impl Dsu {
    pub(crate) fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        Self { parent: vertices.into_iter().map(|v| (v.clone(), v)).collect() }
    }

    pub(crate) fn find(&self, v: &VertexId) -> VertexId {
        let mut cur = v.clone();
        loop {
            let p = &self.parent[&cur];
            if *p == cur {
                return cur;
            }
            cur = p.clone();
        }
    }

    pub(crate) fn union(&mut self, a: &VertexId, b: &VertexId) {
        let (ra, rb) = (self.find(a), self.find(b));
        match ra.cmp(&rb) {
            std::cmp::Ordering::Less => {
                self.parent.insert(rb, ra);
            }
            std::cmp::Ordering::Greater => {
                self.parent.insert(ra, rb);
            }
            std::cmp::Ordering::Equal => {}
        }
    }

    pub(crate) fn class_count(&self) -> usize {
        self.parent.iter().filter(|(v, p)| v == p).count()
    }
}
