//! Graph morphisms that send edges to edges or (contracting them) to
//! vertices, together with contraction and specialisation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Dsu, Edge, EdgeId, GraphError, LabelledGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeImage {
    Edge(EdgeId),
    Vertex(VertexId),
}

/// Monoid map applied to labels of surviving edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelTransform {
    Identity,
    /// Drop every generator outside the set (they are units at the target).
    Restrict(BTreeSet<String>),
}

impl LabelTransform {
    pub fn apply(&self, label: &crate::labels::Monomial) -> crate::labels::Monomial {
        match self {
            LabelTransform::Identity => label.clone(),
            LabelTransform::Restrict(keep) => label.restrict(keep.iter().map(String::as_str)),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LabelTransform) -> LabelTransform {
        match (self, next) {
            (LabelTransform::Identity, t) | (t, LabelTransform::Identity) => t.clone(),
            (LabelTransform::Restrict(a), LabelTransform::Restrict(b)) => {
                LabelTransform::Restrict(a.intersection(b).cloned().collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMorphism {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeImage>,
    pub label_transform: LabelTransform,
}

impl GraphMorphism {
    pub fn identity(g: &LabelledGraph) -> Self {
        Self {
            vertex_map: g.vertices().iter().map(|v| (v.clone(), v.clone())).collect(),
            edge_map: g.edge_ids().map(|e| (e.clone(), EdgeImage::Edge(e.clone()))).collect(),
            label_transform: LabelTransform::Identity,
        }
    }

    pub fn contracted_edges(&self) -> BTreeSet<&EdgeId> {
        self.edge_map.iter().filter(|(_, img)| matches!(img, EdgeImage::Vertex(_))).map(|(e, _)| e).collect()
    }

    /// Bijective on vertices and edges, contracting nothing.
    pub fn is_graph_isomorphism(&self) -> bool {
        let edge_targets: BTreeSet<&EdgeImage> = self.edge_map.values().collect();
        let vertex_targets: BTreeSet<&VertexId> = self.vertex_map.values().collect();
        self.contracted_edges().is_empty()
            && edge_targets.len() == self.edge_map.len()
            && vertex_targets.len() == self.vertex_map.len()
    }

    /// Checks the morphism axioms against its source and target graphs.
    pub fn validate(&self, source: &LabelledGraph, target: &LabelledGraph) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidMorphism(msg));
        for v in source.vertices() {
            match self.vertex_map.get(v) {
                Some(w) if target.vertices().contains(w) => {}
                _ => return bad(format!("vertex `{v}` has no image in the target")),
            }
        }
        for edge in source.edges() {
            let ends = [&self.vertex_map[&edge.ends[0]], &self.vertex_map[&edge.ends[1]]];
            match self.edge_map.get(&edge.id) {
                Some(EdgeImage::Vertex(w)) => {
                    if ends[0] != w || ends[1] != w {
                        return bad(format!("contracted edge `{}` ends do not meet at `{w}`", edge.id));
                    }
                }
                Some(EdgeImage::Edge(t)) => {
                    let Some(image) = target.edge(t) else {
                        return bad(format!("edge `{}` maps to unknown edge `{t}`", edge.id));
                    };
                    let same = (image.ends[0] == *ends[0] && image.ends[1] == *ends[1])
                        || (image.ends[0] == *ends[1] && image.ends[1] == *ends[0]);
                    if !same {
                        return bad(format!("edge `{}` ends do not map to the ends of `{t}`", edge.id));
                    }
                    if self.label_transform.apply(&edge.label) != image.label {
                        return bad(format!("label of `{}` does not match `{t}`", edge.id));
                    }
                }
                None => return bad(format!("edge `{}` has no image", edge.id)),
            }
        }
        Ok(())
    }
}

/// `m1` followed by `m2`.
pub fn compose(m1: &GraphMorphism, m2: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
    let mismatch = |what: String| GraphError::CompositionMismatch(what);
    let mut vertex_map = BTreeMap::new();
    for (v, w) in &m1.vertex_map {
        let image = m2.vertex_map.get(w).ok_or_else(|| mismatch(format!("vertex `{w}` not in second source")))?;
        vertex_map.insert(v.clone(), image.clone());
    }
    let mut edge_map = BTreeMap::new();
    for (e, img) in &m1.edge_map {
        let image = match img {
            EdgeImage::Edge(t) => {
                m2.edge_map.get(t).cloned().ok_or_else(|| mismatch(format!("edge `{t}` not in second source")))?
            }
            EdgeImage::Vertex(w) => EdgeImage::Vertex(
                m2.vertex_map.get(w).cloned().ok_or_else(|| mismatch(format!("vertex `{w}` not in second source")))?,
            ),
        };
        edge_map.insert(e.clone(), image);
    }
    Ok(GraphMorphism { vertex_map, edge_map, label_transform: m1.label_transform.then(&m2.label_transform) })
}

/// Contracts the edges in `contracted`; each merged vertex is named by its
/// least member.
pub fn contract(
    g: &LabelledGraph,
    contracted: &BTreeSet<EdgeId>,
) -> Result<(LabelledGraph, GraphMorphism), GraphError> {
    contract_with(g, contracted, LabelTransform::Identity)
}

fn contract_with(
    g: &LabelledGraph,
    contracted: &BTreeSet<EdgeId>,
    transform: LabelTransform,
) -> Result<(LabelledGraph, GraphMorphism), GraphError> {
    if let Some(e) = contracted.iter().find(|e| g.edge(e).is_none()) {
        return Err(GraphError::UnknownEdge(e.clone()));
    }
    let mut dsu = Dsu::new(g.vertices().iter().cloned());
    for e in contracted {
        let edge = g.edge(e).expect("checked");
        dsu.union(&edge.ends[0], &edge.ends[1]);
    }
    let vertex_map: BTreeMap<VertexId, VertexId> = g.vertices().iter().map(|v| (v.clone(), dsu.find(v))).collect();
    let mut edge_map = BTreeMap::new();
    let mut edges = Vec::new();
    for edge in g.edges() {
        let ends = [vertex_map[&edge.ends[0]].clone(), vertex_map[&edge.ends[1]].clone()];
        if contracted.contains(&edge.id) {
            edge_map.insert(edge.id.clone(), EdgeImage::Vertex(ends[0].clone()));
        } else {
            edge_map.insert(edge.id.clone(), EdgeImage::Edge(edge.id.clone()));
            edges.push(Edge { id: edge.id.clone(), ends, label: transform.apply(&edge.label) });
        }
    }
    let vertices: BTreeSet<VertexId> = vertex_map.values().cloned().collect();
    let target = LabelledGraph::new(g.generators().clone(), vertices, edges)?;
    Ok((target, GraphMorphism { vertex_map, edge_map, label_transform: transform }))
}

/// Specialisation toward a point where exactly `nonunit` generators vanish:
/// edges whose label support misses `nonunit` become units and are
/// contracted. With `normalise`, surviving labels drop their unit factors.
pub fn specialise(
    g: &LabelledGraph,
    nonunit: &BTreeSet<String>,
    normalise: bool,
) -> Result<(LabelledGraph, GraphMorphism), GraphError> {
    if let Some(x) = nonunit.iter().find(|x| !g.generators().contains(x)) {
        return Err(GraphError::UnknownContextGenerator(x.clone()));
    }
    let units: BTreeSet<EdgeId> =
        g.edges().filter(|e| e.label.support().iter().all(|x| !nonunit.contains(*x))).map(|e| e.id.clone()).collect();
    let transform = if normalise { LabelTransform::Restrict(nonunit.clone()) } else { LabelTransform::Identity };
    contract_with(g, &units, transform)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::labels::Monomial;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn edges(items: &[&str]) -> BTreeSet<EdgeId> {
        items.iter().map(|&s| s.into()).collect()
    }

    #[test]
    fn contract_examples() {
        let g = fixtures::two_gon("x", "y");
        let (t, m) = contract(&g, &edges(&["e1"])).unwrap();
        assert_eq!(t.vertex_count(), 1);
        assert_eq!(t.edge_count(), 1);
        assert!(t.edge(&"e2".into()).unwrap().is_loop());
        m.validate(&g, &t).unwrap();

        let (t, m) = contract(&g, &BTreeSet::new()).unwrap();
        assert_eq!(t, g);
        assert_eq!(m, GraphMorphism::identity(&g));

        let g = fixtures::cycle(&["x", "y", "z"]);
        let (t, _) = contract(&g, &edges(&["e3"])).unwrap();
        let expected = LabelledGraph::from_edges(
            g.generators().clone(),
            [
                Edge::new("e1", "v1", "v2", Monomial::generator("x")),
                Edge::new("e2", "v2", "v1", Monomial::generator("y")),
            ],
        )
        .unwrap();
        assert_eq!(t, expected);

        assert_eq!(contract(&g, &edges(&["e9"])), Err(GraphError::UnknownEdge("e9".into())));
    }

    #[test]
    fn merged_vertex_takes_least_id() {
        let g = fixtures::path(&["x", "y"]);
        let (t, m) = contract(&g, &edges(&["e2"])).unwrap();
        assert_eq!(m.vertex_map[&VertexId::from("v3")], VertexId::from("v2"));
        assert_eq!(m.edge_map[&EdgeId::from("e2")], EdgeImage::Vertex("v2".into()));
        assert!(t.vertices().contains(&VertexId::from("v2")));
    }

    #[test]
    fn specialise_examples() {
        let g = fixtures::two_gon("x", "y");
        let (t, m) = specialise(&g, &set(&["x"]), true).unwrap();
        assert_eq!(t.edge_count(), 1);
        let e1 = t.edge(&"e1".into()).unwrap();
        assert!(e1.is_loop());
        assert_eq!(e1.label, Monomial::generator("x"));
        m.validate(&g, &t).unwrap();

        let (t, m) = specialise(&g, &set(&["x", "y"]), true).unwrap();
        assert_eq!(t, g);
        assert!(m.is_graph_isomorphism());

        let g = fixtures::single_edge("x*y");
        let (t, m) = specialise(&g, &set(&["y"]), true).unwrap();
        assert_eq!(t.label(&"e1".into()), Some(&Monomial::generator("y")));
        m.validate(&g, &t).unwrap();

        assert!(specialise(&g, &set(&["q"]), true).is_err());
    }

    #[test]
    fn compose_examples() {
        let g = fixtures::cycle(&["x", "y", "z"]);
        let (t, m) = contract(&g, &edges(&["e1"])).unwrap();
        assert_eq!(compose(&GraphMorphism::identity(&g), &m).unwrap(), m);
        assert_eq!(compose(&m, &GraphMorphism::identity(&t)).unwrap(), m);

        let (t2, m2) = contract(&t, &edges(&["e2"])).unwrap();
        let (direct_t, direct) = contract(&g, &edges(&["e1", "e2"])).unwrap();
        assert_eq!(t2, direct_t);
        assert_eq!(compose(&m, &m2).unwrap(), direct);

        let stranger = GraphMorphism::identity(&fixtures::single_loop("x"));
        assert!(matches!(compose(&m, &stranger), Err(GraphError::CompositionMismatch(_))));
    }

    #[test]
    fn specialise_chain_equals_direct() {
        let g = fixtures::theta("x", "y", "z");
        let full = set(&["x", "y", "z"]);
        let subsets: Vec<BTreeSet<String>> = (0..8u32)
            .map(|mask| full.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect())
            .collect();
        for j in &subsets {
            let (tj, mj) = specialise(&g, j, true).unwrap();
            for j2 in subsets.iter().filter(|s| s.is_subset(j)) {
                let (t2, m2) = specialise(&tj, j2, true).unwrap();
                let (direct_t, direct) = specialise(&g, j2, true).unwrap();
                assert_eq!(t2, direct_t);
                assert_eq!(compose(&mj, &m2).unwrap(), direct);
            }
        }
    }

    #[test]
    fn validate_catches_label_mismatch() {
        let g = fixtures::two_gon("x", "y");
        let t = g.with_label(&"e1".into(), Monomial::generator("y")).unwrap();
        assert!(GraphMorphism::identity(&g).validate(&g, &t).is_err());
    }
}
