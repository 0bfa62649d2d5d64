//! Exhaustive reference computations over edge subsets. Exponential; only
//! for small graphs and for checking the fast paths.
//!
//! Conventions for degenerate 2-vertex-connectivity: the empty graph and a
//! single vertex are connected, so a single loop and a single non-loop edge
//! are both 2-vertex-connected. A subgraph with two or more edges that
//! contains a loop is not: loops form their own blocks.

use std::collections::BTreeSet;

use super::{EdgeId, EdgePartition, GraphError, LabelledGraph, VertexId};

pub const ORACLE_EDGE_CAP: usize = 12;

/// Subgraph bitmasks over edges in edge-id order.
struct Indexed {
    ids: Vec<EdgeId>,
    ends: Vec<(usize, usize)>,
    vertex_count: usize,
}

impl Indexed {
    fn new(g: &LabelledGraph) -> Result<Self, GraphError> {
        if g.edge_count() > ORACLE_EDGE_CAP {
            return Err(GraphError::SizeCapExceeded { cap: ORACLE_EDGE_CAP, actual: g.edge_count() });
        }
        // isolated vertices never matter; at most 2 * cap endpoints fit the bitmask
        let vertices: Vec<&VertexId> =
            g.edges().flat_map(|e| e.ends.iter()).collect::<BTreeSet<_>>().into_iter().collect();
        let idx = |v: &VertexId| vertices.binary_search(&v).expect("endpoint");
        Ok(Self {
            ids: g.edge_ids().cloned().collect(),
            ends: g.edges().map(|e| (idx(&e.ends[0]), idx(&e.ends[1]))).collect(),
            vertex_count: vertices.len(),
        })
    }

    fn edges_of(&self, mask: u32) -> impl Iterator<Item = usize> + '_ {
        (0..self.ids.len()).filter(move |i| mask >> i & 1 == 1)
    }

    fn vertices_of(&self, mask: u32) -> u64 {
        self.edges_of(mask).fold(0u64, |acc, i| acc | 1 << self.ends[i].0 | 1 << self.ends[i].1)
    }

    /// Connectivity of the graph with vertex set `vs` and the edges of `mask`.
    fn connected(&self, vs: u64, mask: u32) -> bool {
        if vs == 0 {
            return true;
        }
        let mut reached = 1u64 << vs.trailing_zeros();
        loop {
            let before = reached;
            for i in self.edges_of(mask) {
                let (a, b) = self.ends[i];
                if reached >> a & 1 == 1 || reached >> b & 1 == 1 {
                    reached |= 1 << a | 1 << b;
                }
            }
            if reached == before {
                return reached & vs == vs;
            }
        }
    }

    fn is_two_vertex_connected(&self, mask: u32) -> bool {
        if mask.count_ones() == 1 {
            return true;
        }
        if self.edges_of(mask).any(|i| self.ends[i].0 == self.ends[i].1) {
            return false;
        }
        let vs = self.vertices_of(mask);
        if !self.connected(vs, mask) {
            return false;
        }
        (0..self.vertex_count).filter(|v| vs >> v & 1 == 1).all(|v| {
            let kept = self
                .edges_of(mask)
                .filter(|&i| self.ends[i].0 != v && self.ends[i].1 != v)
                .fold(0u32, |acc, i| acc | 1 << i);
            self.connected(vs & !(1 << v), kept)
        })
    }

    /// Connected, with every vertex of degree two (a loop counts twice).
    fn is_circuit(&self, mask: u32) -> bool {
        let vs = self.vertices_of(mask);
        let mut degree = vec![0u32; self.vertex_count];
        for i in self.edges_of(mask) {
            degree[self.ends[i].0] += 1;
            degree[self.ends[i].1] += 1;
        }
        self.connected(vs, mask) && (0..self.vertex_count).all(|v| vs >> v & 1 == 0 || degree[v] == 2)
    }

    fn to_set(&self, mask: u32) -> BTreeSet<EdgeId> {
        self.edges_of(mask).map(|i| self.ids[i].clone()).collect()
    }

    fn all_masks(&self) -> std::ops::Range<u32> {
        1..(1u32 << self.ids.len())
    }
}

/// Every edge subset whose subgraph (without isolated vertices) is
/// 2-vertex-connected, in increasing bitmask order over edge-id order.
pub fn enumerate_2vc_subgraphs(g: &LabelledGraph) -> Result<Vec<BTreeSet<EdgeId>>, GraphError> {
    let ix = Indexed::new(g)?;
    Ok(ix.all_masks().filter(|&m| ix.is_two_vertex_connected(m)).map(|m| ix.to_set(m)).collect())
}

/// Edge sets of all circuits, found by exhaustive subset search.
pub fn enumerate_circuits(g: &LabelledGraph) -> Result<Vec<BTreeSet<EdgeId>>, GraphError> {
    let ix = Indexed::new(g)?;
    Ok(ix.all_masks().filter(|&m| ix.is_circuit(m)).map(|m| ix.to_set(m)).collect())
}

/// The inclusion-maximal circuit-connected edge sets, straight from the
/// definition: every pair of distinct edges lies on a common circuit inside
/// the set.
pub fn maximal_circuit_connected_sets(g: &LabelledGraph) -> Result<EdgePartition, GraphError> {
    let ix = Indexed::new(g)?;
    let circuits: Vec<u32> = ix.all_masks().filter(|&m| ix.is_circuit(m)).collect();
    let connected: Vec<u32> = ix
        .all_masks()
        .filter(|&set| {
            let members: Vec<usize> = ix.edges_of(set).collect();
            members.iter().enumerate().all(|(k, &a)| {
                members[k + 1..].iter().all(|&b| {
                    let pair = 1u32 << a | 1 << b;
                    circuits.iter().any(|&c| c & set == c && c & pair == pair)
                })
            })
        })
        .collect();
    let maximal = connected
        .iter()
        .filter(|&&s| !connected.iter().any(|&t| t != s && t & s == s))
        .map(|&s| ix.to_set(s))
        .collect();
    Ok(EdgePartition::from_classes(maximal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::circuit_partition;

    fn sets(items: &[&[&str]]) -> Vec<BTreeSet<EdgeId>> {
        items.iter().map(|s| s.iter().map(|&e| EdgeId::from(e)).collect()).collect()
    }

    #[test]
    fn two_vc_examples() {
        assert_eq!(enumerate_2vc_subgraphs(&fixtures::single_loop("x")).unwrap(), sets(&[&["e1"]]));
        assert_eq!(enumerate_2vc_subgraphs(&fixtures::single_edge("x")).unwrap(), sets(&[&["e1"]]));
        assert_eq!(
            enumerate_2vc_subgraphs(&fixtures::two_gon("x", "y")).unwrap(),
            sets(&[&["e1"], &["e2"], &["e1", "e2"]])
        );
    }

    #[test]
    fn paths_and_loops_with_edges_are_not_2vc() {
        let subs = enumerate_2vc_subgraphs(&fixtures::path(&["x", "y"])).unwrap();
        assert_eq!(subs, sets(&[&["e1"], &["e2"]]));
        let g = fixtures::from_triples(&[("a", "a", "x"), ("a", "b", "y")]);
        assert_eq!(enumerate_2vc_subgraphs(&g).unwrap(), sets(&[&["e1"], &["e2"]]));
    }

    #[test]
    fn cap_is_enforced() {
        let labels = vec!["x"; 13];
        let g = fixtures::path(&labels);
        assert_eq!(enumerate_2vc_subgraphs(&g), Err(GraphError::SizeCapExceeded { cap: ORACLE_EDGE_CAP, actual: 13 }));
    }

    #[test]
    fn circuits_of_theta() {
        assert_eq!(
            enumerate_circuits(&fixtures::theta("x", "y", "z")).unwrap(),
            sets(&[&["e1", "e2"], &["e1", "e3"], &["e2", "e3"]])
        );
    }

    #[test]
    fn brute_force_partition_matches_blocks_on_fixtures() {
        for g in [
            fixtures::two_gon("x", "y"),
            fixtures::theta("x", "y", "z"),
            fixtures::cycle(&["x", "y", "z"]),
            fixtures::mixed_six(),
            fixtures::from_triples(&[("a", "a", "x"), ("a", "b", "y"), ("b", "b", "z")]),
        ] {
            assert_eq!(maximal_circuit_connected_sets(&g).unwrap(), circuit_partition(&g));
        }
    }
}
