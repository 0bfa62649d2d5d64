//! Stratified families over a normal-crossings base. The stratum indexed by a
//! set `J` of generators is the graph over the generic point where exactly
//! the generators in `J` vanish: every edge whose label avoids `J` becomes a
//! unit there and is contracted.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{specialise, GraphError, GraphMorphism, LabelledGraph};

pub type Subset = BTreeSet<String>;

/// Strata are enumerated over all subsets of the label generators.
pub const STRATA_GENERATOR_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("the base is not declared normal-crossings")]
    NotNormalCrossings,
    #[error("label `{0}` is not a single generator")]
    NonNcLabel(String),
    #[error("{0} label generators exceed the cap of {STRATA_GENERATOR_CAP}")]
    TooManyGenerators(usize),
    #[error("{0:?} is not a subset of {1:?}")]
    NotNested(Subset, Subset),
    #[error("no stratum is indexed by {0:?}")]
    UnknownStratum(Subset),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub graph: LabelledGraph,
    /// Specialisation from the controlling graph.
    pub morphism: GraphMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialisation {
    pub from: Subset,
    pub to: Subset,
    pub morphism: GraphMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedFamily {
    pub graph: LabelledGraph,
    /// Union of the label supports.
    pub generators: Subset,
    pub strata: BTreeMap<Subset, Stratum>,
    /// One specialisation per covering relation `J \ {x} ⊂ J`.
    pub covers: Vec<Specialisation>,
}

impl StratifiedFamily {
    pub fn stratum(&self, j: &Subset) -> Result<&Stratum, StrataError> {
        self.strata.get(j).ok_or_else(|| StrataError::UnknownStratum(j.clone()))
    }
}

fn subsets(gens: &Subset) -> Vec<Subset> {
    let gens: Vec<&String> = gens.iter().collect();
    (0..1usize << gens.len())
        .map(|mask| gens.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, g)| (*g).clone()).collect())
        .collect()
}

pub fn stratify(g: &LabelledGraph) -> Result<StratifiedFamily, StrataError> {
    if !g.generators().is_nc() {
        return Err(StrataError::NotNormalCrossings);
    }
    if let Some(e) = g.edges().find(|e| !e.label.is_unit() && e.label.as_single_generator().is_none()) {
        return Err(StrataError::NonNcLabel(e.label.to_string()));
    }
    let generators: Subset = g.edges().flat_map(|e| e.label.support()).map(str::to_owned).collect();
    if generators.len() > STRATA_GENERATOR_CAP {
        return Err(StrataError::TooManyGenerators(generators.len()));
    }
    let mut strata = BTreeMap::new();
    for j in subsets(&generators) {
        let (graph, morphism) = specialise(g, &j, true)?;
        strata.insert(j, Stratum { graph, morphism });
    }
    let mut family = StratifiedFamily { graph: g.clone(), generators, strata, covers: Vec::new() };
    let mut covers = Vec::new();
    for j in family.strata.keys() {
        for x in j {
            let mut smaller = j.clone();
            smaller.remove(x);
            covers.push(Specialisation {
                morphism: specialisation_map(&family, j, &smaller)?,
                from: j.clone(),
                to: smaller,
            });
        }
    }
    family.covers = covers;
    Ok(family)
}

/// The specialisation from stratum `j` to the more generic stratum `j2`.
pub fn specialisation_map(f: &StratifiedFamily, j: &Subset, j2: &Subset) -> Result<GraphMorphism, StrataError> {
    if !j2.is_subset(j) {
        return Err(StrataError::NotNested(j2.clone(), j.clone()));
    }
    let source = f.stratum(j)?;
    let target = f.stratum(j2)?;
    let (graph, morphism) = specialise(&source.graph, j2, true)?;
    if graph != target.graph {
        return Err(
            GraphError::InvalidMorphism(format!("specialisation of {j:?} does not land on stratum {j2:?}")).into()
        );
    }
    Ok(morphism)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllingEntry {
    pub stratum: Subset,
    /// A more generic stratum reached without contracting any edge.
    pub witness: Option<Subset>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllingReport {
    pub passed: bool,
    pub entries: Vec<ControllingEntry>,
}

/// For each stratum `J`, looks for `J' ⊆ J` whose specialisation map from
/// `J` is an isomorphism of underlying graphs, trying `J ∩ generators` first
/// and then every subset of `J` from the largest down.
pub fn verify_controlling(f: &StratifiedFamily) -> Result<ControllingReport, StrataError> {
    let mut entries = Vec::new();
    for j in f.strata.keys() {
        let preferred: Subset = j.intersection(&f.generators).cloned().collect();
        let mut candidates = subsets(j);
        candidates.sort_by_key(|c| std::cmp::Reverse(c.len()));
        candidates.insert(0, preferred);
        let mut witness = None;
        for c in candidates {
            if specialisation_map(f, j, &c)?.is_graph_isomorphism() {
                witness = Some(c);
                break;
            }
        }
        entries.push(ControllingEntry { stratum: j.clone(), witness });
    }
    Ok(ControllingReport { passed: entries.iter().all(|e| e.witness.is_some()), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{compose, EdgeId, EdgeImage};
    use crate::labels::{GeneratorSet, Monomial};

    fn set(items: &[&str]) -> Subset {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_gon_strata() {
        let f = stratify(&fixtures::two_gon("x", "y")).unwrap();
        assert_eq!(f.strata.len(), 4);
        assert_eq!(f.stratum(&set(&["x", "y"])).unwrap().graph, fixtures::two_gon("x", "y"));
        for (j, label) in [("x", "x"), ("y", "y")] {
            let g = &f.stratum(&set(&[j])).unwrap().graph;
            assert_eq!(g.edge_count(), 1);
            let edge = g.edges().next().unwrap();
            assert!(edge.is_loop());
            assert_eq!(edge.label, label.parse::<Monomial>().unwrap());
        }
        let generic = &f.stratum(&set(&[])).unwrap().graph;
        assert_eq!((generic.vertex_count(), generic.edge_count()), (1, 0));
        assert_eq!(f.covers.len(), 4);
    }

    #[test]
    fn strata_counts() {
        assert_eq!(stratify(&fixtures::single_loop("x")).unwrap().strata.len(), 2);
        assert_eq!(stratify(&fixtures::theta("x", "y", "z")).unwrap().strata.len(), 8);
    }

    #[test]
    fn non_nc_inputs_are_rejected() {
        let g = fixtures::two_gon("x", "x^2");
        assert_eq!(stratify(&g), Err(StrataError::NotNormalCrossings));
        let forced = LabelledGraph::from_edges(
            GeneratorSet::new(["x", "y"], true).unwrap(),
            fixtures::two_gon("x*y", "x").edges().cloned().collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(stratify(&forced), Err(StrataError::NonNcLabel("x*y".into())));
    }

    #[test]
    fn specialisation_examples() {
        let f = stratify(&fixtures::two_gon("x", "y")).unwrap();
        let m = specialisation_map(&f, &set(&["x", "y"]), &set(&["x"])).unwrap();
        assert!(matches!(m.edge_map[&EdgeId::from("e2")], EdgeImage::Vertex(_)));
        assert_eq!(m.edge_map[&EdgeId::from("e1")], EdgeImage::Edge("e1".into()));
        let id = specialisation_map(&f, &set(&["x"]), &set(&["x"])).unwrap();
        assert!(id.is_graph_isomorphism());
        assert_eq!(
            specialisation_map(&f, &set(&["x"]), &set(&["y"])),
            Err(StrataError::NotNested(set(&["y"]), set(&["x"])))
        );
    }

    #[test]
    fn functoriality_on_all_chains() {
        for g in [
            fixtures::two_gon("x", "y"),
            fixtures::theta("x", "y", "z"),
            fixtures::cycle(&["x", "y", "z", "w"]),
            fixtures::mixed_six(),
        ] {
            let f = stratify(&g).unwrap();
            for j in f.strata.keys() {
                for j1 in subsets(j) {
                    for j2 in subsets(&j1) {
                        let direct = specialisation_map(&f, j, &j2).unwrap();
                        let first = specialisation_map(&f, j, &j1).unwrap();
                        let second = specialisation_map(&f, &j1, &j2).unwrap();
                        assert_eq!(compose(&first, &second).unwrap(), direct);
                        let source = &f.stratum(j).unwrap().graph;
                        direct.validate(source, &f.stratum(&j2).unwrap().graph).unwrap();
                        for e in source.edges() {
                            let contracted = matches!(direct.edge_map[&e.id], EdgeImage::Vertex(_));
                            assert_eq!(contracted, e.label.support().iter().all(|x| !j2.contains(*x)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn controlling_examples() {
        for g in [fixtures::two_gon("x", "y"), fixtures::theta("x", "y", "z"), fixtures::cycle(&["x", "y", "z", "w"])] {
            let f = stratify(&g).unwrap();
            let report = verify_controlling(&f).unwrap();
            assert!(report.passed);
            for entry in &report.entries {
                assert_eq!(entry.witness.as_ref(), Some(&entry.stratum));
            }
        }
    }
}
