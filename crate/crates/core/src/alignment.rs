//! Alignment predicates on labelled graphs.
//!
//! A class of the circuit-connected partition is aligned when all of its
//! labels are units, or when none is and they share a primitive root. A class
//! mixing unit and non-unit labels is never aligned: a unit is only a
//! positive power of a unit.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{circuit_partition, enumerate_2vc_subgraphs, EdgeId, GraphError, LabelledGraph};
use crate::labels::{pairwise_power_equivalent, primitive_root, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRoot {
    pub primitive: Monomial,
    pub multiplicities: BTreeMap<EdgeId, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub edges: BTreeSet<EdgeId>,
    pub aligned: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<ClassRoot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentReport {
    pub aligned: bool,
    pub classes: Vec<ClassReport>,
    pub unit_edges: Vec<EdgeId>,
}

impl AlignmentReport {
    /// Primitive root and multiplicity for an edge in a non-unit aligned class.
    pub fn root_of(&self, e: &EdgeId) -> Option<(&Monomial, u32)> {
        self.classes.iter().find(|c| c.edges.contains(e)).and_then(|c| {
            let root = c.root.as_ref()?;
            Some((&root.primitive, root.multiplicities[e]))
        })
    }
}

pub fn is_aligned(g: &LabelledGraph) -> AlignmentReport {
    let partition = circuit_partition(g);
    let unit_edges: Vec<EdgeId> = g.edges().filter(|e| e.label.is_unit()).map(|e| e.id.clone()).collect();
    let classes: Vec<ClassReport> = partition
        .iter()
        .map(|class| {
            let labels: Vec<&Monomial> = class.iter().map(|e| g.label(e).expect("class edge")).collect();
            let units = labels.iter().filter(|l| l.is_unit()).count();
            let verdict = |aligned, root, reason: Option<&str>| ClassReport {
                edges: class.clone(),
                aligned,
                root,
                reason: reason.map(str::to_owned),
            };
            if units == labels.len() {
                return verdict(true, None, None);
            }
            if units > 0 {
                return verdict(false, None, Some("class mixes unit and non-unit labels"));
            }
            match primitive_root(&labels).expect("non-empty, unit-free") {
                Some((primitive, mult)) => {
                    let multiplicities = class.iter().cloned().zip(mult).collect();
                    verdict(true, Some(ClassRoot { primitive, multiplicities }), None)
                }
                None => verdict(false, None, Some("labels have no common root")),
            }
        })
        .collect();
    AlignmentReport { aligned: classes.iter().all(|c| c.aligned), classes, unit_edges }
}

/// Brute force: every 2-vertex-connected subgraph must carry labels that are
/// positive powers of a common element.
pub fn is_aligned_oracle(g: &LabelledGraph) -> Result<bool, GraphError> {
    let subgraphs = enumerate_2vc_subgraphs(g)?;
    Ok(aligned_on_subgraphs(g, &subgraphs))
}

/// The oracle's verdict given a precomputed list of 2-vertex-connected edge
/// sets (which depend only on the underlying graph).
pub fn aligned_on_subgraphs(g: &LabelledGraph, subgraphs: &[BTreeSet<EdgeId>]) -> bool {
    subgraphs.iter().all(|sub| {
        let labels: Vec<&Monomial> = sub.iter().map(|e| g.label(e).expect("subgraph edge")).collect();
        has_common_root_by_search(&labels)
    })
}

/// Searches every non-unit divisor of the first label for an `l` with each
/// label equal to a positive power of `l`.
fn has_common_root_by_search(labels: &[&Monomial]) -> bool {
    if labels.iter().all(|l| l.is_unit()) {
        return true;
    }
    if labels.iter().any(|l| l.is_unit()) {
        return false;
    }
    let first = labels[0];
    let gens: Vec<(&String, u32)> = first.exponents().iter().map(|(g, &e)| (g, e)).collect();
    let mut exps = vec![0u32; gens.len()];
    loop {
        // odometer over divisors of the first label
        let mut i = 0;
        while i < exps.len() && exps[i] == gens[i].1 {
            exps[i] = 0;
            i += 1;
        }
        if i == exps.len() {
            return false;
        }
        exps[i] += 1;
        let d: u32 = exps.iter().sum();
        let support = exps.iter().filter(|&&e| e > 0).count();
        let is_power = |l: &Monomial| {
            let k = l.degree() / d;
            l.degree().is_multiple_of(d)
                && l.exponents().len() == support
                && gens.iter().zip(&exps).all(|((g, _), &e)| l.exponent(g) == k * e)
        };
        if labels.iter().all(|l| is_power(l)) {
            return true;
        }
    }
}

/// Within each class, all non-unit label pairs are power-equivalent (and, as
/// for [`is_aligned`], a class never mixes units with non-units).
pub fn is_irregularly_aligned(g: &LabelledGraph) -> bool {
    circuit_partition(g).iter().all(|class| {
        let labels: Vec<&Monomial> = class.iter().map(|e| g.label(e).expect("class edge")).collect();
        let nonunits: Vec<&Monomial> = labels.iter().copied().filter(|l| !l.is_unit()).collect();
        if nonunits.is_empty() {
            return true;
        }
        if nonunits.len() != labels.len() {
            return false;
        }
        nonunits
            .iter()
            .enumerate()
            .all(|(i, a)| nonunits[i + 1..].iter().all(|b| pairwise_power_equivalent(a, b).expect("non-units")))
    })
}

/// A family of block elements qualifies when each is a unit or a single
/// generator to the first power (the monomial hypersurfaces with regular
/// vanishing loci).
pub fn weak_nc_admissible(elements: &[Monomial]) -> bool {
    elements.iter().all(|a| a.is_unit() || a.as_single_generator().is_some())
}

/// The least `e` for which `g` is `e`-strongly aligned, or `None`. Blocks
/// are the maximal 2-vertex-connected subgraphs of the loop-deleted graph.
pub fn e_strong_level(g: &LabelledGraph) -> Option<u32> {
    let mut elements = Vec::new();
    let mut level = 0;
    for class in circuit_partition(g).iter() {
        let labels: Vec<&Monomial> = class.iter().map(|e| g.label(e).expect("class edge")).collect();
        if class.len() == 1 && g.edge(class.first().expect("non-empty")).expect("class edge").is_loop() {
            continue;
        }
        let (element, r) = block_element(&labels, g.generators().names())?;
        elements.push(element);
        level = level.max(r);
    }
    weak_nc_admissible(&elements).then_some(level)
}

/// Best admissible `a` with every label equal to `a^r`, and the largest `r`.
fn block_element(labels: &[&Monomial], generators: &[String]) -> Option<(Monomial, u32)> {
    if labels.iter().all(|l| l.is_unit()) {
        return Some((Monomial::unit(), 0));
    }
    if labels.iter().any(|l| l.is_unit()) {
        return None;
    }
    generators
        .iter()
        .filter_map(|x| {
            let exps: Option<Vec<u32>> = labels
                .iter()
                .map(|l| (l.as_single_generator_power() == Some(x.as_str())).then(|| l.exponent(x)))
                .collect();
            Some((Monomial::generator(x.clone()), exps?.into_iter().max()?))
        })
        .min_by_key(|(_, r)| *r)
}

pub fn is_e_strongly_aligned(g: &LabelledGraph, e: u32) -> bool {
    e_strong_level(g).is_some_and(|level| level <= e)
}
