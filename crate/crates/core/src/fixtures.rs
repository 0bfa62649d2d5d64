//! Small named graphs used throughout the tests, the examples and the CLI
//! fixture set. Labels are given in monomial syntax (`x^2*y`, `1`).
//!
//! Vertices are `v1, v2, ...` and edges `e1, e2, ...`. The generator set is
//! the sorted union of label supports; it is flagged normal-crossings when
//! every label is a single generator and no generator repeats.

use std::collections::BTreeSet;

use crate::graph::{Edge, LabelledGraph};
use crate::labels::{GeneratorSet, Monomial};

fn parse(label: &str) -> Monomial {
    label.parse().unwrap_or_else(|e| panic!("fixture label `{label}`: {e}"))
}

fn generators_for(labels: &[Monomial]) -> GeneratorSet {
    let names: BTreeSet<String> = labels.iter().flat_map(|l| l.exponents().keys().cloned()).collect();
    let singles: Vec<&str> = labels.iter().filter_map(Monomial::as_single_generator).collect();
    let distinct: BTreeSet<&str> = singles.iter().copied().collect();
    let nc = singles.len() == labels.len() && distinct.len() == singles.len();
    GeneratorSet::new(names, nc).expect("names are a set")
}

/// Builds a graph from `(v, w, label)` triples; edge `i` is named `e{i+1}`.
pub fn from_triples(triples: &[(&str, &str, &str)]) -> LabelledGraph {
    let labels: Vec<Monomial> = triples.iter().map(|t| parse(t.2)).collect();
    let gens = generators_for(&labels);
    let edges =
        triples.iter().zip(labels).enumerate().map(|(i, ((v, w, _), l))| Edge::new(format!("e{}", i + 1), *v, *w, l));
    LabelledGraph::from_edges(gens, edges).expect("fixture graph is well formed")
}

pub fn two_gon(l1: &str, l2: &str) -> LabelledGraph {
    from_triples(&[("v1", "v2", l1), ("v1", "v2", l2)])
}

pub fn theta(l1: &str, l2: &str, l3: &str) -> LabelledGraph {
    from_triples(&[("v1", "v2", l1), ("v1", "v2", l2), ("v1", "v2", l3)])
}

/// Cycle `v1 - v2 - ... - vn - v1` with edge `ei` leaving `vi`.
pub fn cycle(labels: &[&str]) -> LabelledGraph {
    let n = labels.len();
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let triples: Vec<(&str, &str, &str)> =
        (0..n).map(|i| (names[i].as_str(), names[(i + 1) % n].as_str(), labels[i])).collect();
    from_triples(&triples)
}

pub fn path(labels: &[&str]) -> LabelledGraph {
    let names: Vec<String> = (1..=labels.len() + 1).map(|i| format!("v{i}")).collect();
    let triples: Vec<(&str, &str, &str)> =
        labels.iter().enumerate().map(|(i, l)| (names[i].as_str(), names[i + 1].as_str(), *l)).collect();
    from_triples(&triples)
}

pub fn single_edge(label: &str) -> LabelledGraph {
    path(&[label])
}

pub fn single_loop(label: &str) -> LabelledGraph {
    from_triples(&[("v1", "v1", label)])
}

/// Six edges: a triangle with a doubled side, a pendant bridge and a loop
/// at the far end of the bridge. Labels are distinct generators.
pub fn mixed_six() -> LabelledGraph {
    from_triples(&[
        ("v1", "v2", "x"),
        ("v2", "v3", "y"),
        ("v3", "v1", "z"),
        ("v1", "v2", "w"),
        ("v3", "v4", "s"),
        ("v4", "v4", "t"),
    ])
}
