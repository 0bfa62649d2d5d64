use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AtlasError;
use crate::graph::{circuit_partition, contract, EdgeId, EdgePartition, LabelledGraph};
use crate::labels::gcd_u32;

/// Non-negative integer per edge. Ordered lexicographically by the value
/// vector in edge-id order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThicknessFunction {
    values: BTreeMap<EdgeId, u32>,
}

impl ThicknessFunction {
    pub fn new(values: BTreeMap<EdgeId, u32>) -> Self {
        Self { values }
    }

    /// Pairs `values` with the edges of `g` in edge-id order.
    pub fn from_values(g: &LabelledGraph, values: &[u32]) -> Result<Self, AtlasError> {
        if values.len() != g.edge_count() {
            return Err(AtlasError::WrongLength { expected: g.edge_count(), actual: values.len() });
        }
        Ok(Self { values: g.edge_ids().cloned().zip(values.iter().copied()).collect() })
    }

    pub fn zero(g: &LabelledGraph) -> Self {
        Self { values: g.edge_ids().map(|e| (e.clone(), 0)).collect() }
    }

    pub fn get(&self, e: &EdgeId) -> u32 {
        self.values.get(e).copied().unwrap_or(0)
    }

    pub fn values(&self) -> &BTreeMap<EdgeId, u32> {
        &self.values
    }

    pub fn vector(&self) -> Vec<u32> {
        self.values.values().copied().collect()
    }

    pub fn zero_edges(&self) -> BTreeSet<EdgeId> {
        self.values.iter().filter(|(_, &v)| v == 0).map(|(e, _)| e.clone()).collect()
    }

    pub fn differing_edges(&self, other: &ThicknessFunction) -> BTreeSet<EdgeId> {
        self.values.keys().chain(other.values.keys()).filter(|e| self.get(e) != other.get(e)).cloned().collect()
    }

    pub(crate) fn check_domain(&self, g: &LabelledGraph) -> Result<(), AtlasError> {
        if self.values.len() == g.edge_count() && self.values.keys().eq(g.edge_ids()) {
            Ok(())
        } else {
            Err(AtlasError::Domain(self.to_string()))
        }
    }
}

impl fmt::Display for ThicknessFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.values().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `Γ_M` (the zero edges contracted) and its circuit-connected partition.
pub fn thickness_graph(g: &LabelledGraph, m: &ThicknessFunction) -> Result<(LabelledGraph, EdgePartition), AtlasError> {
    m.check_domain(g)?;
    let (gm, _) = contract(g, &m.zero_edges())?;
    let partition = circuit_partition(&gm);
    Ok((gm, partition))
}

pub fn is_thickness_function(g: &LabelledGraph, m: &ThicknessFunction) -> bool {
    match thickness_graph(g, m) {
        Ok((_, partition)) => partition.iter().all(|class| class.iter().fold(0, |acc, e| gcd_u32(acc, m.get(e))) == 1),
        Err(_) => false,
    }
}

/// All valid thickness functions with values in `0..=bound`, sorted.
///
/// Runs over zero sets rather than value vectors: each zero set fixes `Γ_M`,
/// after which the classes are filled independently with coprime vectors.
pub fn enumerate_thickness(g: &LabelledGraph, bound: u32) -> Vec<ThicknessFunction> {
    let ids: Vec<EdgeId> = g.edge_ids().cloned().collect();
    assert!(ids.len() < 64, "thickness enumeration over {} edges", ids.len());
    let full: u64 = if ids.is_empty() { 0 } else { u64::MAX >> (64 - ids.len()) };
    let mut out = Vec::new();
    for zero_mask in 0..=full {
        if bound == 0 && zero_mask != full {
            continue;
        }
        let zeros: BTreeSet<EdgeId> =
            ids.iter().enumerate().filter(|(i, _)| zero_mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect();
        let (gm, _) = contract(g, &zeros).expect("edges of g");
        let classes: Vec<Vec<EdgeId>> = circuit_partition(&gm).iter().map(|c| c.iter().cloned().collect()).collect();
        let fillings: Vec<Vec<Vec<u32>>> = classes.iter().map(|c| coprime_vectors(c.len(), bound)).collect();
        if fillings.iter().any(Vec::is_empty) {
            continue;
        }
        let mut choice = vec![0usize; classes.len()];
        loop {
            let mut values: BTreeMap<EdgeId, u32> = zeros.iter().map(|e| (e.clone(), 0)).collect();
            for (k, class) in classes.iter().enumerate() {
                values.extend(class.iter().cloned().zip(fillings[k][choice[k]].iter().copied()));
            }
            out.push(ThicknessFunction::new(values));
            if !advance(&mut choice, |k| fillings[k].len()) {
                break;
            }
        }
    }
    out.sort();
    out
}

/// Vectors in `[1, bound]^len` whose entries have gcd 1.
fn coprime_vectors(len: usize, bound: u32) -> Vec<Vec<u32>> {
    if bound == 0 {
        return Vec::new();
    }
    let mut v = vec![1u32; len];
    let mut out = Vec::new();
    loop {
        if v.iter().fold(0, |acc, &x| gcd_u32(acc, x)) == 1 {
            out.push(v.clone());
        }
        let mut i = 0;
        while i < len && v[i] == bound {
            v[i] = 1;
            i += 1;
        }
        if i == len {
            return out;
        }
        v[i] += 1;
    }
}

/// Mixed-radix increment; false once every digit has wrapped.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for (k, d) in digits.iter_mut().enumerate() {
        *d += 1;
        if *d < radix(k) {
            return true;
        }
        *d = 0;
    }
    false
}
