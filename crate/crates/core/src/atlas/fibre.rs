use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::chart::{ChartPresentation, Relation};
use super::thickness::{enumerate_thickness, thickness_graph, ThicknessFunction};
use super::{delta, AtlasError};
use crate::graph::{circuit_partition, contract, EdgeId, LabelledGraph};
use crate::labels::{gcd_u64, Monomial, Valuation};

/// Shape of a chart's fibre over a base point where exactly the `vanishing`
/// generators vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreReport {
    pub nonempty: bool,
    /// False for an empty fibre.
    pub connected: bool,
    pub torus_rank: usize,
    /// Classes whose labels all vanish: their aligning variable is forced to
    /// zero and the unit variables sweep a torus.
    pub active_classes: usize,
}

/// Requires every chart label to be a single generator to the first power,
/// so that the base generators can be eliminated class by class.
///
/// In a class whose labels all vanish, `a = 0` and the unit variables satisfy
/// only the torus relation, a torus of rank `|class| − 1`, connected because
/// the exponents have gcd 1. In a class with no vanishing label `a` is a unit
/// determined by the torus relation. A class mixing the two forces `a` to be
/// both zero and a unit, and a vanishing inverted label is impossible.
pub fn closed_fibre(c: &ChartPresentation, vanishing: &BTreeSet<String>) -> Result<FibreReport, AtlasError> {
    if let Some(x) = vanishing.iter().find(|x| !c.base.contains(x)) {
        return Err(AtlasError::UnknownGenerator(x.clone()));
    }
    let class_labels: Vec<(usize, &Monomial)> = c
        .relations
        .iter()
        .filter_map(|r| match r {
            Relation::Binomial { class, label, .. } => Some((*class, label)),
            Relation::Torus { .. } => None,
        })
        .collect();
    let all_labels = class_labels.iter().map(|(_, l)| *l).chain(c.inverted.iter().map(|i| &i.label));
    let mut vanishes = BTreeMap::new();
    for label in all_labels {
        let x = label.as_single_generator().ok_or_else(|| AtlasError::NonNcChart(label.to_string()))?;
        vanishes.insert(label, vanishing.contains(x));
    }
    let empty = FibreReport { nonempty: false, connected: false, torus_rank: 0, active_classes: 0 };
    if c.inverted.iter().any(|i| vanishes[&i.label]) {
        return Ok(empty);
    }
    let mut torus_rank = 0;
    let mut active_classes = 0;
    let mut connected = true;
    for (k, class) in c.classes.iter().enumerate() {
        let flags: BTreeSet<bool> = class_labels.iter().filter(|(j, _)| *j == k).map(|(_, l)| vanishes[l]).collect();
        if flags.len() > 1 {
            return Ok(empty);
        }
        if flags.contains(&true) {
            active_classes += 1;
            torus_rank += class.entries.len() - 1;
            connected &= class.entries.iter().fold(0, |acc, b| gcd_u64(acc, b.n.unsigned_abs())) == 1;
        }
    }
    Ok(FibreReport { nonempty: true, connected, torus_rank, active_classes })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassScale {
    pub edges: BTreeSet<EdgeId>,
    pub t: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraitFactorisation {
    pub canonical: ThicknessFunction,
    pub scales: Vec<ClassScale>,
    pub all_valid: Vec<ThicknessFunction>,
}

fn label_values(g: &LabelledGraph, v: &Valuation) -> Result<BTreeMap<EdgeId, u64>, AtlasError> {
    g.edges().map(|e| Ok((e.id.clone(), v.apply(&e.label)?))).collect()
}

/// The trait factors through the chart of `M` when `M` vanishes only where
/// the label valuation does and, per class of `Γ_M`, the valuations are a
/// common multiple `t ≥ 0` of `M`.
pub fn is_trait_compatible(g: &LabelledGraph, v: &Valuation, m: &ThicknessFunction) -> Result<bool, AtlasError> {
    let values = label_values(g, v)?;
    compatible(g, &values, m)
}

fn compatible(g: &LabelledGraph, values: &BTreeMap<EdgeId, u64>, m: &ThicknessFunction) -> Result<bool, AtlasError> {
    if m.zero_edges().iter().any(|e| values[e] != 0) {
        return Ok(false);
    }
    let (_, partition) = thickness_graph(g, m)?;
    let fits = partition.iter().all(|class| {
        let first = class.first().expect("non-empty class");
        let (value, mult) = (values[first], u64::from(m.get(first)));
        value % mult == 0 && class.iter().all(|e| values[e] == value / mult * u64::from(m.get(e)))
    });
    Ok(fits)
}

/// The canonical thickness function of a trait, with its per-class scale,
/// and every thickness function up to `e_bound` the trait factors through.
pub fn trait_factorisation(g: &LabelledGraph, v: &Valuation, e_bound: u32) -> Result<TraitFactorisation, AtlasError> {
    let values = label_values(g, v)?;
    let zeros: BTreeMap<EdgeId, u32> = values.iter().filter(|(_, &x)| x == 0).map(|(e, _)| (e.clone(), 0)).collect();
    let mut canonical = zeros.clone();
    let mut scales = Vec::new();
    let (contracted, _) = contract(g, &zeros.keys().cloned().collect())?;
    for class in circuit_partition(&contracted).iter() {
        let t = class.iter().fold(0, |acc, e| gcd_u64(acc, values[e]));
        for e in class {
            let m = values[e] / t;
            canonical.insert(e.clone(), u32::try_from(m).map_err(|_| AtlasError::Overflow(m))?);
        }
        scales.push(ClassScale { edges: class.clone(), t });
    }
    let mut all_valid = Vec::new();
    for m in enumerate_thickness(g, e_bound) {
        if compatible(g, &values, &m)? {
            all_valid.push(m);
        }
    }
    Ok(TraitFactorisation { canonical: ThicknessFunction::new(canonical), scales, all_valid })
}

/// First pair of functions and `δ` edge where the valuation is positive.
pub fn separatedness_violation(
    g: &LabelledGraph,
    v: &Valuation,
    functions: &[ThicknessFunction],
) -> Result<Option<(ThicknessFunction, ThicknessFunction, EdgeId)>, AtlasError> {
    let values = label_values(g, v)?;
    for (i, m) in functions.iter().enumerate() {
        for n in &functions[i + 1..] {
            if let Some(e) = delta(g, m, n)?.into_iter().find(|e| values[e] != 0) {
                return Ok(Some((m.clone(), n.clone(), e)));
            }
        }
    }
    Ok(None)
}
