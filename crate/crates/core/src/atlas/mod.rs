//! Thickness functions, chart presentations and the glued atlas.
//!
//! The chart of `M` inverts the label of every edge with `M(e) = 0`: a map is
//! `M`-aligning only if those labels pull back to units. This makes the
//! charts open in one another along the overlaps below.

mod chart;
mod fibre;
mod thickness;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, GraphError, LabelledGraph};
use crate::labels::LabelError;

pub use chart::{
    bezout, chart, unit_variable, verify_chart_substitution, BezoutEntry, ChartClass, ChartPresentation, InvertedLabel,
    Relation,
};
pub use fibre::{
    closed_fibre, is_trait_compatible, separatedness_violation, trait_factorisation, ClassScale, FibreReport,
    TraitFactorisation,
};
pub use thickness::{enumerate_thickness, is_thickness_function, thickness_graph, ThicknessFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("expected {expected} thickness values, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("thickness function {0} is not defined on exactly the edges of the graph")]
    Domain(String),
    #[error("{0} is not a thickness function: some class of the contracted graph has gcd above 1")]
    InvalidThickness(String),
    #[error("Bézout coefficients requested for an empty list")]
    EmptyBezout,
    #[error("Bézout coefficients need gcd 1, got {0}")]
    BezoutGcd(u64),
    #[error("closed fibre needs single-generator labels, found `{0}`")]
    NonNcChart(String),
    #[error("`{0}` is not a base generator")]
    UnknownGenerator(String),
    #[error("value {0} does not fit a thickness function")]
    Overflow(u64),
    #[error("overlap of {0} and {1} is not symmetric")]
    AsymmetricOverlap(String, String),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Edges of the classes of `Γ_M` and of `Γ_N` on which `M` and `N` disagree.
pub fn delta(g: &LabelledGraph, m: &ThicknessFunction, n: &ThicknessFunction) -> Result<BTreeSet<EdgeId>, AtlasError> {
    Ok(chart_delta(&chart(g, m)?, &chart(g, n)?))
}

/// `δ` from two prebuilt charts: the classes of either that meet the
/// disagreement set.
pub fn chart_delta(cm: &ChartPresentation, cn: &ChartPresentation) -> BTreeSet<EdgeId> {
    let differing = cm.thickness.differing_edges(&cn.thickness);
    cm.classes
        .iter()
        .chain(&cn.classes)
        .map(ChartClass::edges)
        .filter(|class| !class.is_disjoint(&differing))
        .flatten()
        .collect()
}

/// `S_{M,N}`: the chart of `M` with the labels of `δ_{M,N}` inverted.
fn overlap_from(g: &LabelledGraph, cm: &ChartPresentation, delta: &BTreeSet<EdgeId>) -> ChartPresentation {
    let mut c = cm.clone();
    c.invert(delta.iter().map(|e| InvertedLabel { edge: e.clone(), label: g.label(e).expect("edge of g").clone() }));
    c
}

pub fn overlap(
    g: &LabelledGraph,
    m: &ThicknessFunction,
    n: &ThicknessFunction,
) -> Result<(BTreeSet<EdgeId>, ChartPresentation), AtlasError> {
    let cm = chart(g, m)?;
    let d = chart_delta(&cm, &chart(g, n)?);
    let c = overlap_from(g, &cm, &d);
    Ok((d, c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapRecord {
    pub first: usize,
    pub second: usize,
    pub delta: BTreeSet<EdgeId>,
}

/// Charts for every valid thickness function up to `bound`, in sorted order,
/// and `δ` for every unordered pair `first < second` of chart indices.
/// Overlap charts are materialised on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atlas {
    pub graph: LabelledGraph,
    pub bound: u32,
    pub charts: Vec<ChartPresentation>,
    pub overlaps: Vec<OverlapRecord>,
}

impl Atlas {
    pub fn index_of(&self, m: &ThicknessFunction) -> Option<usize> {
        self.charts.binary_search_by(|c| c.thickness.cmp(m)).ok()
    }

    pub fn chart(&self, m: &ThicknessFunction) -> Option<&ChartPresentation> {
        self.index_of(m).map(|i| &self.charts[i])
    }

    pub fn delta(&self, i: usize, j: usize) -> Option<&BTreeSet<EdgeId>> {
        let (first, second) = if i <= j { (i, j) } else { (j, i) };
        if first == second {
            return None;
        }
        // records are laid out row by row over i < j
        let n = self.charts.len();
        let row_start = first * (2 * n - first - 1) / 2;
        self.overlaps.get(row_start + second - first - 1).map(|r| &r.delta)
    }

    /// `S_{M,N}` for chart indices `i` (playing `M`) and `j`.
    pub fn overlap_chart(&self, i: usize, j: usize) -> Option<ChartPresentation> {
        let empty = BTreeSet::new();
        let d = if i == j { Some(&empty) } else { self.delta(i, j) }?;
        Some(overlap_from(&self.graph, &self.charts[i], d))
    }
}

/// Charts and overlaps are computed in parallel; results are assembled in
/// index order, so the atlas is identical to a sequential build.
pub fn build_atlas(g: &LabelledGraph, bound: u32) -> Result<Atlas, AtlasError> {
    let functions = enumerate_thickness(g, bound);
    let charts: Vec<ChartPresentation> = functions.par_iter().map(|m| chart(g, m)).collect::<Result<_, _>>()?;
    let n = charts.len();
    let overlaps: Vec<OverlapRecord> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let forward = chart_delta(&charts[i], &charts[j]);
            if forward != chart_delta(&charts[j], &charts[i]) {
                return Err(AtlasError::AsymmetricOverlap(
                    charts[i].thickness.to_string(),
                    charts[j].thickness.to_string(),
                ));
            }
            Ok(OverlapRecord { first: i, second: j, delta: forward })
        })
        .collect::<Result<_, _>>()?;
    Ok(Atlas { graph: g.clone(), bound, charts, overlaps })
}
