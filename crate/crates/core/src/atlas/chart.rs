use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::thickness::{is_thickness_function, thickness_graph, ThicknessFunction};
use super::AtlasError;
use crate::graph::{EdgeId, LabelledGraph};
use crate::labels::{GeneratorSet, LaurentMonomial, Monomial};

/// Coefficients `n` with `Σ n_i m_i = 1`, by a left fold of the extended
/// Euclidean algorithm. Deterministic in the order of `ms`.
pub fn bezout(ms: &[u32]) -> Result<Vec<i64>, AtlasError> {
    let (&first, rest) = ms.split_first().ok_or(AtlasError::EmptyBezout)?;
    let mut g = i64::from(first);
    let mut ns = vec![1i64];
    for &m in rest {
        let (next, x, y) = ext_gcd(i64::from(m), g);
        for n in &mut ns {
            *n *= y;
        }
        ns.push(x);
        g = next;
    }
    if g != 1 {
        return Err(AtlasError::BezoutGcd(g.unsigned_abs()));
    }
    Ok(ns)
}

/// `(g, x, y)` with `x·a + y·b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutEntry {
    pub edge: EdgeId,
    pub m: u32,
    pub n: i64,
}

/// One class of `Γ_M` with its aligning variable and Bézout data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartClass {
    pub aligning_variable: String,
    pub entries: Vec<BezoutEntry>,
}

impl ChartClass {
    pub fn edges(&self) -> BTreeSet<EdgeId> {
        self.entries.iter().map(|b| b.edge.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertedLabel {
    pub edge: EdgeId,
    pub label: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `label − a^exponent · u`
    Binomial { class: usize, edge: EdgeId, label: Monomial, exponent: u32, unit_variable: String },
    /// `1 − ∏ u_e^{n_e}`
    Torus { class: usize, exponents: BTreeMap<EdgeId, i64> },
}

/// A finitely presented algebra over the base: chart variables, formally
/// inverted base labels and binomial relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartPresentation {
    pub base: GeneratorSet,
    pub thickness: ThicknessFunction,
    pub classes: Vec<ChartClass>,
    pub inverted: Vec<InvertedLabel>,
    pub relations: Vec<Relation>,
}

pub fn unit_variable(e: &EdgeId) -> String {
    format!("u[{e}]")
}

fn aligning_variable(first: &EdgeId) -> String {
    format!("a[{first}]")
}

impl ChartPresentation {
    pub fn aligning_variables(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.aligning_variable.as_str()).collect()
    }

    pub fn unit_variables(&self) -> Vec<String> {
        self.classes.iter().flat_map(|c| c.entries.iter().map(|b| unit_variable(&b.edge))).collect()
    }

    /// Without normal crossings the presented algebra may be strictly larger
    /// than the closure of the open locus it should describe.
    pub fn may_exceed_image(&self) -> bool {
        !self.base.is_nc()
    }

    /// Appends labels to the inverted list, skipping edges already there.
    pub fn invert(&mut self, labels: impl IntoIterator<Item = InvertedLabel>) {
        for l in labels {
            if !self.inverted.iter().any(|i| i.edge == l.edge) {
                self.inverted.push(l);
            }
        }
    }

    pub fn rendered_relations(&self) -> Vec<String> {
        self.relations.iter().map(|r| RenderedRelation(self, r).to_string()).collect()
    }
}

struct RenderedRelation<'a>(&'a ChartPresentation, &'a Relation);

impl fmt::Display for RenderedRelation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.1 {
            Relation::Binomial { class, label, exponent, unit_variable, .. } => {
                let a = &self.0.classes[*class].aligning_variable;
                write!(f, "{label} = {}", render_ordered(&[(a.as_str(), i64::from(*exponent)), (unit_variable, 1)]))
            }
            Relation::Torus { exponents, .. } => {
                let vars: Vec<(String, i64)> = exponents.iter().map(|(e, &n)| (unit_variable(e), n)).collect();
                let refs: Vec<(&str, i64)> = vars.iter().map(|(v, n)| (v.as_str(), *n)).collect();
                write!(f, "1 = {}", render_ordered(&refs))
            }
        }
    }
}

/// Renders factors in the given order, dropping zero exponents.
fn render_ordered(factors: &[(&str, i64)]) -> String {
    let parts: Vec<String> = factors
        .iter()
        .filter(|(_, n)| *n != 0)
        .map(|(v, n)| if *n == 1 { v.to_string() } else { format!("{v}^{n}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" * ")
    }
}

/// The chart for `M`: per class of `Γ_M` the binomials `ℓ(e) − a^{M(e)} u_e`
/// and one torus relation, with the labels of all `M = 0` edges inverted.
pub fn chart(g: &LabelledGraph, m: &ThicknessFunction) -> Result<ChartPresentation, AtlasError> {
    if !is_thickness_function(g, m) {
        m.check_domain(g)?;
        return Err(AtlasError::InvalidThickness(m.to_string()));
    }
    let (_, partition) = thickness_graph(g, m)?;
    let mut classes = Vec::new();
    let mut relations = Vec::new();
    for (k, class) in partition.iter().enumerate() {
        let ms: Vec<u32> = class.iter().map(|e| m.get(e)).collect();
        let ns = bezout(&ms)?;
        let a = aligning_variable(class.first().expect("non-empty class"));
        let entries: Vec<BezoutEntry> =
            class.iter().zip(ms.iter().zip(&ns)).map(|(e, (&m, &n))| BezoutEntry { edge: e.clone(), m, n }).collect();
        for b in &entries {
            relations.push(Relation::Binomial {
                class: k,
                edge: b.edge.clone(),
                label: g.label(&b.edge).expect("class edge").clone(),
                exponent: b.m,
                unit_variable: unit_variable(&b.edge),
            });
        }
        relations
            .push(Relation::Torus { class: k, exponents: entries.iter().map(|b| (b.edge.clone(), b.n)).collect() });
        classes.push(ChartClass { aligning_variable: a, entries });
    }
    let inverted = m
        .zero_edges()
        .into_iter()
        .map(|e| InvertedLabel { label: g.label(&e).expect("edge of g").clone(), edge: e })
        .collect();
    Ok(ChartPresentation { base: g.generators().clone(), thickness: m.clone(), classes, inverted, relations })
}

/// Substitutes `a ↦ ∏ ℓ(e)^{n_e}` and `u_e ↦ ℓ(e)·a^{−m_e}` and checks that
/// every relation vanishes identically. Also checks the structural shape:
/// one binomial per class edge, one torus relation per class, matching data.
pub fn verify_chart_substitution(c: &ChartPresentation) -> bool {
    let mut images: BTreeMap<String, LaurentMonomial> = BTreeMap::new();
    for (k, class) in c.classes.iter().enumerate() {
        let binomials: BTreeMap<&EdgeId, (&Monomial, u32)> = c
            .relations
            .iter()
            .filter_map(|r| match r {
                Relation::Binomial { class, edge, label, exponent, .. } if *class == k => {
                    Some((edge, (label, *exponent)))
                }
                _ => None,
            })
            .collect();
        let binomial_count =
            c.relations.iter().filter(|r| matches!(r, Relation::Binomial { class, .. } if *class == k)).count();
        let tori: Vec<&BTreeMap<EdgeId, i64>> = c
            .relations
            .iter()
            .filter_map(|r| match r {
                Relation::Torus { class, exponents } if *class == k => Some(exponents),
                _ => None,
            })
            .collect();
        let expected_ns: BTreeMap<EdgeId, i64> = class.entries.iter().map(|b| (b.edge.clone(), b.n)).collect();
        let shape_ok = binomial_count == class.entries.len()
            && class.entries.iter().all(|b| binomials.get(&b.edge).is_some_and(|(_, m)| *m == b.m))
            && tori.len() == 1
            && *tori[0] == expected_ns
            && class.entries.iter().map(|b| i64::from(b.m) * b.n).sum::<i64>() == 1;
        if !shape_ok {
            return false;
        }
        let a_image = class
            .entries
            .iter()
            .fold(LaurentMonomial::unit(), |acc, b| acc.mul(&LaurentMonomial::from(binomials[&b.edge].0).pow(b.n)));
        for b in &class.entries {
            let u_image = LaurentMonomial::from(binomials[&b.edge].0).mul(&a_image.pow(-i64::from(b.m)));
            images.insert(unit_variable(&b.edge), u_image);
        }
        images.insert(class.aligning_variable.clone(), a_image);
    }
    let classes_ok = c.relations.iter().all(|r| match r {
        Relation::Binomial { class, .. } | Relation::Torus { class, .. } => *class < c.classes.len(),
    });
    classes_ok
        && c.relations.iter().all(|r| match r {
            Relation::Binomial { class, label, exponent, unit_variable, .. } => {
                let rhs = LaurentMonomial::var(c.classes[*class].aligning_variable.clone(), i64::from(*exponent))
                    .mul(&LaurentMonomial::var(unit_variable.clone(), 1));
                rhs.substitute(&images) == LaurentMonomial::from(label)
            }
            Relation::Torus { exponents, .. } => exponents
                .iter()
                .fold(LaurentMonomial::unit(), |acc, (e, &n)| acc.mul(&LaurentMonomial::var(unit_variable(e), n)))
                .substitute(&images)
                .is_unit(),
        })
}
