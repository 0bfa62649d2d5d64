//! Monomial labels: the free commutative monoid on named generators, its
//! group completion, and integer valuations.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("primitive root requested for an empty list of monomials")]
    EmptyList,
    #[error("unit monomial at position {0}: every monomial is a root of the unit")]
    UnitEntry(usize),
    #[error("power equivalence is undefined for unit monomials")]
    UnitArgument,
    #[error("valuation has no value for generator `{0}`")]
    MissingGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("zero exponent for generator `{0}`")]
    ZeroExponent(String),
    #[error("malformed monomial `{0}`")]
    Malformed(String),
    #[error("generator name `{0}` is not an identifier")]
    InvalidGeneratorName(String),
}

pub(crate) fn is_identifier(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Ordered list of base generators, plus a flag declaring the base to be
/// normal-crossings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    names: Vec<String>,
    nc: bool,
}

impl GeneratorSet {
    pub fn new<I, S>(names: I, nc: bool) -> Result<Self, LabelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for name in &names {
            if !is_identifier(name) {
                return Err(LabelError::InvalidGeneratorName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(LabelError::DuplicateGenerator(name.clone()));
            }
        }
        Ok(Self { names, nc })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_nc(&self) -> bool {
        self.nc
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Element of the free commutative monoid on generator names. Stored
/// exponents are always positive; the unit is the empty map.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, u32>", into = "BTreeMap<String, u32>")]
pub struct Monomial {
    exponents: BTreeMap<String, u32>,
}

impl TryFrom<BTreeMap<String, u32>> for Monomial {
    type Error = LabelError;

    fn try_from(exponents: BTreeMap<String, u32>) -> Result<Self, Self::Error> {
        if let Some((g, _)) = exponents.iter().find(|(_, &e)| e == 0) {
            return Err(LabelError::ZeroExponent(g.clone()));
        }
        Ok(Self { exponents })
    }
}

impl From<Monomial> for BTreeMap<String, u32> {
    fn from(m: Monomial) -> Self {
        m.exponents
    }
}

impl Monomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn generator(name: impl Into<String>) -> Self {
        Self::from_pairs([(name, 1)])
    }

    /// Builds a monomial from `(generator, exponent)` pairs; zero exponents
    /// are dropped and repeated generators accumulate.
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut exponents = BTreeMap::new();
        for (g, e) in pairs {
            if e > 0 {
                *exponents.entry(g.into()).or_insert(0) += e;
            }
        }
        Self { exponents }
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, generator: &str) -> u32 {
        self.exponents.get(generator).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &BTreeMap<String, u32> {
        &self.exponents
    }

    pub fn support(&self) -> BTreeSet<&str> {
        self.exponents.keys().map(String::as_str).collect()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exponents = self.exponents.clone();
        for (g, e) in &other.exponents {
            *exponents.entry(g.clone()).or_insert(0) += e;
        }
        Monomial { exponents }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::unit();
        }
        Monomial { exponents: self.exponents.iter().map(|(g, e)| (g.clone(), e * k)).collect() }
    }

    /// gcd of the stored exponents (0 for the unit).
    pub fn content(&self) -> u32 {
        self.exponents.values().fold(0, |acc, &e| gcd_u32(acc, e))
    }

    /// A monomial is primitive when it is not a proper power.
    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The generator name when this is a single generator to the first power.
    pub fn as_single_generator(&self) -> Option<&str> {
        match self.exponents.iter().next() {
            Some((g, 1)) if self.exponents.len() == 1 => Some(g),
            _ => None,
        }
    }

    /// The generator name when this is a positive power of one generator.
    pub fn as_single_generator_power(&self) -> Option<&str> {
        match self.exponents.iter().next() {
            Some((g, _)) if self.exponents.len() == 1 => Some(g),
            _ => None,
        }
    }

    /// Drops every generator not in `keep`.
    pub fn restrict<'a, I>(&self, keep: I) -> Monomial
    where
        I: IntoIterator<Item = &'a str>,
    {
        let keep: BTreeSet<&str> = keep.into_iter().collect();
        Monomial {
            exponents: self
                .exponents
                .iter()
                .filter(|(g, _)| keep.contains(g.as_str()))
                .map(|(g, e)| (g.clone(), *e))
                .collect(),
        }
    }

    /// Exact division `self / root^k`, if `self` is that power.
    fn as_power_of(&self, root: &Monomial) -> Option<u32> {
        let (g, &e) = root.exponents.iter().next()?;
        let own = self.exponent(g);
        if !own.is_multiple_of(e) || self.exponents.len() != root.exponents.len() {
            return None;
        }
        let k = own / e;
        (k > 0 && root.exponents.iter().all(|(g, &e)| self.exponent(g) == k * e)).then_some(k)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut first = true;
        for (g, e) in &self.exponents {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Monomial {
    type Err = LabelError;

    /// Parses `1` or a `*`-separated product of `name` / `name^k` factors.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::unit());
        }
        let malformed = || LabelError::Malformed(s.to_owned());
        let mut pairs = Vec::new();
        for factor in s.split('*') {
            let (name, exp) = match factor.trim().split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| malformed())?),
                None => (factor.trim(), 1),
            };
            if !is_identifier(name) {
                return Err(malformed());
            }
            if exp == 0 {
                return Err(LabelError::ZeroExponent(name.to_owned()));
            }
            pairs.push((name, exp));
        }
        Ok(Monomial::from_pairs(pairs))
    }
}

pub fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    a.mul(b)
}

/// The unique primitive `p` with `ms[i] = p^mult[i]` for every `i`, if any.
pub fn primitive_root<M: Borrow<Monomial>>(ms: &[M]) -> Result<Option<(Monomial, Vec<u32>)>, LabelError> {
    let first = ms.first().ok_or(LabelError::EmptyList)?.borrow();
    if let Some(i) = ms.iter().position(|m| m.borrow().is_unit()) {
        return Err(LabelError::UnitEntry(i));
    }
    let c = first.content();
    let root = Monomial { exponents: first.exponents.iter().map(|(g, e)| (g.clone(), e / c)).collect() };
    let mut mult = Vec::with_capacity(ms.len());
    for m in ms {
        match m.borrow().as_power_of(&root) {
            Some(k) => mult.push(k),
            None => return Ok(None),
        }
    }
    Ok(Some((root, mult)))
}

/// True iff `a^n = b^n'` for some positive `n`, `n'`.
pub fn pairwise_power_equivalent(a: &Monomial, b: &Monomial) -> Result<bool, LabelError> {
    if a.is_unit() || b.is_unit() {
        return Err(LabelError::UnitArgument);
    }
    if a.exponents.len() != b.exponents.len() {
        return Ok(false);
    }
    let (g0, &a0) = a.exponents.iter().next().expect("non-unit");
    let b0 = b.exponent(g0);
    if b0 == 0 {
        return Ok(false);
    }
    // cross-multiplied proportionality against the first coordinate
    Ok(a.exponents.iter().all(|(g, &ea)| u64::from(ea) * u64::from(b0) == u64::from(b.exponent(g)) * u64::from(a0)))
}

/// Element of the free abelian group on variable names (base generators or
/// chart variables). Zero exponents are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentMonomial {
    exponents: BTreeMap<String, i64>,
}

impl LaurentMonomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn var(name: impl Into<String>, exp: i64) -> Self {
        let mut exponents = BTreeMap::new();
        if exp != 0 {
            exponents.insert(name.into(), exp);
        }
        Self { exponents }
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<String, i64> {
        &self.exponents
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.exponents.get(name).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &LaurentMonomial) -> LaurentMonomial {
        let mut exponents = self.exponents.clone();
        for (v, e) in &other.exponents {
            let slot = exponents.entry(v.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                exponents.remove(v);
            }
        }
        LaurentMonomial { exponents }
    }

    pub fn pow(&self, k: i64) -> LaurentMonomial {
        if k == 0 {
            return LaurentMonomial::unit();
        }
        LaurentMonomial { exponents: self.exponents.iter().map(|(v, e)| (v.clone(), e * k)).collect() }
    }

    pub fn inverse(&self) -> LaurentMonomial {
        self.pow(-1)
    }

    /// Replaces every variable that has an image in `images` by that image.
    pub fn substitute(&self, images: &BTreeMap<String, LaurentMonomial>) -> LaurentMonomial {
        self.exponents.iter().fold(LaurentMonomial::unit(), |acc, (v, &e)| match images.get(v) {
            Some(img) => acc.mul(&img.pow(e)),
            None => acc.mul(&LaurentMonomial::var(v.clone(), e)),
        })
    }
}

impl From<&Monomial> for LaurentMonomial {
    fn from(m: &Monomial) -> Self {
        LaurentMonomial { exponents: m.exponents.iter().map(|(g, &e)| (g.clone(), i64::from(e))).collect() }
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.exponents.iter().map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") }).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Non-negative integer value per generator, extended additively.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation {
    values: BTreeMap<String, u64>,
}

impl Valuation {
    pub fn new<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        Self { values: values.into_iter().map(|(g, v)| (g.into(), v)).collect() }
    }

    pub fn values(&self) -> &BTreeMap<String, u64> {
        &self.values
    }

    pub fn get(&self, generator: &str) -> Option<u64> {
        self.values.get(generator).copied()
    }

    pub fn apply(&self, m: &Monomial) -> Result<u64, LabelError> {
        apply_valuation(self, m)
    }
}

pub fn apply_valuation(v: &Valuation, m: &Monomial) -> Result<u64, LabelError> {
    m.exponents.iter().try_fold(0u64, |acc, (g, &e)| {
        let value = v.get(g).ok_or_else(|| LabelError::MissingGenerator(g.clone()))?;
        Ok(acc + u64::from(e) * value)
    })
}

pub(crate) fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(pairs: &[(&str, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mono_mul(&m(&[("x", 1), ("y", 2)]), &m(&[("x", 1)])), m(&[("x", 2), ("y", 2)]));
        assert_eq!(mono_mul(&Monomial::unit(), &m(&[("z", 3)])), m(&[("z", 3)]));
        assert_eq!(mono_mul(&m(&[("x", 1)]), &m(&[("x", 1)])), m(&[("x", 2)]));
    }

    #[test]
    fn primitive_root_examples() {
        let (p, mult) = primitive_root(&[m(&[("x", 2), ("y", 2)]), m(&[("x", 4), ("y", 4)])]).unwrap().unwrap();
        assert_eq!(p, m(&[("x", 1), ("y", 1)]));
        assert_eq!(mult, vec![2, 4]);

        assert_eq!(primitive_root(&[m(&[("x", 1)]), m(&[("y", 1)])]).unwrap(), None);

        let (p, mult) = primitive_root(&[m(&[("x", 3)])]).unwrap().unwrap();
        assert_eq!(p, m(&[("x", 1)]));
        assert_eq!(mult, vec![3]);
    }

    #[test]
    fn primitive_root_rejects_bad_input() {
        assert_eq!(primitive_root::<Monomial>(&[]), Err(LabelError::EmptyList));
        assert_eq!(primitive_root(&[m(&[("x", 1)]), Monomial::unit()]), Err(LabelError::UnitEntry(1)));
    }

    #[test]
    fn power_equivalence_examples() {
        assert!(pairwise_power_equivalent(&m(&[("x", 2), ("y", 1)]), &m(&[("x", 4), ("y", 2)])).unwrap());
        assert!(!pairwise_power_equivalent(&m(&[("x", 1)]), &m(&[("y", 1)])).unwrap());
        assert!(!pairwise_power_equivalent(&m(&[("x", 1), ("y", 1)]), &m(&[("x", 2), ("y", 1)])).unwrap());
        assert_eq!(pairwise_power_equivalent(&Monomial::unit(), &m(&[("x", 1)])), Err(LabelError::UnitArgument));
    }

    #[test]
    fn valuation_examples() {
        let v = Valuation::new([("x", 1), ("y", 2)]);
        assert_eq!(apply_valuation(&v, &m(&[("x", 2), ("y", 1)])), Ok(4));
        assert_eq!(apply_valuation(&v, &Monomial::unit()), Ok(0));
        let v0 = Valuation::new([("x", 0)]);
        assert_eq!(apply_valuation(&v0, &m(&[("x", 5)])), Ok(0));
        assert_eq!(apply_valuation(&v0, &m(&[("y", 1)])), Err(LabelError::MissingGenerator("y".into())));
    }

    #[test]
    fn serde_rejects_zero_exponent_and_unit_is_empty_map() {
        assert!(serde_json::from_str::<Monomial>(r#"{"x":0}"#).is_err());
        assert_eq!(serde_json::to_string(&Monomial::unit()).unwrap(), "{}");
        assert_eq!(serde_json::from_str::<Monomial>(r#"{"y":2,"x":1}"#).unwrap(), m(&[("x", 1), ("y", 2)]));
    }

    #[test]
    fn display() {
        assert_eq!(m(&[("x", 2), ("y", 1)]).to_string(), "x^2*y");
        assert_eq!(Monomial::unit().to_string(), "1");
    }

    #[test]
    fn parse_round_trips_display() {
        for text in ["1", "x", "x^2*y", "a_1^3*b"] {
            assert_eq!(text.parse::<Monomial>().unwrap().to_string(), text);
        }
        assert_eq!("y*x*x".parse::<Monomial>().unwrap(), m(&[("x", 2), ("y", 1)]));
        assert!("x^0".parse::<Monomial>().is_err());
        assert!("2x".parse::<Monomial>().is_err());
        assert!("x**y".parse::<Monomial>().is_err());
    }

    #[test]
    fn generator_set_rejects_duplicates() {
        assert!(GeneratorSet::new(["x", "y", "x"], false).is_err());
        assert!(GeneratorSet::new(["x", "y"], true).unwrap().is_nc());
    }

    fn arb_monomial(nonunit: bool) -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..4, 3)
            .prop_filter("non-unit", move |v| !nonunit || v.iter().any(|&e| e > 0))
            .prop_map(|v| Monomial::from_pairs(["x", "y", "z"].into_iter().zip(v)))
    }

    proptest! {
        #[test]
        fn root_of_primitive_is_itself(a in arb_monomial(true)) {
            let (p, _) = primitive_root(&[a]).unwrap().unwrap();
            prop_assert!(p.is_primitive());
            prop_assert_eq!(primitive_root(std::slice::from_ref(&p)).unwrap(), Some((p, vec![1])));
        }

        #[test]
        fn root_exists_iff_pairwise_equivalent(ms in prop::collection::vec(arb_monomial(true), 1..5)) {
            let pairwise = ms.iter().all(|a| ms.iter().all(|b| pairwise_power_equivalent(a, b).unwrap()));
            let root = primitive_root(&ms).unwrap();
            prop_assert_eq!(root.is_some(), pairwise);
            if let Some((p, mult)) = root {
                for (mi, k) in ms.iter().zip(mult) {
                    prop_assert_eq!(&p.pow(k), mi);
                }
            }
        }

        #[test]
        fn valuation_is_additive(a in arb_monomial(false), b in arb_monomial(false), vals in prop::collection::vec(0u64..5, 3)) {
            let v = Valuation::new(["x", "y", "z"].into_iter().zip(vals));
            prop_assert_eq!(
                apply_valuation(&v, &mono_mul(&a, &b)).unwrap(),
                apply_valuation(&v, &a).unwrap() + apply_valuation(&v, &b).unwrap()
            );
        }
    }
}
