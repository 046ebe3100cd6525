//! Truncated generating series over the `H_2` group ring, graded by λ.
//!
//! Coefficients are exact rationals or tagged unknowns. A zero coefficient
//! is never stored: absent and `Known(0)` are the same thing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::Rational;
use crate::grading::{ClassMonomial, Component, ComponentBasis};

/// Prefixes an unknown tag may start with.
const TAG_VOCABULARY: &[&str] = &["GW0", "L0:", "L1:", "L2:", "L3:", "sum(", "scale("];

pub fn is_registered_tag(tag: &str) -> bool {
    !tag.is_empty() && TAG_VOCABULARY.iter().any(|p| tag == *p || tag.starts_with(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Known(Rational),
    Unknown {
        #[serde(rename = "unknown")]
        tag: String,
    },
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::Known(Rational::zero())
    }

    pub fn unknown(tag: impl Into<String>) -> Result<Self> {
        let tag = tag.into();
        if !is_registered_tag(&tag) {
            return Err(Error::Structural(format!("unregistered unknown tag {tag:?}")));
        }
        Ok(Coefficient::Unknown { tag })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Known(r) if r.is_zero())
    }

    pub fn known(&self) -> Option<&Rational> {
        match self {
            Coefficient::Known(r) => Some(r),
            Coefficient::Unknown { .. } => None,
        }
    }

    pub fn tag(&self) -> Option<&str> {
        match self {
            Coefficient::Unknown { tag } => Some(tag),
            Coefficient::Known(_) => None,
        }
    }

    fn summands(&self) -> Vec<String> {
        match self {
            Coefficient::Known(r) => vec![r.to_string()],
            Coefficient::Unknown { tag } => match tag.strip_prefix("sum(").and_then(|t| t.strip_suffix(')')) {
                Some(inner) => split_top_level(inner),
                None => vec![tag.clone()],
            },
        }
    }

    pub fn add(&self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Known(a), Coefficient::Known(b)) => Coefficient::Known(a + b),
            (c, z) | (z, c) if z.is_zero() => c.clone(),
            _ => {
                let mut parts = self.summands();
                parts.extend(other.summands());
                Coefficient::Unknown { tag: format!("sum({})", parts.join(",")) }
            }
        }
    }

    pub fn scale(&self, s: &Rational) -> Coefficient {
        match self {
            Coefficient::Known(r) => Coefficient::Known(s * r),
            _ if s.is_zero() => Coefficient::zero(),
            Coefficient::Unknown { tag } if *s == Rational::one() => Coefficient::Unknown { tag: tag.clone() },
            Coefficient::Unknown { tag } => Coefficient::Unknown { tag: format!("scale({s},{tag})") },
        }
    }
}

/// Splits a comma list, ignoring commas nested inside parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].to_string());
    out
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Known(r) => write!(f, "{r}"),
            Coefficient::Unknown { tag } => write!(f, "[{tag}]"),
        }
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::Known(r)
    }
}

/// Hard window for a series: per-slot maximal exponent and maximal
/// λ-exponent. The minimum λ-exponent is always -2 (genus 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub max_exponents: Vec<u64>,
    pub max_lambda: i64,
}

impl Truncation {
    /// Window with class degree at most `max_degree` in every component.
    /// Fiber slots allow `max_degree * L` units; multiple-fiber slots are
    /// always folded into the fiber slot and get 0.
    pub fn uniform(basis: &ComponentBasis, max_degree: u64, max_lambda: i64) -> Self {
        let max_exponents = basis
            .entries()
            .iter()
            .map(|c| match c {
                Component::FiberUnit => max_degree * basis.fiber_lcm(),
                Component::MultipleFiber { .. } => 0,
                _ => max_degree,
            })
            .collect();
        Truncation { max_exponents, max_lambda }
    }

    pub fn contains(&self, m: &ClassMonomial) -> bool {
        m.exponents.len() == self.max_exponents.len()
            && m.exponents.iter().zip(&self.max_exponents).all(|(e, max)| e <= max)
            && m.lambda >= -2
            && m.lambda <= self.max_lambda
            && m.lambda % 2 == 0
    }

    pub fn min(&self, other: &Truncation) -> Truncation {
        Truncation {
            max_exponents: self.max_exponents.iter().zip(&other.max_exponents).map(|(a, b)| *a.min(b)).collect(),
            max_lambda: self.max_lambda.min(other.max_lambda),
        }
    }

    /// Largest genus inside the window.
    pub fn max_genus(&self) -> Option<u64> {
        (self.max_lambda >= -2).then(|| ((self.max_lambda + 2) / 2) as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwSeries {
    basis: ComponentBasis,
    truncation: Truncation,
    terms: BTreeMap<ClassMonomial, Coefficient>,
}

impl GwSeries {
    pub fn new(basis: ComponentBasis, truncation: Truncation) -> Result<Self> {
        if truncation.max_exponents.len() != basis.len() {
            return Err(Error::Structural(format!(
                "truncation has {} bounds, basis has {} entries",
                truncation.max_exponents.len(),
                basis.len()
            )));
        }
        if truncation.max_lambda < -2 || truncation.max_lambda % 2 != 0 {
            return Err(Error::Domain(format!("max λ-exponent must be even and >= -2, got {}", truncation.max_lambda)));
        }
        Ok(GwSeries { basis, truncation, terms: BTreeMap::new() })
    }

    pub fn basis(&self) -> &ComponentBasis {
        &self.basis
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    /// Stored (nonzero) terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&ClassMonomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn canonical(&self, m: &ClassMonomial) -> Result<ClassMonomial> {
        let mut m = m.clone();
        self.basis.normalize(&mut m)?;
        if !self.truncation.contains(&m) {
            return Err(Error::OutOfWindow(self.basis.describe(&m)));
        }
        Ok(m)
    }

    /// Adds `c` to the coefficient at `m`.
    pub fn add_term(&mut self, m: &ClassMonomial, c: Coefficient) -> Result<()> {
        let m = self.canonical(m)?;
        let combined = match self.terms.get(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if combined.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, combined);
        }
        Ok(())
    }

    /// Like [`add_term`](Self::add_term) but silently drops terms outside
    /// the window.
    pub fn add_term_in_window(&mut self, m: &ClassMonomial, c: Coefficient) -> Result<bool> {
        match self.add_term(m, c) {
            Ok(()) => Ok(true),
            Err(Error::OutOfWindow(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn coefficient_at(&self, m: &ClassMonomial) -> Result<Coefficient> {
        let m = self.canonical(m)?;
        Ok(self.terms.get(&m).cloned().unwrap_or_else(Coefficient::zero))
    }

    /// Every normalized monomial inside the window, in canonical order.
    pub fn window_monomials(&self) -> Vec<ClassMonomial> {
        let mut out = Vec::new();
        let Some(max_g) = self.truncation.max_genus() else {
            return out;
        };
        let maxes = &self.truncation.max_exponents;
        for g in 0..=max_g {
            let mut current = vec![0u64; maxes.len()];
            loop {
                out.push(ClassMonomial { lambda: crate::grading::lambda_exponent(g), exponents: current.clone() });
                // odometer increment, last slot fastest
                let mut i = maxes.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if current[i] < maxes[i] {
                        current[i] += 1;
                        break;
                    }
                    current[i] = 0;
                }
                if current.iter().all(|&e| e == 0) {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    pub fn to_document(&self) -> SeriesDocument {
        SeriesDocument {
            basis: self.basis.clone(),
            truncation: self.truncation.clone(),
            terms: self.terms.iter().map(|(m, c)| TermEntry { monomial: m.clone(), coeff: c.clone() }).collect(),
        }
    }

    pub fn from_document(doc: SeriesDocument) -> Result<Self> {
        let mut s = GwSeries::new(doc.basis, doc.truncation)?;
        for t in doc.terms {
            if let Coefficient::Unknown { tag } = &t.coeff {
                if !is_registered_tag(tag) {
                    return Err(Error::Parse(format!("unregistered unknown tag {tag:?}")));
                }
            }
            s.add_term(&t.monomial, t.coeff)?;
        }
        Ok(s)
    }
}

/// Serialized form of a [`GwSeries`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDocument {
    pub basis: ComponentBasis,
    pub truncation: Truncation,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub monomial: ClassMonomial,
    pub coeff: Coefficient,
}

/// Termwise sum. The result window is the componentwise minimum.
pub fn series_add(a: &GwSeries, b: &GwSeries) -> Result<GwSeries> {
    if a.basis != b.basis {
        return Err(Error::Structural("cannot add series over different bases".into()));
    }
    let mut out = GwSeries::new(a.basis.clone(), a.truncation.min(&b.truncation))?;
    for (m, c) in a.terms().chain(b.terms()) {
        out.add_term_in_window(m, c.clone())?;
    }
    Ok(out)
}

pub fn series_scale(s: &Rational, a: &GwSeries) -> GwSeries {
    let mut out = GwSeries { basis: a.basis.clone(), truncation: a.truncation.clone(), terms: BTreeMap::new() };
    if s.is_zero() {
        return out;
    }
    for (m, c) in a.terms() {
        let scaled = c.scale(s);
        if !scaled.is_zero() {
            out.terms.insert(m.clone(), scaled);
        }
    }
    out
}

/// A series in one variable `t`, truncated at `t^max_exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateSeries {
    pub max_exponent: u64,
    coeffs: BTreeMap<u64, Coefficient>,
}

impl UnivariateSeries {
    pub fn new(max_exponent: u64) -> Self {
        UnivariateSeries { max_exponent, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(max_exponent: u64, terms: impl IntoIterator<Item = (u64, Coefficient)>) -> Self {
        let mut s = Self::new(max_exponent);
        for (e, c) in terms {
            s.set(e, c);
        }
        s
    }

    /// Sets the coefficient of `t^e`; ignored outside the window.
    pub fn set(&mut self, e: u64, c: Coefficient) {
        if e > self.max_exponent {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn get(&self, e: u64) -> Coefficient {
        self.coeffs.get(&e).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Coefficient)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// `t ↦ t^m`: every exponent is multiplied by `m`; terms pushed past
    /// the window are dropped.
    pub fn substitute_power(&self, m: u64) -> Result<UnivariateSeries> {
        if m == 0 {
            return Err(Error::Domain("power substitution needs m >= 1".into()));
        }
        Ok(self.substitute_power_into(m, self.max_exponent))
    }

    /// Same as [`substitute_power`](Self::substitute_power) but into a
    /// window of a different size.
    pub fn substitute_power_into(&self, m: u64, max_exponent: u64) -> UnivariateSeries {
        let mut out = UnivariateSeries::new(max_exponent);
        for (e, c) in self.terms() {
            if let Some(ne) = e.checked_mul(m) {
                out.set(ne, c.clone());
            }
        }
        out
    }
}
