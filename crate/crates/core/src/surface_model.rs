//! Surface descriptors and the assembly of their generating series.
//!
//! The series of a surface is the opaque constant-map part `GW0`, plus one
//! universal series `L⁰(t_{E_i})` per exceptional curve, plus the local
//! contributions of the canonical-divisor components of the minimal model.
//! Only the zero-dimensional étale coefficients below are known exactly;
//! every other slot is an `Unknown` with a provenance tag.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::Rational;
use crate::grading::{beta, chi_from_betti, ClassMonomial, Component, ComponentBasis};
use crate::lattice_covers::{
    f2_fiber_coefficient, regular_fiber_coefficient, signed_torus_cover_sum, TorsionCharacter,
};
use crate::series::{series_add, series_scale, Coefficient, GwSeries, Truncation, UnivariateSeries};
use crate::spin_parity::{closed_form_double_cover, Parity};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ModelWire", into = "ModelWire")]
pub enum MinimalModel {
    K3,
    Abelian,
    ProperlyElliptic { base_genus: u64, chi_o: i64, multiple_fibers: Vec<u64> },
    GeneralType { k2: i64, chi_o: i64 },
}

/// On-disk form of [`MinimalModel`]; the empty struct variants make serde
/// reject stray keys on `k3` and `abelian` too.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum ModelWire {
    K3 {},
    Abelian {},
    Elliptic {
        base_genus: u64,
        #[serde(rename = "chi_O")]
        chi_o: i64,
        #[serde(default)]
        multiple_fibers: Vec<u64>,
    },
    GeneralType {
        #[serde(rename = "K2")]
        k2: i64,
        #[serde(rename = "chi_O")]
        chi_o: i64,
    },
}

impl From<ModelWire> for MinimalModel {
    fn from(w: ModelWire) -> Self {
        match w {
            ModelWire::K3 {} => MinimalModel::K3,
            ModelWire::Abelian {} => MinimalModel::Abelian,
            ModelWire::Elliptic { base_genus, chi_o, multiple_fibers } => {
                MinimalModel::ProperlyElliptic { base_genus, chi_o, multiple_fibers }
            }
            ModelWire::GeneralType { k2, chi_o } => MinimalModel::GeneralType { k2, chi_o },
        }
    }
}

impl From<MinimalModel> for ModelWire {
    fn from(m: MinimalModel) -> Self {
        match m {
            MinimalModel::K3 => ModelWire::K3 {},
            MinimalModel::Abelian => ModelWire::Abelian {},
            MinimalModel::ProperlyElliptic { base_genus, chi_o, multiple_fibers } => {
                ModelWire::Elliptic { base_genus, chi_o, multiple_fibers }
            }
            MinimalModel::GeneralType { k2, chi_o } => ModelWire::GeneralType { k2, chi_o },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Betti {
    pub b1: u64,
    pub b_plus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDescriptor {
    pub minimal_model: MinimalModel,
    #[serde(rename = "blowups", default)]
    pub blowup_count: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Betti>,
}

impl SurfaceDescriptor {
    pub fn new(minimal_model: MinimalModel) -> Self {
        SurfaceDescriptor { minimal_model, blowup_count: 0, betti: None }
    }

    pub fn with_blowups(mut self, n: u32) -> Self {
        self.blowup_count = n;
        self
    }

    pub fn with_betti(mut self, b1: u64, b_plus: u64) -> Self {
        self.betti = Some(Betti { b1, b_plus });
        self
    }

    /// Parses the JSON descriptor format. Unknown keys are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `χ(O_X)` of the minimal model (blow-ups do not change it).
    pub fn chi_o(&self) -> i64 {
        match &self.minimal_model {
            MinimalModel::K3 => 2,
            MinimalModel::Abelian => 0,
            MinimalModel::ProperlyElliptic { chi_o, .. } | MinimalModel::GeneralType { chi_o, .. } => *chi_o,
        }
    }
}

/// E(n): the elliptic surface over P¹ with `χ(O) = n` and no multiple
/// fibers.
pub fn elliptic_e(n: i64) -> SurfaceDescriptor {
    SurfaceDescriptor::new(MinimalModel::ProperlyElliptic { base_genus: 0, chi_o: n, multiple_fibers: Vec::new() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

fn violation(rule: &'static str, message: impl Into<String>) -> Violation {
    Violation { rule, message: message.into() }
}

/// `k_π = χ(O_X) - 2χ(O_C)` for an elliptic fibration over a genus-`g` base.
pub fn k_pi(chi_o: i64, base_genus: u64) -> i64 {
    chi_o - 2 * (1 - base_genus as i64)
}

pub fn validate_descriptor(s: &SurfaceDescriptor) -> Vec<Violation> {
    let mut out = Vec::new();
    match &s.minimal_model {
        MinimalModel::K3 | MinimalModel::Abelian => {}
        MinimalModel::ProperlyElliptic { base_genus, chi_o, multiple_fibers } => {
            let k = k_pi(*chi_o, *base_genus);
            if k < 0 {
                out.push(violation(
                    "elliptic-k-pi",
                    format!(
                        "k_π = χ(O) - 2(1 - base_genus) = {k} < 0 is outside the supported canonical-divisor normal form"
                    ),
                ));
            }
            for &m in multiple_fibers {
                if m < 2 {
                    out.push(violation(
                        "multiple-fiber-multiplicity",
                        format!("multiple-fiber multiplicity must be >= 2, got {m}"),
                    ));
                }
            }
        }
        MinimalModel::GeneralType { k2, .. } => {
            if *k2 < 1 {
                out.push(violation("general-type-genus", format!("h = K²+1 ≥ 2 required (K² = {k2})")));
            } else if *k2 >= u32::MAX as i64 {
                out.push(violation("general-type-genus", format!("K² = {k2} is too large")));
            }
        }
    }
    if let Some(Betti { b1, b_plus }) = s.betti {
        match chi_from_betti(b1, b_plus) {
            Err(_) => out.push(violation("betti-parity", format!("1−b¹+b⁺ must be even (b¹ = {b1}, b⁺ = {b_plus})"))),
            Ok(chi) if chi != s.chi_o() => out.push(violation(
                "betti-chi",
                format!("χ(O) = {chi} from Betti numbers disagrees with χ(O) = {}", s.chi_o()),
            )),
            Ok(_) => {}
        }
    }
    out
}

fn ensure_valid(s: &SurfaceDescriptor) -> Result<()> {
    let v = validate_descriptor(s);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CanonicalComponentSpec {
    Exceptional,
    RegularFiberAggregate { k_pi: i64 },
    MultipleFiber { m: u64 },
    GeneralDivisor { h: u64, parity: Parity },
}

pub fn canonical_components(s: &SurfaceDescriptor) -> Result<Vec<CanonicalComponentSpec>> {
    ensure_valid(s)?;
    let mut out = vec![CanonicalComponentSpec::Exceptional; s.blowup_count as usize];
    match &s.minimal_model {
        MinimalModel::K3 | MinimalModel::Abelian => {}
        MinimalModel::ProperlyElliptic { base_genus, chi_o, multiple_fibers } => {
            out.push(CanonicalComponentSpec::RegularFiberAggregate { k_pi: k_pi(*chi_o, *base_genus) });
            out.extend(multiple_fibers.iter().map(|&m| CanonicalComponentSpec::MultipleFiber { m }));
        }
        MinimalModel::GeneralType { k2, chi_o } => {
            out.push(CanonicalComponentSpec::GeneralDivisor { h: *k2 as u64 + 1, parity: Parity::of(*chi_o) });
        }
    }
    Ok(out)
}

/// Window for assembly: class degree per component and top λ-exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_degree: u64,
    pub max_lambda: i64,
}

impl Limits {
    pub fn new(max_degree: u64, max_lambda: i64) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::Domain("max class degree must be >= 1".into()));
        }
        if max_lambda < 0 || max_lambda % 2 != 0 {
            return Err(Error::Domain(format!("max λ-exponent must be even and >= 0, got {max_lambda}")));
        }
        Ok(Limits { max_degree, max_lambda })
    }

    fn genera(&self) -> impl Iterator<Item = u64> {
        0..=((self.max_lambda + 2) / 2) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AssemblyOptions {
    /// Fill `L²_m` (m > 2, d ≠ 2) from the étale census, tagged as
    /// conjectural.
    pub conjectural_etale: bool,
}

pub const CONJECTURAL_SUFFIX: &str = ":conjectural-etale";

fn unknown(tag: String) -> Coefficient {
    Coefficient::unknown(tag).expect("assembler tags use the registered vocabulary")
}

fn minimal_basis(s: &SurfaceDescriptor) -> Result<ComponentBasis> {
    let entries = match &s.minimal_model {
        MinimalModel::K3 | MinimalModel::Abelian => Vec::new(),
        MinimalModel::ProperlyElliptic { multiple_fibers, .. } => {
            let mut e = vec![Component::FiberUnit];
            e.extend(
                multiple_fibers
                    .iter()
                    .enumerate()
                    .map(|(i, &m)| Component::MultipleFiber { index: i as u32 + 1, multiplicity: m }),
            );
            e
        }
        MinimalModel::GeneralType { k2, .. } => vec![Component::GeneralDivisor { genus: *k2 as u64 + 1 }],
    };
    ComponentBasis::new(entries)
}

/// Local series of one elliptic fiber in its own variable, at genus `g`,
/// for degrees `1..=max_d`.
fn fiber_local_series(multiplicity: u64, g: u64, max_d: u64, options: AssemblyOptions) -> Result<UnivariateSeries> {
    let mut out = UnivariateSeries::new(max_d);
    for d in 1..=max_d {
        let c = match (multiplicity, g) {
            (1, 1) => Coefficient::Known(regular_fiber_coefficient(d)?),
            (1, _) => unknown(format!("L1:d={d}")),
            (2, 1) => Coefficient::Known(f2_fiber_coefficient(d)?),
            (m, 1) if m > 2 && d == 2 => Coefficient::Known(Rational::ratio(3, 2)),
            (m, 1) if options.conjectural_etale => {
                let nu = TorsionCharacter::new(m, (1, 0))?;
                let value = signed_torus_cover_sum(d, &nu)?;
                unknown(format!("L2:m={m}:d={d}:etale={value}{CONJECTURAL_SUFFIX}"))
            }
            (m, _) => unknown(format!("L2:m={m}:d={d}")),
        };
        out.set(d, c);
    }
    Ok(out)
}

fn add_fiber_series(series: &mut GwSeries, local: &UnivariateSeries, units_per_degree: u64, g: u64) -> Result<()> {
    let slot = series.basis().fiber_slot().ok_or_else(|| Error::Internal("no fiber slot".into()))?;
    let max = series.truncation().max_exponents[slot];
    let arity = series.basis().len();
    for (e, c) in local.substitute_power_into(units_per_degree, max).terms() {
        series.add_term(&ClassMonomial::single(arity, slot, e, g), c.clone())?;
    }
    Ok(())
}

/// Contributions of the canonical-divisor components of the minimal model,
/// without `GW0` and without exceptional curves.
fn minimal_local_series(s: &SurfaceDescriptor, limits: Limits, options: AssemblyOptions) -> Result<GwSeries> {
    let basis = minimal_basis(s)?;
    let truncation = Truncation::uniform(&basis, limits.max_degree, limits.max_lambda);
    let mut series = GwSeries::new(basis.clone(), truncation.clone())?;
    match &s.minimal_model {
        MinimalModel::K3 | MinimalModel::Abelian => {}
        MinimalModel::ProperlyElliptic { base_genus, chi_o, multiple_fibers } => {
            let lcm = basis.fiber_lcm();
            let mut regular = GwSeries::new(basis.clone(), truncation)?;
            for g in limits.genera() {
                let local = fiber_local_series(1, g, limits.max_degree, options)?;
                add_fiber_series(&mut regular, &local, lcm, g)?;
            }
            series = series_add(&series, &series_scale(&Rational::from(k_pi(*chi_o, *base_genus)), &regular))?;
            for &m in multiple_fibers {
                for g in limits.genera() {
                    let local = fiber_local_series(m, g, limits.max_degree * m, options)?;
                    add_fiber_series(&mut series, &local, basis.fiber_units_per(m), g)?;
                }
            }
        }
        MinimalModel::GeneralType { k2, chi_o } => {
            let h = *k2 as u64 + 1;
            let parity = Parity::of(*chi_o);
            let slot = basis.divisor_slot().expect("general-type basis has a divisor slot");
            for d in 1..=limits.max_degree {
                for g in limits.genera() {
                    let c = match d {
                        1 if beta(d, h, g) == 0 => Coefficient::Known(Rational::sign_power(parity.bit() as u64)),
                        2 if beta(d, h, g) == 0 => Coefficient::Known(closed_form_double_cover(h as u32, parity)),
                        _ => unknown(format!("L3:h={h}:{}:d={d}", parity.sign())),
                    };
                    series.add_term_in_window(&ClassMonomial::single(basis.len(), slot, d, g), c)?;
                }
            }
        }
    }
    Ok(series)
}

/// The minimal-model series: `GW0` plus the canonical-divisor contributions.
pub fn assemble_minimal_series(s: &SurfaceDescriptor, limits: Limits, options: AssemblyOptions) -> Result<GwSeries> {
    ensure_valid(s)?;
    let mut series = minimal_local_series(s, limits, options)?;
    let arity = series.basis().len();
    for g in limits.genera() {
        series.add_term(&ClassMonomial::zero_class(arity, g), unknown("GW0".into()))?;
    }
    Ok(series)
}

/// Extends a minimal-model series by `blowup_count` exceptional curves.
///
/// Classes with `A·E_i = 0` keep their minimal-model coefficient, pure
/// multiples `d E_i` carry the universal series `L⁰`, and every mixed
/// class vanishes (and so is simply absent).
pub fn blowup_transform(minimal: &GwSeries, blowup_count: u32, max_exceptional_degree: u64) -> Result<GwSeries> {
    let basis = minimal.basis().with_exceptionals(blowup_count)?;
    let n = blowup_count as usize;
    let mut max_exponents = vec![max_exceptional_degree; n];
    max_exponents.extend(minimal.truncation().max_exponents.iter().copied());
    let max_lambda = minimal.truncation().max_lambda;
    let mut out = GwSeries::new(basis.clone(), Truncation { max_exponents, max_lambda })?;
    for (m, c) in minimal.terms() {
        let mut exponents = vec![0; n];
        exponents.extend(m.exponents.iter().copied());
        out.add_term(&ClassMonomial { lambda: m.lambda, exponents }, c.clone())?;
    }
    let max_genus = out.truncation().max_genus().unwrap_or(0);
    for i in 0..n {
        for d in 1..=max_exceptional_degree {
            for g in 0..=max_genus {
                let tag = format!("L0:E{}:d={d}", i + 1);
                out.add_term(&ClassMonomial::single(basis.len(), i, d, g), unknown(tag))?;
            }
        }
    }
    Ok(out)
}

/// Assembles the truncated generating series of the surface.
pub fn assemble_gw_series(s: &SurfaceDescriptor, limits: Limits, options: AssemblyOptions) -> Result<GwSeries> {
    let minimal = assemble_minimal_series(s, limits, options)?;
    if s.blowup_count == 0 {
        return Ok(minimal);
    }
    blowup_transform(&minimal, s.blowup_count, limits.max_degree)
}

/// Modeling assumptions that accompany an assembled series.
pub fn assumption_notes(s: &SurfaceDescriptor, options: AssemblyOptions) -> Vec<String> {
    let mut notes = vec![
        "p_g > 0 is assumed; only n = 0 invariants are represented".to_string(),
        "bracketed coefficients are undetermined slots, not zeros; absent in-window coefficients are 0".to_string(),
    ];
    match &s.minimal_model {
        MinimalModel::K3 | MinimalModel::Abelian => {
            notes.push("trivial canonical class: every nonzero class coefficient vanishes".into())
        }
        MinimalModel::ProperlyElliptic { multiple_fibers, .. } => {
            notes.push("fiber exponents are in units of [F]/L, L = lcm of the fiber multiplicities".into());
            if multiple_fibers.iter().any(|&m| m > 2) {
                if options.conjectural_etale {
                    notes.push(format!(
                        "L2_m (m > 2, d != 2) slots carry étale census values marked {CONJECTURAL_SUFFIX}; these are not established invariants"
                    ));
                } else {
                    notes.push("L2_m (m > 2) is known only in degree 2".into());
                }
            }
        }
        MinimalModel::GeneralType { .. } => {
            notes.push("assumes a smooth canonical divisor D of multiplicity 1; its parity is χ(O) mod 2".into())
        }
    }
    notes
}
