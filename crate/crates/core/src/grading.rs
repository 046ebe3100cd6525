//! Homology bookkeeping: the class basis, λ-grading and the dimension
//! formulas that pick out zero-dimensional moduli.
//!
//! Fiber classes are measured in units of `[F]/L`, where `L` is the lcm of
//! the multiple-fiber multiplicities. A degree-`d` multiple of a fiber of
//! multiplicity `m` then sits at fiber exponent `d * L / m`, so the
//! relation `t_{F_k}^{m_k} = t_F` is ordinary integer arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::lcm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    /// Exceptional curve `E_index` (1-based).
    Exceptional { index: u32 },
    /// The fiber class `[F]`, exponent in units of `[F]/L`.
    FiberUnit,
    /// A multiple fiber `F_index` of the given multiplicity. Its class is
    /// `[F]/m` in the free part of `H_2`, so it carries no independent
    /// exponent once a monomial is normalized.
    MultipleFiber { index: u32, multiplicity: u64 },
    /// The smooth canonical divisor of a surface of general type.
    GeneralDivisor { genus: u64 },
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Exceptional { index } => write!(f, "E{index}"),
            Component::FiberUnit => write!(f, "F"),
            Component::MultipleFiber { index, multiplicity } => {
                write!(f, "F{index}(m={multiplicity})")
            }
            Component::GeneralDivisor { .. } => write!(f, "D"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentBasis {
    entries: Vec<Component>,
    fiber_lcm: u64,
}

impl ComponentBasis {
    pub fn new(entries: Vec<Component>) -> Result<Self> {
        let count = |p: fn(&Component) -> bool| entries.iter().filter(|c| p(c)).count();
        if count(|c| matches!(c, Component::FiberUnit)) > 1 {
            return Err(Error::Structural("at most one fiber-unit entry".into()));
        }
        if count(|c| matches!(c, Component::GeneralDivisor { .. })) > 1 {
            return Err(Error::Structural("at most one general-divisor entry".into()));
        }
        let has_fiber = count(|c| matches!(c, Component::FiberUnit)) == 1;
        let mut fiber_lcm = 1;
        for c in &entries {
            if let Component::MultipleFiber { multiplicity, .. } = *c {
                if multiplicity < 2 {
                    return Err(Error::Structural(format!(
                        "multiple-fiber multiplicity must be >= 2, got {multiplicity}"
                    )));
                }
                if !has_fiber {
                    return Err(Error::Structural("a multiple fiber requires a fiber-unit entry".into()));
                }
                fiber_lcm = lcm(fiber_lcm, multiplicity);
            }
        }
        Ok(ComponentBasis { entries, fiber_lcm })
    }

    pub fn empty() -> Self {
        ComponentBasis { entries: Vec::new(), fiber_lcm: 1 }
    }

    pub fn entries(&self) -> &[Component] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn fiber_lcm(&self) -> u64 {
        self.fiber_lcm
    }

    pub fn position(&self, c: &Component) -> Option<usize> {
        self.entries.iter().position(|e| e == c)
    }

    pub fn fiber_slot(&self) -> Option<usize> {
        self.position(&Component::FiberUnit)
    }

    pub fn divisor_slot(&self) -> Option<usize> {
        self.entries.iter().position(|e| matches!(e, Component::GeneralDivisor { .. }))
    }

    pub fn has_exceptional(&self) -> bool {
        self.entries.iter().any(|e| matches!(e, Component::Exceptional { .. }))
    }

    /// Fiber-unit exponent of one copy of the multiple fiber of
    /// multiplicity `m`.
    pub fn fiber_units_per(&self, m: u64) -> u64 {
        self.fiber_lcm / m
    }

    /// Folds multiple-fiber exponents into the fiber-unit slot.
    pub fn normalize(&self, mono: &mut ClassMonomial) -> Result<()> {
        self.check_arity(mono)?;
        for (i, c) in self.entries.iter().enumerate() {
            if let Component::MultipleFiber { multiplicity, .. } = *c {
                let e = std::mem::take(&mut mono.exponents[i]);
                if e > 0 {
                    let slot = self.fiber_slot().expect("validated in ComponentBasis::new");
                    mono.exponents[slot] += e * self.fiber_units_per(multiplicity);
                }
            }
        }
        Ok(())
    }

    pub fn check_arity(&self, mono: &ClassMonomial) -> Result<()> {
        if mono.exponents.len() != self.entries.len() {
            return Err(Error::Structural(format!(
                "monomial has {} exponents, basis has {} entries",
                mono.exponents.len(),
                self.entries.len()
            )));
        }
        Ok(())
    }

    /// Prepends `count` exceptional entries, numbered `1..=count`.
    pub fn with_exceptionals(&self, count: u32) -> Result<Self> {
        if self.has_exceptional() {
            return Err(Error::Structural("basis already contains exceptional entries".into()));
        }
        let mut entries: Vec<Component> = (1..=count).map(|index| Component::Exceptional { index }).collect();
        entries.extend(self.entries.iter().copied());
        ComponentBasis::new(entries)
    }

    pub fn describe(&self, mono: &ClassMonomial) -> String {
        let mut parts = Vec::new();
        for (c, &e) in self.entries.iter().zip(&mono.exponents) {
            if e == 0 {
                continue;
            }
            let name = c.to_string();
            match c {
                Component::FiberUnit if self.fiber_lcm > 1 => {
                    let (num, den) = reduce(e, self.fiber_lcm);
                    if den == 1 {
                        parts.push(power(&name, num));
                    } else {
                        parts.push(format!("{name}^({num}/{den})"));
                    }
                }
                _ => parts.push(power(&name, e)),
            }
        }
        let class = if parts.is_empty() { "1".to_string() } else { parts.join("·") };
        format!("t[{class}] λ^{}", mono.lambda)
    }
}

fn reduce(n: u64, d: u64) -> (u64, u64) {
    let g = crate::exact_arith::gcd(n, d);
    (n / g, d / g)
}

fn power(name: &str, e: u64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// A monomial `t_A λ^{2g-2}`. Ordering is by λ-exponent first, then
/// lexicographic on the exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassMonomial {
    #[serde(rename = "lambda")]
    pub lambda: i64,
    pub exponents: Vec<u64>,
}

impl ClassMonomial {
    pub fn new(exponents: Vec<u64>, lambda: i64) -> Result<Self> {
        if lambda < -2 || lambda % 2 != 0 {
            return Err(Error::Domain(format!("λ-exponent must be even and >= -2, got {lambda}")));
        }
        Ok(ClassMonomial { lambda, exponents })
    }

    /// Monomial at genus `g` with a single nonzero exponent.
    pub fn single(arity: usize, slot: usize, exponent: u64, g: u64) -> Self {
        let mut exponents = vec![0; arity];
        exponents[slot] = exponent;
        ClassMonomial { lambda: lambda_exponent(g), exponents }
    }

    pub fn zero_class(arity: usize, g: u64) -> Self {
        ClassMonomial { lambda: lambda_exponent(g), exponents: vec![0; arity] }
    }

    pub fn is_zero_class(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn genus(&self) -> u64 {
        ((self.lambda + 2) / 2) as u64
    }

    /// Group-ring product `t_A λ^a · t_B λ^b = t_{A+B} λ^{a+b}`.
    pub fn mul(&self, other: &ClassMonomial) -> Result<ClassMonomial> {
        if self.exponents.len() != other.exponents.len() {
            return Err(Error::Structural("monomials of different arity".into()));
        }
        Ok(ClassMonomial {
            lambda: self.lambda + other.lambda,
            exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect(),
        })
    }
}

/// `2g - 2`.
pub fn lambda_exponent(g: u64) -> i64 {
    2 * g as i64 - 2
}

/// The index `β = d(1 - h) + g - 1` of degree-`d` maps from genus-`g`
/// curves onto a genus-`h` curve.
pub fn beta(d: u64, h: u64, g: u64) -> i64 {
    d as i64 * (1 - h as i64) + g as i64 - 1
}

/// The genus `g = d(h - 1) + 1` at which `beta(d, h, g) = 0`.
pub fn zero_dim_genus(h: u64, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    let g = d as i64 * (h as i64 - 1) + 1;
    if g < 0 {
        return Err(Error::Domain(format!("no zero-dimensional stratum for h={h}, d={d} (genus would be {g})")));
    }
    Ok(g as u64)
}

/// Real dimensions `(4β, 2β)` of the moduli of maps into the curve and
/// into the surface.
pub fn moduli_dimensions(g: u64, h: u64, d: u64) -> (i64, i64) {
    let b = beta(d, h, g);
    (4 * b, 2 * b)
}

/// Number of branch points `2β` (with multiplicity) of a degree-`d`
/// cover of a genus-`h` curve by a genus-`g` curve.
pub fn branch_point_count(g: u64, h: u64, d: u64) -> Result<u64> {
    let b = beta(d, h, g);
    if b < 0 {
        return Err(Error::Domain(format!("β = {b} < 0: no degree-{d} cover of genus {h} by genus {g}")));
    }
    Ok(2 * b as u64)
}

/// `χ(O_X) = (1 - b1 + b+) / 2`.
pub fn chi_from_betti(b1: u64, bplus: u64) -> Result<i64> {
    let twice = 1 - b1 as i64 + bplus as i64;
    if twice.rem_euclid(2) != 0 {
        return Err(Error::Domain(format!("1 - b1 + b+ = {twice} must be even (b1={b1}, b+={bplus})")));
    }
    Ok(twice / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn beta_values() {
        assert_eq!(beta(1, 2, 2), 0);
        assert_eq!(beta(2, 2, 3), 0);
        assert_eq!(beta(2, 0, 0), 1);
    }

    #[test]
    fn zero_dim_genus_values() {
        assert_eq!(zero_dim_genus(1, 5).unwrap(), 1);
        assert_eq!(zero_dim_genus(2, 2).unwrap(), 3);
        assert_eq!(zero_dim_genus(3, 2).unwrap(), 5);
        assert!(zero_dim_genus(0, 2).is_err());
        assert_eq!(zero_dim_genus(0, 1).unwrap(), 0);
    }

    #[test]
    fn zero_dim_genus_kills_beta() {
        for d in 1..=50 {
            for h in 0..=20 {
                if let Ok(g) = zero_dim_genus(h, d) {
                    assert_eq!(beta(d, h, g), 0);
                    assert_eq!(lambda_exponent(g), 2 * d as i64 * (h as i64 - 1));
                    assert_eq!(lambda_exponent(g) % 2, 0);
                }
            }
        }
    }

    #[test]
    fn dimensions_and_branch_points() {
        assert_eq!(moduli_dimensions(1, 1, 3), (0, 0));
        assert_eq!(moduli_dimensions(3, 2, 2), (0, 0));
        assert_eq!(moduli_dimensions(2, 1, 2), (4, 2));
        assert_eq!(branch_point_count(1, 1, 7).unwrap(), 0);
        assert_eq!(branch_point_count(3, 2, 2).unwrap(), 0);
        assert_eq!(branch_point_count(2, 1, 2).unwrap(), 2);
        assert!(branch_point_count(0, 2, 1).is_err());
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi_from_betti(0, 3).unwrap(), 2);
        assert_eq!(chi_from_betti(0, 1).unwrap(), 1);
        assert_eq!(chi_from_betti(4, 5).unwrap(), 1);
        assert!(chi_from_betti(1, 1).is_err());
        assert_eq!(chi_from_betti(4, 3).unwrap(), 0);
    }

    #[test]
    fn basis_rules() {
        use Component::*;
        assert!(ComponentBasis::new(vec![FiberUnit, FiberUnit]).is_err());
        assert!(ComponentBasis::new(vec![MultipleFiber { index: 1, multiplicity: 2 }]).is_err());
        assert!(ComponentBasis::new(vec![FiberUnit, MultipleFiber { index: 1, multiplicity: 1 }]).is_err());
        assert!(ComponentBasis::new(vec![GeneralDivisor { genus: 2 }, GeneralDivisor { genus: 3 }]).is_err());
        let b = ComponentBasis::new(vec![
            FiberUnit,
            MultipleFiber { index: 1, multiplicity: 2 },
            MultipleFiber { index: 2, multiplicity: 3 },
        ])
        .unwrap();
        assert_eq!(b.fiber_lcm(), 6);
        let mut m = ClassMonomial::new(vec![0, 1, 2], 0).unwrap();
        b.normalize(&mut m).unwrap();
        assert_eq!(m.exponents, vec![3 + 4, 0, 0]);
        assert_eq!(b.describe(&m), "t[F^(7/6)] λ^0");
    }

    #[test]
    fn monomial_lambda_rules() {
        assert!(ClassMonomial::new(vec![], -4).is_err());
        assert!(ClassMonomial::new(vec![], 1).is_err());
        assert_eq!(ClassMonomial::new(vec![], -2).unwrap().genus(), 0);
    }

    fn mono(n: usize) -> impl Strategy<Value = ClassMonomial> {
        (prop::collection::vec(0u64..1000, n), 0u64..50)
            .prop_map(|(e, g)| ClassMonomial { lambda: lambda_exponent(g), exponents: e })
    }

    proptest! {
        #[test]
        fn group_ring_law(a in mono(4), b in mono(4), c in mono(4)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(&ab, &b.mul(&a).unwrap());
            prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        }

        #[test]
        fn dimensions_are_two_to_one(g in 0u64..100, h in 0u64..100, d in 1u64..100) {
            let (into_curve, into_surface) = moduli_dimensions(g, h, d);
            prop_assert_eq!(into_curve, 2 * into_surface);
        }
    }
}
